// Command-line front end: theta evaluation, Monte Carlo estimators, the
// Green function and atlases, identity sweeps, energy bounds and the
// verification suite. All numeric output is CSV (or key = value blocks)
// with %.17g formatting and no timestamps, so a rerun of any command with
// the same flags is byte-identical.
//
// Exit codes: 0 success, 1 a certified inequality failed (implementation
// bug, not user error), 2 bad input.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arakelov/complexio.hpp"
#include "arakelov/elkies.hpp"
#include "arakelov/exceptions.hpp"
#include "arakelov/fay.hpp"
#include "arakelov/green.hpp"
#include "arakelov/linalg.hpp"
#include "arakelov/montecarlo.hpp"
#include "arakelov/suite.hpp"
#include "arakelov/surface.hpp"
#include "arakelov/theta.hpp"

namespace {

using namespace arakelov;

struct Output {
    std::string path; // empty = stdout
    std::ostringstream buffer;

    template <typename T> Output& operator<<(const T& v) {
        buffer << v;
        return *this;
    }

    void flush() {
        if (path.empty()) {
            std::cout << buffer.str();
        } else {
            std::ofstream f(path, std::ios::binary);
            if (!f) throw InputError("cannot write output file '" + path + "'");
            f << buffer.str();
        }
    }
};

// Surface selection shared by most subcommands.
struct SurfaceArgs {
    std::string tau_text;
    std::string omega_path;

    void attach(CLI::App* cmd, bool require = true) {
        auto* tau_opt = cmd->add_option("--tau", tau_text, "tau for a genus-1 surface (a+bi)");
        auto* omega_opt =
            cmd->add_option("--omega", omega_path, "period matrix file (line 1: g, then g rows)");
        tau_opt->excludes(omega_opt);
        if (require) {
            cmd->callback([this, cmd]() {
                if (tau_text.empty() && omega_path.empty()) {
                    throw CLI::ValidationError(cmd->get_name(),
                                               "either --tau or --omega is required");
                }
            });
        }
    }

    PeriodMatrix period_matrix() const {
        if (!omega_path.empty()) return read_period_matrix_file(omega_path);
        return PeriodMatrix::from_tau(parse_complex(tau_text));
    }

    cd tau() const {
        if (!tau_text.empty()) return parse_complex(tau_text);
        const PeriodMatrix pm = read_period_matrix_file(omega_path);
        if (pm.genus() != 1) {
            throw InputError("this command needs a genus-1 surface (tau)");
        }
        return pm.omega(0, 0);
    }

    std::string echo() const {
        return omega_path.empty() ? "tau=" + tau_text : "omega=" + omega_path;
    }
};

std::vector<cd> parse_complex_list(const std::string& text) {
    std::vector<cd> out;
    std::string token;
    std::istringstream ss(text);
    while (std::getline(ss, token, ',')) out.push_back(parse_complex(token));
    if (out.empty()) throw InputError("expected at least one complex value");
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"numerical toolkit for theta norms, Green functions and "
                 "energy bounds on elliptic curves"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value configuration file (# comments)");
    app.get_config_formatter_base()->comment('#');

    std::string out_path;
    app.add_option("--out", out_path, "write output to a file instead of stdout")
        ->capture_default_str();

    // Parent options (--out, --config) remain usable after a subcommand.
    const auto subcommand = [&app](const std::string& name, const std::string& desc) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        cmd->fallthrough();
        return cmd;
    };

    // ---- theta ----------------------------------------------------------
    auto* theta_cmd = subcommand("theta", "theta series value, norm and tail bound");
    SurfaceArgs theta_surface;
    theta_surface.attach(theta_cmd);
    std::string z_text = "0";
    double theta_tol = 1e-10;
    theta_cmd->add_option("--z", z_text, "point as comma-separated complex entries");
    theta_cmd->add_option("--tol", theta_tol, "truncation tolerance")->capture_default_str();

    // ---- hx -------------------------------------------------------------
    auto* hx_cmd = subcommand("hx", "Monte Carlo estimate of H(X)");
    SurfaceArgs hx_surface;
    hx_surface.attach(hx_cmd);
    long hx_samples = 100000;
    std::uint64_t hx_seed = 0;
    int hx_threads = 1;
    hx_cmd->add_option("--samples", hx_samples)->capture_default_str();
    hx_cmd->add_option("--seed", hx_seed)->capture_default_str();
    hx_cmd->add_option("--threads", hx_threads)->capture_default_str();

    // ---- an -------------------------------------------------------------
    auto* an_cmd = subcommand("an", "Monte Carlo estimate of A_n(x)");
    SurfaceArgs an_surface;
    an_surface.attach(an_cmd);
    std::string an_x = "0";
    int an_n = 1;
    long an_samples = 10000;
    std::uint64_t an_seed = 0;
    int an_threads = 1;
    an_cmd->add_option("--x", an_x, "base point (a+bi)");
    an_cmd->add_option("--n", an_n, "tuple size")->capture_default_str();
    an_cmd->add_option("--samples", an_samples)->capture_default_str();
    an_cmd->add_option("--seed", an_seed)->capture_default_str();
    an_cmd->add_option("--threads", an_threads)->capture_default_str();

    // ---- green ----------------------------------------------------------
    auto* green_cmd = subcommand("green", "Green function g(x, y)");
    SurfaceArgs green_surface;
    green_surface.attach(green_cmd);
    std::string green_x = "0.25", green_y = "0.5+0.5i";
    green_cmd->add_option("--x", green_x);
    green_cmd->add_option("--y", green_y);

    // ---- atlas ----------------------------------------------------------
    auto* atlas_cmd = subcommand("atlas", "build a covering disc-chart atlas");
    SurfaceArgs atlas_surface;
    atlas_surface.attach(atlas_cmd);
    double atlas_r1 = 0.3, atlas_r2 = 0.45;
    int atlas_grid = 64, atlas_hint = 0;
    atlas_cmd->add_option("--r1", atlas_r1)->capture_default_str();
    atlas_cmd->add_option("--r2", atlas_r2)->capture_default_str();
    atlas_cmd->add_option("--grid", atlas_grid, "starting C0 grid density")
        ->capture_default_str();
    atlas_cmd->add_option("--m-hint", atlas_hint)->capture_default_str();

    // ---- fay ------------------------------------------------------------
    auto* fay_cmd = subcommand("fay", "norm identity residuals on random instances");
    SurfaceArgs fay_surface;
    fay_surface.attach(fay_cmd);
    int fay_n = 2;
    long fay_trials = 10;
    std::uint64_t fay_seed = 0;
    double fay_tol = 1e-6;
    fay_cmd->add_option("--n", fay_n)->capture_default_str();
    fay_cmd->add_option("--trials", fay_trials)->capture_default_str();
    fay_cmd->add_option("--seed", fay_seed)->capture_default_str();
    fay_cmd->add_option("--tol", fay_tol)->capture_default_str();

    // ---- bound ----------------------------------------------------------
    auto* bound_cmd = subcommand("bound", "energy bound with per-term breakdown");
    SurfaceArgs bound_surface;
    bound_surface.attach(bound_cmd);
    long bound_n = 10;
    std::string bound_atlas_path;
    long bound_samples = 100000;
    std::uint64_t bound_seed = 0;
    int bound_threads = 1;
    double bound_r1 = 0.3, bound_r2 = 0.45;
    bound_cmd->add_option("--n", bound_n)->capture_default_str();
    bound_cmd->add_option("--atlas", bound_atlas_path, "atlas file (default: build r1/r2)");
    bound_cmd->add_option("--samples", bound_samples, "H(X) sample count")
        ->capture_default_str();
    bound_cmd->add_option("--seed", bound_seed)->capture_default_str();
    bound_cmd->add_option("--threads", bound_threads)->capture_default_str();
    bound_cmd->add_option("--r1", bound_r1)->capture_default_str();
    bound_cmd->add_option("--r2", bound_r2)->capture_default_str();

    // ---- verify ---------------------------------------------------------
    auto* verify_cmd = subcommand("verify", "energy bound certification sweep");
    SurfaceArgs verify_surface;
    verify_surface.attach(verify_cmd);
    long verify_n = 8;
    long verify_trials = 200;
    std::uint64_t verify_seed = 0;
    long verify_samples = 100000;
    int verify_threads = 1;
    std::string verify_atlas_path;
    verify_cmd->add_option("--n", verify_n)->capture_default_str();
    verify_cmd->add_option("--trials", verify_trials)->capture_default_str();
    verify_cmd->add_option("--seed", verify_seed)->capture_default_str();
    verify_cmd->add_option("--samples", verify_samples, "H(X) sample count")
        ->capture_default_str();
    verify_cmd->add_option("--threads", verify_threads)->capture_default_str();
    verify_cmd->add_option("--atlas", verify_atlas_path, "atlas file");

    // ---- merkl-c0 -------------------------------------------------------
    auto* merkl_cmd = subcommand("merkl-c0", "closed-form chart constant C0");
    int merkl_m = 1;
    double merkl_r1 = 0.75, merkl_ratio = 1.0, merkl_c1 = 1.0;
    merkl_cmd->add_option("--m", merkl_m)->required();
    merkl_cmd->add_option("--r1", merkl_r1)->required();
    merkl_cmd->add_option("--M", merkl_ratio)->required();
    merkl_cmd->add_option("--C1", merkl_c1)->required();

    // ---- suite ----------------------------------------------------------
    auto* suite_cmd = subcommand("suite", "run the full verification battery");
    SurfaceArgs suite_surface;
    suite_surface.attach(suite_cmd, /*require=*/false);
    std::uint64_t suite_seed = 7;
    bool suite_quick = false;
    int suite_threads = 1;
    suite_cmd->add_option("--seed", suite_seed)->capture_default_str();
    suite_cmd->add_flag("--quick", suite_quick, "reduced sample counts");
    suite_cmd->add_option("--threads", suite_threads)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    Output out;
    out.path = out_path;
    int exit_code = 0;

    if (theta_cmd->parsed()) {
        const PeriodMatrix pm = theta_surface.period_matrix();
        const std::vector<cd> z = parse_complex_list(z_text);
        const ThetaValue v = theta_series(JacobianPoint(z), pm, theta_tol);
        out << "# arakelov theta " << theta_surface.echo() << " z=" << z_text
            << " tol=" << format_double(theta_tol) << "\n";
        out << "value_re,value_im,norm,tail_bound\n";
        out << format_double(v.value.real()) << "," << format_double(v.value.imag()) << ","
            << format_double(v.norm) << "," << format_double(v.tail_bound) << "\n";
    } else if (hx_cmd->parsed()) {
        const PeriodMatrix pm = hx_surface.period_matrix();
        const HxEstimate est =
            estimate_hx(pm, hx_samples, SeededSampler(hx_seed), hx_threads);
        out << "# arakelov hx " << hx_surface.echo() << " samples=" << hx_samples
            << " seed=" << hx_seed << "\n";
        out << "estimate,stderr,samples,dropped\n";
        out << format_double(est.mean) << "," << format_double(est.stderr_value) << ","
            << est.samples << "," << est.dropped << "\n";
    } else if (an_cmd->parsed()) {
        const EllipticSurface surface(an_surface.tau());
        const GreenFunction green(surface);
        const McEstimate est = estimate_an(parse_complex(an_x), an_n, green, an_samples,
                                           SeededSampler(an_seed), an_threads);
        out << "# arakelov an " << an_surface.echo() << " x=" << an_x << " n=" << an_n
            << " samples=" << an_samples << " seed=" << an_seed << "\n";
        out << "estimate,stderr,samples,dropped\n";
        out << format_double(est.mean) << "," << format_double(est.stderr_value) << ","
            << est.samples << "," << est.dropped << "\n";
    } else if (green_cmd->parsed()) {
        const EllipticSurface surface(green_surface.tau());
        const GreenFunction green(surface);
        const double g = green.g(parse_complex(green_x), parse_complex(green_y));
        out << "# arakelov green " << green_surface.echo() << " x=" << green_x
            << " y=" << green_y << "\n";
        out << "g\n" << format_double(g) << "\n";
    } else if (atlas_cmd->parsed()) {
        const EllipticSurface surface(atlas_surface.tau());
        const GreenFunction green(surface);
        const TorusChartAtlas atlas =
            build_torus_atlas(green, atlas_hint, atlas_r1, atlas_r2, atlas_grid);
        out << "# arakelov atlas " << atlas_surface.echo() << " r1=" << format_double(atlas_r1)
            << " r2=" << format_double(atlas_r2) << "\n";
        out << atlas_to_text(atlas);
    } else if (fay_cmd->parsed()) {
        const EllipticSurface surface(fay_surface.tau());
        out << "# arakelov fay " << fay_surface.echo() << " n=" << fay_n
            << " trials=" << fay_trials << " seed=" << fay_seed
            << " tol=" << format_double(fay_tol) << "\n";
        out << "trial,residual,slack,cond\n";
        SeededSampler sampler(fay_seed, 0x464159);
        for (long trial = 0; trial < fay_trials; ++trial) {
            SeededSampler s = sampler.split(static_cast<std::uint64_t>(trial));
            const FayInstance inst = random_fay_instance(surface, fay_n, s);
            const FayReport rep = verify_fay_identity(inst.sys, inst.xs, fay_tol);
            const double slack = lemma41_slack(inst.sys, inst.xs);
            const NormMatrix nm = build_norm_matrix(inst.sys, inst.xs);
            ComplexMatrix m(nm.n);
            for (int j = 0; j < nm.n; ++j) {
                for (int k = 0; k < nm.n; ++k) {
                    const size_t id = static_cast<size_t>(j) * nm.n + k;
                    m.at(j, k) = std::isfinite(nm.log_w[id])
                                     ? nm.phase[id] * std::exp(nm.log_w[id])
                                     : cd(0.0, 0.0);
                }
            }
            out << trial << "," << format_double(rep.residual) << ","
                << format_double(slack) << "," << format_double(frobenius_condition(m))
                << "\n";
            if (!rep.pass) exit_code = 1;
        }
    } else if (bound_cmd->parsed()) {
        const EllipticSurface surface(bound_surface.tau());
        const GreenFunction green(surface);
        const TorusChartAtlas atlas =
            bound_atlas_path.empty()
                ? build_torus_atlas(green, 0, bound_r1, bound_r2)
                : read_atlas_file(bound_atlas_path);
        const HxEstimate hx = estimate_hx(surface.period_matrix(), bound_samples,
                                          SeededSampler(bound_seed, 0x4858), bound_threads);
        const BoundReport rep =
            theorem1_bound(bound_inputs_from_atlas(atlas, bound_n, hx.mean, hx.stderr_value));
        out << "# arakelov bound " << bound_surface.echo() << " n=" << bound_n
            << " samples=" << bound_samples << " seed=" << bound_seed << "\n";
        out << "n,bound,bound_low,bound_high\n";
        out << bound_n << "," << format_double(rep.bound) << ","
            << format_double(rep.bound_low) << "," << format_double(rep.bound_high) << "\n";
        out << "\n";
        out << "coefficient = " << format_double(rep.coefficient) << "\n";
        out << "term_log = " << format_double(rep.term_log) << "\n";
        out << "term_genus = " << format_double(rep.term_genus) << "\n";
        out << "term_const = " << format_double(rep.term_const) << "\n";
        out << "term_h = " << format_double(rep.term_h) << "\n";
        out << "term_c0 = " << format_double(rep.term_c0) << "\n";
        out << "term_chart = " << format_double(rep.term_chart) << "\n";
        out << "per_point = " << format_double(rep.per_point) << "\n";
        out << "h_mean = " << format_double(hx.mean) << "\n";
        out << "h_stderr = " << format_double(hx.stderr_value) << "\n";
        out << "\n# atlas\n" << atlas_to_text(atlas);
    } else if (verify_cmd->parsed()) {
        const EllipticSurface surface(verify_surface.tau());
        const GreenFunction green(surface);
        const TorusChartAtlas atlas = verify_atlas_path.empty()
                                          ? build_torus_atlas(green, 0, 0.3, 0.45)
                                          : read_atlas_file(verify_atlas_path);
        const HxEstimate hx = estimate_hx(surface.period_matrix(), verify_samples,
                                          SeededSampler(verify_seed, 0x4858), verify_threads);
        const VerifyReport rep =
            verify_theorem1(green, atlas, verify_n, verify_trials,
                            SeededSampler(verify_seed, 0x5646), hx.mean, hx.stderr_value);
        out << "# arakelov verify " << verify_surface.echo() << " n=" << verify_n
            << " trials=" << verify_trials << " seed=" << verify_seed << "\n";
        out << "n,trials,violations,min_slack,median_slack,cluster_trials,"
               "cluster_violations,cluster_min_slack,cluster_median_slack\n";
        out << verify_n << "," << rep.random.trials << "," << rep.random.violations << ","
            << format_double(rep.random.min_slack) << ","
            << format_double(rep.random.median_slack) << "," << rep.clustered.trials << ","
            << rep.clustered.violations << "," << format_double(rep.clustered.min_slack)
            << "," << format_double(rep.clustered.median_slack) << "\n";
        if (rep.random.violations + rep.clustered.violations > 0) exit_code = 1;
    } else if (merkl_cmd->parsed()) {
        const double c0 = merkl_c0(merkl_m, merkl_r1, merkl_ratio, merkl_c1);
        out << "# arakelov merkl-c0 m=" << merkl_m << " r1=" << format_double(merkl_r1)
            << " M=" << format_double(merkl_ratio) << " C1=" << format_double(merkl_c1)
            << "\n";
        out << "c0\n" << format_double(c0) << "\n";
    } else if (suite_cmd->parsed()) {
        SuiteOptions opt;
        if (!suite_surface.tau_text.empty() || !suite_surface.omega_path.empty()) {
            opt.tau = suite_surface.tau();
        }
        opt.seed = suite_seed;
        opt.quick = suite_quick;
        opt.threads = suite_threads;
        opt.cli_path = argv[0];
        const std::vector<CheckResult> results = run_verification_suite(opt);
        out << "# arakelov suite tau=" << format_complex(opt.tau) << " seed=" << suite_seed
            << (suite_quick ? " quick=1" : "") << "\n";
        out << "check,status,detail\n";
        for (const CheckResult& r : results) {
            out << r.name << "," << (r.pass ? "pass" : "FAIL") << ",\"" << r.detail << "\"\n";
            if (!r.pass) exit_code = 1;
        }
    }

    out.flush();
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const arakelov::ViolationError& e) {
        std::cerr << "violation: " << e.what() << "\n";
        return 1;
    } catch (const arakelov::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
