#include "arakelov/suite.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "arakelov/complexio.hpp"
#include "arakelov/elkies.hpp"
#include "arakelov/exceptions.hpp"
#include "arakelov/fay.hpp"
#include "arakelov/green.hpp"
#include "arakelov/montecarlo.hpp"
#include "arakelov/theta.hpp"

namespace arakelov {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

CheckResult make_result(const std::string& name, bool pass, const std::string& detail) {
    return CheckResult{name, pass, detail};
}

// H(X) estimates are reused across checks within one suite run.
struct HxCache {
    std::map<std::pair<double, double>, HxEstimate> map;

    const HxEstimate& get(const EllipticSurface& s, long samples, std::uint64_t seed,
                          int threads) {
        const auto key = std::make_pair(s.tau().real(), s.tau().imag());
        auto it = map.find(key);
        if (it == map.end()) {
            SeededSampler sampler(seed, 0x4858);
            it = map.emplace(key, estimate_hx(s.period_matrix(), samples, sampler, threads))
                     .first;
        }
        return it->second;
    }
};

HxCache& hx_cache() {
    static HxCache cache;
    return cache;
}

} // namespace

PeriodMatrix random_period_matrix(int genus, SeededSampler& sampler) {
    // Y = G^T diag(lambda) G with random Givens rotations, X symmetric.
    std::array<std::array<double, 6>, 6> y{};
    for (int i = 0; i < genus; ++i) y[i][i] = 0.7 + 1.3 * sampler.next_unit();
    for (int i = 0; i < genus; ++i) {
        for (int j = i + 1; j < genus; ++j) {
            const double theta = 2.0 * 3.141592653589793 * sampler.next_unit();
            const double c = std::cos(theta), s = std::sin(theta);
            for (int k = 0; k < genus; ++k) {
                const double yi = y[i][k], yj = y[j][k];
                y[i][k] = c * yi - s * yj;
                y[j][k] = s * yi + c * yj;
            }
            for (int k = 0; k < genus; ++k) {
                const double yi = y[k][i], yj = y[k][j];
                y[k][i] = c * yi - s * yj;
                y[k][j] = s * yi + c * yj;
            }
        }
    }
    std::vector<std::vector<cd>> omega(genus, std::vector<cd>(genus));
    for (int i = 0; i < genus; ++i) {
        for (int j = i; j < genus; ++j) {
            const double x = (i == j || genus == 1) ? sampler.next_unit() - 0.5
                                                    : sampler.next_unit() - 0.5;
            // Symmetrize Y exactly (the rotations keep it symmetric up to
            // roundoff only).
            const double ys = 0.5 * (y[i][j] + y[j][i]);
            omega[i][j] = cd(x, ys);
            omega[j][i] = cd(x, ys);
        }
    }
    return PeriodMatrix::validate(omega);
}

CheckResult check_theta_symmetries(const SuiteOptions& options) {
    const long per_genus = options.quick ? 100 : 1000;
    SeededSampler sampler(options.seed, 0x5359);
    double worst = 0.0;
    long violations = 0;
    for (int g = 1; g <= 3; ++g) {
        for (long trial = 0; trial < per_genus; ++trial) {
            SeededSampler s = sampler.split(static_cast<std::uint64_t>(g * 1000000 + trial));
            const PeriodMatrix pm = random_period_matrix(g, s);
            const JacobianPoint z = uniform_jacobian_sample(pm, s);
            const double base = theta_norm(z, pm);

            // Lattice shift z + Omega m + n with |m|, |n| <= 3.
            JacobianPoint shifted;
            shifted.z.resize(static_cast<size_t>(g));
            std::vector<double> mv(static_cast<size_t>(g)), nv(static_cast<size_t>(g));
            for (int i = 0; i < g; ++i) {
                mv[static_cast<size_t>(i)] =
                    std::floor(s.next_unit() * 7.0) - 3.0;
                nv[static_cast<size_t>(i)] =
                    std::floor(s.next_unit() * 7.0) - 3.0;
            }
            for (int i = 0; i < g; ++i) {
                cd v = z.z[static_cast<size_t>(i)] + nv[static_cast<size_t>(i)];
                for (int j = 0; j < g; ++j) {
                    v += pm.omega(i, j) * mv[static_cast<size_t>(j)];
                }
                shifted.z[static_cast<size_t>(i)] = v;
            }
            const double shifted_norm = theta_norm(shifted, pm);

            JacobianPoint negated;
            negated.z.resize(static_cast<size_t>(g));
            for (int i = 0; i < g; ++i) negated.z[static_cast<size_t>(i)] = -z.z[static_cast<size_t>(i)];
            const double negated_norm = theta_norm(negated, pm);

            const double err =
                std::max(std::abs(shifted_norm - base), std::abs(negated_norm - base));
            worst = std::max(worst, err);
            if (err > 1e-10) ++violations;
        }
    }
    return make_result("theta-symmetries", violations == 0,
                       "max deviation " + fmt(worst) + " over " +
                           std::to_string(3 * per_genus) + " points (tol 1e-10)");
}

CheckResult check_cgrho_growth(const SuiteOptions& options) {
    const long limit = options.quick ? 100000 : 1000000;
    long violations = 0;
    double min_slack = 1e300;
    for (long g = 1; g <= limit; ++g) {
        const double c = c_g_rho(static_cast<int>(std::min<long>(g, 1 << 30)),
                                 1.0 / static_cast<double>(g))
                             .value;
        const double gd = static_cast<double>(g);
        const double cap = 1.5 * gd * std::log(gd) + 4.0;
        const double slack = cap - c;
        min_slack = std::min(min_slack, slack);
        if (slack < 0.0) ++violations;
    }
    return make_result("cgrho-growth", violations == 0,
                       "c_{g,1/g} <= 1.5 g log g + 4 for g <= " + std::to_string(limit) +
                           ", min slack " + fmt(min_slack));
}

CheckResult check_theta_upper_bound_sweep(const SuiteOptions& options) {
    const long sweeps = options.quick ? 100 : 1000;
    const long hx_samples = options.quick ? 20000 : 100000;
    long violations = 0;
    double worst_margin = -1e300;

    struct Case {
        int g;
        double rho;
    };
    for (const Case& cs : {Case{1, 1.0}, Case{2, 0.5}}) {
        PeriodMatrix pm =
            cs.g == 1 ? PeriodMatrix::from_tau(cd(0.0, 1.0))
                      : PeriodMatrix::validate({{cd(0.0, 1.0), cd(0.0, 0.0)},
                                                {cd(0.0, 0.0), cd(0.0, 1.0)}});
        SeededSampler hx_sampler(options.seed, 0x4842 + static_cast<std::uint64_t>(cs.g));
        const HxEstimate hx = estimate_hx(pm, hx_samples, hx_sampler, options.threads);
        SeededSampler z_sampler(options.seed, 0x5442 + static_cast<std::uint64_t>(cs.g));
        for (long i = 0; i < sweeps; ++i) {
            SeededSampler s = z_sampler.split(static_cast<std::uint64_t>(i));
            const JacobianPoint z = uniform_jacobian_sample(pm, s);
            const ThetaBoundReport rep =
                check_theta_upper_bound(z, pm, hx.mean, hx.stderr_value, cs.rho);
            if (rep.violation) ++violations;
            if (std::isfinite(rep.margin)) worst_margin = std::max(worst_margin, rep.margin);
        }
    }
    return make_result("theta-upper-bound", violations == 0,
                       std::to_string(violations) + " violations, worst margin " +
                           fmt(worst_margin) + " (gate 3 sigma)");
}

CheckResult check_green_properties(const SuiteOptions& options) {
    std::ostringstream detail;
    bool pass = true;

    // Finite-difference Laplacian: -2 pi / Im tau within 1%.
    for (cd tau : {cd(0.0, 1.0), cd(0.0, 2.0), cd(0.5, 1.5)}) {
        const GreenFunction green{EllipticSurface(tau)};
        const double lap = laplacian_check(green, cd(0.2, 0.7 * tau.imag()),
                                           cd(0.6, 0.3 * tau.imag()), 1e-3);
        const double expected = -2.0 * 3.141592653589793 / tau.imag();
        const double rel = std::abs(lap - expected) / std::abs(expected);
        if (lap >= 0.0 || rel > 0.01) pass = false;
        detail << "lap(" << format_complex(tau) << ") rel " << fmt(rel) << "; ";
    }

    // Mean-zero normalization, symmetry, near-diagonal stability at tau = i.
    const GreenFunction green{EllipticSurface(options.tau)};
    const long samples = options.quick ? 20000 : 100000;
    SeededSampler sampler(options.seed, 0x475A);
    double worst_pull = 0.0;
    for (int k = 0; k < 5; ++k) {
        SeededSampler s = sampler.split(static_cast<std::uint64_t>(k));
        const cd base_point = green.surface().sample(s);
        const McEstimate est = mc_integral(
            [&](cd w) { return green.g(w, base_point); }, green.surface(), samples,
            sampler.split(1000 + static_cast<std::uint64_t>(k)), options.threads);
        const double pull = std::abs(est.mean) / est.stderr_value;
        worst_pull = std::max(worst_pull, pull);
        if (pull > 3.0) pass = false;
    }
    detail << "mean-zero worst pull " << fmt(worst_pull) << " sigma; ";

    const cd x(0.3, 0.2), y(0.7, 0.5);
    if (green.g(x, y) != green.g(y, x)) {
        pass = false;
        detail << "symmetry broken; ";
    }

    // Smooth part g - log|.| is stable across two near-diagonal scales.
    const cd x0(0.37, 0.41);
    const double smooth4 =
        green.g(x0, x0 + cd(1e-4, 0.7e-4)) - std::log(std::abs(cd(1e-4, 0.7e-4)));
    const double smooth5 =
        green.g(x0, x0 + cd(1e-5, 0.7e-5)) - std::log(std::abs(cd(1e-5, 0.7e-5)));
    if (std::abs(smooth4 - smooth5) > 1e-3) pass = false;
    detail << "near-diagonal drift " << fmt(std::abs(smooth4 - smooth5));

    return make_result("green-properties", pass, detail.str());
}

CheckResult check_normalization_consistency(const SuiteOptions& options) {
    const long samples = options.quick ? 20000 : 100000;
    bool pass = true;
    std::ostringstream detail;
    for (cd tau : {cd(0.0, 1.0), cd(0.0, 2.0)}) {
        const EllipticSurface surface(tau);
        const GreenFunction green(surface);
        const HxEstimate hx = hx_cache().get(surface, samples, options.seed, options.threads);
        const double pull = std::abs(green.normalization() - hx.mean) / hx.stderr_value;
        if (pull > 3.0) pass = false;
        detail << "tau=" << format_complex(tau) << " pull " << fmt(pull) << " sigma; ";
    }
    return make_result("normalization-consistency", pass, detail.str());
}

CheckResult check_fay_identity_sweep(const SuiteOptions& options) {
    const long per_case = options.quick ? 10 : 100;
    double worst_residual = 0.0;
    double worst_separability = 0.0;
    long failures = 0;
    long total = 0;
    for (cd tau : {cd(0.0, 1.0), cd(0.0, 2.0), cd(0.4, 1.3)}) {
        const EllipticSurface surface(tau);
        for (int n : {2, 3, 4}) {
            SeededSampler sampler(options.seed,
                                  0x4641 + static_cast<std::uint64_t>(n * 64) +
                                      static_cast<std::uint64_t>(tau.imag() * 16));
            for (long trial = 0; trial < per_case; ++trial) {
                SeededSampler s = sampler.split(static_cast<std::uint64_t>(trial));
                const FayInstance inst = random_fay_instance(surface, n, s);
                const FayReport rep = verify_fay_identity(inst.sys, inst.xs);
                worst_residual = std::max(worst_residual, rep.residual);
                worst_separability =
                    std::max(worst_separability, rep.separability_residual);
                if (!rep.pass) ++failures;
                ++total;
            }
        }
    }
    const bool pass = failures == 0 && worst_separability <= 1e-8;
    return make_result("fay-identity", pass,
                       "max residual " + fmt(worst_residual) + ", max separability " +
                           fmt(worst_separability) + " over " + std::to_string(total) +
                           " instances");
}

CheckResult check_lemma41_sweep(const SuiteOptions& options) {
    const long trials = options.quick ? 50 : 500;
    const EllipticSurface surface(options.tau);
    SeededSampler sampler(options.seed, 0x4C34);
    double min_slack = 1e300;
    long violations = 0;
    for (long trial = 0; trial < trials; ++trial) {
        SeededSampler s = sampler.split(static_cast<std::uint64_t>(trial));
        const int n = 1 + static_cast<int>(std::floor(s.next_unit() * 6.0));
        const FayInstance inst = random_fay_instance(surface, n, s);
        const double slack = lemma41_slack(inst.sys, inst.xs);
        if (std::isfinite(slack)) {
            min_slack = std::min(min_slack, slack);
            if (slack < -1e-9) ++violations;
        }
    }
    return make_result("lemma41", violations == 0,
                       "min slack " + fmt(min_slack) + " over " + std::to_string(trials) +
                           " instances (floor -1e-9)");
}

CheckResult check_an_machinery(const SuiteOptions& options) {
    bool pass = true;
    std::ostringstream detail;

    // a_n(1) = -H_n exactly in rational arithmetic.
    for (int n = 1; n <= 20; ++n) {
        if (a_n_exact(n, Rational(1)) != -harmonic_exact(n)) {
            pass = false;
            detail << "exact a_" << n << "(1) != -H_" << n << "; ";
        }
    }

    // Closed-form derivative against centered differences.
    SeededSampler sampler(options.seed, 0x414E);
    double worst_fd = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        SeededSampler s = sampler.split(static_cast<std::uint64_t>(trial));
        const int n = 1 + static_cast<int>(std::floor(s.next_unit() * 50.0));
        const double x = 0.05 + 0.9 * s.next_unit();
        const double h = 1e-5;
        const double fd = (a_n(n, x + h) - a_n(n, x - h)) / (2.0 * h);
        worst_fd = std::max(worst_fd, std::abs(fd - a_n_derivative(n, x)));
    }
    if (worst_fd > 1e-6) pass = false;
    detail << "max |fd - closed| " << fmt(worst_fd) << "; ";

    // Monotone decrease and the -H_n floor on a grid, n up to 1000
    // (incremental recurrence a_n = a_{n-1} - (1 - (1-x)^n)/n per x).
    const int n_max = options.quick ? 200 : 1000;
    const int x_points = options.quick ? 200 : 1000;
    double min_floor_slack = 1e300;
    bool monotone = true;
    for (int xi = 1; xi <= x_points; ++xi) {
        const double x = static_cast<double>(xi) / x_points;
        double value = 0.0;
        double power = 1.0;
        double harmonic = 0.0;
        double previous_value = 0.0;
        for (int n = 1; n <= n_max; ++n) {
            power *= 1.0 - x;
            value -= (1.0 - power) / n;
            harmonic += 1.0 / n;
            min_floor_slack = std::min(min_floor_slack, value + harmonic);
            if (n > 1 && value > previous_value + 1e-15) monotone = false;
            previous_value = value;
        }
    }
    if (min_floor_slack < -1e-12 || !monotone) pass = false;
    detail << "floor slack " << fmt(min_floor_slack) << "; ";

    // Quadrature equals the alternating series at r = 1 for n <= 30.
    double worst_radial = 0.0;
    for (int n = 1; n <= 30; ++n) {
        SeededSampler s = sampler.split(2000 + static_cast<std::uint64_t>(n));
        const double c = 0.05 + 0.95 * s.next_unit();
        worst_radial = std::max(
            worst_radial, std::abs(radial_integral(n, c, 1.0) - radial_series_r1(n, c)));
        // Reindexing identity between the two series forms.
        worst_radial = std::max(
            worst_radial, std::abs(radial_series_r1(n, c) - radial_series_an_form(n, c)));
    }
    if (worst_radial > 1e-9) pass = false;
    detail << "radial double-entry " << fmt(worst_radial);

    return make_result("an-machinery", pass, detail.str());
}

CheckResult check_an_certification(const SuiteOptions& options) {
    const long tuples = options.quick ? 2000 : 10000;
    const EllipticSurface surface(options.tau);
    const GreenFunction green(surface);
    const TorusChartAtlas atlas = build_torus_atlas(green, 0, 0.3, 0.45);
    long violations = 0;
    double min_gap_sigma = 1e300;
    SeededSampler base_sampler(options.seed, 0x414E43);
    for (int idx = 0; idx < 5; ++idx) {
        SeededSampler xs = base_sampler.split(static_cast<std::uint64_t>(idx));
        const cd x = surface.sample(xs);
        for (long n : {1L, 2L, 4L, 8L, 16L, 32L, 64L}) {
            const McEstimate est =
                estimate_an(x, static_cast<int>(n), green, tuples,
                            base_sampler.split(100 + static_cast<std::uint64_t>(idx * 16) +
                                               static_cast<std::uint64_t>(n)),
                            options.threads);
            BoundInputs in = bound_inputs_from_atlas(atlas, n, 0.0, 0.0);
            const double bound = an_analytic_bound(n, in);
            const double gap_sigma = (bound - est.mean) / est.stderr_value;
            min_gap_sigma = std::min(min_gap_sigma, gap_sigma);
            if (est.mean - 3.0 * est.stderr_value > bound) ++violations;
        }
    }
    return make_result("an-certification", violations == 0,
                       std::to_string(violations) + " violations, min gap " +
                           fmt(min_gap_sigma) + " sigma");
}

CheckResult check_theorem1_certification(const SuiteOptions& options) {
    const long trials = options.quick ? 40 : 200;
    const long hx_samples = options.quick ? 20000 : 100000;
    bool pass = true;
    std::ostringstream detail;
    for (cd tau : {cd(0.0, 1.0), cd(0.0, 2.0)}) {
        const EllipticSurface surface(tau);
        const GreenFunction green(surface);
        const TorusChartAtlas atlas = build_torus_atlas(green, 0, 0.3, 0.45);
        const HxEstimate hx = hx_cache().get(surface, hx_samples, options.seed, options.threads);
        long violations = 0;
        double min_slack = 1e300;
        for (long n : {2L, 4L, 8L, 16L, 32L}) {
            const VerifyReport rep = verify_theorem1(
                green, atlas, n, trials,
                SeededSampler(options.seed, 0x5431 + static_cast<std::uint64_t>(n)),
                hx.mean, hx.stderr_value);
            violations += rep.random.violations + rep.clustered.violations;
            min_slack = std::min(min_slack,
                                 std::min(rep.random.min_slack, rep.clustered.min_slack));
        }
        if (violations != 0) pass = false;
        detail << "tau=" << format_complex(tau) << " min slack " << fmt(min_slack)
               << " viol " << violations << "; ";
    }
    return make_result("theorem1-certification", pass, detail.str());
}

CheckResult check_merkl_consistency(const SuiteOptions& options) {
    SeededSampler sampler(options.seed, 0x4D43);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        SeededSampler s = sampler.split(static_cast<std::uint64_t>(trial));
        const int m = 1 + static_cast<int>(std::floor(s.next_unit() * 4.0));
        const double r1 = 0.55 + 0.4 * s.next_unit();
        const double ratio_bound = 1.0 + 3.0 * s.next_unit();
        const double c1 = 0.2 + 2.0 * s.next_unit();
        const double c2 = c1 * (0.1 + 0.9 * s.next_unit());
        const long n = 1 + static_cast<long>(std::floor(s.next_unit() * 64.0));
        const double h = -0.5 + s.next_unit();

        const double direct = corollary_bound(m, r1, ratio_bound, c1, c2, n, 1, h);
        BoundInputs in;
        in.n = n;
        in.g = 1;
        in.c0 = merkl_c0(m, r1, ratio_bound, c1);
        in.c1 = c1;
        in.c2 = c2;
        in.r1 = r1;
        in.r2 = 1.0;
        in.h_mean = h;
        const double via_theorem = theorem1_bound(in).bound;
        worst = std::max(worst,
                         std::abs(direct - via_theorem) /
                             std::max(1.0, std::abs(direct)));
    }
    return make_result("merkl-consistency", worst <= 1e-10,
                       "max relative gap " + fmt(worst) + " over 50 draws (tol 1e-10)");
}

namespace {

// Captures stdout of a shell command.
std::string capture(const std::string& command) {
    std::string out;
    FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
    if (!pipe) return out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
    pclose(pipe);
    return out;
}

} // namespace

CheckResult check_cli_reproducibility(const SuiteOptions& options) {
    if (options.cli_path.empty()) {
        return make_result("cli-reproducibility", true, "skipped (no CLI path)");
    }
    const std::string exe = "'" + options.cli_path + "'";
    const std::vector<std::string> commands = {
        " theta --tau i --z 0.25+0.125i",
        " theta --tau 2i --z 0.5",
        " hx --tau i --samples 20000 --seed 11",
        " an --tau i --x 0.25+0.25i --n 4 --samples 4000 --seed 3",
        " green --tau i --x 0.2+0.7i --y 0.6+0.3i",
        " atlas --tau i --r1 0.3 --r2 0.45",
        " fay --tau i --n 3 --trials 5 --seed 5",
        " bound --tau i --n 10 --samples 20000 --seed 9",
        " merkl-c0 --m 2 --r1 0.75 --M 2 --C1 1",
        " verify --tau i --n 4 --trials 20 --samples 20000 --seed 13",
    };
    long mismatches = 0;
    for (const std::string& cmd : commands) {
        const std::string a = capture(exe + cmd);
        const std::string b = capture(exe + cmd);
        if (a.empty() || a != b) ++mismatches;
    }
    // Thread count must not influence the bytes.
    const std::string t1 = capture(exe + " hx --tau i --samples 20000 --seed 11 --threads 1");
    const std::string t4 = capture(exe + " hx --tau i --samples 20000 --seed 11 --threads 4");
    if (t1.empty() || t1 != t4) ++mismatches;
    return make_result("cli-reproducibility", mismatches == 0,
                       std::to_string(mismatches) + " of " +
                           std::to_string(commands.size() + 1) + " comparisons differ");
}

std::vector<CheckResult> run_verification_suite(const SuiteOptions& options) {
    std::vector<CheckResult> results;
    results.push_back(check_theta_symmetries(options));
    results.push_back(check_cgrho_growth(options));
    results.push_back(check_theta_upper_bound_sweep(options));
    results.push_back(check_green_properties(options));
    results.push_back(check_normalization_consistency(options));
    results.push_back(check_fay_identity_sweep(options));
    results.push_back(check_lemma41_sweep(options));
    results.push_back(check_an_machinery(options));
    results.push_back(check_an_certification(options));
    results.push_back(check_theorem1_certification(options));
    results.push_back(check_merkl_consistency(options));
    results.push_back(check_cli_reproducibility(options));
    return results;
}

} // namespace arakelov
