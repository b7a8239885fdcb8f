#include "arakelov/elkies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arakelov/exceptions.hpp"
#include "arakelov/quadrature.hpp"

namespace arakelov {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

void check_an_domain(int n, double x) {
    if (n < 1) throw InvalidInputsError("a_n requires n >= 1");
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidInputsError("a_n requires x in [0, 1]");
}

} // namespace

double a_n_binomial(int n, double x) {
    check_an_domain(n, x);
    if (n > 1000) {
        throw OverflowError(
            "binomial coefficients overflow double precision for n > 1000; "
            "a_n switches to the integrated-derivative form there");
    }
    // Neumaier-compensated alternating sum; binom(n, j) by the running ratio.
    double sum = 0.0;
    double comp = 0.0;
    double binom = 1.0;
    double power = 1.0; // (-x)^j
    for (int j = 1; j <= n; ++j) {
        binom *= static_cast<double>(n - j + 1) / static_cast<double>(j);
        power *= -x;
        const double term = binom * power / static_cast<double>(j);
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

double a_n(int n, double x) {
    check_an_domain(n, x);
    // The literal sum loses ~log10(binom(n, n/2)) digits to cancellation;
    // past n = 12 the integrated form is the accurate route.
    if (n <= 12) return a_n_binomial(n, x);
    // Integrated-derivative form: all terms share one sign on [0, 1].
    const double one_minus = 1.0 - x;
    double power = 1.0; // (1-x)^m
    double sum = 0.0;
    for (int m = 1; m <= n; ++m) {
        power *= one_minus;
        sum -= (1.0 - power) / static_cast<double>(m);
    }
    return sum;
}

Rational a_n_exact(int n, const Rational& x) {
    if (n < 1 || n > 20) {
        throw InvalidInputsError("exact mode supports 1 <= n <= 20");
    }
    Rational sum(0);
    Rational power(1);
    Rational binom(1);
    for (int j = 1; j <= n; ++j) {
        binom = binom * Rational(n - j + 1) / Rational(j);
        power = power * (-x);
        sum = sum + binom * power / Rational(j);
    }
    return sum;
}

double a_n_derivative(int n, double x) {
    if (n < 1) throw InvalidInputsError("a_n' requires n >= 1");
    if (!(x > 0.0 && x <= 1.0)) throw InvalidInputsError("a_n' requires x in (0, 1]");
    return (std::pow(1.0 - x, n) - 1.0) / x;
}

std::pair<double, double> harmonic_bound(long n) {
    if (n < 1) throw InvalidInputsError("harmonic_bound requires n >= 1");
    double h = 0.0;
    for (long j = n; j >= 1; --j) h += 1.0 / static_cast<double>(j);
    return {h, 1.0 + std::log(static_cast<double>(n))};
}

Rational harmonic_exact(int n) {
    if (n < 1 || n > 40) throw InvalidInputsError("exact harmonic supports 1 <= n <= 40");
    Rational h(0);
    for (int j = 1; j <= n; ++j) h = h + Rational(1, j);
    return h;
}

double radial_integral(int n, double c, double r, double tol) {
    if (n < 1) throw InvalidInputsError("radial integral requires n >= 1");
    if (!(c > 0.0 && c <= 1.0)) throw InvalidInputsError("radial integral requires c in (0, 1]");
    if (!(r > 0.0 && r <= 1.0)) throw InvalidInputsError("radial integral requires r in (0, 1]");
    const auto f = [n, c](double t) {
        if (t <= 0.0) return 0.0; // t log t -> 0
        return 4.0 * kPi * t * std::pow(1.0 - c * t * t, n - 1) * std::log(t);
    };
    return integrate(f, 0.0, r, 0.5 * tol);
}

double radial_series_r1(int n, double c) {
    if (n < 1) throw InvalidInputsError("radial series requires n >= 1");
    if (!(c > 0.0 && c <= 1.0)) throw InvalidInputsError("radial series requires c in (0, 1]");
    double sum = 0.0;
    double comp = 0.0;
    double binom = 1.0; // binom(n-1, j)
    double power = 1.0; // (-c)^j
    for (int j = 0; j <= n - 1; ++j) {
        if (j > 0) {
            binom *= static_cast<double>(n - j) / static_cast<double>(j);
            power *= -c;
        }
        const double term = -kPi * binom * power /
                            (static_cast<double>(j + 1) * static_cast<double>(j + 1));
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

double radial_series_an_form(int n, double c) {
    if (n < 1) throw InvalidInputsError("radial series requires n >= 1");
    if (!(c > 0.0 && c <= 1.0)) throw InvalidInputsError("radial series requires c in (0, 1]");
    return kPi / (c * static_cast<double>(n)) * a_n(n, c);
}

void BoundInputs::validate() const {
    if (n < 1) throw InvalidInputsError("bound requires n >= 1");
    if (g < 1) throw InvalidInputsError("bound requires g >= 1");
    if (!(r1 > 0.0 && r2 > r1)) throw InvalidInputsError("bound requires r2 > r1 > 0");
    if (r2 - r1 > 1.0) throw InvalidInputsError("bound requires r2 - r1 <= 1");
    if (!(c2 > 0.0 && c1 >= c2)) throw InvalidInputsError("bound requires C1 >= C2 > 0");
    if (c2 > std::exp(4.0 * c0) / kTwoPi) {
        throw InvalidInputsError("bound requires C2 <= e^{4 C0} / (2 pi)");
    }
}

BoundInputs bound_inputs_from_atlas(const TorusChartAtlas& atlas, long n,
                                    double h_mean, double h_stderr) {
    BoundInputs in;
    in.n = n;
    in.g = 1;
    in.c0 = atlas.c0;
    in.c1 = atlas.c1;
    in.c2 = atlas.c2;
    in.r1 = atlas.r1;
    in.r2 = atlas.r2;
    in.h_mean = h_mean;
    in.h_stderr = h_stderr;
    return in;
}

double an_analytic_bound(long n, const BoundInputs& inputs) {
    inputs.validate();
    const double coeff = inputs.c1 * std::exp(4.0 * inputs.c0) / (2.0 * inputs.c2);
    return inputs.c0 - std::log(inputs.r2 - inputs.r1) +
           coeff * (1.0 + std::log(static_cast<double>(n)));
}

double merkl_c0(int m, double r1, double chart_ratio_bound, double c1) {
    if (m < 1) throw InvalidMerklRangeError("chart count m must be >= 1");
    if (!(r1 > 0.5 && r1 < 1.0)) {
        throw InvalidMerklRangeError("the formula requires 1/2 < r1 < 1");
    }
    if (!(chart_ratio_bound >= 1.0)) {
        throw InvalidMerklRangeError("the chart ratio bound M must be >= 1");
    }
    if (!(c1 > 0.0)) throw InvalidMerklRangeError("C1 must be positive");
    const double md = static_cast<double>(m);
    return -330.0 * md / std::pow(1.0 - r1, 1.5) * std::log(1.0 - r1) +
           13.2 * md * c1 + (md - 1.0) * std::log(chart_ratio_bound);
}

namespace {

double bound_at_h(const BoundReport& rep, double h) {
    const double gd = static_cast<double>(rep.inputs.g);
    const double per_point = rep.term_log + rep.term_genus + rep.term_const -
                             (gd + 1.0) / gd * h + rep.term_c0 + rep.term_chart;
    return static_cast<double>(rep.inputs.n) * per_point;
}

} // namespace

BoundReport theorem1_bound(const BoundInputs& inputs) {
    inputs.validate();
    BoundReport rep;
    rep.inputs = inputs;
    const double nd = static_cast<double>(inputs.n);
    const double gd = static_cast<double>(inputs.g);
    rep.coefficient = inputs.c1 * std::exp(4.0 * inputs.c0) / (2.0 * inputs.c2);
    rep.term_log = (rep.coefficient + 1.0) * (std::log(nd) + 1.0);
    rep.term_genus = 1.5 * gd * std::log(gd);
    rep.term_const = 3.0;
    rep.term_h = -(gd + 1.0) / gd * inputs.h_mean;
    rep.term_c0 = inputs.c0;
    rep.term_chart = -std::log(inputs.r2 - inputs.r1);
    rep.per_point = rep.term_log + rep.term_genus + rep.term_const + rep.term_h +
                    rep.term_c0 + rep.term_chart;
    rep.bound = nd * rep.per_point;
    rep.bound_low = bound_at_h(rep, inputs.h_mean + 3.0 * inputs.h_stderr);
    rep.bound_high = bound_at_h(rep, inputs.h_mean - 3.0 * inputs.h_stderr);
    return rep;
}

void attach_energy(BoundReport& report, double measured_energy) {
    report.energy = measured_energy;
    report.slack = report.bound - measured_energy;
}

double corollary_bound(int m, double r1, double chart_ratio_bound, double c1,
                       double c2, long n, int g, double h_mean) {
    const double c0 = merkl_c0(m, r1, chart_ratio_bound, c1);
    const double nd = static_cast<double>(n);
    const double gd = static_cast<double>(g);
    return nd * ((c1 * std::exp(4.0 * c0) / (2.0 * c2) + 1.0) * (std::log(nd) + 1.0) +
                 1.5 * gd * std::log(gd) + 3.0 - (gd + 1.0) / gd * h_mean + c0 -
                 std::log(1.0 - r1));
}

double energy(const PointConfiguration& config, const GreenFunction& green) {
    const auto& pts = config.points();
    double total = 0.0;
    for (size_t j = 0; j < pts.size(); ++j) {
        for (size_t k = j + 1; k < pts.size(); ++k) {
            total += green.g(pts[j], pts[k]);
        }
    }
    return total;
}

namespace {

VerifyStats run_trials(const GreenFunction& green, long n, long trials,
                       const SeededSampler& base, double bound_central,
                       double bound_high, bool clustered) {
    const EllipticSurface& surface = green.surface();
    VerifyStats stats;
    stats.trials = trials;
    std::vector<double> slacks;
    slacks.reserve(static_cast<size_t>(trials));
    for (long t = 0; t < trials; ++t) {
        SeededSampler s = base.split(static_cast<std::uint64_t>(t));
        std::vector<cd> pts;
        pts.reserve(static_cast<size_t>(n));
        const cd center = surface.sample(s);
        while (static_cast<long>(pts.size()) < n) {
            cd cand;
            if (clustered) {
                // Uniform in a disc of radius 1e-3 about the shared center.
                const double rad = 1e-3 * std::sqrt(s.next_unit());
                const double ang = kTwoPi * s.next_unit();
                cand = center + rad * cd(std::cos(ang), std::sin(ang));
            } else {
                cand = surface.sample(s);
            }
            bool clear = true;
            for (cd p : pts) {
                if (surface.reduced_distance(cand - p) <= kPointTolerance) {
                    clear = false;
                    break;
                }
            }
            if (clear) pts.push_back(cand);
        }
        const double e = energy(PointConfiguration(pts, surface), green);
        if (e > bound_high) ++stats.violations;
        slacks.push_back(bound_central - e);
    }
    std::sort(slacks.begin(), slacks.end());
    stats.min_slack = slacks.empty() ? 0.0 : slacks.front();
    if (!slacks.empty()) {
        const size_t mid = slacks.size() / 2;
        stats.median_slack = (slacks.size() % 2 == 1)
                                 ? slacks[mid]
                                 : 0.5 * (slacks[mid - 1] + slacks[mid]);
    }
    return stats;
}

} // namespace

VerifyReport verify_theorem1(const GreenFunction& green, const TorusChartAtlas& atlas,
                             long n, long trials, const SeededSampler& sampler,
                             double h_mean, double h_stderr) {
    if (trials < 1) throw InvalidInputsError("verify needs at least one trial");
    const BoundInputs inputs = bound_inputs_from_atlas(atlas, n, h_mean, h_stderr);
    const BoundReport rep = theorem1_bound(inputs);

    VerifyReport out;
    out.bound = rep.bound;
    out.bound_high = rep.bound_high;
    out.random = run_trials(green, n, trials, sampler.split(0x72616e64), rep.bound,
                            rep.bound_high, /*clustered=*/false);
    const long cluster_trials = std::max<long>(10, trials / 10);
    out.clustered = run_trials(green, n, cluster_trials, sampler.split(0x636c7573),
                               rep.bound, rep.bound_high, /*clustered=*/true);
    return out;
}

} // namespace arakelov
