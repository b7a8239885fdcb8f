// Explicit energy-bound machinery: the alternating sums a_n, harmonic
// bounds, the radial chart integral, the analytic bound on the averaged
// minimum A_n(x), the closed-form chart constant of the Merkl-type
// estimate, the full O(n log n) energy bound with per-term breakdown,
// and the end-to-end certification harness.

#pragma once

#include <optional>
#include <vector>

#include "arakelov/green.hpp"
#include "arakelov/montecarlo.hpp"
#include "arakelov/rational.hpp"
#include "arakelov/rng.hpp"
#include "arakelov/surface.hpp"

namespace arakelov {

// a_n(x) = sum_{j=1}^n binom(n,j) (-x)^j / j.
//
// The literal alternating sum cancels catastrophically as n grows
// (terms grow like 2^n while the value stays O(log n)), so past n = 12
// the evaluation integrates the closed derivative a_n'(t) =
// ((1-t)^n - 1)/t term by term, giving a_n(x) = -sum_{m=1}^n
// (1 - (1-x)^m)/m with all terms of one sign.
double a_n(int n, double x);

// Literal alternating binomial sum with compensated summation; throws
// OverflowError for n > 1000 where the binomial coefficients leave the
// double range (use a_n, which switches form, instead).
double a_n_binomial(int n, double x);

// Exact rational evaluation for n <= 20 and rational x.
Rational a_n_exact(int n, const Rational& x);

// a_n'(x) = ((1-x)^n - 1)/x, x in (0, 1]; always <= 0.
double a_n_derivative(int n, double x);

// (H_n, 1 + log n); the harmonic number never exceeds the bound.
std::pair<double, double> harmonic_bound(long n);
Rational harmonic_exact(int n);

// Adaptive quadrature of 4 pi int_0^r t (1 - c t^2)^{n-1} log t dt to
// ~1e-10 absolute; c in (0, 1], r in (0, 1]. Bounded below by the
// alternating series of the same integral taken over [0, 1].
double radial_integral(int n, double c, double r, double tol = 1e-10);

// Exact value of the same integral at r = 1 as an alternating series:
//   -pi sum_{j=0}^{n-1} binom(n-1, j) (-c)^j / (j+1)^2.
// A second algebraic route to the quadrature value, and a lower bound
// for every r <= 1 (the integrand is nonpositive).
double radial_series_r1(int n, double c);

// The reindexed form (pi / (c n)) a_n(c) of the same series.
double radial_series_an_form(int n, double c);

struct BoundInputs {
    long n = 0;
    int g = 1;
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double h_mean = 0.0;
    double h_stderr = 0.0;

    // Throws InvalidInputsError unless n >= 1, g >= 1, r2 > r1 > 0,
    // r2 - r1 <= 1, C1 >= C2 > 0 and C2 <= e^{4 C0} / (2 pi).
    void validate() const;
};

BoundInputs bound_inputs_from_atlas(const TorusChartAtlas& atlas, long n,
                                    double h_mean, double h_stderr);

// A_n(x) <= C0 - log(r2 - r1) + (C1 e^{4 C0} / (2 C2)) (1 + log n).
double an_analytic_bound(long n, const BoundInputs& inputs);

// Chart constant from the closed formula
//   -330 m (1 - r1)^{-3/2} log(1 - r1) + 13.2 m C1 + (m - 1) log M,
// valid for 1/2 < r1 < 1, M >= 1, C1 > 0, m >= 1.
double merkl_c0(int m, double r1, double chart_ratio_bound, double c1);

struct BoundReport {
    BoundInputs inputs;
    double coefficient = 0.0;  // C1 e^{4 C0} / (2 C2)
    double term_log = 0.0;     // (coefficient + 1)(log n + 1)
    double term_genus = 0.0;   // (3/2) g log g
    double term_const = 3.0;
    double term_h = 0.0;       // -((g+1)/g) H
    double term_c0 = 0.0;
    double term_chart = 0.0;   // -log(r2 - r1)
    double per_point = 0.0;    // sum of the terms
    double bound = 0.0;        // n * per_point, at the H point estimate
    double bound_low = 0.0;    // at H + 3 stderr (smallest in the bracket)
    double bound_high = 0.0;   // at H - 3 stderr (largest in the bracket)
    std::optional<double> energy;
    std::optional<double> slack; // bound - energy
};

// Energy bound sum_{j<k} g(x_j, x_k) <= n * (...), reported term by term
// and bracketed at H +/- 3 stderr so sampling noise is never blamed on
// the inequality.
BoundReport theorem1_bound(const BoundInputs& inputs);

// Records a measured energy in the report; slack = bound - energy.
void attach_energy(BoundReport& report, double measured_energy);

// The same bound assembled from the closed-form chart constant, with the
// chart term -log(1 - r1); an independent code path used to cross-check
// theorem1_bound on Merkl-style inputs.
double corollary_bound(int m, double r1, double chart_ratio_bound, double c1,
                       double c2, long n, int g, double h_mean);

// sum_{j<k} g(x_j, x_k).
double energy(const PointConfiguration& config, const GreenFunction& green);

struct VerifyStats {
    long trials = 0;
    long violations = 0;
    double min_slack = 0.0;
    double median_slack = 0.0;
};

struct VerifyReport {
    VerifyStats random;
    VerifyStats clustered; // all points inside a radius-1e-3 disc
    double bound = 0.0;      // at the H point estimate
    double bound_high = 0.0; // violation gate: beyond the 3 sigma bracket
};

// Draws `trials` random n-point configurations plus clustered stress
// configurations and checks the energy bound on each; violations are
// counted (never thrown) and slack statistics reported against the
// central bound.
VerifyReport verify_theorem1(const GreenFunction& green, const TorusChartAtlas& atlas,
                             long n, long trials, const SeededSampler& sampler,
                             double h_mean, double h_stderr);

} // namespace arakelov
