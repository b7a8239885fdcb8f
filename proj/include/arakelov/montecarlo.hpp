// Monte Carlo estimators on the Jacobian and on the surface.
//
// Sampling layout: item i of an estimate draws from the child stream
// sampler.split(i), and items are accumulated in blocks of fixed size
// combined in index order. Results therefore depend only on
// (seed, stream, N) -- never on the thread count -- and an item's draws
// are a prefix of the draws the same item makes in a larger run (which
// makes min-over-tuple statistics monotone on matched seeds).

#pragma once

#include <functional>

#include "arakelov/green.hpp"
#include "arakelov/rng.hpp"
#include "arakelov/surface.hpp"

namespace arakelov {

struct McEstimate {
    double mean = 0.0;
    double stderr_value = 0.0; // sample standard deviation / sqrt(samples)
    long samples = 0;
    long dropped = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

struct HxEstimate : McEstimate {
    int genus = 1;
};

// Monte Carlo H(X): mean of log||theta|| over uniform Jacobian samples.
// Samples whose norm underflows to zero are dropped and counted; more
// than 0.1% of them raises DegenerateEstimateError. Requires N >= 1000.
HxEstimate estimate_hx(const PeriodMatrix& pm, long n_samples,
                       const SeededSampler& sampler, int threads = 1,
                       double tol = 1e-12);

// Mean and standard error of f over canonical-measure samples (genus 1).
McEstimate mc_integral(const std::function<double(cd)>& f, const EllipticSurface& surface,
                       long n_samples, const SeededSampler& sampler, int threads = 1);

// A_n(x): Monte Carlo mean of -min_j g(y_j, x) over independent n-tuples
// of canonical-measure points. Tuple t draws from child stream t, so the
// estimate is nondecreasing in n on matched seeds.
McEstimate estimate_an(cd x, int n_points, const GreenFunction& green, long n_tuples,
                       const SeededSampler& sampler, int threads = 1);

// Convenience: estimate H(X) for a surface and store it in the surface's
// write-once cache. Returns the estimate.
HxEstimate ensure_hx(const EllipticSurface& surface, long n_samples,
                     const SeededSampler& sampler, int threads = 1);

} // namespace arakelov
