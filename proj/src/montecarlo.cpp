#include "arakelov/montecarlo.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include "arakelov/exceptions.hpp"
#include "arakelov/theta.hpp"

namespace arakelov {

namespace {

constexpr long kBlockItems = 4096;

struct Accumulator {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    long dropped = 0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    void drop() { ++dropped; }

    static Accumulator combine(const Accumulator& a, const Accumulator& b) {
        if (a.n == 0) {
            Accumulator out = b;
            out.dropped += a.dropped;
            return out;
        }
        if (b.n == 0) {
            Accumulator out = a;
            out.dropped += b.dropped;
            return out;
        }
        Accumulator out;
        out.n = a.n + b.n;
        const double d = b.mean - a.mean;
        out.mean = a.mean + d * static_cast<double>(b.n) / static_cast<double>(out.n);
        out.m2 = a.m2 + b.m2 +
                 d * d * static_cast<double>(a.n) * static_cast<double>(b.n) /
                     static_cast<double>(out.n);
        out.dropped = a.dropped + b.dropped;
        return out;
    }
};

// Runs `count` items; item i draws from sampler.split(i). Blocks are
// accumulated independently and folded in block order, so the result is
// identical for every thread count.
template <typename ItemFn>
Accumulator run_items(const SeededSampler& base, long count, int threads,
                      const ItemFn& item) {
    const long blocks = (count + kBlockItems - 1) / kBlockItems;
    std::vector<Accumulator> parts(static_cast<size_t>(blocks));
    auto run_block = [&](long blk) {
        Accumulator acc;
        const long lo = blk * kBlockItems;
        const long hi = std::min(count, lo + kBlockItems);
        for (long i = lo; i < hi; ++i) {
            SeededSampler child = base.split(static_cast<std::uint64_t>(i));
            item(child, acc);
        }
        parts[static_cast<size_t>(blk)] = acc;
    };
    if (threads <= 1 || blocks <= 1) {
        for (long blk = 0; blk < blocks; ++blk) run_block(blk);
    } else {
        const int workers = static_cast<int>(std::min<long>(threads, blocks));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (long blk = w; blk < blocks; blk += workers) run_block(blk);
            });
        }
        for (auto& t : pool) t.join();
    }
    Accumulator total;
    for (const Accumulator& part : parts) total = Accumulator::combine(total, part);
    return total;
}

McEstimate finish(const Accumulator& acc, const SeededSampler& base) {
    if (acc.n < 2) {
        throw DegenerateEstimateError("fewer than two retained samples");
    }
    McEstimate est;
    est.mean = acc.mean;
    est.stderr_value =
        std::sqrt(acc.m2 / static_cast<double>(acc.n - 1) / static_cast<double>(acc.n));
    est.samples = acc.n;
    est.dropped = acc.dropped;
    est.seed = base.seed();
    est.stream = base.stream_index();
    return est;
}

} // namespace

HxEstimate estimate_hx(const PeriodMatrix& pm, long n_samples,
                       const SeededSampler& sampler, int threads, double tol) {
    if (n_samples < 1000) {
        throw InvalidInputsError("estimate_hx requires at least 1000 samples");
    }
    const Accumulator acc = run_items(
        sampler, n_samples, threads, [&](SeededSampler& s, Accumulator& a) {
            const JacobianPoint p = uniform_jacobian_sample(pm, s);
            const double v = log_theta_norm(p, pm, tol);
            if (std::isfinite(v)) {
                a.add(v);
            } else {
                a.drop();
            }
        });
    if (acc.dropped * 1000 > n_samples) {
        throw DegenerateEstimateError(
            "more than 0.1% of log||theta|| samples underflowed (" +
            std::to_string(acc.dropped) + " of " + std::to_string(n_samples) + ")");
    }
    HxEstimate est;
    static_cast<McEstimate&>(est) = finish(acc, sampler);
    est.genus = pm.genus();
    return est;
}

McEstimate mc_integral(const std::function<double(cd)>& f, const EllipticSurface& surface,
                       long n_samples, const SeededSampler& sampler, int threads) {
    if (n_samples < 2) throw InvalidInputsError("mc_integral requires at least 2 samples");
    const Accumulator acc = run_items(
        sampler, n_samples, threads, [&](SeededSampler& s, Accumulator& a) {
            const double v = f(surface.sample(s));
            if (std::isfinite(v)) {
                a.add(v);
            } else {
                a.drop();
            }
        });
    return finish(acc, sampler);
}

McEstimate estimate_an(cd x, int n_points, const GreenFunction& green, long n_tuples,
                       const SeededSampler& sampler, int threads) {
    if (n_points < 1) throw InvalidInputsError("estimate_an requires n >= 1");
    if (n_tuples < 2) throw InvalidInputsError("estimate_an requires at least 2 tuples");
    const EllipticSurface& surface = green.surface();
    const Accumulator acc = run_items(
        sampler, n_tuples, threads, [&](SeededSampler& s, Accumulator& a) {
            double min_g = std::numeric_limits<double>::infinity();
            for (int j = 0; j < n_points; ++j) {
                cd y = surface.sample(s);
                // Measure-zero guard: redraw a sample landing on x itself.
                while (surface.reduced_distance(y - x) <= kPointTolerance) {
                    y = surface.sample(s);
                }
                min_g = std::min(min_g, green.g(y, x));
            }
            a.add(-min_g);
        });
    return finish(acc, sampler);
}

HxEstimate ensure_hx(const EllipticSurface& surface, long n_samples,
                     const SeededSampler& sampler, int threads) {
    const HxEstimate est = estimate_hx(surface.period_matrix(), n_samples, sampler, threads);
    surface.cache_hx(est.mean, est.stderr_value, est.samples);
    return est;
}

} // namespace arakelov
