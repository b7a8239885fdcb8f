#include <doctest.h>

#include <cmath>
#include <vector>

#include "arakelov/elkies.hpp"
#include "arakelov/exceptions.hpp"
#include "arakelov/green.hpp"
#include "arakelov/quadrature.hpp"
#include "arakelov/rng.hpp"
#include "arakelov/surface.hpp"
#include "oracles.hpp"

using namespace arakelov;

TEST_CASE("alternating sums a_n") {
    SUBCASE("hand anchors") {
        CHECK(a_n(2, 1.0) == doctest::Approx(-1.5).epsilon(1e-14));
        CHECK(a_n(1, 0.0) == 0.0);
        CHECK(a_n(50, 0.0) == 0.0);
        CHECK(a_n(1, 0.7) == doctest::Approx(-0.7).epsilon(1e-14));
    }
    SUBCASE("exact rational mode") {
        CHECK(a_n_exact(5, Rational(1)) == Rational(-137, 60));
        CHECK(harmonic_exact(5) == Rational(137, 60));
        for (int n = 1; n <= 20; ++n) {
            CHECK(a_n_exact(n, Rational(1)) == -harmonic_exact(n));
        }
        CHECK(a_n_exact(2, Rational(1, 2)).to_double() ==
              doctest::Approx(a_n(2, 0.5)).epsilon(1e-14));
        CHECK_THROWS_AS(a_n_exact(21, Rational(1)), InvalidInputsError);
    }
    SUBCASE("binomial and stable forms agree") {
        SeededSampler s(6);
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 1 + static_cast<int>(std::floor(s.next_unit() * 30.0));
            const double x = s.next_unit();
            // The binomial route carries cancellation noise that grows
            // with binom(n, n/2); 1e-7 absolute is what it can honestly
            // deliver at n = 30.
            CHECK(std::abs(a_n_binomial(n, x) - a_n(n, x)) < 1e-7);
        }
        // Large n: the stable form matches quadrature of the closed
        // derivative (expm1/log1p keeps the integrand smooth at 0).
        for (int n : {100, 400}) {
            const double x = 0.73;
            const double via_quadrature = integrate(
                [n](double t) {
                    if (t <= 0.0) return -static_cast<double>(n);
                    return std::expm1(static_cast<double>(n) * std::log1p(-t)) / t;
                },
                0.0, x, 1e-11);
            CHECK(a_n(n, x) == doctest::Approx(via_quadrature).epsilon(1e-9));
        }
    }
    SUBCASE("binomial route overflows past n = 1000") {
        CHECK_THROWS_AS(a_n_binomial(1001, 0.5), OverflowError);
        CHECK_NOTHROW(a_n(1001, 0.5));
    }
    SUBCASE("domain checks") {
        CHECK_THROWS_AS(a_n(0, 0.5), InvalidInputsError);
        CHECK_THROWS_AS(a_n(3, 1.5), InvalidInputsError);
    }
}

TEST_CASE("derivative of a_n") {
    SUBCASE("hand value") {
        CHECK(a_n_derivative(2, 0.5) == doctest::Approx(-1.5).epsilon(1e-14));
    }
    SUBCASE("always nonpositive") {
        SeededSampler s(8);
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 1 + static_cast<int>(std::floor(s.next_unit() * 100.0));
            const double x = 1e-6 + (1.0 - 1e-6) * s.next_unit();
            CHECK(a_n_derivative(n, x) <= 0.0);
        }
    }
    SUBCASE("matches centered differences") {
        SeededSampler s(9);
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 1 + static_cast<int>(std::floor(s.next_unit() * 50.0));
            const double x = 0.05 + 0.9 * s.next_unit();
            const double h = 1e-5;
            const double fd = (a_n(n, x + h) - a_n(n, x - h)) / (2.0 * h);
            CHECK(std::abs(fd - a_n_derivative(n, x)) < 1e-6);
        }
    }
}

TEST_CASE("harmonic numbers and their log bound") {
    SUBCASE("hand values") {
        auto [h1, b1] = harmonic_bound(1);
        CHECK(h1 == doctest::Approx(1.0));
        CHECK(b1 == doctest::Approx(1.0));
        auto [h4, b4] = harmonic_bound(4);
        CHECK(h4 == doctest::Approx(25.0 / 12.0).epsilon(1e-14));
        CHECK(b4 == doctest::Approx(1.0 + std::log(4.0)).epsilon(1e-14));
    }
    SUBCASE("sweep to one million") {
        double h = 0.0;
        for (long n = 1; n <= 1000000; ++n) {
            h += 1.0 / static_cast<double>(n);
            CHECK_UNARY(h <= 1.0 + std::log(static_cast<double>(n)) + 1e-12);
        }
    }
}

TEST_CASE("a_n floor property") {
    // a_n(x) >= a_n(1) = -H_n on [0, 1], checked on a grid with the
    // incremental recurrence.
    double worst = 1e300;
    for (int xi = 1; xi <= 1000; ++xi) {
        const double x = xi / 1000.0;
        double value = 0.0, power = 1.0, harmonic = 0.0;
        for (int n = 1; n <= 1000; ++n) {
            power *= 1.0 - x;
            value -= (1.0 - power) / n;
            harmonic += 1.0 / n;
            worst = std::min(worst, value + harmonic);
        }
    }
    CHECK(worst >= -1e-12);
}

TEST_CASE("radial integral") {
    SUBCASE("closed forms at r = 1") {
        CHECK(radial_integral(1, 0.5, 1.0) == doctest::Approx(-oracles::kPi).epsilon(1e-10));
        CHECK(radial_integral(2, 1.0, 1.0) ==
              doctest::Approx(-0.75 * oracles::kPi).epsilon(1e-10));
    }
    SUBCASE("quadrature equals the alternating series at r = 1") {
        SeededSampler s(10);
        for (int n = 1; n <= 30; ++n) {
            const double c = 0.05 + 0.95 * s.next_unit();
            CHECK(std::abs(radial_integral(n, c, 1.0) - radial_series_r1(n, c)) < 1e-9);
        }
    }
    SUBCASE("reindexing identity between the two series forms") {
        SeededSampler s(11);
        for (int n = 1; n <= 30; ++n) {
            const double c = 0.05 + 0.95 * s.next_unit();
            CHECK(std::abs(radial_series_r1(n, c) - radial_series_an_form(n, c)) < 1e-9);
        }
    }
    SUBCASE("truncated integral dominates the full-interval series") {
        // The integrand is nonpositive, so integrating over [0, r] with
        // r < 1 only discards nonpositive mass.
        SeededSampler s(12);
        for (int trial = 0; trial < 50; ++trial) {
            const int n = 1 + static_cast<int>(std::floor(s.next_unit() * 40.0));
            const double c = 0.05 + 0.95 * s.next_unit();
            const double r = 0.05 + 0.95 * s.next_unit();
            const double q = radial_integral(n, c, r);
            CHECK(q >= radial_series_r1(n, c) - 1e-9);
            CHECK(q >= radial_series_an_form(n, c) - 1e-9);
            const double log_floor =
                -oracles::kPi / (c * n) * (1.0 + std::log(static_cast<double>(n)));
            CHECK(q >= log_floor - 1e-9);
        }
    }
    SUBCASE("domain checks") {
        CHECK_THROWS_AS(radial_integral(0, 0.5, 1.0), InvalidInputsError);
        CHECK_THROWS_AS(radial_integral(2, 1.5, 1.0), InvalidInputsError);
        CHECK_THROWS_AS(radial_integral(2, 0.5, 1.5), InvalidInputsError);
    }
}

TEST_CASE("analytic bound for the averaged minimum") {
    BoundInputs in;
    in.n = 1;
    in.g = 1;
    in.c0 = 1.2;
    in.c1 = 0.5;
    in.c2 = 0.5;
    in.r1 = 0.3;
    in.r2 = 0.45;

    SUBCASE("n = 1 closed form") {
        const double coeff = 0.5 * std::exp(4.8) / 1.0;
        CHECK(an_analytic_bound(1, in) ==
              doctest::Approx(1.2 - std::log(0.15) + coeff).epsilon(1e-14));
    }
    SUBCASE("doubling n adds exactly coeff log 2") {
        const double coeff = in.c1 * std::exp(4.0 * in.c0) / (2.0 * in.c2);
        for (long n : {1L, 4L, 16L}) {
            const double inc = an_analytic_bound(2 * n, in) - an_analytic_bound(n, in);
            CHECK(inc == doctest::Approx(coeff * std::log(2.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("chart constant formula") {
    SUBCASE("frozen hand evaluation") {
        // -330*2/0.25^{1.5} * log(0.25) + 13.2*2 + log 2.
        CHECK(merkl_c0(2, 0.75, 2.0, 1.0) ==
              doctest::Approx(7346.7273738935819).epsilon(1e-12));
    }
    SUBCASE("single chart with unit ratio drops the last term") {
        const double expected = -330.0 / std::pow(0.25, 1.5) * std::log(0.25) + 13.2;
        CHECK(merkl_c0(1, 0.75, 1.0, 1.0) == doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("range validation") {
        CHECK_THROWS_AS(merkl_c0(2, 0.4, 2.0, 1.0), InvalidMerklRangeError);
        CHECK_THROWS_AS(merkl_c0(2, 1.0, 2.0, 1.0), InvalidMerklRangeError);
        CHECK_THROWS_AS(merkl_c0(2, 0.75, 0.5, 1.0), InvalidMerklRangeError);
        CHECK_THROWS_AS(merkl_c0(0, 0.75, 2.0, 1.0), InvalidMerklRangeError);
        CHECK_THROWS_AS(merkl_c0(2, 0.75, 2.0, 0.0), InvalidMerklRangeError);
    }
}

TEST_CASE("energy bound report") {
    BoundInputs in;
    in.n = 32;
    in.g = 1;
    in.c0 = 2.1;
    in.c1 = 0.5;
    in.c2 = 0.5;
    in.r1 = 0.3;
    in.r2 = 0.45;
    in.h_mean = -0.2637;
    in.h_stderr = 0.0013;

    SUBCASE("double-entry recomputation") {
        const BoundReport rep = theorem1_bound(in);
        const double coeff = in.c1 * std::exp(4.0 * in.c0) / (2.0 * in.c2);
        const double expected =
            32.0 * ((coeff + 1.0) * (std::log(32.0) + 1.0) + 1.5 * std::log(1.0) + 3.0 -
                    2.0 * in.h_mean + in.c0 - std::log(0.15));
        CHECK(rep.bound == doctest::Approx(expected).epsilon(1e-10));
        CHECK(rep.term_genus == 0.0);
        CHECK(rep.term_h == doctest::Approx(-2.0 * in.h_mean).epsilon(1e-14));
        CHECK(rep.bound_high > rep.bound);
        CHECK(rep.bound_low < rep.bound);
    }
    SUBCASE("n = 1 still produces a report") {
        BoundInputs one = in;
        one.n = 1;
        CHECK_NOTHROW(theorem1_bound(one));
    }
    SUBCASE("measured energy attaches with its slack") {
        BoundReport rep = theorem1_bound(in);
        attach_energy(rep, 12.5);
        CHECK(rep.energy.has_value());
        CHECK(*rep.slack == doctest::Approx(rep.bound - 12.5).epsilon(1e-14));
    }
    SUBCASE("monotone in C0 and in C1/C2") {
        double previous = theorem1_bound(in).bound;
        for (double bump : {0.1, 0.2, 0.4, 0.8, 1.6}) {
            BoundInputs hi = in;
            hi.c0 = in.c0 + bump;
            const double next = theorem1_bound(hi).bound;
            CHECK(next > previous);
            previous = next;
        }
        previous = theorem1_bound(in).bound;
        for (double factor : {1.2, 1.5, 2.0, 4.0}) {
            BoundInputs ratio = in;
            ratio.c1 = in.c1 * factor;
            const double next = theorem1_bound(ratio).bound;
            CHECK(next > previous);
            previous = next;
        }
    }
    SUBCASE("validation") {
        BoundInputs bad = in;
        bad.r2 = 1.5;
        CHECK_THROWS_AS(theorem1_bound(bad), InvalidInputsError);
        bad = in;
        bad.c2 = 2.0 * in.c1;
        CHECK_THROWS_AS(theorem1_bound(bad), InvalidInputsError);
        bad = in;
        bad.c0 = -3.0;
        bad.c1 = 1.0;
        bad.c2 = 1.0; // violates C2 <= e^{4 C0} / (2 pi)
        CHECK_THROWS_AS(theorem1_bound(bad), InvalidInputsError);
    }
}

TEST_CASE("energy of configurations") {
    const EllipticSurface surface(cd(0, 1));
    const GreenFunction green(surface);

    SUBCASE("empty and single-pair sums") {
        CHECK(energy(PointConfiguration({cd(0.3, 0.3)}, surface), green) == 0.0);
        const cd x(0.2, 0.2), y(0.7, 0.6);
        CHECK(energy(PointConfiguration({x, y}, surface), green) ==
              doctest::Approx(green.g(x, y)).epsilon(1e-14));
    }
    SUBCASE("equally spaced points on a closed geodesic stay under the bound") {
        const TorusChartAtlas atlas = build_torus_atlas(green, 0, 0.3, 0.45);
        const double h = oracles::closed_form_hx(cd(0, 1));
        for (int n : {2, 4, 8, 16, 32, 64}) {
            std::vector<cd> pts;
            for (int k = 0; k < n; ++k) {
                pts.push_back(cd(static_cast<double>(k) / n, 0.0));
            }
            const double e = energy(PointConfiguration(pts, surface), green);
            const BoundReport rep =
                theorem1_bound(bound_inputs_from_atlas(atlas, n, h, 0.0));
            CHECK(e <= rep.bound);
        }
    }
}

TEST_CASE("end-to-end certification harness") {
    const EllipticSurface surface(cd(0, 1));
    const GreenFunction green(surface);
    const TorusChartAtlas atlas = build_torus_atlas(green, 0, 0.3, 0.45);
    const double h = oracles::closed_form_hx(cd(0, 1));

    const VerifyReport rep =
        verify_theorem1(green, atlas, 8, 20, SeededSampler(40), h, 1e-3);
    CHECK(rep.random.violations == 0);
    CHECK(rep.clustered.violations == 0);
    CHECK(rep.random.trials == 20);
    CHECK(rep.random.min_slack > 0.0);
    CHECK(rep.clustered.min_slack > 0.0);
}
