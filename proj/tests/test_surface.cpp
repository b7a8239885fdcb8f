#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "arakelov/exceptions.hpp"
#include "arakelov/rng.hpp"
#include "arakelov/surface.hpp"

using namespace arakelov;

TEST_CASE("period matrix validation") {
    SUBCASE("i times identity is valid") {
        const PeriodMatrix pm =
            PeriodMatrix::validate({{cd(0, 1), cd(0, 0)}, {cd(0, 0), cd(0, 1)}});
        CHECK(pm.genus() == 2);
        CHECK(pm.min_eigenvalue() == doctest::Approx(1.0));
        CHECK(pm.log_det_y() == doctest::Approx(0.0));
        CHECK(pm.y_inverse(0, 0) == doctest::Approx(1.0));
    }
    SUBCASE("asymmetric input is rejected") {
        CHECK_THROWS_AS(
            PeriodMatrix::validate({{cd(0, 1), cd(2, 0)}, {cd(0, 0), cd(0, 1)}}),
            NotSymmetricError);
    }
    SUBCASE("negative imaginary part is rejected") {
        CHECK_THROWS_AS(PeriodMatrix::validate({{cd(0, -1)}}), NotPositiveDefiniteError);
        CHECK_THROWS_AS(PeriodMatrix::from_tau(cd(0.5, -1.0)), NotPositiveDefiniteError);
    }
    SUBCASE("genus range") {
        CHECK_THROWS_AS(PeriodMatrix::validate({}), UnsupportedGenusError);
        std::vector<std::vector<cd>> big(7, std::vector<cd>(7));
        for (size_t i = 0; i < 7; ++i) big[i][i] = cd(0, 1);
        CHECK_THROWS_AS(PeriodMatrix::validate(big), UnsupportedGenusError);
    }
    SUBCASE("systole of square and tall tori") {
        CHECK(PeriodMatrix::from_tau(cd(0, 1)).systole() == doctest::Approx(1.0));
        CHECK(PeriodMatrix::from_tau(cd(0, 2)).systole() == doctest::Approx(1.0));
        CHECK(PeriodMatrix::from_tau(cd(0, 0.4)).systole() == doctest::Approx(0.4));
        // Large real part: the short vector is tau - 5, not a unit vector.
        CHECK(PeriodMatrix::from_tau(cd(5.0, 0.8)).systole() == doctest::Approx(0.8));
        CHECK(PeriodMatrix::from_tau(cd(0.5, 0.7)).systole() ==
              doctest::Approx(std::abs(cd(0.5, 0.7))));
    }
}

TEST_CASE("reduction to characteristic coordinates") {
    const PeriodMatrix pm_i = PeriodMatrix::from_tau(cd(0, 1));

    SUBCASE("hand example at tau = i") {
        const JacobianPoint r = reduce(JacobianPoint::scalar(cd(2.5, 3.7)), pm_i);
        CHECK(r.z[0].real() == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(r.z[0].imag() == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(r.a[0] == doctest::Approx(0.5));
        CHECK(r.b[0] == doctest::Approx(0.7));
    }
    SUBCASE("origin is fixed") {
        const JacobianPoint r = reduce(JacobianPoint::scalar(cd(0, 0)), pm_i);
        CHECK(r.z[0] == cd(0, 0));
    }
    SUBCASE("lattice point maps to the origin") {
        const PeriodMatrix pm = PeriodMatrix::from_tau(cd(0, 2));
        const JacobianPoint r = reduce(JacobianPoint::scalar(cd(1, 2)), pm); // 1 + tau
        CHECK(std::abs(r.z[0]) == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("idempotence is exact") {
        SeededSampler s(42);
        for (int trial = 0; trial < 50; ++trial) {
            const cd z(40.0 * s.next_unit() - 20.0, 40.0 * s.next_unit() - 20.0);
            const JacobianPoint once = reduce(JacobianPoint::scalar(z), pm_i);
            const JacobianPoint twice = reduce(once, pm_i);
            CHECK(once.z[0].real() == twice.z[0].real());
            CHECK(once.z[0].imag() == twice.z[0].imag());
        }
    }
    SUBCASE("soundness: removed lattice vector is recovered exactly") {
        const PeriodMatrix pm = PeriodMatrix::validate(
            {{cd(0.3, 1.2), cd(-0.1, 0.4)}, {cd(-0.1, 0.4), cd(0.2, 0.9)}});
        SeededSampler s(7);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<cd> z = {
                cd(30.0 * s.next_unit() - 15.0, 20.0 * s.next_unit() - 10.0),
                cd(30.0 * s.next_unit() - 15.0, 20.0 * s.next_unit() - 10.0)};
            const ReductionResult rr = reduce_decompose(JacobianPoint(z), pm);
            for (int i = 0; i < 2; ++i) {
                cd back = rr.point.z[static_cast<size_t>(i)] +
                          cd(static_cast<double>(rr.n[static_cast<size_t>(i)]), 0.0);
                for (int j = 0; j < 2; ++j) {
                    back += pm.omega(i, j) *
                            static_cast<double>(rr.m[static_cast<size_t>(j)]);
                }
                CHECK(std::abs(back - z[static_cast<size_t>(i)]) < 1e-12);
            }
        }
    }
    SUBCASE("jacobian equality mod the lattice") {
        const JacobianPoint p = JacobianPoint::scalar(cd(0.3, 0.4));
        const JacobianPoint q = JacobianPoint::scalar(cd(5.3, 2.4)); // + 5 + 2 tau
        CHECK(jacobian_equal(p, q, pm_i));
        CHECK_FALSE(jacobian_equal(p, JacobianPoint::scalar(cd(0.8, 0.4)), pm_i));
        // Wrap-around at the characteristic seam.
        CHECK(jacobian_equal(JacobianPoint::scalar(cd(1e-14, 0.0)),
                             JacobianPoint::scalar(cd(-1e-14, 0.0)), pm_i));
    }
}

TEST_CASE("seeded sampler") {
    SUBCASE("bit-identical sequences per (seed, stream)") {
        SeededSampler a(123, 5), b(123, 5);
        for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    }
    SUBCASE("regression pins") {
        SeededSampler s(0);
        CHECK(s.next_unit() == doctest::Approx(0.78434472400428157).epsilon(1e-15));
        SeededSampler t(7, 0);
        const PeriodMatrix pm = PeriodMatrix::from_tau(cd(0, 1));
        const JacobianPoint p = uniform_jacobian_sample(pm, t);
        CHECK(p.z[0].real() == doctest::Approx(0.6861642355716685).epsilon(1e-15));
        CHECK(p.z[0].imag() == doctest::Approx(0.26431622323483728).epsilon(1e-15));
    }
    SUBCASE("distinct streams have disjoint prefixes") {
        SeededSampler a(9, 0), b(9, 1);
        int same = 0;
        for (int i = 0; i < 100; ++i) {
            if (a.next_u64() == b.next_u64()) ++same;
        }
        CHECK(same == 0);
    }
    SUBCASE("split children differ from the parent and each other") {
        SeededSampler base(11, 3);
        SeededSampler c0 = base.split(0);
        SeededSampler c1 = base.split(1);
        CHECK(c0.next_u64() != c1.next_u64());
    }
    SUBCASE("uniformity of characteristics at tau = i") {
        const PeriodMatrix pm = PeriodMatrix::from_tau(cd(0, 1));
        SeededSampler s(2024);
        const long n = 100000;
        std::vector<double> re;
        re.reserve(static_cast<size_t>(n));
        double sum = 0.0;
        for (long i = 0; i < n; ++i) {
            const JacobianPoint p = uniform_jacobian_sample(pm, s);
            re.push_back(p.z[0].real());
            sum += p.z[0].real();
        }
        const double mean = sum / static_cast<double>(n);
        const double sigma = 1.0 / std::sqrt(12.0 * n);
        CHECK(std::abs(mean - 0.5) < 3.0 * sigma);
        std::sort(re.begin(), re.end());
        double ks = 0.0;
        for (long i = 0; i < n; ++i) {
            const double u = re[static_cast<size_t>(i)];
            ks = std::max(ks, std::abs((i + 1.0) / n - u));
            ks = std::max(ks, std::abs(u - static_cast<double>(i) / n));
        }
        CHECK(ks < 0.01);
    }
}

TEST_CASE("elliptic surface and configurations") {
    const EllipticSurface surface(cd(0, 1));
    SUBCASE("kappa and density") {
        CHECK(surface.kappa() == cd(0.5, 0.5));
        CHECK(surface.mu_density() == doctest::Approx(1.0));
        const EllipticSurface tall(cd(0, 2));
        CHECK(tall.mu_density() == doctest::Approx(0.5));
        // Total mass of the canonical measure over the fundamental domain.
        CHECK(tall.mu_density() * tall.tau().imag() == doctest::Approx(1.0));
    }
    SUBCASE("reduced distance sees wrap-around") {
        CHECK(surface.reduced_distance(cd(0.95, 0.0)) == doctest::Approx(0.05));
        CHECK(surface.reduced_distance(cd(0.0, 0.98)) == doctest::Approx(0.02));
    }
    SUBCASE("coincident points are rejected") {
        CHECK_THROWS_AS(PointConfiguration({cd(0.1, 0.2), cd(1.1, 1.2)}, surface),
                        CoincidentPointsError);
        CHECK_NOTHROW(PointConfiguration({cd(0.1, 0.2), cd(0.4, 0.2)}, surface));
    }
}

TEST_CASE("period matrix file format") {
    const std::string good = std::string("omega_good_test.txt");
    {
        std::ofstream f(good);
        f << "2\n0.3+1.2i -0.1+0.4i\n-0.1+0.4i 0.2+0.9i\n";
    }
    const PeriodMatrix pm = read_period_matrix_file(good);
    CHECK(pm.genus() == 2);
    CHECK(pm.omega(0, 1) == cd(-0.1, 0.4));
    std::remove(good.c_str());

    const std::string bad = std::string("omega_bad_test.txt");
    {
        std::ofstream f(bad);
        f << "2\n0.3+1.2i\n-0.1+0.4i 0.2+0.9i\n";
    }
    CHECK_THROWS_WITH_AS(read_period_matrix_file(bad), doctest::Contains(":2:"),
                         InputError);
    std::remove(bad.c_str());

    CHECK_THROWS_AS(read_period_matrix_file("does_not_exist_omega.txt"), InputError);
}
