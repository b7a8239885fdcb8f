#include "arakelov/surface.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "arakelov/complexio.hpp"
#include "arakelov/exceptions.hpp"
#include "arakelov/linalg.hpp"

namespace arakelov {

PeriodMatrix PeriodMatrix::validate(const std::vector<std::vector<cd>>& omega) {
    const int g = static_cast<int>(omega.size());
    if (g < 1 || g > kMaxGenus) {
        throw UnsupportedGenusError("genus must be between 1 and " +
                                    std::to_string(kMaxGenus) + ", got " +
                                    std::to_string(g));
    }
    for (const auto& row : omega) {
        if (static_cast<int>(row.size()) != g) {
            throw InputError("period matrix is not square");
        }
    }
    for (int i = 0; i < g; ++i) {
        for (int j = i + 1; j < g; ++j) {
            if (!(omega[i][j] == omega[j][i])) {
                throw NotSymmetricError("period matrix entry (" + std::to_string(i) +
                                        "," + std::to_string(j) +
                                        ") differs from its transpose");
            }
        }
    }

    PeriodMatrix pm;
    pm.g_ = g;
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            pm.omega_[pm.idx(i, j)] = omega[i][j];
            pm.x_[pm.idx(i, j)] = omega[i][j].real();
            pm.y_[pm.idx(i, j)] = omega[i][j].imag();
        }
    }
    pm.min_eig_ = min_symmetric_eigenvalue(pm.y_.data(), g, g);
    if (!(pm.min_eig_ > 0.0)) {
        throw NotPositiveDefiniteError(
            "imaginary part of the period matrix is not positive definite "
            "(min eigenvalue " +
            format_double(pm.min_eig_) + ")");
    }
    double yinv[kMaxGenus * kMaxGenus];
    if (!spd_inverse(pm.y_.data(), g, g, yinv, &pm.log_det_y_)) {
        throw NotPositiveDefiniteError("Cholesky factorization of Im(Omega) failed");
    }
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) pm.y_inv_[pm.idx(i, j)] = yinv[i * g + j];
    return pm;
}

PeriodMatrix PeriodMatrix::from_tau(cd tau) {
    return validate({{tau}});
}

double PeriodMatrix::systole() const {
    // Lattice Z^g + Omega Z^g in C^g; length of v = n + Omega m. For each
    // m in [-3, 3]^g the minimizing n sits near -round(Re(Omega m)), so
    // recentring the n scan keeps the search valid for period matrices
    // with large real parts.
    const int range = 3;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> m(static_cast<size_t>(g_), -range);
    for (;;) {
        std::vector<cd> om(static_cast<size_t>(g_));
        std::vector<long long> n0(static_cast<size_t>(g_));
        bool m_zero = true;
        for (int i = 0; i < g_; ++i) {
            cd v(0.0, 0.0);
            for (int j = 0; j < g_; ++j) {
                v += omega(i, j) * static_cast<double>(m[static_cast<size_t>(j)]);
            }
            om[static_cast<size_t>(i)] = v;
            n0[static_cast<size_t>(i)] = static_cast<long long>(-std::round(v.real()));
            if (m[static_cast<size_t>(i)] != 0) m_zero = false;
        }
        std::vector<int> delta(static_cast<size_t>(g_), -1);
        for (;;) {
            double norm2 = 0.0;
            bool v_zero = m_zero;
            for (int i = 0; i < g_; ++i) {
                const double ni = static_cast<double>(n0[static_cast<size_t>(i)] +
                                                      delta[static_cast<size_t>(i)]);
                if (v_zero && ni != 0.0) v_zero = false;
                norm2 += std::norm(om[static_cast<size_t>(i)] + ni);
            }
            if (!v_zero) best = std::min(best, std::sqrt(norm2));
            int pos = 0;
            while (pos < g_ && ++delta[static_cast<size_t>(pos)] > 1) {
                delta[static_cast<size_t>(pos)] = -1;
                ++pos;
            }
            if (pos == g_) break;
        }
        int pos = 0;
        while (pos < g_ && ++m[static_cast<size_t>(pos)] > range) {
            m[static_cast<size_t>(pos)] = -range;
            ++pos;
        }
        if (pos == g_) break;
    }
    return best;
}

ReductionResult reduce_decompose(const JacobianPoint& z, const PeriodMatrix& pm) {
    const int g = pm.genus();
    if (static_cast<int>(z.z.size()) != g) {
        throw InputError("point dimension does not match genus");
    }
    if (z.reduced) {
        return ReductionResult{z, std::vector<long long>(g, 0), std::vector<long long>(g, 0)};
    }
    // b = Y^{-1} Im z;  a = Re z - X b.
    std::vector<double> b(g, 0.0), a(g, 0.0);
    for (int i = 0; i < g; ++i) {
        double s = 0.0;
        for (int j = 0; j < g; ++j) s += pm.y_inverse(i, j) * z.z[j].imag();
        b[i] = s;
    }
    for (int i = 0; i < g; ++i) {
        double s = z.z[i].real();
        for (int j = 0; j < g; ++j) s -= pm.re(i, j) * b[j];
        a[i] = s;
    }
    ReductionResult out;
    out.m.resize(g);
    out.n.resize(g);
    std::vector<double> af(g), bf(g);
    // Characteristics within 1e-13 of the seam snap to 0: solving for b
    // through Y^{-1} carries ulp-level noise, and exact lattice points
    // must land on the origin rather than at 1 - epsilon.
    const auto frac_snapped = [](double v, long long& integer_part) {
        double f = std::floor(v);
        integer_part = static_cast<long long>(f);
        double frac = v - f;
        if (frac >= 1.0 - 1e-13) {
            frac = 0.0;
            integer_part += 1;
        } else if (frac < 1e-13) {
            frac = 0.0;
        }
        return frac;
    };
    for (int i = 0; i < g; ++i) {
        bf[i] = frac_snapped(b[i], out.m[i]);
        af[i] = frac_snapped(a[i], out.n[i]);
    }
    JacobianPoint red;
    red.z.resize(g);
    for (int i = 0; i < g; ++i) {
        cd v = cd(af[i], 0.0);
        for (int j = 0; j < g; ++j) v += pm.omega(i, j) * bf[j];
        red.z[i] = v;
    }
    red.reduced = true;
    red.a = std::move(af);
    red.b = std::move(bf);
    out.point = std::move(red);
    return out;
}

JacobianPoint reduce(const JacobianPoint& z, const PeriodMatrix& pm) {
    if (z.reduced) return z;
    return reduce_decompose(z, pm).point;
}

namespace {

// Distance of two characteristics on the circle R/Z.
double circle_distance(double u, double v) {
    double d = u - v;
    d -= std::round(d);
    return std::abs(d);
}

} // namespace

bool jacobian_equal(const JacobianPoint& p, const JacobianPoint& q,
                    const PeriodMatrix& pm, double tol) {
    JacobianPoint rp = reduce(p, pm);
    JacobianPoint rq = reduce(q, pm);
    for (int i = 0; i < pm.genus(); ++i) {
        if (circle_distance(rp.a[i], rq.a[i]) > tol) return false;
        if (circle_distance(rp.b[i], rq.b[i]) > tol) return false;
    }
    return true;
}

JacobianPoint uniform_jacobian_sample(const PeriodMatrix& pm, SeededSampler& sampler) {
    const int g = pm.genus();
    JacobianPoint p;
    p.a.resize(g);
    p.b.resize(g);
    p.z.resize(g);
    for (int i = 0; i < g; ++i) p.a[i] = sampler.next_unit();
    for (int i = 0; i < g; ++i) p.b[i] = sampler.next_unit();
    for (int i = 0; i < g; ++i) {
        cd v = cd(p.a[i], 0.0);
        for (int j = 0; j < g; ++j) v += pm.omega(i, j) * p.b[j];
        p.z[i] = v;
    }
    p.reduced = true;
    return p;
}

EllipticSurface::EllipticSurface(cd tau)
    : tau_(tau), pm_(PeriodMatrix::from_tau(tau)) {}

cd EllipticSurface::reduce_point(cd w) const {
    JacobianPoint r = reduce(JacobianPoint::scalar(w), pm_);
    return r.z[0];
}

double EllipticSurface::reduced_distance(cd w) const {
    cd r = reduce_point(w);
    double best = std::numeric_limits<double>::infinity();
    for (int m = -1; m <= 1; ++m) {
        for (int n = -1; n <= 1; ++n) {
            best = std::min(best, std::abs(r - (cd(n, 0) + tau_ * static_cast<double>(m))));
        }
    }
    return best;
}

cd EllipticSurface::sample(SeededSampler& sampler) const {
    const double a = sampler.next_unit();
    const double b = sampler.next_unit();
    return cd(a, 0.0) + tau_ * b;
}

PointConfiguration::PointConfiguration(std::vector<cd> points,
                                       const EllipticSurface& surface)
    : points_(std::move(points)) {
    for (size_t i = 0; i < points_.size(); ++i) {
        for (size_t j = i + 1; j < points_.size(); ++j) {
            if (surface.reduced_distance(points_[i] - points_[j]) <= kPointTolerance) {
                throw CoincidentPointsError("configuration points " + std::to_string(i) +
                                            " and " + std::to_string(j) + " coincide");
            }
        }
    }
}

PeriodMatrix read_period_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open period matrix file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) {
        throw InputError(path + ":1: expected genus on the first line");
    }
    int g = 0;
    try {
        g = std::stoi(line);
    } catch (const std::exception&) {
        throw InputError(path + ":1: expected an integer genus, got '" + line + "'");
    }
    if (g < 1 || g > kMaxGenus) {
        throw UnsupportedGenusError(path + ":1: genus must be between 1 and " +
                                    std::to_string(kMaxGenus));
    }
    std::vector<std::vector<cd>> rows;
    for (int i = 0; i < g; ++i) {
        if (!std::getline(in, line)) {
            throw InputError(path + ":" + std::to_string(i + 2) +
                             ": missing matrix row " + std::to_string(i + 1));
        }
        std::istringstream ss(line);
        std::vector<cd> row;
        std::string tok;
        while (ss >> tok) {
            try {
                row.push_back(parse_complex(tok));
            } catch (const InputError& e) {
                throw InputError(path + ":" + std::to_string(i + 2) + ": " + e.what());
            }
        }
        if (static_cast<int>(row.size()) != g) {
            throw InputError(path + ":" + std::to_string(i + 2) + ": expected " +
                             std::to_string(g) + " entries, got " +
                             std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    return PeriodMatrix::validate(rows);
}

} // namespace arakelov
