#include "arakelov/theta.hpp"

#include <cmath>
#include <limits>

#include "arakelov/exceptions.hpp"

namespace arakelov {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kMaxRadius = 200;

double inf() { return std::numeric_limits<double>::infinity(); }

// Number of lattice points on the sup-norm sphere |k|_inf = s in Z^g.
double shell_count(int s, int g) {
    if (s == 0) return 1.0;
    return std::pow(2.0 * s + 1.0, g) - std::pow(2.0 * s - 1.0, g);
}

// Upper bound on sum over |k|_inf > R of exp(-pi lam |k - delta|^2) with
// |delta|_inf <= 1/2: on the shell |k|_inf = s the exponent is at least
// pi lam (s - 1/2)^2.
double gaussian_tail(int radius, double lam, int g) {
    double total = 0.0;
    for (int s = radius + 1; s <= radius + 4000; ++s) {
        const double d = s - 0.5;
        const double term = shell_count(s, g) * std::exp(-kPi * lam * d * d);
        total += term;
        if (term < 1e-320) break;
    }
    return total;
}

struct Prepared {
    int g;
    double c[kMaxGenus];      // Y^{-1} y
    double y_quad;            // y^T Y^{-1} y
    long long n0[kMaxGenus];  // recentring offset
    int radius;
    double tail; // prefactor-weighted certified tail
};

Prepared prepare(const JacobianPoint& z, const PeriodMatrix& pm, double tol) {
    if (!(tol > 0.0)) throw InvalidInputsError("theta tolerance must be positive");
    const int g = pm.genus();
    if (static_cast<int>(z.z.size()) != g) {
        throw InputError("point dimension does not match genus");
    }
    Prepared p;
    p.g = g;
    p.y_quad = 0.0;
    for (int i = 0; i < g; ++i) {
        double s = 0.0;
        for (int j = 0; j < g; ++j) s += pm.y_inverse(i, j) * z.z[j].imag();
        p.c[i] = s;
        p.y_quad += s * z.z[i].imag();
    }
    for (int i = 0; i < g; ++i) p.n0[i] = static_cast<long long>(-std::round(p.c[i]));

    // The same radius certifies the raw value (prefactor e^{pi y_quad})
    // and the norm (prefactor det(Y)^{1/4}); the comparison runs in log
    // scale so extreme lifts cannot overflow the prefactor.
    const double log_prefactor =
        std::max(kPi * p.y_quad, 0.25 * pm.log_det_y()) + std::log(2.0);
    const double lam = pm.min_eigenvalue();
    int radius = -1;
    for (int r = 0; r <= kMaxRadius; ++r) {
        const double tail = gaussian_tail(r, lam, g);
        const double log_tail =
            tail > 0.0 ? std::log(tail) + log_prefactor
                       : -std::numeric_limits<double>::infinity();
        if (log_tail <= std::log(tol)) {
            radius = r;
            p.tail = std::exp(log_tail);
            break;
        }
    }
    if (radius < 0) {
        throw TruncationRadiusError(
            "theta truncation radius would exceed 200; Im(Omega) is badly "
            "conditioned, rescale the inputs");
    }
    p.radius = radius;
    return p;
}

// Sum over the box |k|_inf <= radius around n0 of
// exp(-pi u^T Y u + i phi), u = n + c, phi = pi n^T X n + 2 pi n^T x.
cd normed_sum(const Prepared& p, const JacobianPoint& z, const PeriodMatrix& pm) {
    const int g = p.g;
    const int r = p.radius;
    long long n[kMaxGenus];
    int k[kMaxGenus];
    for (int i = 0; i < g; ++i) k[i] = -r;

    double sum_re = 0.0, sum_im = 0.0;
    while (true) {
        for (int i = 0; i < g; ++i) n[i] = p.n0[i] + k[i];
        double quad = 0.0;  // u^T Y u
        double phase = 0.0; // pi n^T X n + 2 pi n^T x
        for (int i = 0; i < g; ++i) {
            const double ui = static_cast<double>(n[i]) + p.c[i];
            double yu = 0.0;
            double xn = 0.0;
            for (int j = 0; j < g; ++j) {
                yu += pm.im(i, j) * (static_cast<double>(n[j]) + p.c[j]);
                xn += pm.re(i, j) * static_cast<double>(n[j]);
            }
            quad += ui * yu;
            phase += static_cast<double>(n[i]) * (kPi * xn + 2.0 * kPi * z.z[i].real());
        }
        const double mag = std::exp(-kPi * quad);
        sum_re += mag * std::cos(phase);
        sum_im += mag * std::sin(phase);

        int pos = 0;
        while (pos < g && ++k[pos] > r) {
            k[pos] = -r;
            ++pos;
        }
        if (pos == g) break;
    }
    return cd(sum_re, sum_im);
}

} // namespace

ThetaValue theta_series(const JacobianPoint& z, const PeriodMatrix& pm, double tol) {
    const Prepared p = prepare(z, pm, tol);
    const cd s = normed_sum(p, z, pm);
    ThetaValue out;
    out.value = std::exp(kPi * p.y_quad) * s;
    out.norm = std::exp(0.25 * pm.log_det_y()) * std::abs(s);
    out.tail_bound = p.tail;
    return out;
}

ThetaLog theta_log(const JacobianPoint& z, const PeriodMatrix& pm, double tol) {
    const Prepared p = prepare(z, pm, tol);
    const cd s = normed_sum(p, z, pm);
    ThetaLog out;
    const double mag = std::abs(s);
    if (mag == 0.0) {
        out.log_abs = -inf();
        out.phase = cd(1.0, 0.0);
        out.log_norm = -inf();
    } else {
        out.log_abs = kPi * p.y_quad + std::log(mag);
        out.phase = s / mag;
        out.log_norm = 0.25 * pm.log_det_y() + std::log(mag);
    }
    out.tail_bound = p.tail;
    return out;
}

double theta_norm(const JacobianPoint& z, const PeriodMatrix& pm, double tol) {
    const Prepared p = prepare(z, pm, tol);
    return std::exp(0.25 * pm.log_det_y()) * std::abs(normed_sum(p, z, pm));
}

double log_theta_norm(const JacobianPoint& z, const PeriodMatrix& pm, double tol) {
    const Prepared p = prepare(z, pm, tol);
    const double mag = std::abs(normed_sum(p, z, pm));
    if (mag == 0.0) return -inf();
    return 0.25 * pm.log_det_y() + std::log(mag);
}

double theta_norm_pic0(cd w, const EllipticSurface& surface, double tol) {
    return theta_norm(JacobianPoint::scalar(w + surface.kappa()),
                      surface.period_matrix(), tol);
}

double log_theta_norm_pic0(cd w, const EllipticSurface& surface, double tol) {
    return log_theta_norm(JacobianPoint::scalar(w + surface.kappa()),
                          surface.period_matrix(), tol);
}

CgRho c_g_rho(int g, double rho) {
    if (g < 1) throw InvalidInputsError("c_{g,rho} requires g >= 1");
    if (!(rho > 0.0)) throw InvalidInputsError("c_{g,rho} requires rho > 0");
    CgRho out;
    out.g = g;
    out.rho = rho;
    out.epsilon_g = g <= 3 ? 0 : 1;
    const double gd = static_cast<double>(g);
    double v = std::log((gd + 2.0) / 2.0);
    if (out.epsilon_g == 1) {
        v += 0.5 * gd * std::log((gd + 2.0) / (kPi * std::sqrt(3.0)));
    }
    v += 0.25 * gd * (1.0 + rho) * std::log((1.0 + rho) / (2.0 * rho));
    out.value = v;
    return out;
}

ThetaBoundReport check_theta_upper_bound(const JacobianPoint& z, const PeriodMatrix& pm,
                                         double h_mean, double h_stderr, double rho,
                                         double tol) {
    ThetaBoundReport r;
    r.log_theta_norm = log_theta_norm(z, pm, tol);
    r.threshold = -rho * h_mean + c_g_rho(pm.genus(), rho).value;
    r.margin = r.log_theta_norm - r.threshold;
    r.sigma = rho * h_stderr;
    r.violation = r.margin > 3.0 * r.sigma;
    return r;
}

} // namespace arakelov
