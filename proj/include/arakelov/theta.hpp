// Riemann theta series and its translation-invariant norm.
//
// Convention: theta(z, Omega) = sum_{n in Z^g} exp(pi i n^T Omega n
// + 2 pi i n^T z). The norm
//
//   ||theta||(z) = det(Y)^{1/4} exp(-pi y^T Y^{-1} y) |theta(z)|,
//       Y = Im Omega, y = Im z,
//
// is invariant under z -> z + Omega m + n and even in z.
//
// Evaluation folds the Gaussian prefactor into the summand: with
// c = Y^{-1} y each term becomes exp(-pi (n+c)^T Y (n+c) + i phi_n),
// phi_n = pi n^T X n + 2 pi n^T x, so every summand has modulus <= 1 at
// any lift and the sum is recentred at n0 = -round(c). The box radius R
// is chosen so that a Gaussian tail bound in the smallest eigenvalue of
// Y is below the requested tolerance.

#pragma once

#include <complex>

#include "arakelov/surface.hpp"

namespace arakelov {

struct ThetaValue {
    cd value;          // raw series value at the given lift
    double norm;       // ||theta||(z), lift-independent
    double tail_bound; // certified truncation error, <= requested tol
};

// Logarithmic form used by the section-norm machinery: theta = phase *
// exp(log_abs) with |phase| = 1, stable at lifts where the raw value
// would overflow.
struct ThetaLog {
    double log_abs; // -infinity when the series sums to exactly zero
    cd phase;       // unit modulus (1 when log_abs is -infinity)
    double log_norm;
    double tail_bound;
};

// Full evaluation at the lift stored in z. Throws TruncationRadiusError
// when the certified box radius would exceed 200 (badly conditioned Y).
ThetaValue theta_series(const JacobianPoint& z, const PeriodMatrix& pm,
                        double tol = 1e-12);

ThetaLog theta_log(const JacobianPoint& z, const PeriodMatrix& pm,
                   double tol = 1e-12);

double theta_norm(const JacobianPoint& z, const PeriodMatrix& pm,
                  double tol = 1e-12);

double log_theta_norm(const JacobianPoint& z, const PeriodMatrix& pm,
                      double tol = 1e-12);

// Degree-zero convention at genus 1: ||theta||(w + kappa) with kappa the
// lift (1+tau)/2. Vanishes exactly at w = 0 in the Jacobian.
double theta_norm_pic0(cd w, const EllipticSurface& surface, double tol = 1e-12);
double log_theta_norm_pic0(cd w, const EllipticSurface& surface, double tol = 1e-12);

struct CgRho {
    int g = 0;
    double rho = 0.0;
    double value = 0.0;
    int epsilon_g = 0; // 0 for g <= 3, 1 for g >= 4
};

// c_{g,rho} = log((g+2)/2) + (g eps_g / 2) log((g+2)/(pi sqrt 3))
//           + (g (1+rho) / 4) log((1+rho)/(2 rho)).
CgRho c_g_rho(int g, double rho);

struct ThetaBoundReport {
    double log_theta_norm; // -infinity where the norm vanishes
    double threshold;      // -rho H + c_{g,rho}
    double margin;         // log||theta|| - threshold
    double sigma;          // rho * stderr of the H estimate
    bool violation;        // margin > 3 sigma
};

// Checks log||theta||(z) <= -rho H + c_{g,rho} against a Monte Carlo H
// estimate; a violation is declared only beyond 3 standard errors.
ThetaBoundReport check_theta_upper_bound(const JacobianPoint& z, const PeriodMatrix& pm,
                                         double h_mean, double h_stderr, double rho,
                                         double tol = 1e-12);

} // namespace arakelov
