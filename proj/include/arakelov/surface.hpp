// Period matrices, Jacobian points, elliptic surfaces and point
// configurations.
//
// A period matrix Omega is a symmetric g x g complex matrix whose
// imaginary part Y is positive definite; the associated Jacobian is
// C^g / (Z^g + Omega Z^g). Points of the Jacobian are kept as a chosen
// lift z together with characteristic coordinates (a, b) in [0,1)^g with
// z = a + Omega b once reduced. Genus is capped at 6: direct box
// summation of the theta series is exponential in g and the cap keeps a
// worst case evaluation well under a second.

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arakelov/rng.hpp"

namespace arakelov {

using cd = std::complex<double>;

inline constexpr int kMaxGenus = 6;

// Tolerance for deciding that two reduced representatives coincide.
inline constexpr double kPointTolerance = 1e-12;

class PeriodMatrix {
  public:
    // Validates symmetry (exact, as stored), positive definiteness of the
    // imaginary part and the genus range. Throws NotSymmetricError,
    // NotPositiveDefiniteError or UnsupportedGenusError.
    static PeriodMatrix validate(const std::vector<std::vector<cd>>& omega);

    // Genus-1 matrix [tau], Im tau > 0.
    static PeriodMatrix from_tau(cd tau);

    int genus() const { return g_; }
    cd omega(int i, int j) const { return omega_[idx(i, j)]; }
    double re(int i, int j) const { return x_[idx(i, j)]; }
    double im(int i, int j) const { return y_[idx(i, j)]; }
    double y_inverse(int i, int j) const { return y_inv_[idx(i, j)]; }
    double min_eigenvalue() const { return min_eig_; }
    double log_det_y() const { return log_det_y_; }

    // Shortest nonzero lattice vector length (searched over small
    // coefficients; exact for period matrices near the reduced domain).
    double systole() const;

  private:
    size_t idx(int i, int j) const { return static_cast<size_t>(i) * g_ + j; }

    int g_ = 0;
    std::array<cd, kMaxGenus * kMaxGenus> omega_{};
    std::array<double, kMaxGenus * kMaxGenus> x_{};
    std::array<double, kMaxGenus * kMaxGenus> y_{};
    std::array<double, kMaxGenus * kMaxGenus> y_inv_{};
    double min_eig_ = 0.0;
    double log_det_y_ = 0.0;
};

struct JacobianPoint {
    std::vector<cd> z;     // chosen lift
    bool reduced = false;  // set once characteristics are canonical
    std::vector<double> a; // z = a + Omega b with a, b in [0,1)^g when reduced
    std::vector<double> b;

    JacobianPoint() = default;
    explicit JacobianPoint(std::vector<cd> lift) : z(std::move(lift)) {}
    static JacobianPoint scalar(cd z1) { return JacobianPoint(std::vector<cd>{z1}); }
};

struct ReductionResult {
    JacobianPoint point;
    std::vector<long long> m; // z = point.z + Omega m + n
    std::vector<long long> n;
};

// Canonical representative with characteristics in [0,1)^g. Idempotent:
// an already reduced point is returned unchanged, bit for bit.
JacobianPoint reduce(const JacobianPoint& z, const PeriodMatrix& pm);

// Same, also reporting the integer lattice coefficients that were removed.
ReductionResult reduce_decompose(const JacobianPoint& z, const PeriodMatrix& pm);

// Equality in the Jacobian: reduced representatives coincide within
// kPointTolerance (per characteristic, with wrap-around at 0 ~ 1).
bool jacobian_equal(const JacobianPoint& p, const JacobianPoint& q,
                    const PeriodMatrix& pm, double tol = kPointTolerance);

// Uniform sample of the Jacobian: a, b uniform in [0,1)^g, z = a + Omega b.
// This realizes the normalized invariant volume (the Haar measure).
JacobianPoint uniform_jacobian_sample(const PeriodMatrix& pm, SeededSampler& sampler);

// Genus-1 surface C / (Z + tau Z).
class EllipticSurface {
  public:
    explicit EllipticSurface(cd tau);

    cd tau() const { return tau_; }
    const PeriodMatrix& period_matrix() const { return pm_; }
    // Lift of the theta characteristic: the unique zero of the theta norm.
    cd kappa() const { return 0.5 * (1.0 + tau_); }
    // Density of the canonical (probability) measure with respect to
    // Lebesgue dx dy on the fundamental domain.
    double mu_density() const { return 1.0 / tau_.imag(); }

    // Reduced representative of w in the fundamental domain {a + tau b}.
    cd reduce_point(cd w) const;
    // Distance from w to the lattice (length of the shortest translate).
    double reduced_distance(cd w) const;
    // Uniform sample with respect to the canonical measure.
    cd sample(SeededSampler& sampler) const;

    // Cached H(X) estimate (mean, stderr); populated by callers that have
    // run the Monte Carlo estimator. The surface itself stays immutable
    // apart from this one write-once slot.
    void cache_hx(double mean, double stderr_value, long samples) const {
        hx_ = Hx{mean, stderr_value, samples};
    }
    bool has_hx() const { return hx_.has_value(); }
    double hx_mean() const { return hx_->mean; }
    double hx_stderr() const { return hx_->stderr_value; }

  private:
    struct Hx {
        double mean;
        double stderr_value;
        long samples;
    };

    cd tau_;
    PeriodMatrix pm_;
    mutable std::optional<Hx> hx_;
};

// Ordered list of pairwise distinct surface points (complex lifts).
class PointConfiguration {
  public:
    PointConfiguration(std::vector<cd> points, const EllipticSurface& surface);

    const std::vector<cd>& points() const { return points_; }
    int size() const { return static_cast<int>(points_.size()); }

  private:
    std::vector<cd> points_;
};

// Reads the period matrix file format: line 1 holds g, then g lines of g
// complex entries ("a+bi" literals separated by whitespace). Throws
// InputError with the offending line number on malformed input.
PeriodMatrix read_period_matrix_file(const std::string& path);

} // namespace arakelov
