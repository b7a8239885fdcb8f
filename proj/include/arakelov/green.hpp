// The canonical Green function of an elliptic curve, and disc-chart
// atlases with the quantitative constants consumed by the energy bound.
//
// On X = C/(Z + tau Z) two admissible metrics differ by a constant, so
// g(x, y) = log||theta||_pic0(x - y) - c(tau), with c(tau) pinned by the
// mean-zero normalization of g against the canonical measure. c(tau) is
// computed by direct quadrature of log||theta||_pic0 over the torus;
// independently, c(tau) equals the Jacobian average of log||theta||, so
// the Monte Carlo estimator of that average cross-checks the whole theta
// stack (the two must agree within sampling error).

#pragma once

#include <vector>

#include "arakelov/surface.hpp"
#include "arakelov/theta.hpp"

namespace arakelov {

class GreenFunction {
  public:
    explicit GreenFunction(const EllipticSurface& surface);

    const EllipticSurface& surface() const { return surface_; }

    // Normalization constant: the torus mean of log||theta||_pic0.
    double normalization() const { return c_; }

    // g(x, y); symmetric bit-for-bit, translation invariant, mean zero.
    // Throws CoincidentPointsError when x and y coincide on the torus.
    double g(cd x, cd y) const;

    // Same as g(x, 0) without reconstructing the difference.
    double g_of_difference(cd w) const;

    double green_value(cd x, cd y) const; // G = exp(g)

  private:
    EllipticSurface surface_;
    double c_;
};

// Five-point finite-difference Laplacian of g(., y) at x in the real
// coordinates of the w-plane. Away from the singularity this is
// constant, equal to -2 pi / Im tau (sign fixed empirically once and
// asserted by the tests). Requires the reduced distance from x to y to
// exceed 10 h.
double laplacian_check(const GreenFunction& green, cd x, cd y, double h);

// Disc-chart atlas of the torus: m centers whose radius-r1 discs cover,
// charts z_j(w) = w - c_j onto the disc of radius r2 (so the chart
// derivative ratio bound M is exactly 1), with form-comparison constants
// C1 = C2 = 1/(2 Im tau) (exact for the flat metric) and the sup constant
//
//   C0 = sup_j sup_{P != Q in U_j} | log|z_j(P) - z_j(Q)| - g(P, Q) |
//
// estimated on a refined difference grid times a 1.05 safety margin
// (a numerical sup-estimate, not a certified bound).
struct TorusChartAtlas {
    int m = 0;
    std::vector<cd> centers;
    double r1 = 0.0;
    double r2 = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double margin = 1.05;  // safety factor applied to the C0 grid sup
    int c0_grid = 0;       // grid density at which the C0 estimate stabilized

    static double chart_ratio_bound() { return 1.0; } // M for translation charts
};

// Builds the covering grid (square for rectangular lattices, staggered
// otherwise), verifies coverage on a dense grid, and estimates C0.
// m_hint of 0 asks for the minimal covering grid. Throws
// ChartTooLargeError when the radius-r2 disc does not embed,
// CoverageFailureError when no grid up to the search cap covers, and
// InvalidInputsError for parameter violations (including the side
// condition C2 <= e^{4 C0} / (2 pi)).
TorusChartAtlas build_torus_atlas(const GreenFunction& green, int m_hint,
                                  double r1, double r2, int c0_grid = 64);

// Grid sup-estimate of C0 at density d (>= 50): the pair sup over each
// chart reduces to a sup over chart-coordinate differences because both
// |z_j(P) - z_j(Q)| and g depend on P - Q only; near-diagonal pairs are
// probed at offset 1e-6 where the log singularities cancel. Returns the
// sup times the 1.05 margin.
double estimate_c0(const TorusChartAtlas& atlas, const GreenFunction& green, int d);

// Key-value serialization of an atlas (round-trips through
// read_atlas_file).
std::string atlas_to_text(const TorusChartAtlas& atlas);
TorusChartAtlas read_atlas_file(const std::string& path);

} // namespace arakelov
