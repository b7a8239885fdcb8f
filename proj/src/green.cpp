#include "arakelov/green.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "arakelov/complexio.hpp"
#include "arakelov/exceptions.hpp"

namespace arakelov {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

// log|1 - exp(2 pi i w)| for Im w >= 0.
double log_abs_one_minus_exp(cd w) {
    const cd e = std::exp(cd(0.0, kTwoPi) * w);
    return 0.5 * std::log(std::norm(cd(1.0, 0.0) - e));
}

// Midpoint-rule mean of log||theta||_pic0 over the unit square of
// characteristics, with the two corner log singularities subtracted by
// comparison functions of exactly zero mean:
//   s1(a,b) = log|1 - e^{2 pi i (a + tau b)}|       (corners at b = 0)
//   s2(a,b) = log|1 - e^{-2 pi i (a + tau (b-1))}|  (corners at b = 1)
// Each has zero integral over the square by the mean value property of
// log|1 - c e^{i t}| for |c| < 1, so subtracting them changes nothing
// except to make the integrand bounded.
double torus_mean_once(const EllipticSurface& surface, int n_grid) {
    const cd tau = surface.tau();
    double sum = 0.0;
    for (int j = 0; j < n_grid; ++j) {
        const double b = (j + 0.5) / n_grid;
        double row = 0.0;
        for (int i = 0; i < n_grid; ++i) {
            const double a = (i + 0.5) / n_grid;
            const cd w = cd(a, 0.0) + tau * b;
            double v = log_theta_norm_pic0(w, surface);
            v -= log_abs_one_minus_exp(w);
            v -= log_abs_one_minus_exp(-(w - tau));
            row += v;
        }
        sum += row;
    }
    return sum / (static_cast<double>(n_grid) * n_grid);
}

// Richardson extrapolation of the midpoint grid (the subtracted integrand
// is smooth inside the square but keeps a derivative kink across the
// periodic seam, giving an h^2 leading error term).
double torus_mean(const EllipticSurface& surface) {
    const double coarse = torus_mean_once(surface, 512);
    const double fine = torus_mean_once(surface, 1024);
    return (4.0 * fine - coarse) / 3.0;
}

// Normalization constants are deterministic per tau; memoize across
// GreenFunction instances (tests and the CLI construct many).
double cached_torus_mean(const EllipticSurface& surface) {
    static std::mutex mutex;
    static std::map<std::pair<double, double>, double> cache;
    const std::pair<double, double> key{surface.tau().real(), surface.tau().imag()};
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const double value = torus_mean(surface);
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(key, value);
    return value;
}

} // namespace

GreenFunction::GreenFunction(const EllipticSurface& surface)
    : surface_(surface), c_(cached_torus_mean(surface)) {}

double GreenFunction::g_of_difference(cd w) const {
    if (surface_.reduced_distance(w) <= kPointTolerance) {
        throw CoincidentPointsError("Green function evaluated on the diagonal");
    }
    // Canonical representative shared by w and -w, so that g(x,y) and
    // g(y,x) run the exact same theta evaluation.
    const cd r1 = surface_.reduce_point(w);
    const cd r2 = surface_.reduce_point(-w);
    const cd canon =
        (r1.real() < r2.real() || (r1.real() == r2.real() && r1.imag() <= r2.imag()))
            ? r1
            : r2;
    return log_theta_norm_pic0(canon, surface_) - c_;
}

double GreenFunction::g(cd x, cd y) const { return g_of_difference(x - y); }

double GreenFunction::green_value(cd x, cd y) const { return std::exp(g(x, y)); }

double laplacian_check(const GreenFunction& green, cd x, cd y, double h) {
    if (!(h > 0.0)) throw InvalidInputsError("finite-difference step must be positive");
    if (green.surface().reduced_distance(x - y) <= 10.0 * h) {
        throw TooCloseToSingularityError(
            "Laplacian probe requires distance to the singularity > 10 h");
    }
    const double center = green.g(x, y);
    const double sum = green.g(x + cd(h, 0.0), y) + green.g(x - cd(h, 0.0), y) +
                       green.g(x + cd(0.0, h), y) + green.g(x - cd(0.0, h), y);
    return (sum - 4.0 * center) / (h * h);
}

namespace {

// Covering radius of the candidate center grid, measured on a dense
// sample of the fundamental domain, plus the sample spacing so the
// result upper-bounds the true covering radius.
double covering_radius_bound(const EllipticSurface& surface,
                             const std::vector<cd>& centers, int density) {
    const cd tau = surface.tau();
    double worst = 0.0;
    for (int s = 0; s < density; ++s) {
        for (int t = 0; t < density; ++t) {
            const cd w = cd((s + 0.5) / density, 0.0) + tau * ((t + 0.5) / density);
            double best = std::numeric_limits<double>::infinity();
            for (const cd& c : centers) {
                best = std::min(best, surface.reduced_distance(w - c));
                if (best == 0.0) break;
            }
            worst = std::max(worst, best);
        }
    }
    const double diag =
        std::max(std::abs(cd(1.0, 0.0) + tau), std::abs(cd(1.0, 0.0) - tau));
    return worst + 0.5 * diag / density;
}

std::vector<cd> grid_centers(const EllipticSurface& surface, int p, int q,
                             bool stagger) {
    std::vector<cd> centers;
    centers.reserve(static_cast<size_t>(p) * q);
    const cd tau = surface.tau();
    for (int j = 0; j < q; ++j) {
        for (int i = 0; i < p; ++i) {
            double a = (i + (stagger && (j % 2 == 1) ? 0.5 : 0.0)) / p;
            a -= std::floor(a);
            centers.push_back(cd(a, 0.0) + tau * (static_cast<double>(j) / q));
        }
    }
    return centers;
}

} // namespace

double estimate_c0(const TorusChartAtlas& atlas, const GreenFunction& green, int d) {
    if (d < 50) throw InvalidInputsError("C0 grid needs at least 50 points per diameter");
    const double r2 = atlas.r2;
    const double step = 2.0 * r2 / (d - 1);
    double sup = 0.0;
    // Differences of the d x d chart grid form a (2d-1)^2 grid; both the
    // chart log-distance and g depend on the difference only, so this is
    // the exact pair sup over the grid. Every difference below 2 r2 is
    // realized by a pair inside the open chart disc.
    const double limit = 2.0 * r2 * (1.0 - 1e-12);
    for (int s = -(d - 1); s <= d - 1; ++s) {
        for (int t = -(d - 1); t <= d - 1; ++t) {
            if (s == 0 && t == 0) continue;
            const cd w(s * step, t * step);
            const double mod = std::abs(w);
            if (mod >= limit) continue;
            const double f = std::abs(std::log(mod) - green.g_of_difference(w));
            sup = std::max(sup, f);
        }
    }
    // Coincident pairs: the singularities cancel in the limit; probe the
    // continuous extension on a small ring.
    const double eps = 1e-6;
    for (int k = 0; k < 8; ++k) {
        const double ang = 2.0 * kPi * k / 8.0;
        const cd w = eps * cd(std::cos(ang), std::sin(ang));
        const double f = std::abs(std::log(std::abs(w)) - green.g_of_difference(w));
        sup = std::max(sup, f);
    }
    return sup * atlas.margin;
}

TorusChartAtlas build_torus_atlas(const GreenFunction& green, int m_hint,
                                  double r1, double r2, int c0_grid) {
    const EllipticSurface& surface = green.surface();
    if (!(r1 > 0.0) || !(r2 > r1)) {
        throw InvalidInputsError("atlas radii must satisfy 0 < r1 < r2");
    }
    if (r2 - r1 > 1.0) {
        throw InvalidInputsError("atlas radii must satisfy r2 - r1 <= 1");
    }
    const double sys = surface.period_matrix().systole();
    if (2.0 * r2 >= sys) {
        throw ChartTooLargeError("chart radius r2 exceeds half the injectivity radius (" +
                                 format_double(0.5 * sys) + ")");
    }

    TorusChartAtlas atlas;
    atlas.r1 = r1;
    atlas.r2 = r2;
    atlas.c1 = 1.0 / (2.0 * surface.tau().imag());
    atlas.c2 = atlas.c1;

    // Smallest p x q grid of centers whose radius-r1 discs certifiably
    // cover (at least m_hint charts when a hint is given); staggered rows
    // for non-rectangular lattices.
    const bool stagger = surface.tau().real() != 0.0;
    const int cap = 24;
    bool found = false;
    int best_m = cap * cap + 1;
    std::vector<cd> best_centers;
    for (int p = 1; p <= cap; ++p) {
        for (int q = 1; q <= cap; ++q) {
            const int m = p * q;
            if (m >= best_m || m < m_hint) continue;
            std::vector<cd> centers = grid_centers(surface, p, q, stagger);
            if (covering_radius_bound(surface, centers, 200) <= r1) {
                best_m = m;
                best_centers = std::move(centers);
                found = true;
            }
        }
    }
    if (!found && m_hint > 1) {
        // The hint may be unreachable; fall back to the minimal cover.
        return build_torus_atlas(green, 0, r1, r2, c0_grid);
    }
    if (!found) {
        throw CoverageFailureError("no center grid up to " + std::to_string(cap) + "x" +
                                   std::to_string(cap) +
                                   " covers the surface with discs of radius r1");
    }
    atlas.m = best_m;
    atlas.centers = std::move(best_centers);

    // C0 by grid refinement until two successive densities agree to 1%.
    int d = std::max(50, c0_grid);
    double value = estimate_c0(atlas, green, d);
    for (;;) {
        const int d2 = 2 * d;
        const double refined = estimate_c0(atlas, green, d2);
        const double change = std::abs(refined - value) / std::max(std::abs(refined), 1e-30);
        value = refined;
        d = d2;
        if (change < 0.01) break;
        if (d > 2048) {
            throw Error("C0 grid estimate did not stabilize below 1% by density 2048");
        }
    }
    atlas.c0 = value;
    atlas.c0_grid = d;

    if (atlas.c2 > std::exp(4.0 * atlas.c0) / kTwoPi) {
        throw InvalidInputsError("side condition C2 <= e^{4 C0} / (2 pi) failed");
    }
    return atlas;
}

std::string atlas_to_text(const TorusChartAtlas& atlas) {
    std::ostringstream out;
    out << "m = " << atlas.m << "\n";
    out << "r1 = " << format_double(atlas.r1) << "\n";
    out << "r2 = " << format_double(atlas.r2) << "\n";
    out << "C0 = " << format_double(atlas.c0) << "\n";
    out << "C1 = " << format_double(atlas.c1) << "\n";
    out << "C2 = " << format_double(atlas.c2) << "\n";
    out << "M = " << format_double(TorusChartAtlas::chart_ratio_bound()) << "\n";
    out << "margin = " << format_double(atlas.margin) << "\n";
    out << "c0_grid = " << atlas.c0_grid << "\n";
    for (size_t i = 0; i < atlas.centers.size(); ++i) {
        out << "center_" << i << " = " << format_complex(atlas.centers[i]) << "\n";
    }
    return out.str();
}

TorusChartAtlas read_atlas_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open atlas file '" + path + "'");
    TorusChartAtlas atlas;
    std::map<int, cd> centers;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
        };
        trim(key);
        trim(value);
        if (key.empty()) continue;
        try {
            if (key == "m") atlas.m = std::stoi(value);
            else if (key == "r1") atlas.r1 = std::stod(value);
            else if (key == "r2") atlas.r2 = std::stod(value);
            else if (key == "C0") atlas.c0 = std::stod(value);
            else if (key == "C1") atlas.c1 = std::stod(value);
            else if (key == "C2") atlas.c2 = std::stod(value);
            else if (key == "margin") atlas.margin = std::stod(value);
            else if (key == "c0_grid") atlas.c0_grid = std::stoi(value);
            else if (key.rfind("center_", 0) == 0) {
                centers[std::stoi(key.substr(7))] = parse_complex(value);
            }
        } catch (const std::exception& e) {
            throw InputError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    for (auto& [idx, c] : centers) atlas.centers.push_back(c);
    if (atlas.m == 0 || atlas.r1 <= 0.0 || atlas.r2 <= atlas.r1) {
        throw InputError(path + ": incomplete atlas (need m, r1, r2)");
    }
    return atlas;
}

} // namespace arakelov
