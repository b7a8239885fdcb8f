#include "arakelov/quadrature.hpp"

#include <cmath>

#include "arakelov/exceptions.hpp"

namespace arakelov {

namespace {

struct Panel {
    double a, b, fa, fm, fb, s;
};

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, const Panel& p, double tol,
             int depth, int max_depth) {
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double sl = simpson(p.a, m, p.fa, flm, p.fm);
    const double sr = simpson(m, p.b, p.fm, frm, p.fb);
    const double s2 = sl + sr;
    const double err = (s2 - p.s) / 15.0;
    if (std::abs(err) <= tol || (p.b - p.a) < 1e-300) {
        return s2 + err;
    }
    if (depth >= max_depth) {
        throw QuadratureError("adaptive quadrature failed to converge");
    }
    Panel left{p.a, m, p.fa, flm, p.fm, sl};
    Panel right{m, p.b, p.fm, frm, p.fb, sr};
    return adapt(f, left, 0.5 * tol, depth + 1, max_depth) +
           adapt(f, right, 0.5 * tol, depth + 1, max_depth);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    Panel p{a, b, f(a), f(m), f(b), 0.0};
    p.s = simpson(a, b, p.fa, p.fm, p.fb);
    return adapt(f, p, tol, 0, max_depth);
}

} // namespace arakelov
