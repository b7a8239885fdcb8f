#include "arakelov/fay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arakelov/exceptions.hpp"
#include "arakelov/theta.hpp"

namespace arakelov {

namespace {

double inf() { return std::numeric_limits<double>::infinity(); }

// Raw shifted theta th(w) = theta(w + kappa) in log form; the lift of w
// matters and is used exactly as given (quasi-periodicity is part of the
// rank-one weight).
ThetaLog shifted_theta_log(const EllipticSurface& s, cd w) {
    return theta_log(JacobianPoint::scalar(w + s.kappa()), s.period_matrix());
}

} // namespace

SectionSystem::SectionSystem(const EllipticSurface& surface, cd l_class,
                             std::vector<cd> ys)
    : green_(surface), l_(surface.reduce_point(l_class)) {
    if (ys.empty()) throw InvalidInputsError("section system needs n >= 1 points");
    ys_.reserve(ys.size());
    for (cd y : ys) ys_.push_back(surface.reduce_point(y));
    const double theta_l = theta_norm_pic0(l_, surface);
    if (!(theta_l > kTransversalityFloor)) {
        throw InvalidInputsError(
            "section system requires ||theta||_pic0(L) > 1e-6 (H^0 = 0); got " +
            std::to_string(theta_l));
    }
    for (size_t i = 0; i < ys_.size(); ++i) {
        for (size_t j = i + 1; j < ys_.size(); ++j) {
            if (surface.reduced_distance(ys_[i] - ys_[j]) <= kTransversalityFloor) {
                throw InvalidInputsError("section system points y_" + std::to_string(i) +
                                         " and y_" + std::to_string(j) +
                                         " are closer than 1e-6");
            }
        }
    }
}

double log_section_norm(const SectionSystem& sys, int j, cd x) {
    const EllipticSurface& s = sys.surface();
    if (j < 0 || j >= sys.n()) throw InvalidInputsError("section index out of range");
    const cd xr = s.reduce_point(x);
    double total = log_theta_norm_pic0(sys.l_class() + sys.ys()[static_cast<size_t>(j)] - xr, s);
    for (int k = 0; k < sys.n(); ++k) {
        if (k == j) continue;
        const cd yk = sys.ys()[static_cast<size_t>(k)];
        if (s.reduced_distance(yk - xr) <= kPointTolerance) {
            return -inf(); // pole collision: a Green factor vanishes
        }
        total += sys.green().g(yk, xr);
    }
    return total;
}

double section_norm(const SectionSystem& sys, int j, cd x) {
    const double lg = log_section_norm(sys, j, x);
    return std::isfinite(lg) ? std::exp(lg) : 0.0;
}

NormMatrix build_norm_matrix(const SectionSystem& sys, const std::vector<cd>& xs) {
    const EllipticSurface& s = sys.surface();
    const int n = sys.n();
    if (static_cast<int>(xs.size()) != n) {
        throw InvalidInputsError("norm matrix needs exactly n evaluation points");
    }
    for (size_t i = 0; i < xs.size(); ++i) {
        for (size_t j = i + 1; j < xs.size(); ++j) {
            if (s.reduced_distance(xs[i] - xs[j]) <= kPointTolerance) {
                throw CoincidentPointsError("evaluation points " + std::to_string(i) +
                                            " and " + std::to_string(j) + " coincide");
            }
        }
    }
    std::vector<cd> xr(xs.size());
    for (size_t k = 0; k < xs.size(); ++k) xr[k] = s.reduce_point(xs[k]);

    NormMatrix nm;
    nm.n = n;
    nm.log_w.assign(static_cast<size_t>(n) * n, 0.0);
    nm.log_p.assign(static_cast<size_t>(n) * n, 0.0);
    nm.phase.assign(static_cast<size_t>(n) * n, cd(1.0, 0.0));

    // th(x_k - y_l) factors are shared across rows; evaluate them once.
    std::vector<ThetaLog> cross(static_cast<size_t>(n) * n);
    std::vector<std::vector<bool>> collide(static_cast<size_t>(n),
                                           std::vector<bool>(static_cast<size_t>(n)));
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            const cd diff = xr[static_cast<size_t>(k)] - sys.ys()[static_cast<size_t>(l)];
            collide[static_cast<size_t>(k)][static_cast<size_t>(l)] =
                s.reduced_distance(diff) <= kPointTolerance;
            cross[static_cast<size_t>(k) * n + l] = shifted_theta_log(s, diff);
        }
    }

    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const size_t id = static_cast<size_t>(j) * n + k;
            bool masked = false;
            for (int l = 0; l < n && !masked; ++l) {
                if (l != j && collide[static_cast<size_t>(k)][static_cast<size_t>(l)]) {
                    masked = true;
                }
            }
            if (masked) {
                nm.log_w[id] = -inf();
                nm.log_p[id] = -inf();
                nm.phase[id] = cd(1.0, 0.0);
                continue;
            }
            // Norm entry.
            double lw = log_theta_norm_pic0(
                sys.l_class() + sys.ys()[static_cast<size_t>(j)] - xr[static_cast<size_t>(k)], s);
            for (int l = 0; l < n; ++l) {
                if (l == j) continue;
                lw += sys.green().g(sys.ys()[static_cast<size_t>(l)], xr[static_cast<size_t>(k)]);
            }
            nm.log_w[id] = lw;
            // Holomorphic entry: th(x_k - L - y_j) * prod_{l != j} th(x_k - y_l).
            const ThetaLog head = shifted_theta_log(
                s, xr[static_cast<size_t>(k)] - sys.l_class() - sys.ys()[static_cast<size_t>(j)]);
            double lp = head.log_abs;
            cd ph = head.phase;
            for (int l = 0; l < n; ++l) {
                if (l == j) continue;
                const ThetaLog& f = cross[static_cast<size_t>(k) * n + l];
                lp += f.log_abs;
                ph *= f.phase;
            }
            nm.log_p[id] = lp;
            nm.phase[id] = ph;
        }
    }

    // Rank-one fit of D = log_w - log_p over unmasked entries by
    // alternating row/column means (the least-squares solution).
    std::vector<double> d(static_cast<size_t>(n) * n, 0.0);
    std::vector<bool> ok(static_cast<size_t>(n) * n, false);
    for (size_t id = 0; id < d.size(); ++id) {
        if (std::isfinite(nm.log_w[id]) && std::isfinite(nm.log_p[id])) {
            d[id] = nm.log_w[id] - nm.log_p[id];
            ok[id] = true;
        }
    }
    nm.row_log.assign(static_cast<size_t>(n), 0.0);
    nm.col_log.assign(static_cast<size_t>(n), 0.0);
    for (int pass = 0; pass < 200; ++pass) {
        double shift = 0.0;
        for (int j = 0; j < n; ++j) {
            double sum = 0.0;
            int cnt = 0;
            for (int k = 0; k < n; ++k) {
                const size_t id = static_cast<size_t>(j) * n + k;
                if (!ok[id]) continue;
                sum += d[id] - nm.col_log[static_cast<size_t>(k)];
                ++cnt;
            }
            if (cnt > 0) {
                const double next = sum / cnt;
                shift = std::max(shift, std::abs(next - nm.row_log[static_cast<size_t>(j)]));
                nm.row_log[static_cast<size_t>(j)] = next;
            }
        }
        for (int k = 0; k < n; ++k) {
            double sum = 0.0;
            int cnt = 0;
            for (int j = 0; j < n; ++j) {
                const size_t id = static_cast<size_t>(j) * n + k;
                if (!ok[id]) continue;
                sum += d[id] - nm.row_log[static_cast<size_t>(j)];
                ++cnt;
            }
            if (cnt > 0) {
                const double next = sum / cnt;
                shift = std::max(shift, std::abs(next - nm.col_log[static_cast<size_t>(k)]));
                nm.col_log[static_cast<size_t>(k)] = next;
            }
        }
        if (shift < 1e-15) break;
    }
    double residual = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const size_t id = static_cast<size_t>(j) * n + k;
            if (!ok[id]) continue;
            residual = std::max(residual,
                                std::abs(d[id] - nm.row_log[static_cast<size_t>(j)] -
                                         nm.col_log[static_cast<size_t>(k)]));
        }
    }
    nm.separability_residual = residual;
    if (residual > 1e-6) {
        throw SeparabilityFailureError(
            "rank-one weight factorization residual " + std::to_string(residual) +
            " exceeds 1e-6; the section-norm stack is inconsistent");
    }

    // ||det||: matrix with moduli W and phases of P, rows rescaled by
    // their maxima so the pivoted elimination runs on O(1) entries.
    double log_scale = 0.0;
    ComplexMatrix m(n);
    bool singular_row = false;
    for (int j = 0; j < n; ++j) {
        double row_max = -inf();
        for (int k = 0; k < n; ++k) {
            row_max = std::max(row_max, nm.log_w[static_cast<size_t>(j) * n + k]);
        }
        if (!std::isfinite(row_max)) {
            singular_row = true;
            continue;
        }
        log_scale += row_max;
        for (int k = 0; k < n; ++k) {
            const size_t id = static_cast<size_t>(j) * n + k;
            const double lw = nm.log_w[id];
            m.at(j, k) = std::isfinite(lw) ? nm.phase[id] * std::exp(lw - row_max)
                                           : cd(0.0, 0.0);
        }
    }
    nm.log_det = singular_row ? -inf() : log_scale + log_abs_det(m);
    return nm;
}

double norm_log_determinant(const SectionSystem& sys, const std::vector<cd>& xs) {
    return build_norm_matrix(sys, xs).log_det;
}

double norm_determinant(const SectionSystem& sys, const std::vector<cd>& xs) {
    const double ld = norm_log_determinant(sys, xs);
    return std::isfinite(ld) ? std::exp(ld) : 0.0;
}

FayReport verify_fay_identity(const SectionSystem& sys, const std::vector<cd>& xs,
                              double tol) {
    const EllipticSurface& s = sys.surface();
    const int n = sys.n();
    const NormMatrix nm = build_norm_matrix(sys, xs);

    cd shift = sys.l_class();
    for (int i = 0; i < n; ++i) shift += sys.ys()[static_cast<size_t>(i)] - xs[static_cast<size_t>(i)];
    double lhs = log_theta_norm_pic0(shift, s);
    lhs += (n - 1) * log_theta_norm_pic0(sys.l_class(), s);
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            lhs += sys.green().g(xs[static_cast<size_t>(j)], xs[static_cast<size_t>(k)]);
            lhs += sys.green().g(sys.ys()[static_cast<size_t>(j)], sys.ys()[static_cast<size_t>(k)]);
        }
    }

    FayReport rep;
    rep.lhs_log = lhs;
    rep.rhs_log = nm.log_det;
    if (std::isfinite(lhs) || std::isfinite(nm.log_det)) {
        rep.residual = std::abs(lhs - nm.log_det);
    } else {
        rep.residual = 0.0; // both sides vanish
    }
    rep.separability_residual = nm.separability_residual;
    rep.pass = rep.residual <= tol;
    return rep;
}

HadamardReport hadamard_check(const ComplexMatrix& a) {
    HadamardReport rep;
    rep.abs_det = abs_det(a);
    double bound = 1.0;
    for (int k = 0; k < a.n; ++k) {
        double col = 0.0;
        for (int j = 0; j < a.n; ++j) col += std::abs(a.at(j, k));
        bound *= col;
    }
    rep.column_bound = bound;
    rep.slack = bound - rep.abs_det;
    return rep;
}

double lemma41_slack(const SectionSystem& sys, const std::vector<cd>& xs) {
    const NormMatrix nm = build_norm_matrix(sys, xs);
    const int n = nm.n;
    double rhs = 0.0; // sum_k log sum_j W_jk
    for (int k = 0; k < n; ++k) {
        double col_max = -inf();
        for (int j = 0; j < n; ++j) {
            col_max = std::max(col_max, nm.log_w[static_cast<size_t>(j) * n + k]);
        }
        if (!std::isfinite(col_max)) return inf(); // a zero column: det is zero too
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            const double lw = nm.log_w[static_cast<size_t>(j) * n + k];
            if (std::isfinite(lw)) sum += std::exp(lw - col_max);
        }
        rhs += col_max + std::log(sum);
    }
    if (!std::isfinite(nm.log_det)) return inf();
    return rhs - nm.log_det;
}

FayInstance random_fay_instance(const EllipticSurface& surface, int n,
                                SeededSampler& sampler, double min_separation,
                                double min_theta) {
    if (n < 1) throw InvalidInputsError("instance needs n >= 1");
    const int max_attempts = 2000;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<cd> pts;
        bool ok = true;
        for (int i = 0; i < 2 * n && ok; ++i) {
            bool placed = false;
            for (int tries = 0; tries < 64 && !placed; ++tries) {
                const cd cand = surface.sample(sampler);
                bool clear = true;
                for (cd p : pts) {
                    if (surface.reduced_distance(cand - p) < min_separation) {
                        clear = false;
                        break;
                    }
                }
                if (clear) {
                    pts.push_back(cand);
                    placed = true;
                }
            }
            ok = placed;
        }
        if (!ok) continue;
        std::vector<cd> ys(pts.begin(), pts.begin() + n);
        std::vector<cd> xs(pts.begin() + n, pts.end());

        const cd l_class = surface.sample(sampler);
        if (theta_norm_pic0(l_class, surface) < min_theta) continue;
        cd shift = l_class;
        for (int i = 0; i < n; ++i) shift += ys[static_cast<size_t>(i)] - xs[static_cast<size_t>(i)];
        if (theta_norm_pic0(shift, surface) < min_theta) continue;

        return FayInstance{SectionSystem(surface, l_class, std::move(ys)), std::move(xs)};
    }
    throw Error("failed to draw a general-position instance after many attempts");
}

} // namespace arakelov
