#include "arakelov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace arakelov {

ComplexMatrix ComplexMatrix::identity(int size) {
    ComplexMatrix m(size);
    for (int i = 0; i < size; ++i) m.at(i, i) = 1.0;
    return m;
}

double log_abs_det(ComplexMatrix m) {
    const int n = m.n;
    double log_sum = 0.0;
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::abs(m.at(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(m.at(i, k));
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (best == 0.0) return -std::numeric_limits<double>::infinity();
        if (pivot != k) {
            for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(pivot, j));
        }
        log_sum += std::log(std::abs(m.at(k, k)));
        const cd inv_pivot = 1.0 / m.at(k, k);
        for (int i = k + 1; i < n; ++i) {
            const cd factor = m.at(i, k) * inv_pivot;
            if (factor == cd(0.0, 0.0)) continue;
            for (int j = k + 1; j < n; ++j) m.at(i, j) -= factor * m.at(k, j);
        }
    }
    return log_sum;
}

double abs_det(const ComplexMatrix& m) {
    return std::exp(log_abs_det(m));
}

bool try_inverse(const ComplexMatrix& m, ComplexMatrix& out) {
    const int n = m.n;
    ComplexMatrix work = m;
    out = ComplexMatrix::identity(n);
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::abs(work.at(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(work.at(i, k));
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (best == 0.0) return false;
        if (pivot != k) {
            for (int j = 0; j < n; ++j) {
                std::swap(work.at(k, j), work.at(pivot, j));
                std::swap(out.at(k, j), out.at(pivot, j));
            }
        }
        const cd inv_pivot = 1.0 / work.at(k, k);
        for (int j = 0; j < n; ++j) {
            work.at(k, j) *= inv_pivot;
            out.at(k, j) *= inv_pivot;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            const cd factor = work.at(i, k);
            if (factor == cd(0.0, 0.0)) continue;
            for (int j = 0; j < n; ++j) {
                work.at(i, j) -= factor * work.at(k, j);
                out.at(i, j) -= factor * out.at(k, j);
            }
        }
    }
    return true;
}

namespace {

double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const cd& v : m.a) s += std::norm(v);
    return std::sqrt(s);
}

} // namespace

double frobenius_condition(const ComplexMatrix& m) {
    ComplexMatrix inv;
    if (!try_inverse(m, inv)) return std::numeric_limits<double>::infinity();
    return frobenius_norm(m) * frobenius_norm(inv);
}

double min_symmetric_eigenvalue(const double* a, int g, int stride) {
    double m[8][8];
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) m[i][j] = a[i * stride + j];

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < g; ++i)
            for (int j = i + 1; j < g; ++j) off += m[i][j] * m[i][j];
        double scale = 0.0;
        for (int i = 0; i < g; ++i) scale = std::max(scale, std::abs(m[i][i]));
        if (off <= 1e-30 * std::max(scale * scale, 1e-300)) break;

        for (int p = 0; p < g; ++p) {
            for (int q = p + 1; q < g; ++q) {
                if (m[p][q] == 0.0) continue;
                const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < g; ++k) {
                    const double mkp = m[k][p];
                    const double mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (int k = 0; k < g; ++k) {
                    const double mpk = m[p][k];
                    const double mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    double min_eig = m[0][0];
    for (int i = 1; i < g; ++i) min_eig = std::min(min_eig, m[i][i]);
    return min_eig;
}

bool spd_inverse(const double* y, int g, int stride, double* y_inv, double* log_det) {
    // Cholesky factor L with Y = L L^T.
    double l[8][8] = {};
    double logdet = 0.0;
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = y[i * stride + j];
            for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            if (i == j) {
                if (s <= 0.0) return false;
                l[i][i] = std::sqrt(s);
                logdet += std::log(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    // Solve Y X = I column by column.
    for (int col = 0; col < g; ++col) {
        double z[8];
        for (int i = 0; i < g; ++i) {
            double s = (i == col) ? 1.0 : 0.0;
            for (int k = 0; k < i; ++k) s -= l[i][k] * z[k];
            z[i] = s / l[i][i];
        }
        for (int i = g - 1; i >= 0; --i) {
            double s = z[i];
            for (int k = i + 1; k < g; ++k) s -= l[k][i] * y_inv[k * g + col];
            y_inv[i * g + col] = s / l[i][i];
        }
    }
    if (log_det) *log_det = logdet;
    return true;
}

} // namespace arakelov
