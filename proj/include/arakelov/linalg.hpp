// Dense linear algebra for the small matrices that occur here: period
// matrices up to 6x6 and section-norm matrices up to ~8x8. Everything is
// direct (Jacobi sweeps, Cholesky, LU with partial pivoting); no external
// library is worth the dependency at these sizes.

#pragma once

#include <complex>
#include <vector>

namespace arakelov {

using cd = std::complex<double>;

struct ComplexMatrix {
    int n = 0;
    std::vector<cd> a; // row-major n*n

    ComplexMatrix() = default;
    explicit ComplexMatrix(int size) : n(size), a(static_cast<size_t>(size) * size) {}

    cd& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const cd& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    static ComplexMatrix identity(int size);
};

// log|det M| via LU with partial pivoting; -infinity when singular.
// Robust against under/overflow of the determinant itself.
double log_abs_det(ComplexMatrix m);

// |det M|; may under/overflow for wide dynamic ranges, use log_abs_det then.
double abs_det(const ComplexMatrix& m);

// Gauss-Jordan inverse. Returns false (and leaves out unspecified) when
// the matrix is numerically singular.
bool try_inverse(const ComplexMatrix& m, ComplexMatrix& out);

// ||M||_F * ||M^{-1}||_F, or +infinity when singular.
double frobenius_condition(const ComplexMatrix& m);

// Smallest eigenvalue of a real symmetric g x g matrix (row-major, stride
// `stride`), by cyclic Jacobi rotations. g <= 8.
double min_symmetric_eigenvalue(const double* a, int g, int stride);

// Inverse and log-determinant of a symmetric positive definite matrix via
// Cholesky. Returns false when a pivot is not strictly positive.
bool spd_inverse(const double* y, int g, int stride, double* y_inv, double* log_det);

} // namespace arakelov
