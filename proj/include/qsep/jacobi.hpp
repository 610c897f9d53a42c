#pragma once

// jacobi.hpp — cyclic Jacobi eigensolver for dense symmetric matrices.
//
// Sweeps the strict upper triangle in row order, annihilating each pivot
// with a Givens rotation, until the off-diagonal Frobenius norm falls below
// the tolerance.  Only eigenvalues are produced.

#include <cmath>
#include <Eigen/Dense>

#include "qsep/errors.hpp"

namespace qsep {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
Scalar off_diagonal_norm(const DenseMatrix<Scalar>& a) {
    Scalar s = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = i + 1; j < a.cols(); ++j) s += a(i, j) * a(i, j);
    return std::sqrt(Scalar(2) * s);
}

// Eigenvalues of a symmetric matrix, unsorted (diagonal order after
// convergence).  Throws EigensolverStall past max_sweeps.
template <typename Derived>
DenseVector<typename Derived::Scalar> jacobi_eigenvalues(
    const Eigen::MatrixBase<Derived>& matrix,
    typename Derived::Scalar off_tol = 1e-12, int max_sweeps = 100) {
    using Scalar = typename Derived::Scalar;
    DenseMatrix<Scalar> a = matrix;
    const Eigen::Index n = a.rows();
    if (n <= 1) return a.diagonal();

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) < off_tol) return a.diagonal();
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Scalar apq = a(p, q);
                if (std::abs(apq) == Scalar(0)) continue;
                const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
                const Scalar t =
                    (theta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                    (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
                const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
                const Scalar s = t * c;
                const Scalar tau = s / (Scalar(1) + c);

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = a(q, p) = Scalar(0);
                for (Eigen::Index r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const Scalar arp = a(r, p), arq = a(r, q);
                    a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
                    a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
                }
            }
        }
    }
    if (off_diagonal_norm(a) < off_tol) return a.diagonal();
    throw EigensolverStall("jacobi_eigenvalues: no convergence within sweep cap");
}

} // namespace qsep
