#pragma once

// oracle.hpp — brute-force ground truth on a truncated Fock space.
//
// Materializes the mixture as a dense real symmetric matrix over the product
// basis |n,m>, n,m < N, ordered by index n*N + m, and provides partial
// traces, eigenvalue power sums and the partial-transpose (PPT) test.
//
// The matrix structure is block-trivial: every entry is diagonal except the
// couplings |n,m> <-> |m,n> coming from the antisymmetric projectors, so the
// eigenproblem of rho itself splits into 1x1 and 2x2 blocks.  The partial
// transpose moves those couplings onto the {|k,k>} subspace, whose N x N
// symmetric block is diagonalized with the cyclic Jacobi solver.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>

#include <Eigen/Dense>

#include "qsep/errors.hpp"
#include "qsep/jacobi.hpp"
#include "qsep/model.hpp"

namespace qsep {

enum class Subsystem { A, B };

struct TruncatedState {
    int n_levels = 0;          // N, levels 0..N-1 per oscillator
    Eigen::MatrixXd matrix;    // N^2 x N^2, basis |n,m> at n*N + m
    double tail_weight = 0.0;  // discarded probability (analytic bound)

    int index(int n, int m) const { return n * n_levels + m; }
};

// Probability discarded when both oscillators are cut at N levels:
//   x v^{N-2} + y u^{N-1} (1 + u - u^N),   N >= 2.
inline double truncation_tail(const ModelParams& p, int n_levels) {
    const NoiseFactors f = noise_factors(p);
    double t = 0.0;
    if (p.x > 0.0) t += p.x * std::pow(f.v, double(n_levels - 2));
    if (p.y > 0.0 && f.u > 0.0)
        t += p.y * std::pow(f.u, double(n_levels - 1)) *
             (1.0 + f.u - std::pow(f.u, double(n_levels)));
    return t;
}

// Smallest N >= 2 with truncation_tail <= tol, or nullopt if none <= cap.
inline std::optional<int> smallest_truncation(const ModelParams& p, double tol,
                                              int cap = 4096) {
    for (int n = 2; n <= cap; ++n)
        if (truncation_tail(p, n) <= tol) return n;
    return std::nullopt;
}

// Smallest N >= 2 whose q-weighted spectral tails (joint and marginal) are
// below rel_tol relative to the corresponding full power sums; nullopt past
// cap.  This is the truncation needed for eigenvalue power sums at exponent
// q to match closed forms to a relative target.
inline std::optional<int> smallest_truncation_q(const ModelParams& p, double q,
                                                double rel_tol, int cap = 4096) {
    const NoiseFactors f = noise_factors(p);
    const JointSpectrum js(p, f);
    const MarginalSpectrum ms(p, f);
    // crude positive lower bounds on the full sums
    const double joint_floor =
        std::max({std::pow(js.lambda_singlet(), q),
                  3.0 * std::pow(js.lambda_uniform(), q),
                  p.x > 0.0 ? std::pow(js.diag_term(2), q) : 0.0});
    const double marg_floor =
        std::max({std::pow(ms.p(0), q), std::pow(ms.p(1), q),
                  std::pow(ms.p(2), q)});
    for (int n = 2; n <= cap; ++n) {
        const double jt = js.diag_tail_q(n, q) + js.antisym_tail_q(n, q);
        const double mt = ms.tail_q_bound(n, q);
        if (jt <= rel_tol * joint_floor && mt <= rel_tol * marg_floor &&
            truncation_tail(p, n) <= rel_tol)
            return n;
    }
    return std::nullopt;
}

// Dense matrix over the truncated product basis.  Throws TruncationTooSmall
// if the analytic tail bound at n_levels exceeds tol.
inline TruncatedState materialize(const ModelParams& p, int n_levels,
                                  double tol) {
    validate(p);
    if (n_levels < 2) throw TruncationTooSmall("n_levels must be >= 2");
    const double tail = truncation_tail(p, n_levels);
    if (!(tail <= tol))
        throw TruncationTooSmall("tail bound " + std::to_string(tail) +
                                 " exceeds tolerance at N=" +
                                 std::to_string(n_levels));

    const NoiseFactors f = noise_factors(p);
    const int N = n_levels;
    TruncatedState st;
    st.n_levels = N;
    st.tail_weight = tail;
    st.matrix = Eigen::MatrixXd::Zero(N * N, N * N);
    Eigen::MatrixXd& M = st.matrix;

    const double uniform = 0.25 * (1.0 - p.x - p.y);
    M(st.index(0, 0), st.index(0, 0)) += uniform;
    M(st.index(1, 1), st.index(1, 1)) += uniform;
    M(st.index(1, 0), st.index(1, 0)) += uniform;
    M(st.index(0, 1), st.index(0, 1)) += uniform;

    if (p.x > 0.0) {
        const double xf = p.x * f.one_minus_v;  // x (1-v)
        double vpow = 1.0;                      // v^{n-2}
        for (int n = 2; n < N; ++n) {
            M(st.index(n, n), st.index(n, n)) += xf * vpow;
            vpow *= f.v;
        }
    }

    if (p.y > 0.0) {
        const double c = p.y * f.bu;  // y b u; weight of (n,m) is c u^{n+m-1}
        for (int n = 1; n < N; ++n) {
            double w = c * std::pow(f.u, double(n - 1));  // m = 0
            for (int m = 0; m < n; ++m) {
                const int i = st.index(n, m), j = st.index(m, n);
                M(i, i) += 0.5 * w;
                M(j, j) += 0.5 * w;
                M(i, j) -= 0.5 * w;
                M(j, i) -= 0.5 * w;
                w *= f.u;
            }
        }
    }
    return st;
}

inline Eigen::MatrixXd partial_trace(const TruncatedState& st, Subsystem over) {
    const int N = st.n_levels;
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double s = 0.0;
            if (over == Subsystem::A) {
                for (int n = 0; n < N; ++n) s += st.matrix(st.index(n, i), st.index(n, j));
            } else {
                for (int m = 0; m < N; ++m) s += st.matrix(st.index(i, m), st.index(j, m));
            }
            r(i, j) = s;
        }
    return r;
}

// Transposition of one subsystem's indices:
//   over B: (n,m; n',m') -> (n,m'; n',m);  over A: (n,m; n',m') -> (n',m; n,m').
inline Eigen::MatrixXd partial_transpose(const TruncatedState& st, Subsystem over) {
    const int N = st.n_levels;
    Eigen::MatrixXd r(N * N, N * N);
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m)
            for (int np = 0; np < N; ++np)
                for (int mp = 0; mp < N; ++mp) {
                    const double val = st.matrix(st.index(n, m), st.index(np, mp));
                    if (over == Subsystem::B)
                        r(st.index(n, mp), st.index(np, m)) = val;
                    else
                        r(st.index(np, m), st.index(n, mp)) = val;
                }
    return r;
}

// Sum of lambda^q over the eigenvalues of the materialized matrix, using the
// block structure: 1x1 on |n,n>, 2x2 on each (|n,m>, |m,n>) pair.  Values in
// [-1e-12, 0) clamp to 0; anything lower throws NegativeEigenvalue.
inline double eigen_trace_q(const TruncatedState& st, double q) {
    const int N = st.n_levels;
    auto take = [&](double lam) {
        if (lam < -1e-12)
            throw NegativeEigenvalue("eigenvalue " + std::to_string(lam));
        return lam > 0.0 ? std::pow(lam, q) : 0.0;
    };
    double acc = 0.0;
    for (int n = 0; n < N; ++n) acc += take(st.matrix(st.index(n, n), st.index(n, n)));
    for (int n = 1; n < N; ++n)
        for (int m = 0; m < n; ++m) {
            const int i = st.index(n, m), j = st.index(m, n);
            const double d1 = st.matrix(i, i), d2 = st.matrix(j, j);
            const double o = st.matrix(i, j);
            const double h = std::hypot(d1 - d2, 2.0 * o);
            acc += take(0.5 * (d1 + d2 + h));
            acc += take(0.5 * (d1 + d2 - h));
        }
    return acc;
}

// -sum lambda ln lambda over the same block eigenvalues (oracle for q = 1).
inline double eigen_entropy(const TruncatedState& st) {
    const int N = st.n_levels;
    auto take = [&](double lam) {
        if (lam < -1e-12)
            throw NegativeEigenvalue("eigenvalue " + std::to_string(lam));
        return lam > 0.0 ? -lam * std::log(lam) : 0.0;
    };
    double acc = 0.0;
    for (int n = 0; n < N; ++n) acc += take(st.matrix(st.index(n, n), st.index(n, n)));
    for (int n = 1; n < N; ++n)
        for (int m = 0; m < n; ++m) {
            const int i = st.index(n, m), j = st.index(m, n);
            const double d1 = st.matrix(i, i), d2 = st.matrix(j, j);
            const double o = st.matrix(i, j);
            const double h = std::hypot(d1 - d2, 2.0 * o);
            acc += take(0.5 * (d1 + d2 + h));
            acc += take(0.5 * (d1 + d2 - h));
        }
    return acc;
}

struct PPTReport {
    double min_eigenvalue = 0.0;
    bool entangled_flag = false;
};

// Least eigenvalue of the partial transpose (over B by default; the state's
// A<->B symmetry makes the choice immaterial, which a test asserts).  The
// transpose leaves the |n,m>, n != m, diagonal entries uncoupled and
// collects all antisymmetric couplings into one symmetric N x N block on
// {|k,k>}.
inline PPTReport ppt_check(const TruncatedState& st, double tol = 1e-10,
                           Subsystem over = Subsystem::B) {
    const int N = st.n_levels;
    const Eigen::MatrixXd pt = partial_transpose(st, over);

    double min_eig = std::numeric_limits<double>::infinity();
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m) {
            if (n == m) continue;
            min_eig = std::min(min_eig, pt(st.index(n, m), st.index(n, m)));
        }

    Eigen::MatrixXd block(N, N);
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m)
            block(n, m) = pt(st.index(n, n), st.index(m, m));
    const Eigen::VectorXd evs = jacobi_eigenvalues(block, 1e-12, 100);
    min_eig = std::min(min_eig, evs.minCoeff());

    return PPTReport{min_eig, min_eig < -tol};
}

// Plain-text nonzero entries, one "row col value" triplet per line.
inline void dump_triplets(const Eigen::MatrixXd& m, std::ostream& os) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0.0) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%lld %lld %.17g",
                              static_cast<long long>(i), static_cast<long long>(j),
                              m(i, j));
                os << buf << '\n';
            }
}

} // namespace qsep
