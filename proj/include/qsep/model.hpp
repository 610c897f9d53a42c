#pragma once

// model.hpp — parameter space and exact spectra of the two-oscillator mixture.
//
// The state family is a four-parameter mixture over the product Fock basis
// |n,m> of two identical oscillators:
//
//   rho = (1-x-y)/4 [ |0,0><0,0| + |1,1><1,1| + |1,0><1,0| + |0,1><0,1| ]
//       + x a sum_{n>=2} v^n |n,n><n,n|
//       + y b sum_{n>=1} sum_{m<n} u^{n+m} |n,m-><n,m-|
//
// with u = e^{-1/T}, v = e^{-2 alpha/T}, |n,m-> = (|n,m> - |m,n>)/sqrt(2),
// and normalizations a = (1-v)/v^2, b = (1-u)(1-u^2)/u.
//
// Everything downstream only ever needs the bounded combinations
//
//   b*u  = (1-u)(1-u^2)          (weight of the lowest antisymmetric state)
//   u*sh = (1-u^2)/2             (sh = sinh(1/T); marginal weight factor)
//
// which stay finite at T = 0 where a, b, sh individually diverge.  T = 0 is
// handled by the exact limit convention u = v = 0 with 0^0 = 1, never by
// evaluating e^{-1/T} at tiny T.
//
// Spectra are lazy analytic families (term-by-index access plus closed-form
// tail sums), never materialized lists.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "qsep/errors.hpp"

namespace qsep {

struct ModelParams {
    double x = 0.0;      // concentration of diagonal |n,n> states, in [0,1]
    double y = 0.0;      // concentration of antisymmetric states, in [0,1]
    double T = 0.0;      // thermal noise, >= 0
    double alpha = 1.0;  // diagonal-noise ratio, >= 0
};

// Returns the params unchanged iff all invariants hold, else throws
// DomainError naming the violated constraint.
inline ModelParams validate(const ModelParams& p) {
    if (!(std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.T) &&
          std::isfinite(p.alpha)))
        throw DomainError("model parameters must be finite");
    if (p.x < 0.0 || p.x > 1.0) throw DomainError("x outside [0,1]");
    if (p.y < 0.0 || p.y > 1.0) throw DomainError("y outside [0,1]");
    if (p.x + p.y > 1.0) throw DomainError("x+y exceeds 1");
    if (p.T < 0.0) throw DomainError("T negative");
    if (p.alpha < 0.0) throw DomainError("alpha negative");
    // The diagonal normalization 1/sum v^n only exists for v < 1; at alpha=0
    // and T>0 the family is not normalizable when it carries weight.
    if (p.x > 0.0 && p.T > 0.0 && p.alpha == 0.0)
        throw DomainError("non-normalizable diagonal family (alpha=0 with x>0, T>0)");
    return p;
}

struct NoiseFactors {
    double u = 0.0;    // e^{-1/T}
    double v = 0.0;    // e^{-2 alpha/T}
    double a = 0.0;    // (1-v) e^{4 alpha/T}; +inf at T=0
    double b = 0.0;    // 2 (1-u) sinh(1/T);  +inf at T=0
    double sh = 0.0;   // sinh(1/T);          +inf at T=0
    // bounded combinations, exact at T=0:
    double bu = 0.0;           // b*u  = (1-u)(1-u^2)
    double ush = 0.0;          // u*sh = (1-u^2)/2
    double one_minus_u = 0.0;  // computed via expm1
    double one_minus_v = 0.0;
    double one_minus_u2 = 0.0;
};

inline NoiseFactors noise_factors(const ModelParams& p) {
    NoiseFactors f;
    if (p.T == 0.0) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        f.u = 0.0;
        f.v = 0.0;
        f.a = inf;
        f.b = inf;
        f.sh = inf;
        f.bu = 1.0;
        f.ush = 0.5;
        f.one_minus_u = 1.0;
        f.one_minus_v = 1.0;
        f.one_minus_u2 = 1.0;
        return f;
    }
    const double beta = 1.0 / p.T;
    f.u = std::exp(-beta);
    f.v = std::exp(-2.0 * p.alpha * beta);
    f.one_minus_u = -std::expm1(-beta);
    f.one_minus_v = -std::expm1(-2.0 * p.alpha * beta);
    f.one_minus_u2 = -std::expm1(-2.0 * beta);
    f.sh = std::sinh(beta);
    f.a = f.one_minus_v * std::exp(4.0 * p.alpha * beta);  // may overflow for tiny T;
                                                           // weights below never use it
    f.b = 2.0 * f.one_minus_u * f.sh;
    f.bu = f.one_minus_u * f.one_minus_u2;
    f.ush = 0.5 * f.one_minus_u2;
    return f;
}

namespace detail {

// Geometric moment tails, 0 < r < 1:
//   T1 = sum_{k>=K} r^k, T2 = sum_{k>=K} k r^k, T3 = sum_{k>=K} k^2 r^k.
inline double geom_tail0(double r, double K) {
    return std::pow(r, K) / (1.0 - r);
}
inline double geom_tail1(double r, double K) {
    const double om = 1.0 - r;
    return std::pow(r, K) * (K / om + r / (om * om));
}
inline double geom_tail2(double r, double K) {
    const double om = 1.0 - r;
    return std::pow(r, K) *
           (r * (1.0 + r) / (om * om * om) + 2.0 * K * r / (om * om) + K * K / om);
}

// sum_{k>=K} g(C r^k) with g(t) = -t ln t, valid for 0 < C <= 1, 0 < r < 1.
inline double entropy_geom_tail(double C, double r, double K) {
    if (C <= 0.0 || r <= 0.0) return 0.0;
    return C * (-std::log(C) * geom_tail0(r, K) - std::log(r) * geom_tail1(r, K));
}

inline double xlogx(double t) { return t > 0.0 ? -t * std::log(t) : 0.0; }

} // namespace detail

// Eigenvalue families of the joint state (orthonormal-projector form):
//   uniform      (1-x-y)/4                with multiplicity 3
//   singlet      (1-x-y)/4 + y*bu         on |1,0->
//   diag         d_n     = x (1-v) v^{n-2},        n >= 2
//   antisym      s_{n,m} = y*bu * u^{n+m-1},        n >= 2, 0 <= m < n
// The antisym family is constant on diagonals s = n+m with
// multiplicity ceil(s/2).
class JointSpectrum {
public:
    JointSpectrum(const ModelParams& p, const NoiseFactors& f)
        : x_(p.x), y_(p.y), u_(f.u), v_(f.v),
          xf_(p.x * f.one_minus_v), c_(p.y * f.bu) {
        lambda_uniform_ = 0.25 * (1.0 - p.x - p.y);
        lambda_singlet_ = lambda_uniform_ + p.y * f.bu;
    }

    double lambda_uniform() const { return lambda_uniform_; }  // multiplicity 3
    double lambda_singlet() const { return lambda_singlet_; }

    // d_n, n >= 2
    double diag_term(std::int64_t n) const {
        return xf_ * std::pow(v_, double(n - 2));
    }
    // s_{n,m}, n >= 2, 0 <= m < n
    double antisym_term(std::int64_t n, std::int64_t m) const {
        return c_ * std::pow(u_, double(n + m - 1));
    }
    // value and multiplicity on the diagonal s = n+m, s >= 2
    double antisym_diag_value(std::int64_t s) const {
        return c_ * std::pow(u_, double(s - 1));
    }
    static std::int64_t antisym_diag_count(std::int64_t s) { return (s + 1) / 2; }

    // probability tails
    double diag_tail(std::int64_t from) const {  // sum_{n>=from} d_n, from >= 2
        if (x_ == 0.0) return 0.0;
        return x_ * std::pow(v_, double(from - 2));
    }
    double antisym_tail(std::int64_t from) const {  // pairs with n >= from, from >= 1
        if (y_ == 0.0 || u_ == 0.0) return 0.0;
        const double uN = std::pow(u_, double(from));
        return y_ * std::pow(u_, double(from - 1)) * (1.0 + u_ - uN);
    }

    // q-weighted tails (exact closed forms), q > 0
    double diag_tail_q(std::int64_t from, double q) const {
        if (xf_ <= 0.0) return 0.0;
        const double vq = std::pow(v_, q);
        return std::pow(xf_, q) * std::pow(v_, q * double(from - 2)) / (1.0 - vq);
    }
    double antisym_tail_q(std::int64_t from, double q) const {
        if (c_ <= 0.0 || u_ == 0.0) return 0.0;
        const double U = std::pow(u_, q);
        const double t = std::pow(U, double(from - 1)) / (1.0 - U) -
                         std::pow(U, double(2 * from - 1)) / (1.0 - U * U);
        return std::pow(c_, q) * t / (1.0 - U);
    }

    double x() const { return x_; }
    double y() const { return y_; }
    double u() const { return u_; }
    double v() const { return v_; }
    double diag_prefactor() const { return xf_; }     // x (1-v)
    double antisym_prefactor() const { return c_; }   // y * bu

private:
    double x_, y_, u_, v_;
    double xf_, c_;
    double lambda_uniform_, lambda_singlet_;
};

inline JointSpectrum joint_spectrum(const ModelParams& p) {
    return JointSpectrum(p, noise_factors(p));
}

// Diagonal of the reduced state (identical for either oscillator):
//   p_n = [n<=1] (1-x-y)/2 + [n>=2] x (1-v) v^{n-2}
//       + y sh (u^n - u^{2n} + u^{2n+1})
// where the y-part at n = 0, 1 reduces to y*ush and y*sh(u - u^2 + u^3).
class MarginalSpectrum {
public:
    MarginalSpectrum(const ModelParams& p, const NoiseFactors& f)
        : x_(p.x), y_(p.y), u_(f.u), v_(f.v),
          xf_(p.x * f.one_minus_v), ush_(f.ush) {}

    double p(std::int64_t n) const {
        double val = (n <= 1) ? 0.5 * (1.0 - x_ - y_) : 0.0;
        if (n >= 2 && xf_ > 0.0) val += xf_ * std::pow(v_, double(n - 2));
        if (y_ > 0.0) val += y_ * y_weight(n);
        return val;
    }

    // y-part of p_n divided by y: sh (u^n - u^{2n} + u^{2n+1}), rewritten as
    // ush u^{n-1} (1 - u^n + u^{n+1}) with 0^0 = 1 so the T=0 limit is exact
    double y_weight(std::int64_t n) const {
        if (n == 0) return ush_;
        const double un = std::pow(u_, double(n));
        return ush_ * std::pow(u_, double(n - 1)) * (1.0 - un + un * u_);
    }

    // sum_{n>=from} p_n, from >= 2
    double tail(std::int64_t from) const {
        double t = 0.0;
        if (x_ > 0.0) t += x_ * std::pow(v_, double(from - 2));
        if (y_ > 0.0 && u_ > 0.0)
            t += y_ * ush_ * (std::pow(u_, double(from - 1)) / (1.0 - u_) -
                              std::pow(u_, double(2 * from - 1)) / (1.0 + u_));
        return t;
    }

    // Envelope bound on sum_{n>=from} p_n^q via (p+r)^q <= 2^q (p^q + r^q),
    // with p_n <= x(1-v) v^{n-2} + y*ush u^{n-1}.
    double tail_q_bound(std::int64_t from, double q) const {
        double t = 0.0;
        if (xf_ > 0.0) {
            const double vq = std::pow(v_, q);
            t += std::pow(xf_, q) * std::pow(v_, q * double(from - 2)) / (1.0 - vq);
        }
        if (y_ > 0.0 && u_ > 0.0) {
            const double uq = std::pow(u_, q);
            t += std::pow(y_ * ush_, q) * std::pow(u_, q * double(from - 1)) /
                 (1.0 - uq);
        }
        return std::pow(2.0, q) * t;
    }

    double x() const { return x_; }
    double y() const { return y_; }
    double u() const { return u_; }
    double v() const { return v_; }
    double diag_prefactor() const { return xf_; }      // x (1-v)
    double y_prefactor() const { return y_ * ush_; }   // envelope factor

private:
    double x_, y_, u_, v_;
    double xf_, ush_;
};

inline MarginalSpectrum marginal_spectrum(const ModelParams& p) {
    return MarginalSpectrum(p, noise_factors(p));
}

} // namespace qsep
