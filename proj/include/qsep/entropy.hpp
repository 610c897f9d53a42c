#pragma once

// entropy.hpp — Tsallis power traces and the conditional entropy S_q(A|B).
//
// Joint trace, exact four-term closed form (no truncation):
//
//   Tr rho^q = 3 ((1-x-y)/4)^q
//            + x^q (1-v)^q / (1-v^q)
//            + ((1-x-y)/4 + y bu)^q
//            + (y bu)^q  w (1 + w - w^2) / [(1-w)(1-w^2)],     w = u^q
//
// Marginal trace, two closed terms plus a series over n >= 2 summed until
// the envelope tail bound (p+r)^q <= 2^q (p^q + r^q) drops below the
// relative tolerance.
//
// Conditional entropy (ratio form, symmetric in A<->B since the marginals
// coincide):
//
//   S_q(A|B) = (1 - Tr rho^q / Tr rho_B^q) / (q-1)
//
// q = 1 is a separate -sum lambda ln lambda code path (no 0/0 limit), and
// q -> infinity is a separate sign-only path decided by eigenvalue
// dominance: the spectra are compared as merged descending (value,
// multiplicity) sequences until they first differ; the side with more
// weight there dominates Tr rho^q at large q.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "qsep/errors.hpp"
#include "qsep/model.hpp"

namespace qsep {

class QValue {
public:
    enum class Kind { Finite, One, Infinity };

    static QValue finite(double q) {
        if (!(q > 0.0) || q == 1.0)
            throw DomainError("finite q must satisfy q > 0, q != 1");
        return QValue(Kind::Finite, q);
    }
    static QValue one() { return QValue(Kind::One, 1.0); }
    static QValue infinity() {
        return QValue(Kind::Infinity, std::numeric_limits<double>::infinity());
    }
    // routes 1 and inf to their dedicated kinds
    static QValue of(double q) {
        if (q == 1.0) return one();
        if (std::isinf(q)) return infinity();
        return finite(q);
    }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_one() const { return kind_ == Kind::One; }
    bool is_infinity() const { return kind_ == Kind::Infinity; }
    double value() const { return q_; }

private:
    QValue(Kind k, double q) : kind_(k), q_(q) {}
    Kind kind_;
    double q_;
};

struct SeriesValue {
    double value = 0.0;
    double tail_bound = 0.0;
    std::int64_t terms = 0;
};

inline constexpr double kDefaultSeriesTol = 1e-12;
inline constexpr std::int64_t kMaxSeriesTerms = 2'000'000;

// Exact closed form of Tr (rho_{A+B})^q; zero-prefactor terms are skipped,
// never evaluated as 0 * inf.
inline double tr_joint_q(const ModelParams& p, double q) {
    validate(p);
    if (!(q > 0.0)) throw DomainError("q must be positive");
    const NoiseFactors f = noise_factors(p);
    const double lu = 0.25 * (1.0 - p.x - p.y);
    const double ls = lu + p.y * f.bu;

    double acc = 0.0;
    if (lu > 0.0) acc += 3.0 * std::pow(lu, q);
    if (ls > 0.0) acc += std::pow(ls, q);
    if (p.x > 0.0) {
        if (p.T == 0.0) {
            acc += std::pow(p.x, q);  // v = 0: only d_2 = x survives
        } else {
            const double one_minus_vq = -std::expm1(-2.0 * p.alpha * q / p.T);
            acc += std::pow(p.x * f.one_minus_v, q) / one_minus_vq;
        }
    }
    if (p.y > 0.0 && p.T > 0.0) {
        const double w = std::exp(-q / p.T);
        const double omw = -std::expm1(-q / p.T);
        const double omw2 = -std::expm1(-2.0 * q / p.T);
        if (w > 0.0)
            acc += std::pow(p.y * f.bu, q) * w * (1.0 + w - w * w) / (omw * omw2);
    }
    return acc;
}

// Tr (rho_B)^q: two closed terms plus the n >= 2 series with the geometric
// envelope tail bound, summed until bound <= tol * partial sum.
inline SeriesValue tr_marginal_q(const ModelParams& p, double q,
                                 double tol = kDefaultSeriesTol,
                                 std::int64_t max_terms = kMaxSeriesTerms) {
    validate(p);
    if (!(q > 0.0)) throw DomainError("q must be positive");
    if (!(tol > 0.0)) throw DomainError("tol must be positive");
    const NoiseFactors f = noise_factors(p);
    const MarginalSpectrum ms(p, f);

    SeriesValue r;
    r.value = std::pow(ms.p(0), q) + std::pow(ms.p(1), q);
    if (p.x == 0.0 && p.y == 0.0) return r;
    if (p.T == 0.0) {
        if (p.x > 0.0) r.value += std::pow(p.x, q);
        r.terms = 1;
        return r;
    }

    const double X = ms.diag_prefactor();   // x (1-v)
    const double Y = ms.y_prefactor();      // y * ush
    const double pow2q = std::pow(2.0, q);
    const double vq = std::pow(f.v, q);
    const double uq = std::pow(f.u, q);
    const double Xq = X > 0.0 ? std::pow(X, q) : 0.0;
    const double Yq = Y > 0.0 ? std::pow(Y, q) : 0.0;

    // running powers at term n: vn2 = v^{n-2}, un1 = u^{n-1}, un = u^n;
    // tail factors for "from n+1": vqp = v^{q(n-1)}, uqp = u^{q n}
    double vn2 = 1.0, un1 = f.u, un = f.u * f.u;
    double vqp = vq, uqp = uq * uq;
    for (std::int64_t n = 2;; ++n) {
        double pn = 0.0;
        if (X > 0.0) pn += X * vn2;
        if (p.y > 0.0) pn += p.y * f.ush * un1 * (1.0 - un + un * f.u);
        if (pn > 0.0) r.value += std::pow(pn, q);
        ++r.terms;

        double bound = 0.0;
        if (Xq > 0.0) bound += Xq * vqp / (1.0 - vq);
        if (Yq > 0.0) bound += Yq * uqp / (1.0 - uq);
        bound *= pow2q;
        if (bound <= tol * r.value) {
            r.tail_bound = bound;
            return r;
        }
        if (r.terms >= max_terms)
            throw NonConvergence("tr_marginal_q: tail bound not met after " +
                                 std::to_string(max_terms) + " terms (q=" +
                                 std::to_string(q) + ")");
        vn2 *= f.v;
        un1 *= f.u;
        un *= f.u;
        vqp *= vq;
        uqp *= uq;
    }
}

// von Neumann entropy of the joint state: discrete part plus the diagonal
// family in closed form plus the antisymmetric family summed by diagonals.
inline SeriesValue joint_entropy_q1(const ModelParams& p,
                                    double tol = kDefaultSeriesTol,
                                    std::int64_t max_terms = kMaxSeriesTerms) {
    validate(p);
    const NoiseFactors f = noise_factors(p);
    using detail::xlogx;

    const double lu = 0.25 * (1.0 - p.x - p.y);
    const double ls = lu + p.y * f.bu;
    SeriesValue r;
    r.value = 3.0 * xlogx(lu) + xlogx(ls);

    if (p.x > 0.0) {
        // -sum_n d_n ln d_n = -x ln(x(1-v)) - x v ln v / (1-v)
        r.value -= p.x * std::log(p.x * f.one_minus_v);
        if (f.v > 0.0) r.value -= p.x * f.v * std::log(f.v) / f.one_minus_v;
    }

    const double c = p.y * f.bu;
    if (c > 0.0 && f.u > 0.0) {
        const double L1 = -std::log(c);      // >= 0 since c <= 1
        const double L2 = -std::log(f.u);    // > 0
        double cu = c * f.u;                 // c u^{s-1} at s = 2
        for (std::int64_t s = 2;; ++s) {
            r.value += double((s + 1) / 2) * xlogx(cu);
            ++r.terms;
            // terms for s' > s live at k = s'-1 >= s with count <= (k+3)/2
            const double K = double(s);
            const double tail =
                0.5 * c *
                (3.0 * L1 * detail::geom_tail0(f.u, K) +
                 (L1 + 3.0 * L2) * detail::geom_tail1(f.u, K) +
                 L2 * detail::geom_tail2(f.u, K));
            if (tail <= tol * std::max(r.value, 1e-300)) {
                r.tail_bound = tail;
                break;
            }
            if (r.terms >= max_terms)
                throw NonConvergence("joint_entropy_q1: tail bound not met");
            cu *= f.u;
        }
    }
    return r;
}

// von Neumann entropy of the marginal.  The tail uses subadditivity of
// -t ln t plus the geometric envelopes of the two components.
inline SeriesValue marginal_entropy_q1(const ModelParams& p,
                                       double tol = kDefaultSeriesTol,
                                       std::int64_t max_terms = kMaxSeriesTerms) {
    validate(p);
    const NoiseFactors f = noise_factors(p);
    const MarginalSpectrum ms(p, f);
    using detail::xlogx;

    SeriesValue r;
    r.value = xlogx(ms.p(0)) + xlogx(ms.p(1));
    if (p.x == 0.0 && p.y == 0.0) return r;
    if (p.T == 0.0) {
        r.value += xlogx(p.x);
        r.terms = 1;
        return r;
    }

    const double X = ms.diag_prefactor();
    const double Y = ms.y_prefactor();
    double vn2 = 1.0, un1 = f.u, un = f.u * f.u;
    for (std::int64_t n = 2;; ++n) {
        double pn = 0.0;
        if (X > 0.0) pn += X * vn2;
        if (p.y > 0.0) pn += p.y * f.ush * un1 * (1.0 - un + un * f.u);
        r.value += xlogx(pn);
        ++r.terms;

        // tail over n' >= n+1: x-part exact, y-part by the monotone envelope
        // Y u^{n'-1} (valid: Y u^k <= 1/8 < 1/e for k >= 2)
        double tail = 0.0;
        if (X > 0.0) tail += detail::entropy_geom_tail(X, f.v, double(n - 1));
        if (Y > 0.0) tail += detail::entropy_geom_tail(Y, f.u, double(n));
        if (tail <= tol * std::max(r.value, 1e-300)) {
            r.tail_bound = tail;
            return r;
        }
        if (r.terms >= max_terms)
            throw NonConvergence("marginal_entropy_q1: tail bound not met");
        vn2 *= f.v;
        un1 *= f.u;
        un *= f.u;
    }
}

enum class Part { Joint, Marginal };

// S_q of the joint or marginal state; q = infinity is sign-only and lives in
// conditional_sign_at_infinity.
inline double s_q(const ModelParams& p, const QValue& q, Part which,
                  double tol = kDefaultSeriesTol) {
    switch (q.kind()) {
        case QValue::Kind::Finite: {
            const double tr = which == Part::Joint
                                  ? tr_joint_q(p, q.value())
                                  : tr_marginal_q(p, q.value(), tol).value;
            return (1.0 - tr) / (q.value() - 1.0);
        }
        case QValue::Kind::One:
            return which == Part::Joint ? joint_entropy_q1(p, tol).value
                                        : marginal_entropy_q1(p, tol).value;
        case QValue::Kind::Infinity:
            throw DomainError("S_infinity is sign-only; use conditional_sign_at_infinity");
    }
    return 0.0;  // unreachable
}

// S_q(A|B); symmetric in A<->B because the marginals are identical.
inline double s_conditional(const ModelParams& p, const QValue& q,
                            double tol = kDefaultSeriesTol) {
    switch (q.kind()) {
        case QValue::Kind::Finite: {
            const double qq = q.value();
            const double tj = tr_joint_q(p, qq);
            const double tm = tr_marginal_q(p, qq, tol).value;
            return (1.0 - tj / tm) / (qq - 1.0);
        }
        case QValue::Kind::One:
            return joint_entropy_q1(p, tol).value - marginal_entropy_q1(p, tol).value;
        case QValue::Kind::Infinity:
            throw DomainError("S_infinity is sign-only; use conditional_sign_at_infinity");
    }
    return 0.0;  // unreachable
}

// Rigorous ordering of Tr rho^q vs Tr rho_B^q.  The marginal series yields
// the enclosure [acc, acc + bound] at every step, so the comparison usually
// resolves after a handful of terms; Indistinguishable means the two traces
// agree within tol relative.
enum class TraceOrder { JointGreater, MarginalGreater, Indistinguishable };

inline TraceOrder compare_traces_q(const ModelParams& p, double q,
                                   double tol = kDefaultSeriesTol,
                                   std::int64_t max_terms = kMaxSeriesTerms) {
    validate(p);
    if (!(q > 0.0)) throw DomainError("q must be positive");
    const double tj = tr_joint_q(p, q);
    const NoiseFactors f = noise_factors(p);
    const MarginalSpectrum ms(p, f);

    auto settle = [&](double lo, double hi) {
        const double scale = std::max({std::abs(tj), hi, 1e-300});
        if (tj > hi + tol * scale) return TraceOrder::JointGreater;
        if (tj < lo - tol * scale) return TraceOrder::MarginalGreater;
        return TraceOrder::Indistinguishable;
    };

    double acc = std::pow(ms.p(0), q) + std::pow(ms.p(1), q);
    if (p.x == 0.0 && p.y == 0.0) return settle(acc, acc);
    if (p.T == 0.0) {
        if (p.x > 0.0) acc += std::pow(p.x, q);
        return settle(acc, acc);
    }

    const double X = ms.diag_prefactor();
    const double Y = ms.y_prefactor();
    const double pow2q = std::pow(2.0, q);
    const double vq = std::pow(f.v, q);
    const double uq = std::pow(f.u, q);
    const double Xq = X > 0.0 ? std::pow(X, q) : 0.0;
    const double Yq = Y > 0.0 ? std::pow(Y, q) : 0.0;

    double vn2 = 1.0, un1 = f.u, un = f.u * f.u;
    double vqp = vq, uqp = uq * uq;
    for (std::int64_t terms = 1;; ++terms) {
        double pn = 0.0;
        if (X > 0.0) pn += X * vn2;
        if (p.y > 0.0) pn += p.y * f.ush * un1 * (1.0 - un + un * f.u);
        if (pn > 0.0) acc += std::pow(pn, q);

        double bound = 0.0;
        if (Xq > 0.0) bound += Xq * vqp / (1.0 - vq);
        if (Yq > 0.0) bound += Yq * uqp / (1.0 - uq);
        bound *= pow2q;

        if (tj > acc + bound) return TraceOrder::JointGreater;
        if (tj < acc) return TraceOrder::MarginalGreater;
        if (bound <= tol * acc) return settle(acc, acc + bound);
        if (terms >= max_terms)
            throw NonConvergence("compare_traces_q: tail bound not met");
        vn2 *= f.v;
        un1 *= f.u;
        un *= f.u;
        vqp *= vq;
        uqp *= uq;
    }
}

// true iff S_q(A|B) < 0 at finite q, decided by compare_traces_q
inline bool conditional_negative_finite(const ModelParams& p, double q,
                                        double tol = kDefaultSeriesTol) {
    const TraceOrder ord = compare_traces_q(p, q, tol);
    if (ord == TraceOrder::Indistinguishable) return false;
    return q > 1.0 ? ord == TraceOrder::JointGreater
                   : ord == TraceOrder::MarginalGreater;
}

struct EntropyReport {
    double tr_joint_q = 0.0;
    double tr_marginal_q = 0.0;
    double s_joint = 0.0;
    double s_marginal = 0.0;
    double s_conditional = 0.0;
    double truncation_error = 0.0;
};

inline EntropyReport entropy_report(const ModelParams& p, const QValue& q,
                                    double tol = kDefaultSeriesTol) {
    EntropyReport rep;
    if (q.is_one()) {
        const SeriesValue j = joint_entropy_q1(p, tol);
        const SeriesValue m = marginal_entropy_q1(p, tol);
        rep.tr_joint_q = 1.0;
        rep.tr_marginal_q = 1.0;
        rep.s_joint = j.value;
        rep.s_marginal = m.value;
        rep.s_conditional = j.value - m.value;
        rep.truncation_error = j.tail_bound + m.tail_bound;
        return rep;
    }
    if (q.is_infinity())
        throw DomainError("S_infinity is sign-only; use conditional_sign_at_infinity");
    const double qq = q.value();
    rep.tr_joint_q = tr_joint_q(p, qq);
    const SeriesValue m = tr_marginal_q(p, qq, tol);
    rep.tr_marginal_q = m.value;
    rep.s_joint = (1.0 - rep.tr_joint_q) / (qq - 1.0);
    rep.s_marginal = (1.0 - rep.tr_marginal_q) / (qq - 1.0);
    rep.s_conditional = (1.0 - rep.tr_joint_q / rep.tr_marginal_q) / (qq - 1.0);
    rep.truncation_error = m.tail_bound;
    return rep;
}

enum class InfinitySign { Positive, Negative, Tie };

namespace detail {

// Descending enumeration of the joint spectrum as (value, multiplicity)
// heads from four sub-streams; each sub-stream is individually descending.
class JointDescending {
public:
    JointDescending(const ModelParams& p, const NoiseFactors& f)
        : js_(p, f), u_(f.u), v_(f.v) {
        uniform_left_ = js_.lambda_uniform() > 0.0 ? 3 : 0;
        singlet_left_ = js_.lambda_singlet() > 0.0 ? 1 : 0;
        d_head_ = js_.diag_prefactor() > 0.0 ? js_.diag_term(2) : 0.0;
        s_head_ = js_.antisym_prefactor() > 0.0 ? js_.antisym_diag_value(2) : 0.0;
    }

    double peek() const {
        double m = 0.0;
        if (uniform_left_ > 0) m = std::max(m, js_.lambda_uniform());
        if (singlet_left_ > 0) m = std::max(m, js_.lambda_singlet());
        m = std::max(m, d_head_);
        m = std::max(m, s_head_);
        return m;
    }

    // consumes every head with value >= thresh, returns total multiplicity
    std::int64_t consume_at_least(double thresh) {
        std::int64_t cnt = 0;
        if (uniform_left_ > 0 && js_.lambda_uniform() >= thresh) {
            cnt += uniform_left_;
            uniform_left_ = 0;
        }
        if (singlet_left_ > 0 && js_.lambda_singlet() >= thresh) {
            cnt += singlet_left_;
            singlet_left_ = 0;
        }
        while (d_head_ > 0.0 && d_head_ >= thresh) {
            cnt += 1;
            ++d_n_;
            d_head_ = js_.diag_term(d_n_);
        }
        while (s_head_ > 0.0 && s_head_ >= thresh) {
            cnt += JointSpectrum::antisym_diag_count(s_s_);
            ++s_s_;
            s_head_ = js_.antisym_diag_value(s_s_);
        }
        return cnt;
    }

private:
    JointSpectrum js_;
    double u_, v_;
    int uniform_left_ = 0, singlet_left_ = 0;
    std::int64_t d_n_ = 2, s_s_ = 2;
    double d_head_ = 0.0, s_head_ = 0.0;
};

class MarginalDescending {
public:
    MarginalDescending(const ModelParams& p, const NoiseFactors& f) : ms_(p, f) {
        p0_left_ = ms_.p(0) > 0.0 ? 1 : 0;
        p1_left_ = ms_.p(1) > 0.0 ? 1 : 0;
        head_ = ms_.p(2);
    }

    double peek() const {
        double m = 0.0;
        if (p0_left_ > 0) m = std::max(m, ms_.p(0));
        if (p1_left_ > 0) m = std::max(m, ms_.p(1));
        m = std::max(m, head_);
        return m;
    }

    std::int64_t consume_at_least(double thresh) {
        std::int64_t cnt = 0;
        if (p0_left_ > 0 && ms_.p(0) >= thresh) {
            cnt += 1;
            p0_left_ = 0;
        }
        if (p1_left_ > 0 && ms_.p(1) >= thresh) {
            cnt += 1;
            p1_left_ = 0;
        }
        while (head_ > 0.0 && head_ >= thresh) {
            cnt += 1;
            ++n_;
            head_ = ms_.p(n_);
        }
        return cnt;
    }

private:
    MarginalSpectrum ms_;
    int p0_left_ = 0, p1_left_ = 0;
    std::int64_t n_ = 2;  // next undelivered index >= 2
    double head_ = 0.0;
};

} // namespace detail

// Sign of lim_{q->inf} sign(S_q(A|B)), by lexicographic comparison of the
// merged descending spectra: Negative iff the joint side carries more weight
// at the first differing eigenvalue level.  Values within 1e-12 relative are
// treated as one level; levels below 1e-250 (or past the walk cap) tie.
inline InfinitySign conditional_sign_at_infinity(const ModelParams& p) {
    validate(p);
    const NoiseFactors f = noise_factors(p);
    detail::JointDescending joint(p, f);
    detail::MarginalDescending marg(p, f);

    constexpr double kRelTol = 1e-12;
    constexpr double kFloor = 1e-250;
    constexpr std::int64_t kMaxLevels = 200'000;

    for (std::int64_t level = 0; level < kMaxLevels; ++level) {
        const double top = std::max(joint.peek(), marg.peek());
        if (top <= kFloor) return InfinitySign::Tie;
        const double thresh = top * (1.0 - kRelTol);
        const std::int64_t cj = joint.consume_at_least(thresh);
        const std::int64_t cb = marg.consume_at_least(thresh);
        if (cj != cb)
            return cj > cb ? InfinitySign::Negative : InfinitySign::Positive;
    }
    return InfinitySign::Tie;
}

} // namespace qsep
