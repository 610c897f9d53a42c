#pragma once

// criterion.hpp — entanglement decision and frontier tracing.
//
// A point is flagged entangled when S_q(A|B) < 0 for some scanned q: the
// finite grid (default 60 log-spaced points in [0.1, 100]), the q = 1 path,
// a golden-section refinement around the grid minimum, and the q -> infinity
// sign test.  The flag is one-sided: nonnegativity for all q is necessary,
// not sufficient, for separability.
//
// Closed-form frontier pieces of the q -> infinity branch:
//
//   y* = (1-x) / (3 - 2u (2 + u - 2u^2))
//   x* = [ (2 (1-u^2)(2 - 3u + u^3 - u^4) - 1) y + 1 ] / (5 - 4v)
//
// (u = e^{-1/T}, v = e^{-2 alpha/T}); y* solves lambda_singlet = p_0 and
// x* solves lambda_singlet = p_2 on the analytic spectra.
//
// frontier_y locates the sign change of inf_q S_q(A|B) along y by coarse
// scan plus bisection; the branch is Linear when the infimum is attributed
// to q = infinity (grid minimum at the last point, nonincreasing tail over
// the final decade, infinity sign Negative), else Curved with its finite
// q_min.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qsep/entropy.hpp"
#include "qsep/errors.hpp"
#include "qsep/model.hpp"

namespace qsep {

inline std::vector<double> default_q_grid(int points = 60, double q_lo = 0.1,
                                          double q_hi = 100.0) {
    std::vector<double> g(points);
    const double t0 = std::log(q_lo), t1 = std::log(q_hi);
    for (int i = 0; i < points; ++i)
        g[i] = std::exp(t0 + (t1 - t0) * double(i) / double(points - 1));
    return g;
}

struct QScanConfig {
    std::vector<double> q_grid = default_q_grid();
    bool refine = true;
    bool include_infinity = true;
};

inline void validate(const QScanConfig& cfg) {
    if (cfg.q_grid.empty()) throw DomainError("q grid is empty");
    double prev = 0.0;
    for (double q : cfg.q_grid) {
        if (!(q > 0.0)) throw DomainError("q grid entries must be positive");
        if (q == 1.0)
            throw DomainError("q = 1 is evaluated by its own limit path; "
                              "exclude it from the grid");
        if (!(q > prev)) throw DomainError("q grid must be strictly increasing");
        prev = q;
    }
}

namespace detail {

// grid merged with q = 1, ascending
inline std::vector<double> merged_q_grid(const QScanConfig& cfg) {
    std::vector<double> qs = cfg.q_grid;
    qs.push_back(1.0);
    std::sort(qs.begin(), qs.end());
    return qs;
}

// golden-section minimum of S_q(A|B) over log q in [lo, hi]
inline std::pair<double, double> golden_min_conditional(const ModelParams& p,
                                                        double lo, double hi) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = std::log(lo), b = std::log(hi);
    auto eval = [&](double t) { return s_conditional(p, QValue::of(std::exp(t))); };
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = eval(c), fd = eval(d);
    for (int it = 0; it < 80 && (b - a) > 1e-10; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = eval(d);
        }
    }
    const double t = fc < fd ? c : d;
    return {std::exp(t), std::min(fc, fd)};
}

struct QMinInfo {
    double q = 1.0;          // minimizing q (finite)
    double value = 0.0;      // S at the minimum
    bool argmin_at_grid_end = false;
    bool tail_monotone = false;  // nonincreasing over the last grid decade
};

inline QMinInfo minimize_conditional(const ModelParams& p, const QScanConfig& cfg) {
    const std::vector<double> qs = merged_q_grid(cfg);
    std::vector<double> vals(qs.size());
    std::size_t imin = 0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        vals[i] = s_conditional(p, QValue::of(qs[i]));
        if (vals[i] < vals[imin]) imin = i;
    }
    QMinInfo info;
    info.argmin_at_grid_end = imin + 1 == qs.size();
    info.tail_monotone = true;
    const double decade = qs.back() / 10.0;
    for (std::size_t i = 1; i < qs.size(); ++i)
        if (qs[i - 1] >= decade && vals[i] > vals[i - 1] + 1e-9)
            info.tail_monotone = false;
    info.q = qs[imin];
    info.value = vals[imin];
    if (cfg.refine) {
        const double lo = qs[imin > 0 ? imin - 1 : 0];
        const double hi = qs[std::min(imin + 1, qs.size() - 1)];
        if (hi > lo) {
            auto [qr, vr] = golden_min_conditional(p, lo, hi);
            if (vr < info.value) {
                info.q = qr;
                info.value = vr;
            }
        }
    }
    return info;
}

} // namespace detail

struct EntanglementDecision {
    bool entangled = false;
    std::optional<QValue> witness;  // present iff entangled
};

// Scans ascending q (grid merged with 1), then the refined minimum, then the
// infinity sign test; returns the first witnessing q found in that order.
// Grid points use the early-exit trace comparison; full values are only
// computed when nothing on the grid is negative and refinement is on.
inline EntanglementDecision is_entangled(const ModelParams& p,
                                         const QScanConfig& cfg) {
    validate(p);
    validate(cfg);
    for (const double q : detail::merged_q_grid(cfg)) {
        const bool neg = q == 1.0 ? s_conditional(p, QValue::one()) < 0.0
                                  : conditional_negative_finite(p, q);
        if (neg) return {true, QValue::of(q)};
    }
    if (cfg.refine) {
        const detail::QMinInfo m = detail::minimize_conditional(p, cfg);
        if (m.value < 0.0) return {true, QValue::of(m.q)};
    }
    if (cfg.include_infinity &&
        conditional_sign_at_infinity(p) == InfinitySign::Negative)
        return {true, QValue::infinity()};
    return {false, std::nullopt};
}

// --- closed-form q -> infinity frontier pieces ------------------------------

inline double y_star(double x, double T) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("x outside [0,1]");
    if (!(T >= 0.0)) throw DomainError("T negative");
    const double u = T == 0.0 ? 0.0 : std::exp(-1.0 / T);
    return (1.0 - x) / (3.0 - 2.0 * u * (2.0 + u - 2.0 * u * u));
}

inline double x_star(double y, double T, double alpha) {
    if (!(y >= 0.0 && y <= 1.0)) throw DomainError("y outside [0,1]");
    if (!(T >= 0.0)) throw DomainError("T negative");
    if (!(alpha >= 0.0)) throw DomainError("alpha negative");
    const double u = T == 0.0 ? 0.0 : std::exp(-1.0 / T);
    const double v = T == 0.0 ? 0.0 : std::exp(-2.0 * alpha / T);
    const double u2 = u * u;
    const double coef =
        2.0 * (1.0 - u2) * (2.0 - 3.0 * u + u * u2 - u2 * u2) - 1.0;
    return (coef * y + 1.0) / (5.0 - 4.0 * v);
}

// --- frontier in y -----------------------------------------------------------

enum class Branch { Linear, Curved };

struct FrontierPoint {
    double x = 0.0, T = 0.0, alpha = 0.0;
    double y_frontier = 0.0;
    QValue q_min = QValue::infinity();
    Branch branch = Branch::Linear;
};

struct FrontierResult {
    enum class Status { Found, NoEntangledRegion };
    Status status = Status::NoEntangledRegion;
    std::optional<FrontierPoint> point;
    bool multi_bracket = false;  // more than one sign change along y
};

inline constexpr int kFrontierScanPoints = 64;

inline FrontierResult frontier_y(double x, double T, double alpha,
                                 const QScanConfig& cfg, double tol = 1e-8) {
    validate(ModelParams{x, 0.0, T, alpha});
    validate(cfg);
    if (!(tol > 0.0)) throw DomainError("tol must be positive");
    const double ymax = 1.0 - x;
    FrontierResult res;
    if (ymax <= 0.0) return res;

    auto entangled_at = [&](double y) {
        return is_entangled(ModelParams{x, y, T, alpha}, cfg).entangled;
    };

    const int n = kFrontierScanPoints;
    std::vector<bool> flag(n + 1);
    bool any = false;
    for (int i = 0; i <= n; ++i) {
        flag[i] = entangled_at(ymax * double(i) / double(n));
        any = any || flag[i];
    }
    if (!any) return res;

    int changes = 0, first_bracket = -1;
    for (int i = 0; i < n; ++i) {
        if (flag[i] != flag[i + 1]) ++changes;
        if (first_bracket < 0 && !flag[i] && flag[i + 1]) first_bracket = i;
    }
    res.multi_bracket = changes > 1;

    double lo = 0.0, hi = 0.0;
    if (flag[0]) {
        hi = 0.0;  // degenerate: entangled from y = 0; report the edge
    } else {
        lo = ymax * double(first_bracket) / double(n);
        hi = ymax * double(first_bracket + 1) / double(n);
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            (entangled_at(mid) ? hi : lo) = mid;
        }
    }
    const double yf = 0.5 * (lo + hi);

    // branch and q_min, probed just inside the entangled side
    const double yprobe = std::min(yf + 1e-6, ymax);
    const ModelParams probe{x, yprobe, T, alpha};
    const detail::QMinInfo m = detail::minimize_conditional(probe, cfg);
    const bool linear = m.argmin_at_grid_end && m.tail_monotone &&
                        conditional_sign_at_infinity(probe) == InfinitySign::Negative;

    FrontierPoint pt;
    pt.x = x;
    pt.T = T;
    pt.alpha = alpha;
    pt.y_frontier = yf;
    pt.branch = linear ? Branch::Linear : Branch::Curved;
    pt.q_min = linear ? QValue::infinity() : QValue::of(m.q);
    res.status = FrontierResult::Status::Found;
    res.point = pt;
    return res;
}

// --- critical temperature ----------------------------------------------------

struct TCriticalResult {
    bool never_entangled = false;
    double t_c = 0.0;
};

// Largest T at which an entangled region survives, by coarse scan over
// [0, t_max] (re-entrant lobes wider than the scan step are caught) followed
// by bisection of the last existing bracket.
inline TCriticalResult t_critical(double x, double alpha, const QScanConfig& cfg,
                                  double tol = 1e-6, double t_max = 20.0) {
    validate(ModelParams{x, 0.0, 0.0, alpha});
    const double ymax = 1.0 - x;
    if (ymax <= 0.0) return {true, 0.0};

    // existence short-circuits from the border x+y=1 down, where the region
    // survives longest; refinement is skipped here (bracket endpoints are
    // far from the q-grid resolution limit)
    QScanConfig fast = cfg;
    fast.refine = false;
    auto exists = [&](double T) {
        for (int i = kFrontierScanPoints; i >= 1; --i) {
            const double y = ymax * double(i) / double(kFrontierScanPoints);
            if (is_entangled(ModelParams{x, y, T, alpha}, fast).entangled)
                return true;
        }
        return false;
    };

    if (!exists(0.0)) return {true, 0.0};

    const int scan = 200;
    while (exists(t_max)) {
        t_max *= 2.0;
        if (t_max > 200.0)
            throw NonConvergence("t_critical: region persists beyond T = 200");
    }
    int last = -1;
    for (int k = scan - 1; k >= 0; --k) {
        if (exists(t_max * double(k) / double(scan))) {
            last = k;
            break;
        }
    }
    double lo = t_max * double(last) / double(scan);
    double hi = t_max * double(last + 1) / double(scan);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (exists(mid) ? lo : hi) = mid;
    }
    return {false, 0.5 * (lo + hi)};
}

// --- surface sweep -----------------------------------------------------------

struct SweepNode {
    double x = 0.0, T = 0.0, alpha = 0.0;
    FrontierResult result;
    std::string error;  // nonempty if the node evaluation threw
};

struct VertexPoint {
    double T = 0.0;
    double x_switch = 0.0;  // x where the branch label flips along the row
};

struct SweepResult {
    std::vector<SweepNode> nodes;  // ordered by (T, then x), fixed regardless
                                   // of parallelism
    std::vector<VertexPoint> vertex_locus;
};

// One frontier_y solve per (x, T) node at fixed alpha.  Nodes are evaluated
// by a worker pool and written by index, so the output order is
// deterministic for any parallelism degree.
inline SweepResult sweep_surface(const std::vector<double>& xs,
                                 const std::vector<double>& Ts, double alpha,
                                 const QScanConfig& cfg, double tol = 1e-8,
                                 int parallelism = 1,
                                 bool with_vertex_locus = true) {
    if (parallelism < 1) throw DomainError("parallelism must be >= 1");
    SweepResult out;
    out.nodes.resize(xs.size() * Ts.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= out.nodes.size()) return;
            const double T = Ts[k / xs.size()];
            const double x = xs[k % xs.size()];
            SweepNode& node = out.nodes[k];
            node.x = x;
            node.T = T;
            node.alpha = alpha;
            try {
                node.result = frontier_y(x, T, alpha, cfg, tol);
            } catch (const std::exception& e) {
                node.error = e.what();
            }
        }
    };
    if (parallelism == 1 || out.nodes.size() < 2) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int nthreads = std::min<std::size_t>(parallelism, out.nodes.size());
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    if (!with_vertex_locus) return out;

    // vertex locus: per T row, bisect each adjacent pair of solved nodes
    // whose branch labels differ
    auto branch_at = [&](double x, double T) -> std::optional<Branch> {
        const FrontierResult r = frontier_y(x, T, alpha, cfg, tol);
        if (r.status != FrontierResult::Status::Found) return std::nullopt;
        return r.point->branch;
    };
    for (std::size_t row = 0; row < Ts.size(); ++row) {
        const double T = Ts[row];
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            const SweepNode& a = out.nodes[row * xs.size() + i];
            const SweepNode& b = out.nodes[row * xs.size() + i + 1];
            if (!a.error.empty() || !b.error.empty()) continue;
            if (a.result.status != FrontierResult::Status::Found ||
                b.result.status != FrontierResult::Status::Found)
                continue;
            if (a.result.point->branch == b.result.point->branch) continue;
            double lo = a.x, hi = b.x;
            const Branch blo = a.result.point->branch;
            for (int it = 0; it < 12; ++it) {
                const double mid = 0.5 * (lo + hi);
                const auto bm = branch_at(mid, T);
                if (bm && *bm == blo)
                    lo = mid;
                else
                    hi = mid;
            }
            out.vertex_locus.push_back({T, 0.5 * (lo + hi)});
        }
    }
    return out;
}

} // namespace qsep
