#pragma once

// figures.hpp — plot-ready data presets.
//
// Each preset emits one flat table; plotting is external.
//
//   fig1  S_q(A|B) over the (x,y) simplex, alpha=1, T=0.1, several q
//   fig2  S_q(A|B) over the (x,y) simplex, alpha=1, q=5, several T
//   fig3  the zero line of S_q(A|B) in (y,q), T=0.5, alpha=1, several x
//   fig4  frontier y(x) for several T, alpha in {0.1, 1, 5}, with the
//         vertex locus where the branch label switches
//   fig5  frontier y(T) for several x, alpha in {0.1, 1}

#include <string>
#include <vector>

#include "qsep/criterion.hpp"
#include "qsep/io.hpp"

namespace qsep {

namespace detail {

inline Cell qmin_cell(const FrontierPoint& pt) {
    return pt.q_min.is_infinity() ? Cell::label("inf") : Cell::number(pt.q_min.value());
}

inline Cell branch_cell(const FrontierPoint& pt) {
    return Cell::label(pt.branch == Branch::Linear ? "linear" : "curved");
}

// simplex grid values 0, 1/(n-1), ..., 1
inline std::vector<double> unit_grid(int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = double(i) / double(n - 1);
    return g;
}

// smallest y in (0, 1-x] with S_q(A|B) < 0, if any
inline std::optional<double> zero_line_y(double x, double T, double alpha,
                                         const QValue& q, double tol = 1e-6) {
    const double ymax = 1.0 - x;
    auto neg = [&](double y) {
        const ModelParams p{x, y, T, alpha};
        return q.is_one() ? s_conditional(p, q) < 0.0
                          : conditional_negative_finite(p, q.value());
    };
    const int n = 64;
    int bracket = -1;
    for (int i = 0; i < n; ++i) {
        if (!neg(ymax * double(i) / n) && neg(ymax * double(i + 1) / n)) {
            bracket = i;
            break;
        }
    }
    if (bracket < 0) return std::nullopt;
    double lo = ymax * double(bracket) / n, hi = ymax * double(bracket + 1) / n;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (neg(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

inline std::vector<std::string> figure_names() {
    return {"fig1", "fig2", "fig3", "fig4", "fig5"};
}

inline Table figure_table(const std::string& name, int parallelism = 1) {
    Table t;
    const QScanConfig cfg;
    if (name == "fig1" || name == "fig2") {
        const bool by_q = name == "fig1";
        t.columns = {by_q ? "q" : "T", "x", "y", "s_conditional"};
        const std::vector<double> outer =
            by_q ? std::vector<double>{0.5, 1.0, 2.5, 5.0, 10.0}
                 : std::vector<double>{0.1, 0.3, 0.5, 1.0};
        const std::vector<double> grid = detail::unit_grid(41);
        for (double o : outer)
            for (double x : grid)
                for (double y : grid) {
                    if (x + y > 1.0) continue;
                    const ModelParams p{x, y, by_q ? 0.1 : o, 1.0};
                    const QValue q = QValue::of(by_q ? o : 5.0);
                    auto& row = t.add_row();
                    row[0] = Cell::number(o);
                    row[1] = Cell::number(x);
                    row[2] = Cell::number(y);
                    row[3] = Cell::number(s_conditional(p, q));
                }
        return t;
    }
    if (name == "fig3") {
        t.columns = {"x", "q", "y_zero"};
        std::vector<double> qs = default_q_grid();
        qs.push_back(1.0);
        std::sort(qs.begin(), qs.end());
        for (double x : {0.0, 0.2, 0.4, 0.6})
            for (double q : qs) {
                auto& row = t.add_row();
                row[0] = Cell::number(x);
                row[1] = Cell::number(q);
                const auto y0 = detail::zero_line_y(x, 0.5, 1.0, QValue::of(q));
                row[2] = y0 ? Cell::number(*y0) : Cell::empty();
            }
        return t;
    }
    if (name == "fig4") {
        t.columns = {"alpha", "kind", "status", "x", "T",
                     "y_frontier", "q_min", "branch"};
        std::vector<double> xs(20);
        for (int i = 0; i < 20; ++i) xs[i] = 0.95 * double(i) / 19.0;
        const std::vector<double> Ts{0.0, 0.3, 0.6, 0.9, 1.2};
        for (double alpha : {0.1, 1.0, 5.0}) {
            const SweepResult sw = sweep_surface(xs, Ts, alpha, cfg, 1e-8, parallelism);
            for (const SweepNode& nd : sw.nodes) {
                auto& row = t.add_row();
                row[0] = Cell::number(alpha);
                row[1] = Cell::label("node");
                row[3] = Cell::number(nd.x);
                row[4] = Cell::number(nd.T);
                if (!nd.error.empty()) {
                    row[2] = Cell::label("error");
                } else if (nd.result.status == FrontierResult::Status::Found) {
                    row[2] = Cell::label("found");
                    row[5] = Cell::number(nd.result.point->y_frontier);
                    row[6] = detail::qmin_cell(*nd.result.point);
                    row[7] = detail::branch_cell(*nd.result.point);
                } else {
                    row[2] = Cell::label("none");
                }
            }
            for (const VertexPoint& v : sw.vertex_locus) {
                auto& row = t.add_row();
                row[0] = Cell::number(alpha);
                row[1] = Cell::label("vertex");
                row[2] = Cell::label("found");
                row[3] = Cell::number(v.x_switch);
                row[4] = Cell::number(v.T);
            }
        }
        return t;
    }
    if (name == "fig5") {
        t.columns = {"alpha", "x", "T", "status", "y_frontier", "branch"};
        std::vector<double> Ts(41);
        for (int i = 0; i < 41; ++i) Ts[i] = 2.0 * double(i) / 40.0;
        for (double alpha : {0.1, 1.0})
            for (double x : {0.0, 0.3, 0.6}) {
                const SweepResult sw = sweep_surface({x}, Ts, alpha, cfg, 1e-8,
                                                     parallelism, false);
                for (const SweepNode& nd : sw.nodes) {
                    auto& row = t.add_row();
                    row[0] = Cell::number(alpha);
                    row[1] = Cell::number(nd.x);
                    row[2] = Cell::number(nd.T);
                    if (!nd.error.empty()) {
                        row[3] = Cell::label("error");
                    } else if (nd.result.status == FrontierResult::Status::Found) {
                        row[3] = Cell::label("found");
                        row[4] = Cell::number(nd.result.point->y_frontier);
                        row[5] = detail::branch_cell(*nd.result.point);
                    } else {
                        row[3] = Cell::label("none");
                    }
                }
            }
        return t;
    }
    throw DomainError("unknown figure preset '" + name + "'");
}

} // namespace qsep
