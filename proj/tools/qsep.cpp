// qsep — CLI for the bipartite-oscillator separability criterion.
//
// Subcommands: eval, scan-q, frontier, sweep, tcrit, verify, figure.
// Exit codes: 0 ok, 1 verification failure, 2 domain error, 3 numerical
// non-convergence.  Output is deterministic: reruns with the same flags are
// byte-identical, and --parallel N matches serial output exactly.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qsep/criterion.hpp"
#include "qsep/entropy.hpp"
#include "qsep/errors.hpp"
#include "qsep/figures.hpp"
#include "qsep/io.hpp"
#include "qsep/model.hpp"
#include "qsep/oracle.hpp"
#include "qsep/verify.hpp"

namespace {

using namespace qsep;

int default_parallelism() {
    if (const char* env = std::getenv("QSEP_PARALLEL")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

struct OutputOptions {
    std::string format = "csv";  // csv | json
    std::string path;            // empty = stdout
};

void add_output_flags(CLI::App* cmd, OutputOptions* out) {
    cmd->add_option("--format", out->format, "Output format (csv or json)")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--output", out->path, "Write to file instead of stdout");
}

void emit(const Table& t, const OutputOptions& out) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out.path.empty()) {
        file.open(out.path, std::ios::binary);
        if (!file) throw DomainError("cannot open output path '" + out.path + "'");
        os = &file;
    }
    if (out.format == "json")
        write_json(t, *os);
    else
        write_csv(t, *os);
}

QValue parse_q(const std::string& s) {
    if (s == "inf" || s == "infinity") return QValue::infinity();
    double q = 0.0;
    try {
        q = std::stod(s);
    } catch (const std::exception&) {
        throw DomainError("q must be a positive number, 1, or 'inf'");
    }
    return QValue::of(q);
}

std::string sign_label(InfinitySign s) {
    switch (s) {
        case InfinitySign::Negative: return "negative";
        case InfinitySign::Positive: return "positive";
        case InfinitySign::Tie: return "tie";
    }
    return "";
}

// ---- eval -------------------------------------------------------------------

int cmd_eval(const ModelParams& params, const std::string& q_str, double tol,
             const OutputOptions& out) {
    validate(params);
    const QValue q = parse_q(q_str);
    if (q.is_infinity()) {
        const InfinitySign s = conditional_sign_at_infinity(params);
        if (out.format == "json" || !out.path.empty()) {
            Table t;
            t.columns = {"s_conditional_sign"};
            t.add_row()[0] = Cell::label(sign_label(s));
            emit(t, out);
        } else {
            std::cout << "s_conditional_sign=" << sign_label(s) << "\n";
        }
        return 0;
    }
    const EntropyReport rep = entropy_report(params, q, tol);
    Table t;
    t.columns = {"tr_joint_q", "tr_marginal_q", "s_joint",
                 "s_marginal", "s_conditional", "truncation_error"};
    auto& row = t.add_row();
    row[0] = Cell::number(rep.tr_joint_q);
    row[1] = Cell::number(rep.tr_marginal_q);
    row[2] = Cell::number(rep.s_joint);
    row[3] = Cell::number(rep.s_marginal);
    row[4] = Cell::number(rep.s_conditional);
    row[5] = Cell::number(rep.truncation_error);
    if (out.format == "json" || !out.path.empty()) {
        emit(t, out);
    } else {
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            std::cout << t.columns[i] << "=" << format_cell(t.rows[0][i]) << "\n";
    }
    return 0;
}

// ---- scan-q -----------------------------------------------------------------

int cmd_scan_q(const ModelParams& params, const QScanConfig& cfg,
               const OutputOptions& out) {
    validate(params);
    validate(cfg);
    std::vector<double> qs = cfg.q_grid;
    qs.push_back(1.0);
    std::sort(qs.begin(), qs.end());

    std::vector<double> vals(qs.size());
    std::size_t imin = 0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        vals[i] = s_conditional(params, QValue::of(qs[i]));
        if (vals[i] < vals[imin]) imin = i;
    }
    const InfinitySign isign = conditional_sign_at_infinity(params);
    bool qmin_at_infinity = false;
    if (cfg.include_infinity) {
        const detail::QMinInfo m = detail::minimize_conditional(params, cfg);
        qmin_at_infinity = m.argmin_at_grid_end && m.tail_monotone &&
                           isign == InfinitySign::Negative;
    }

    Table t;
    t.columns = {"q", "s_conditional", "sign", "is_qmin"};
    for (std::size_t i = 0; i < qs.size(); ++i) {
        auto& row = t.add_row();
        row[0] = Cell::number(qs[i]);
        row[1] = Cell::number(vals[i]);
        row[2] = Cell::label(vals[i] < 0.0 ? "negative"
                             : vals[i] > 0.0 ? "positive" : "zero");
        row[3] = Cell::count(!qmin_at_infinity && i == imin ? 1 : 0);
    }
    if (cfg.include_infinity) {
        auto& row = t.add_row();
        row[0] = Cell::label("inf");
        row[1] = Cell::empty();
        row[2] = Cell::label(sign_label(isign));
        row[3] = Cell::count(qmin_at_infinity ? 1 : 0);
    }
    emit(t, out);
    return 0;
}

// ---- frontier / sweep -------------------------------------------------------

Table sweep_table(const SweepResult& sw, double alpha, bool with_vertices) {
    Table t;
    t.columns = {"kind", "status", "x", "T", "alpha", "y_frontier",
                 "q_min", "branch", "multi_bracket", "error"};
    for (const SweepNode& nd : sw.nodes) {
        auto& row = t.add_row();
        row[0] = Cell::label("node");
        row[2] = Cell::number(nd.x);
        row[3] = Cell::number(nd.T);
        row[4] = Cell::number(nd.alpha);
        if (!nd.error.empty()) {
            row[1] = Cell::label("error");
            row[9] = Cell::label(nd.error);
            continue;
        }
        if (nd.result.status == FrontierResult::Status::Found) {
            const FrontierPoint& pt = *nd.result.point;
            row[1] = Cell::label("found");
            row[5] = Cell::number(pt.y_frontier);
            row[6] = pt.q_min.is_infinity() ? Cell::label("inf")
                                            : Cell::number(pt.q_min.value());
            row[7] = Cell::label(pt.branch == Branch::Linear ? "linear" : "curved");
        } else {
            row[1] = Cell::label("none");
        }
        row[8] = Cell::count(nd.result.multi_bracket ? 1 : 0);
    }
    if (with_vertices)
        for (const VertexPoint& v : sw.vertex_locus) {
            auto& row = t.add_row();
            row[0] = Cell::label("vertex");
            row[1] = Cell::label("found");
            row[2] = Cell::number(v.x_switch);
            row[3] = Cell::number(v.T);
            row[4] = Cell::number(alpha);
        }
    return t;
}

int cmd_frontier(double alpha, std::optional<double> fixed_T,
                 const std::string& x_grid, std::optional<double> fixed_x,
                 const std::string& t_grid, double tol, int parallel,
                 const OutputOptions& out) {
    const bool x_mode = !x_grid.empty();
    if (x_mode == !t_grid.empty())
        throw DomainError("provide exactly one of --x-grid (with --T) or "
                          "--T-grid (with --x)");
    std::vector<double> xs, Ts;
    if (x_mode) {
        if (!fixed_T) throw DomainError("--x-grid requires --T");
        xs = GridSpec::parse(x_grid).points();
        Ts = {*fixed_T};
    } else {
        if (!fixed_x) throw DomainError("--T-grid requires --x");
        xs = {*fixed_x};
        Ts = GridSpec::parse(t_grid).points();
    }
    for (double x : xs) validate(ModelParams{x, 0.0, Ts.front(), alpha});
    for (double T : Ts) validate(ModelParams{xs.front(), 0.0, T, alpha});

    const QScanConfig cfg;
    const SweepResult sw =
        sweep_surface(xs, Ts, alpha, cfg, tol, parallel, x_mode);
    emit(sweep_table(sw, alpha, x_mode), out);
    bool total_failure = !sw.nodes.empty();
    for (const SweepNode& nd : sw.nodes)
        if (nd.error.empty()) total_failure = false;
    return total_failure ? 3 : 0;
}

int cmd_sweep(double alpha, const std::string& x_grid, const std::string& t_grid,
              double tol, int parallel, bool vertices, const OutputOptions& out) {
    const std::vector<double> xs = GridSpec::parse(x_grid).points();
    const std::vector<double> Ts = GridSpec::parse(t_grid).points();
    for (double x : xs) validate(ModelParams{x, 0.0, Ts.front(), alpha});
    for (double T : Ts) validate(ModelParams{xs.front(), 0.0, T, alpha});
    const QScanConfig cfg;
    const SweepResult sw = sweep_surface(xs, Ts, alpha, cfg, tol, parallel, vertices);
    emit(sweep_table(sw, alpha, vertices), out);
    bool total_failure = !sw.nodes.empty();
    for (const SweepNode& nd : sw.nodes)
        if (nd.error.empty()) total_failure = false;
    return total_failure ? 3 : 0;
}

// ---- tcrit ------------------------------------------------------------------

int cmd_tcrit(double x, double alpha, double tol, double t_max,
              const OutputOptions& out) {
    const QScanConfig cfg;
    const TCriticalResult tc = t_critical(x, alpha, cfg, tol, t_max);
    Table t;
    t.columns = {"x", "alpha", "status", "t_critical"};
    auto& row = t.add_row();
    row[0] = Cell::number(x);
    row[1] = Cell::number(alpha);
    row[2] = Cell::label(tc.never_entangled ? "never-entangled" : "found");
    row[3] = tc.never_entangled ? Cell::empty() : Cell::number(tc.t_c);
    if (out.format == "json" || !out.path.empty()) {
        emit(t, out);
    } else if (tc.never_entangled) {
        std::cout << "never_entangled\n";
    } else {
        std::cout << "t_critical=" << format_number(tc.t_c) << "\n";
    }
    return 0;
}

// ---- dump -------------------------------------------------------------------

int cmd_dump(const ModelParams& params, int n_levels, double tol,
             const std::string& transpose, const OutputOptions& out) {
    validate(params);
    int n = n_levels;
    if (n == 0) {
        const auto chosen = smallest_truncation(params, tol);
        if (!chosen)
            throw NonConvergence("no truncation under the cap meets the tail bound");
        n = *chosen;
    }
    const TruncatedState st = materialize(params, n, tol);
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out.path.empty()) {
        file.open(out.path, std::ios::binary);
        if (!file) throw DomainError("cannot open output path '" + out.path + "'");
        os = &file;
    }
    if (transpose == "none")
        dump_triplets(st.matrix, *os);
    else
        dump_triplets(partial_transpose(st, transpose == "A" ? Subsystem::A
                                                             : Subsystem::B),
                      *os);
    return 0;
}

// ---- verify -----------------------------------------------------------------

int cmd_verify(std::uint64_t seed, int samples, int cap) {
    verify::Options opt;
    opt.seed = seed;
    opt.samples = samples;
    opt.truncation_cap = cap;
    const std::vector<verify::PropertyResult> results = verify::run_all(opt);
    bool all_pass = true;
    for (const auto& r : results) {
        if (r.passed()) {
            std::printf("PASS %-26s (%lld checks)\n", r.name.c_str(), r.checks);
        } else {
            all_pass = false;
            std::printf("FAIL %-26s (%lld of %lld checks failed): %s\n",
                        r.name.c_str(), r.failures, r.checks,
                        r.first_failure.c_str());
        }
    }
    if (!all_pass) {
        for (const auto& r : results)
            if (!r.passed()) {
                std::printf("first failing property: %s :: %s\n", r.name.c_str(),
                            r.first_failure.c_str());
                break;
            }
    }
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tsallis conditional-entropy separability frontier for a "
                 "two-oscillator mixture"};
    app.require_subcommand(1);

    ModelParams params;
    std::string q_str = "2";
    double tol = kDefaultSeriesTol;
    OutputOptions out;

    auto add_point_flags = [&](CLI::App* cmd) {
        cmd->add_option("--x", params.x, "Diagonal-state concentration")->required();
        cmd->add_option("--y", params.y, "Antisymmetric-state concentration")->required();
        cmd->add_option("--T", params.T, "Thermal noise parameter")->required();
        cmd->add_option("--alpha", params.alpha, "Diagonal-noise ratio")->required();
    };

    CLI::App* eval = app.add_subcommand("eval", "Entropy report at one point");
    add_point_flags(eval);
    eval->add_option("--q", q_str, "Entropic index (positive real, 1, or inf)");
    eval->add_option("--tol", tol, "Relative series tolerance");
    add_output_flags(eval, &out);

    CLI::App* scan = app.add_subcommand("scan-q", "S_q(A|B) over a q grid");
    add_point_flags(scan);
    double q_lo = 0.1, q_hi = 100.0;
    int q_points = 60;
    bool no_refine = false, no_infinity = false;
    scan->add_option("--q-min", q_lo, "Smallest grid q");
    scan->add_option("--q-max", q_hi, "Largest grid q");
    scan->add_option("--q-points", q_points, "Number of grid points")
        ->check(CLI::Range(2, 100000));
    scan->add_flag("--no-refine", no_refine, "Skip golden-section refinement");
    scan->add_flag("--no-infinity", no_infinity, "Skip the q=infinity row");
    add_output_flags(scan, &out);

    CLI::App* frontier = app.add_subcommand(
        "frontier", "Boundary y(x) at fixed T, or y(T) at fixed x");
    double f_alpha = 1.0, f_tol = 1e-8;
    std::optional<double> f_T, f_x;
    std::string f_xgrid, f_tgrid;
    int parallel = default_parallelism();
    frontier->add_option("--alpha", f_alpha, "Diagonal-noise ratio")->required();
    frontier->add_option("--T", f_T, "Fixed T (with --x-grid)");
    frontier->add_option("--x", f_x, "Fixed x (with --T-grid)");
    frontier->add_option("--x-grid", f_xgrid, "start:end:count over x");
    frontier->add_option("--T-grid", f_tgrid, "start:end:count over T");
    frontier->add_option("--tol", f_tol, "Bisection tolerance in y");
    frontier->add_option("--parallel", parallel, "Worker threads")
        ->check(CLI::Range(1, 4096));
    add_output_flags(frontier, &out);

    CLI::App* sweep = app.add_subcommand("sweep", "Frontier over an (x,T) grid");
    double s_alpha = 1.0, s_tol = 1e-8;
    std::string s_xgrid, s_tgrid;
    bool s_novertices = false;
    sweep->add_option("--alpha", s_alpha, "Diagonal-noise ratio")->required();
    sweep->add_option("--x-grid", s_xgrid, "start:end:count over x")->required();
    sweep->add_option("--T-grid", s_tgrid, "start:end:count over T")->required();
    sweep->add_option("--tol", s_tol, "Bisection tolerance in y");
    sweep->add_option("--parallel", parallel, "Worker threads")
        ->check(CLI::Range(1, 4096));
    sweep->add_flag("--no-vertices", s_novertices, "Skip the vertex locus");
    add_output_flags(sweep, &out);

    CLI::App* tcrit = app.add_subcommand(
        "tcrit", "Largest T with a surviving entangled region");
    double tc_x = 0.0, tc_alpha = 1.0, tc_tol = 1e-6, tc_tmax = 20.0;
    tcrit->add_option("--x", tc_x, "Diagonal-state concentration")->required();
    tcrit->add_option("--alpha", tc_alpha, "Diagonal-noise ratio")->required();
    tcrit->add_option("--tol", tc_tol, "Bisection tolerance in T");
    tcrit->add_option("--t-max", tc_tmax, "Initial scan ceiling");
    add_output_flags(tcrit, &out);

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Cross-validation suite (closed forms vs "
                           "oracle, PPT containment, identities)");
    std::uint64_t v_seed = 12345;
    int v_samples = 40, v_cap = 64;
    verify_cmd->add_option("--seed", v_seed, "Random seed");
    verify_cmd->add_option("--samples", v_samples, "Points per property")
        ->check(CLI::Range(1, 100000));
    verify_cmd->add_option("--cap", v_cap, "Oracle truncation cap")
        ->check(CLI::Range(4, 512));

    CLI::App* dump = app.add_subcommand(
        "dump", "Materialized state as row/col/value triplets");
    int d_levels = 0;
    double d_tol = 1e-10;
    std::string d_transpose = "none";
    add_point_flags(dump);
    dump->add_option("--n-levels", d_levels,
                     "Truncation per oscillator (0 = from the tail bound)")
        ->check(CLI::Range(0, 4096));
    dump->add_option("--tol", d_tol, "Tail-weight tolerance");
    dump->add_option("--transpose", d_transpose,
                     "Dump the partial transpose over A or B instead")
        ->check(CLI::IsMember({"none", "A", "B"}));
    dump->add_option("--output", out.path, "Write to file instead of stdout");

    CLI::App* figure = app.add_subcommand("figure", "Plot-ready data presets");
    std::string preset;
    figure->add_option("--preset", preset, "fig1 | fig2 | fig3 | fig4 | fig5")
        ->required()
        ->check(CLI::IsMember(figure_names()));
    figure->add_option("--parallel", parallel, "Worker threads")
        ->check(CLI::Range(1, 4096));
    add_output_flags(figure, &out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(eval)) return cmd_eval(params, q_str, tol, out);
        if (app.got_subcommand(scan)) {
            QScanConfig cfg;
            cfg.q_grid = default_q_grid(q_points, q_lo, q_hi);
            cfg.refine = !no_refine;
            cfg.include_infinity = !no_infinity;
            return cmd_scan_q(params, cfg, out);
        }
        if (app.got_subcommand(frontier))
            return cmd_frontier(f_alpha, f_T, f_xgrid, f_x, f_tgrid, f_tol,
                                parallel, out);
        if (app.got_subcommand(sweep))
            return cmd_sweep(s_alpha, s_xgrid, s_tgrid, s_tol, parallel,
                             !s_novertices, out);
        if (app.got_subcommand(tcrit))
            return cmd_tcrit(tc_x, tc_alpha, tc_tol, tc_tmax, out);
        if (app.got_subcommand(dump))
            return cmd_dump(params, d_levels, d_tol, d_transpose, out);
        if (app.got_subcommand(verify_cmd))
            return cmd_verify(v_seed, v_samples, v_cap);
        if (app.got_subcommand(figure)) {
            emit(figure_table(preset, parallel), out);
            return 0;
        }
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const NonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
