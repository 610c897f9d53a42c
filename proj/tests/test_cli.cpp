// End-to-end checks of the qsep binary; the path comes from QSEP_BIN
// (set by ctest).  Exercises exit codes, output determinism, and the
// --parallel N == serial guarantee.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

const char* cli_bin() { return std::getenv("QSEP_BIN"); }

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(cli_bin()) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    RunResult r;
    r.output = out;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

} // namespace

TEST_CASE("eval prints the report and exits 0") {
    if (!cli_bin()) return;
    const RunResult r = run("eval --x 0 --y 0 --T 1 --alpha 1 --q 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("s_conditional=0.5") != std::string::npos);
}

TEST_CASE("eval at the EPR point") {
    if (!cli_bin()) return;
    const RunResult r = run("eval --x 0 --y 1 --T 0 --alpha 1 --q 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("s_conditional=-1") != std::string::npos);
}

TEST_CASE("domain errors exit 2 and name the constraint") {
    if (!cli_bin()) return;
    CHECK(run("eval --x 0.5 --y 0.6 --T 1 --alpha 1 --q 2").exit_code == 2);
    CHECK(run("eval --x 0.5 --y 0 --T 1 --alpha 0 --q 2").exit_code == 2);
}

TEST_CASE("eval --q inf reports the sign only") {
    if (!cli_bin()) return;
    const RunResult r = run("eval --x 0 --y 0.5 --T 0 --alpha 1 --q inf");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("s_conditional_sign=negative") != std::string::npos);
}

TEST_CASE("scan-q emits the q=1 and q=inf rows and reruns byte-identically") {
    if (!cli_bin()) return;
    const std::string args = "scan-q --x 0 --y 0.4 --T 0.5 --alpha 1";
    const RunResult a = run(args);
    const RunResult b = run(args);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("\r\n1,") != std::string::npos);
    CHECK(a.output.find("inf,") != std::string::npos);
    CHECK(a.output.find(",1\r\n") != std::string::npos);  // some row is flagged
}

TEST_CASE("scan-q shows the monotone negative tail just above y*") {
    if (!cli_bin()) return;
    // y*(0, 0.5) = 0.4112: below it every row is nonnegative, above it the
    // tail turns negative and the infinity row carries the q_min flag
    const RunResult below = run("scan-q --x 0 --y 0.4 --T 0.5 --alpha 1");
    CHECK(below.exit_code == 0);
    CHECK(below.output.find("negative") == std::string::npos);
    const RunResult above = run("scan-q --x 0 --y 0.42 --T 0.5 --alpha 1");
    CHECK(above.output.find("negative") != std::string::npos);
    CHECK(above.output.find("inf,,negative,1") != std::string::npos);
}

TEST_CASE("scan-q flags an interior finite q_min at large x") {
    if (!cli_bin()) return;
    const RunResult r = run("scan-q --x 0.6 --y 0.35 --T 0.5 --alpha 1");
    CHECK(r.exit_code == 0);
    std::istringstream is(r.output);
    std::string line, flagged;
    while (std::getline(is, line))
        if (line.size() > 2 && line.substr(line.size() - 2) == "1\r") flagged = line;
    REQUIRE(!flagged.empty());
    CHECK(flagged.rfind("inf,", 0) != 0);  // minimum is at a finite q
    const double qmin = std::stod(flagged);
    CHECK(qmin > 1.0);
    CHECK(qmin < 100.0);
}

TEST_CASE("frontier over an x grid matches the T=0 line") {
    if (!cli_bin()) return;
    const RunResult r = run("frontier --T 0 --alpha 1 --x-grid 0:0.9:10");
    CHECK(r.exit_code == 0);
    std::istringstream is(r.output);
    std::string line;
    std::getline(is, line);  // header
    int found = 0;
    while (std::getline(is, line)) {
        if (line.rfind("node,found", 0) != 0) continue;
        ++found;
        // columns: kind,status,x,T,alpha,y_frontier,...
        std::istringstream ls(line);
        std::string tok;
        for (int i = 0; i < 3; ++i) std::getline(ls, tok, ',');
        const double x = std::stod(tok);
        for (int i = 0; i < 3; ++i) std::getline(ls, tok, ',');
        const double y = std::stod(tok);
        CHECK(std::abs(y - (1.0 - x) / 3.0) <= 1e-6);
    }
    CHECK(found == 10);
}

TEST_CASE("frontier over a T grid goes empty above the critical temperature") {
    if (!cli_bin()) return;
    const RunResult r = run("frontier --x 0 --alpha 1 --T-grid 0:1.6:17");
    CHECK(r.exit_code == 0);
    std::istringstream is(r.output);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        if (line.rfind("node,", 0) != 0) continue;
        std::istringstream ls(line);
        std::string kind, status, xs, ts;
        std::getline(ls, kind, ',');
        std::getline(ls, status, ',');
        std::getline(ls, xs, ',');
        std::getline(ls, ts, ',');
        const double T = std::stod(ts);
        if (T > 1.4427)
            CHECK(status == "none");
        else
            CHECK(status == "found");
    }
}

TEST_CASE("parallel output is byte-identical to serial") {
    if (!cli_bin()) return;
    const std::string base = "sweep --alpha 1 --x-grid 0:0.6:4 --T-grid 0.2:0.8:2";
    const RunResult s = run(base + " --parallel 1");
    const RunResult p = run(base + " --parallel 3");
    CHECK(s.exit_code == 0);
    CHECK(s.output == p.output);
    CHECK(!s.output.empty());
}

TEST_CASE("tcrit finds 1/ln 2 at x=0") {
    if (!cli_bin()) return;
    const RunResult r = run("tcrit --x 0 --alpha 1");
    CHECK(r.exit_code == 0);
    REQUIRE(r.output.rfind("t_critical=", 0) == 0);
    const double tc = std::stod(r.output.substr(11));
    CHECK(std::abs(tc - 1.4426950408889634) <= 1e-6);
}

TEST_CASE("verify subcommand passes on a small sample") {
    if (!cli_bin()) return;
    const RunResult r = run("verify --seed 7 --samples 4");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("FAIL") == std::string::npos);
}

TEST_CASE("json output is an array of flat records") {
    if (!cli_bin()) return;
    const RunResult r =
        run("eval --x 0 --y 0 --T 1 --alpha 1 --q 2 --format json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"s_conditional\": 0.5") != std::string::npos);
}

TEST_CASE("dump emits row/col/value triplets") {
    if (!cli_bin()) return;
    const RunResult r = run("dump --x 0 --y 1 --T 0 --alpha 1");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "1 1 0.5\n1 2 -0.5\n2 1 -0.5\n2 2 0.5\n");
    const RunResult pt = run("dump --x 0 --y 1 --T 0 --alpha 1 --transpose B");
    CHECK(pt.exit_code == 0);
    CHECK(pt.output.find("0 3 -0.5") != std::string::npos);
}

TEST_CASE("output file writing") {
    if (!cli_bin()) return;
    const std::string path = "/tmp/qsep_cli_test_out.csv";
    std::remove(path.c_str());
    const RunResult r = run("scan-q --x 0 --y 0.2 --T 0.3 --alpha 1 --output " + path);
    CHECK(r.exit_code == 0);
    std::ifstream f(path);
    REQUIRE(f.good());
    std::string header;
    std::getline(f, header);
    CHECK(header.rfind("q,s_conditional,sign,is_qmin", 0) == 0);
    std::remove(path.c_str());
}
