#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bbfs/cli.hpp"
#include "bbfs/errors.hpp"

using namespace bbfs;
namespace fs = std::filesystem;

namespace {

fs::path tmp_root() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "bbfs_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream f(p);
    f << text;
    return p.string();
}

RunConfig fast_cfg() {
    RunConfig cfg;
    cfg.schedule = {{1, 10}, {5, 20}};
    return cfg;
}

} // namespace

TEST_CASE("parse_schedule: ladder syntax") {
    auto s = parse_schedule("1:60,5:120,1000:600");
    REQUIRE(s.size() == 3);
    CHECK(s[0].k == 1);
    CHECK(s[0].timeout == 60.0);
    CHECK(s[2].k == 1000);
    CHECK(s[2].timeout == 600.0);

    auto d = default_schedule();
    REQUIRE(d.size() == 6);
    CHECK(d[0].k == 1);
    CHECK(d[5].k == 1000);
    CHECK(d[5].timeout == 600.0);

    auto frac = parse_schedule("3:0.5");
    CHECK(frac[0].timeout == 0.5);
}

TEST_CASE("parse_schedule: malformed entries") {
    for (const char* bad : {"", "5", "0:60", "x:9", "1:0", "1:-5", "1:60x", "1x:60", ":60", "2:"})
        CHECK_THROWS_AS(parse_schedule(bad), Error);
}

TEST_CASE("parse_arch") {
    CHECK(parse_arch("cnf") == Arch::CNF);
    CHECK(parse_arch("dnf") == Arch::DNF);
    CHECK_THROWS_AS(parse_arch("anf"), Error);
}

TEST_CASE("cmd_synth: or example end to end") {
    fs::path dir = tmp_root() / "synth_or";
    std::string spec = write_file(dir / "or_1_1.bfs", "inputs x0\noutputs y0\nspec (or x0 y0)\n");
    std::ostringstream out, err;
    int rc = cmd_synth(spec, fast_cfg(), out, err);
    REQUIRE(rc == 0);

    auto report = nlohmann::json::parse(out.str());
    CHECK(report["benchmark"] == "or_1_1");
    CHECK(report["status"] == "Solved");
    CHECK(report["k"] == 1);
    CHECK(report["clauses"] == 0); // y0 = true
    CHECK(report["iterations"].get<int64_t>() >= 1);

    // Default skolem path sits next to the spec and verifies clean.
    std::string skolem = (dir / "or_1_1.skolem").string();
    REQUIRE(fs::exists(skolem));
    std::ostringstream vout, verr;
    CHECK(cmd_verify(spec, skolem, vout, verr) == 0);
    CHECK(vout.str() == "Valid\n");
}

TEST_CASE("cmd_synth: xor example writes both outputs") {
    fs::path dir = tmp_root() / "synth_xor";
    std::string spec = write_file(dir / "xor_1_2.bfs", "inputs x\noutputs y1 y2\nspec (xor x y1 y2)\n");
    RunConfig cfg = fast_cfg();
    cfg.out_path = (dir / "custom.skolem").string();
    cfg.json_path = (dir / "report.json").string();
    std::ostringstream out, err;
    REQUIRE(cmd_synth(spec, cfg, out, err) == 0);

    std::ifstream sk(cfg.out_path);
    std::string line;
    int entries = 0;
    while (std::getline(sk, line))
        if (line.rfind("skolem ", 0) == 0)
            ++entries;
    CHECK(entries == 2);

    std::ifstream jf(cfg.json_path);
    auto file_report = nlohmann::json::parse(jf);
    auto stream_report = nlohmann::json::parse(out.str());
    CHECK(file_report == stream_report);
    CHECK(file_report["k"].get<int>() <= 5);

    std::ostringstream vout, verr;
    CHECK(cmd_verify(spec, cfg.out_path, vout, verr) == 0);
}

TEST_CASE("cmd_synth: input failures") {
    fs::path dir = tmp_root() / "synth_bad";
    std::ostringstream out, err;
    CHECK(cmd_synth((dir / "missing.bfs").string(), fast_cfg(), out, err) == 1);

    std::string bad = write_file(dir / "bad.bfs", "inputs x\nspec x\n");
    CHECK(cmd_synth(bad, fast_cfg(), out, err) == 1);

    std::string unsat = write_file(dir / "unsat.bfs", "inputs x0\noutputs y0\nspec false\n");
    std::ostringstream err2;
    CHECK(cmd_synth(unsat, fast_cfg(), out, err2) == 1);
    CHECK(err2.str().find("specification unsatisfiable") != std::string::npos);
}

TEST_CASE("cmd_synth: exhausted schedule reports status 2") {
    fs::path dir = tmp_root() / "synth_exhaust";
    std::string spec =
        write_file(dir / "iffxor.bfs", "inputs x1 x2\noutputs y\nspec (iff y (xor x1 x2))\n");
    RunConfig cfg;
    cfg.schedule = {{1, 1.5}};
    std::ostringstream out, err;
    CHECK(cmd_synth(spec, cfg, out, err) == 2);
    auto report = nlohmann::json::parse(out.str());
    CHECK(report["status"] == "Exhausted");
}

TEST_CASE("cmd_verify: invalid vector prints the failing input") {
    fs::path dir = tmp_root() / "verify";
    std::string spec = write_file(dir / "xor.bfs", "inputs x\noutputs y1 y2\nspec (xor x y1 y2)\n");
    std::string bad = write_file(dir / "bad.skolem", "skolem y1 x\nskolem y2 false\n");
    std::ostringstream out, err;
    CHECK(cmd_verify(spec, bad, out, err) == 3);
    CHECK(out.str().find("Invalid") != std::string::npos);
    CHECK(out.str().find("x=") != std::string::npos);

    std::string incomplete = write_file(dir / "short.skolem", "skolem y1 (not x)\n");
    std::ostringstream out2, err2;
    CHECK(cmd_verify(spec, incomplete, out2, err2) == 1);
}

TEST_CASE("cmd_bench: suite table, files, and concurrency") {
    fs::path dir = tmp_root() / "bench_suite";
    write_file(dir / "a_or.bfs", "inputs x0\noutputs y0\nspec (or x0 y0)\n");
    write_file(dir / "b_misc.bfs", "inputs x0 x1\noutputs y0\nspec (iff y0 x0)\n");
    write_file(dir / "c_xor.bfs", "inputs x\noutputs y1 y2\nspec (xor x y1 y2)\n");
    RunConfig cfg = fast_cfg();
    cfg.jobs = 2;
    cfg.csv_path = (tmp_root() / "bench.csv").string();
    cfg.md_path = (tmp_root() / "bench.md").string();

    std::ostringstream out, err;
    REQUIRE(cmd_bench(dir.string(), cfg, out, err) == 0);

    std::istringstream lines(out.str());
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "Benchmark,K,T,C,L,I,Status");
    int rows = 0;
    std::vector<std::string> names;
    while (std::getline(lines, line)) {
        ++rows;
        names.push_back(line.substr(0, line.find(',')));
        CHECK(line.find("Solved") != std::string::npos);
    }
    CHECK(rows == 3);
    CHECK(names == std::vector<std::string>{"a_or", "b_misc", "c_xor"});

    std::ifstream csv(cfg.csv_path);
    std::string header;
    REQUIRE(std::getline(csv, header));
    CHECK(header == "Benchmark,K,T,C,L,I,Status");

    std::ifstream md(cfg.md_path);
    std::string mdline;
    REQUIRE(std::getline(md, mdline));
    CHECK(mdline == "| Benchmark | K | T | C | L | I | Status |");
}

TEST_CASE("cmd_bench: empty and failing directories") {
    fs::path empty = tmp_root() / "bench_empty";
    fs::create_directories(empty);
    std::ostringstream out, err;
    CHECK(cmd_bench(empty.string(), fast_cfg(), out, err) == 1);

    fs::path mixed = tmp_root() / "bench_mixed";
    write_file(mixed / "ok.bfs", "inputs x0\noutputs y0\nspec (or x0 y0)\n");
    write_file(mixed / "unsat.bfs", "inputs x0\noutputs y0\nspec false\n");
    write_file(mixed / "broken.bfs", "inputs x\nnot a spec\n");
    std::ostringstream out2, err2;
    CHECK(cmd_bench(mixed.string(), fast_cfg(), out2, err2) == 2);
    std::string text = out2.str();
    CHECK(text.find("Unrealizable") != std::string::npos);
    CHECK(text.find("Error") != std::string::npos);
    int rows = int(std::count(text.begin(), text.end(), '\n')) - 1;
    CHECK(rows == 3); // failures become rows, not aborts
}

TEST_CASE("run_bench: per-file seeds reproduce identical metrics columns") {
    fs::path dir = tmp_root() / "bench_repro";
    std::vector<std::string> files{
        write_file(dir / "a.bfs", "inputs x0 x1\noutputs y0\nspec (iff y0 (or x0 x1))\n"),
        write_file(dir / "b.bfs", "inputs x\noutputs y1 y2\nspec (xor x y1 y2)\n")};
    RunConfig cfg = fast_cfg();
    cfg.seed = 41;
    std::vector<BenchRow> r1 = run_bench(files, cfg);
    std::vector<BenchRow> r2 = run_bench(files, cfg);
    REQUIRE(r1.size() == r2.size());
    for (size_t i = 0; i < r1.size(); ++i) {
        CHECK(r1[i].k_used == r2[i].k_used);
        CHECK(r1[i].clauses == r2[i].clauses);
        CHECK(r1[i].literals == r2[i].literals);
        CHECK(r1[i].unique_inputs == r2[i].unique_inputs);
        CHECK(r1[i].status == r2[i].status);
        CHECK(r1[i].status == "Solved");
    }
}

TEST_CASE("cmd_repair: realizable fill") {
    fs::path dir = tmp_root() / "repair_ok";
    std::string gp = write_file(dir / "gprime.bfs", "inputs x\noutputs y1 y2\nspec (xor x y1 y2)\n");
    std::string h = write_file(dir / "h.bfs", "inputs x\noutputs\nspec true\n");
    std::ostringstream out, err;
    REQUIRE(cmd_repair(gp, h, fast_cfg(), out, err) == 0);
    CHECK(out.str().find("skolem y1 ") != std::string::npos);
    CHECK(out.str().find("skolem y2 ") != std::string::npos);
    CHECK(out.str().find("realizable") != std::string::npos);
}

TEST_CASE("cmd_repair: unreachable target is rejected") {
    fs::path dir = tmp_root() / "repair_bad";
    std::string gp = write_file(dir / "gprime.bfs", "inputs x1\noutputs y1\nspec (and x1 y1)\n");
    std::string h = write_file(dir / "h.bfs", "inputs x1\noutputs\nspec (not x1)\n");
    std::ostringstream out, err;
    CHECK(cmd_repair(gp, h, fast_cfg(), out, err) == 4);
    CHECK(out.str().find("unrealizable") != std::string::npos);
}

TEST_CASE("cmd_repair: input contract violations") {
    fs::path dir = tmp_root() / "repair_mismatch";
    std::string gp = write_file(dir / "gprime.bfs", "inputs x1\noutputs y1\nspec (and x1 y1)\n");
    std::string other = write_file(dir / "other.bfs", "inputs x2\noutputs\nspec x2\n");
    std::string with_out = write_file(dir / "with_out.bfs", "inputs x1\noutputs z\nspec x1\n");
    std::ostringstream out, err;
    CHECK(cmd_repair(gp, other, fast_cfg(), out, err) == 1);
    CHECK(cmd_repair(gp, with_out, fast_cfg(), out, err) == 1);
}

TEST_CASE("cmd_repair: zero-lut skeleton already matching H") {
    fs::path dir = tmp_root() / "repair_zero";
    std::string gp = write_file(dir / "gprime.bfs", "inputs x\noutputs\nspec x\n");
    std::string h = write_file(dir / "h.bfs", "inputs x\noutputs\nspec x\n");
    std::ostringstream out, err;
    CHECK(cmd_repair(gp, h, fast_cfg(), out, err) == 0);
    CHECK(out.str() == "realizable\n");
}
