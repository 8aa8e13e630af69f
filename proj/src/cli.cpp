#include "bbfs/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bbfs/errors.hpp"

namespace bbfs {

namespace fs = std::filesystem;
using nlohmann::json;

int log_level() {
    static int level = [] {
        const char* v = std::getenv("BBFS_LOG");
        return v ? std::atoi(v) : 0;
    }();
    return level;
}

std::vector<ScheduleEntry> parse_schedule(const std::string& text) {
    std::vector<ScheduleEntry> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t colon = item.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == item.size())
            throw Error("schedule entry '" + item + "' is not k:seconds");
        int k = 0;
        double sec = 0.0;
        try {
            size_t kend = 0, send = 0;
            k = std::stoi(item.substr(0, colon), &kend);
            sec = std::stod(item.substr(colon + 1), &send);
            if (kend != colon || send != item.size() - colon - 1)
                throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw Error("schedule entry '" + item + "' is not k:seconds");
        }
        if (k < 1 || !(sec > 0.0))
            throw Error("schedule entry '" + item + "' needs k >= 1 and seconds > 0");
        out.push_back({k, sec});
    }
    if (out.empty())
        throw Error("empty schedule");
    return out;
}

Arch parse_arch(const std::string& text) {
    if (text == "cnf")
        return Arch::CNF;
    if (text == "dnf")
        return Arch::DNF;
    throw Error("unknown architecture '" + text + "' (expected cnf or dnf)");
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string stem_of(const std::string& path) {
    return fs::path(path).stem().string();
}

CegisConfig to_cegis(const RunConfig& cfg) {
    CegisConfig c;
    c.arch = cfg.arch;
    c.seed = cfg.seed;
    c.samples = cfg.samples;
    return c;
}

std::string format_seconds(double s) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << s;
    return os.str();
}

json report_json(const std::string& benchmark, const SynthesisReport& rep) {
    return json{{"benchmark", benchmark},
                {"k", rep.k_used},
                {"time_ms", int64_t(rep.wall_time * 1000.0 + 0.5)},
                {"clauses", rep.metrics.clauses},
                {"literals", rep.metrics.literals},
                {"unique_inputs", rep.metrics.unique_inputs},
                {"iterations", rep.cegis_iterations},
                {"status", rep.status == SynthStatus::Solved ? "Solved" : "Exhausted"}};
}

} // namespace

int cmd_synth(const std::string& spec_path, const RunConfig& cfg, std::ostream& out,
              std::ostream& err) {
    BfsSpec spec;
    try {
        spec = parse_spec(read_file(spec_path));
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    SynthesisReport rep;
    try {
        rep = run_schedule(spec, cfg.schedule, to_cegis(cfg));
    } catch (const UnrealizableSpecError&) {
        err << "error: specification unsatisfiable\n";
        return 1;
    }
    std::string benchmark = stem_of(spec_path);
    json report = report_json(benchmark, rep);
    if (rep.skolem) {
        std::string path = cfg.out_path.empty()
                               ? fs::path(spec_path).replace_extension(".skolem").string()
                               : cfg.out_path;
        std::ofstream f(path);
        if (!f) {
            err << "error: cannot write '" << path << "'\n";
            return 1;
        }
        f << print_skolem(*rep.skolem) << report.dump() << "\n";
    }
    if (!cfg.json_path.empty()) {
        std::ofstream f(cfg.json_path);
        if (!f) {
            err << "error: cannot write '" << cfg.json_path << "'\n";
            return 1;
        }
        f << report.dump(2) << "\n";
    }
    out << report.dump() << "\n";
    if (log_level() >= 1)
        err << "[synth] " << benchmark << " k=" << rep.k_used
            << " iterations=" << rep.cegis_iterations << " wall=" << format_seconds(rep.wall_time)
            << "s\n";
    return rep.status == SynthStatus::Solved ? 0 : 2;
}

int cmd_verify(const std::string& spec_path, const std::string& skolem_path, std::ostream& out,
               std::ostream& err) {
    try {
        BfsSpec spec = parse_spec(read_file(spec_path));
        SkolemVector sv = parse_skolem(read_file(skolem_path), spec);
        VerifyOutcome vo = verify(spec, sv);
        if (vo.valid()) {
            out << "Valid\n";
            return 0;
        }
        out << "Invalid\ncounterexample:";
        for (const Var& v : spec.inputs)
            out << " " << v.name << "=" << (vo.counterexample->x_star.at(v.name) ? 1 : 0);
        out << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

std::vector<BenchRow> run_bench(const std::vector<std::string>& files, const RunConfig& cfg) {
    size_t n = files.size();
    std::vector<BenchRow> rows(n);
    if (n == 0)
        return rows;
    unsigned cores = std::max(1u, std::thread::hardware_concurrency());
    size_t jobs = cfg.jobs > 0 ? size_t(cfg.jobs) : std::min(n, size_t(cores));
    jobs = std::min(jobs, n);

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i; (i = next.fetch_add(1)) < n;) {
            const std::string& file = files[i];
            BenchRow row;
            row.benchmark = stem_of(file);
            RunConfig local = cfg;
            local.seed =
                cfg.seed ^ uint64_t(std::hash<std::string>{}(fs::path(file).filename().string()));
            try {
                BfsSpec spec = parse_spec(read_file(file));
                SynthesisReport rep = run_schedule(spec, local.schedule, to_cegis(local));
                row.k_used = rep.k_used;
                row.time_seconds = rep.wall_time;
                row.clauses = rep.metrics.clauses;
                row.literals = rep.metrics.literals;
                row.unique_inputs = rep.metrics.unique_inputs;
                row.status = rep.status == SynthStatus::Solved ? "Solved" : "Exhausted";
            } catch (const UnrealizableSpecError&) {
                row.status = "Unrealizable";
            } catch (const Error&) {
                row.status = "Error";
            }
            rows[i] = std::move(row);
        }
    };
    std::vector<std::thread> pool;
    for (size_t t = 1; t < jobs; ++t)
        pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool)
        th.join();
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "Benchmark,K,T,C,L,I,Status\n";
    for (const BenchRow& r : rows)
        out += r.benchmark + "," + std::to_string(r.k_used) + "," + format_seconds(r.time_seconds) +
               "," + std::to_string(r.clauses) + "," + std::to_string(r.literals) + "," +
               std::to_string(r.unique_inputs) + "," + r.status + "\n";
    return out;
}

std::string bench_markdown(const std::vector<BenchRow>& rows) {
    std::string out = "| Benchmark | K | T | C | L | I | Status |\n"
                      "|---|---|---|---|---|---|---|\n";
    for (const BenchRow& r : rows)
        out += "| " + r.benchmark + " | " + std::to_string(r.k_used) + " | " +
               format_seconds(r.time_seconds) + " | " + std::to_string(r.clauses) + " | " +
               std::to_string(r.literals) + " | " + std::to_string(r.unique_inputs) + " | " +
               r.status + " |\n";
    return out;
}

int cmd_bench(const std::string& dir_path, const RunConfig& cfg, std::ostream& out,
              std::ostream& err) {
    std::vector<std::string> files;
    std::error_code ec;
    for (const fs::directory_entry& entry : fs::directory_iterator(dir_path, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".bfs")
            files.push_back(entry.path().string());
    if (ec) {
        err << "error: cannot read directory '" << dir_path << "': " << ec.message() << "\n";
        return 1;
    }
    if (files.empty()) {
        err << "error: no .bfs files in '" << dir_path << "'\n";
        return 1;
    }
    std::sort(files.begin(), files.end());
    if (log_level() >= 1)
        err << "[bench] " << files.size() << " specs\n";

    std::vector<BenchRow> rows = run_bench(files, cfg);
    std::string csv = bench_csv(rows);
    out << csv;
    if (!cfg.csv_path.empty()) {
        std::ofstream f(cfg.csv_path);
        if (!f) {
            err << "error: cannot write '" << cfg.csv_path << "'\n";
            return 1;
        }
        f << csv;
    }
    if (!cfg.md_path.empty()) {
        std::ofstream f(cfg.md_path);
        if (!f) {
            err << "error: cannot write '" << cfg.md_path << "'\n";
            return 1;
        }
        f << bench_markdown(rows);
    }
    bool all_solved = std::all_of(rows.begin(), rows.end(),
                                  [](const BenchRow& r) { return r.status == "Solved"; });
    return all_solved ? 0 : 2;
}

int cmd_repair(const std::string& gprime_path, const std::string& h_path, const RunConfig& cfg,
               std::ostream& out, std::ostream& err) {
    BfsSpec gprime, h;
    try {
        gprime = parse_spec(read_file(gprime_path));
        h = parse_spec(read_file(h_path));
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    if (!h.outputs.empty()) {
        err << "error: the target function must not declare outputs\n";
        return 1;
    }
    std::set<std::string> gx, hx;
    for (const Var& v : gprime.inputs)
        gx.insert(v.name);
    for (const Var& v : h.inputs)
        hx.insert(v.name);
    if (gx != hx) {
        err << "error: target and skeleton range over different inputs\n";
        return 1;
    }

    BfsSpec f;
    f.inputs = gprime.inputs;
    f.outputs = gprime.outputs;
    f.spec = Formula::make_iff(gprime.spec, h.spec);

    SynthesisReport rep;
    try {
        rep = run_schedule(f, cfg.schedule, to_cegis(cfg));
    } catch (const UnrealizableSpecError&) {
        out << "unrealizable\n"; // G' never matches H at any input
        return 4;
    }
    if (rep.status != SynthStatus::Solved) {
        err << "error: synthesis exhausted the schedule\n";
        return 2;
    }
    out << print_skolem(*rep.skolem);
    bool realizable = repair_check(h.spec, f, *rep.skolem);
    out << (realizable ? "realizable\n" : "unrealizable\n");
    return realizable ? 0 : 4;
}

} // namespace bbfs
