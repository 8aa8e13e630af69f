#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bbfs/cegis.hpp"

namespace bbfs {

struct RunConfig {
    std::vector<ScheduleEntry> schedule = default_schedule();
    Arch arch = Arch::CNF;
    uint64_t seed = 0;
    size_t samples = 500;
    std::string out_path;  // skolem file (synth); default <spec>.skolem
    std::string json_path; // extra copy of the JSON report
    std::string csv_path;  // bench
    std::string md_path;   // bench
    int jobs = 0;          // bench concurrency; 0 = files capped at cores
};

// "k:sec,k:sec,..." with k >= 1 and sec > 0.
std::vector<ScheduleEntry> parse_schedule(const std::string& text);
Arch parse_arch(const std::string& text);

struct BenchRow {
    std::string benchmark;
    int k_used = 0;
    double time_seconds = 0.0;
    int clauses = 0;
    int literals = 0;
    int unique_inputs = 0;
    std::string status;
};

std::vector<BenchRow> run_bench(const std::vector<std::string>& files, const RunConfig& cfg);
std::string bench_csv(const std::vector<BenchRow>& rows);
std::string bench_markdown(const std::vector<BenchRow>& rows);

// Exit codes: 0 solved/valid, 1 input error, 2 exhausted, 3 invalid,
// 4 unrealizable repair.
int cmd_synth(const std::string& spec_path, const RunConfig& cfg, std::ostream& out,
              std::ostream& err);
int cmd_verify(const std::string& spec_path, const std::string& skolem_path, std::ostream& out,
               std::ostream& err);
int cmd_bench(const std::string& dir_path, const RunConfig& cfg, std::ostream& out,
              std::ostream& err);
int cmd_repair(const std::string& gprime_path, const std::string& h_path, const RunConfig& cfg,
               std::ostream& out, std::ostream& err);

// BBFS_LOG >= n enables diagnostics on the error stream.
int log_level();

} // namespace bbfs
