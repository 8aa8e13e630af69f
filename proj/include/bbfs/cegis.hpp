#pragma once

#include <optional>
#include <vector>

#include "bbfs/extract.hpp"
#include "bbfs/sampling.hpp"

namespace bbfs {

enum class VerifyStatus { Valid, Invalid };

struct Counterexample {
    VarAssignment x_star;
    VarAssignment y_witness; // satisfies F at x_star
};

struct VerifyOutcome {
    VerifyStatus status;
    std::optional<Counterexample> counterexample;
    bool valid() const { return status == VerifyStatus::Valid; }
};

struct ScheduleEntry {
    int k;
    double timeout; // seconds
};

std::vector<ScheduleEntry> default_schedule();

enum class SynthStatus { Solved, Exhausted };

struct SynthesisReport {
    SynthStatus status;
    std::optional<SkolemVector> skolem;
    int k_used = 0;
    double wall_time = 0.0;
    int64_t cegis_iterations = 0;
    SkolemMetrics metrics{0, 0, 0};
};

struct CegisConfig {
    Arch arch = Arch::CNF;
    uint64_t seed = 0;
    size_t samples = 500;
    TrainConfig train;
};

// E(X,Y,Y') = F(X,Y) & !F(X,Y') & AND_i (y'_i <-> psi_i(X)), with fresh
// primed names. UNSAT certifies sv valid.
FormulaPtr build_error_formula(const BfsSpec& spec, const SkolemVector& sv);

VerifyOutcome verify(const BfsSpec& spec, const SkolemVector& sv);

// Independent oracle: walk all 2^|X| input valuations. Throws DomainTooLargeError
// when |X| > 16.
VerifyOutcome exhaustive_verify(const BfsSpec& spec, const SkolemVector& sv);

enum class RoundStatus { Solved, TrainFailed, CexAdded };

struct RoundResult {
    RoundStatus status;
    std::optional<SkolemVector> skolem; // candidate on Solved and CexAdded
    bool table_changed = false;         // meaningful on CexAdded
};

RoundResult cegis_round(const BfsSpec& spec, SampleTable& table, int k, Arch arch,
                        const TrainConfig& cfg);

SynthesisReport run_schedule(const BfsSpec& spec, const std::vector<ScheduleEntry>& schedule,
                             const CegisConfig& cfg);

// Repair realizability: true iff H & !F[Y -> Psi] is UNSAT.
bool repair_check(const FormulaPtr& h, const BfsSpec& spec, const SkolemVector& sv);

} // namespace bbfs
