#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "bbfs/cnf.hpp"

namespace bbfs {

enum class PolarityMode { FixedFalse, Random };

struct SolverConfig {
    uint64_t seed = 0;
    PolarityMode polarity_mode = PolarityMode::FixedFalse;
    std::optional<int64_t> conflict_limit; // > 0 when set
};

enum class SatStatus { Sat, Unsat };

struct SatResult {
    SatStatus status = SatStatus::Unsat;
    /// Present iff Sat; index by var (1-based, entry 0 unused), total over
    /// num_vars including auxiliaries.
    std::optional<std::vector<bool>> model;

    bool sat() const { return status == SatStatus::Sat; }
};

/// Complete CDCL solve. Deterministic for a fixed (cnf, cfg); the returned
/// model is checked against every clause before being handed out. Throws
/// ConflictLimitError when cfg.conflict_limit is set and exceeded.
SatResult solve(const CnfInstance& cnf, const SolverConfig& cfg = {});

/// A model projected onto named variables.
using Projection = std::map<std::string, bool>;

/// Up to `limit` distinct projections of satisfying assignments onto
/// project_onto (each name must be in cnf.var_map), found by re-solving with
/// a blocking clause over the projection set after each model. Randomized
/// polarity varies the visit order between seeds. Returns fewer than limit
/// when the projections are exhausted.
std::vector<Projection> enumerate_models(const CnfInstance& cnf,
                                         const std::set<std::string>& project_onto,
                                         size_t limit, const SolverConfig& cfg = {});

} // namespace bbfs
