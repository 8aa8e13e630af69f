#pragma once

#include <cstdint>
#include <vector>

#include "bbfs/formula.hpp"

namespace bbfs {

enum class RowProvenance { Sampled, Counterexample };

/// A row assigns one bit per column (X columns first, then Y).
using Row = std::vector<bool>;

/// Deduplicated positive examples of the specification: every row satisfies
/// F, and no two rows share an X valuation (the table is a partial function
/// X -> Y).
struct SampleTable {
    std::vector<std::string> columns; // input names then output names
    size_t n_inputs = 0;
    std::vector<Row> rows;
    std::vector<RowProvenance> provenance;

    size_t n_outputs() const { return columns.size() - n_inputs; }

    /// Inserts a row, replacing any existing row with the same X valuation so
    /// functional consistency is preserved.
    void upsert(const Row& row, RowProvenance prov);

    /// Checks both table invariants against the spec; throws Error on
    /// violation. Used as an internal cross-check after construction.
    void validate(const BfsSpec& spec) const;
};

/// Positive examples of F. Uses exhaustive enumeration (all satisfying rows,
/// in binary counting order) when 2^(|X|+|Y|) <= 4096; otherwise draws up to
/// n rows through the SAT solver with seed-randomized polarity. Throws
/// UnrealizableSpecError when F has no satisfying assignment.
std::vector<Row> sample_positive(const BfsSpec& spec, size_t n, uint64_t seed);

/// Keeps exactly one row per X valuation, chosen uniformly by the seeded RNG
/// within each group; group order follows first occurrence.
std::vector<Row> remove_nondeterministic(const std::vector<Row>& rows, size_t n_inputs,
                                         uint64_t seed);

/// Drops rows whose X valuation is a don't-care: not-F constrained to that X
/// is unsatisfiable, i.e. every Y satisfies F there.
std::vector<Row> remove_dont_cares(const std::vector<Row>& rows, const BfsSpec& spec);

/// sample_positive then remove_nondeterministic then remove_dont_cares,
/// wrapped with invariant checks. May legally return an empty table.
SampleTable build_table(const BfsSpec& spec, size_t n, uint64_t seed);

} // namespace bbfs
