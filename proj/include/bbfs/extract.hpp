#pragma once

#include <string>
#include <vector>

#include "bbfs/gcln.hpp"

namespace bbfs {

/// The synthesized per-output functions. Formulas reference input variables
/// only and are kept in CNF shape (And of Or-of-literals), DNF shape (Or of
/// And-of-literals), or a bare constant.
struct SkolemVector {
    std::vector<std::string> output_names;
    std::vector<FormulaPtr> formulas;
    Arch arch = Arch::CNF;
};

struct SkolemMetrics {
    int clauses = 0;       // C: clause/term count across outputs (constants count 0)
    int literals = 0;      // L: total literal occurrences
    int unique_inputs = 0; // I: distinct input variables used anywhere
};

/// Thresholds trained gates to a discrete formula: a gate is on iff its
/// value is strictly greater than the threshold. CNF: zero retained clauses
/// give Const(true); a retained clause with no literals collapses the result
/// to Const(false). DNF is the exact dual. input_names supplies the variable
/// name for each input column.
FormulaPtr fextract(const GclnParams& params, const std::vector<std::string>& input_names,
                    double threshold = 0.5);

/// Normal-form cleanup to fixpoint: duplicate literals, tautological or
/// absorbed (subsumed) clauses, duplicate clauses, and constant folding.
/// Preserves semantics and never grows the formula.
FormulaPtr simplify(const FormulaPtr& f);

/// Aggregate size metrics over the vector.
SkolemMetrics metrics(const SkolemVector& sv);

/// One `skolem <name> <sexpr>` line per output.
std::string print_skolem(const SkolemVector& sv);

/// Parses skolem lines against a spec: every output must be covered, and the
/// formulas may reference the spec's inputs only. Comment lines and a
/// trailing JSON metrics object are ignored.
SkolemVector parse_skolem(const std::string& text, const BfsSpec& spec);

} // namespace bbfs
