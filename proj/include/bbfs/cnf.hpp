#pragma once

#include <map>
#include <string>
#include <vector>

#include "bbfs/formula.hpp"

namespace bbfs {

/// A literal over a 1-based variable index.
struct Lit {
    int var = 0;
    bool neg = false;

    friend bool operator==(const Lit& a, const Lit& b) {
        return a.var == b.var && a.neg == b.neg;
    }
};

inline Lit operator~(Lit l) { return {l.var, !l.neg}; }

using Clause = std::vector<Lit>;

/// A CNF formula over integer variables. Named (non-auxiliary) variables are
/// tracked in var_map; auxiliary Tseitin variables have indices but no names.
/// An unsatisfiable constant is represented by the trivially_unsat marker
/// rather than by an empty clause, keeping the nonempty-clause invariant.
struct CnfInstance {
    int num_vars = 0;
    std::vector<Clause> clauses;
    std::map<std::string, int> var_map;
    bool trivially_unsat = false;

    /// Allocates a fresh (auxiliary) variable index.
    int fresh_var() { return ++num_vars; }

    /// Returns the index for a named variable, allocating one on first use.
    int var_for(const std::string& name);

    /// Adds a clause after normalization: duplicate literals are removed and
    /// tautological clauses (containing both p and !p) are dropped. An empty
    /// clause sets trivially_unsat instead of being stored.
    void add_clause(Clause c);

    /// DIMACS CNF text, for cross-checking against external solvers.
    std::string to_dimacs() const;
};

/// Tseitin transformation: returns a CNF equisatisfiable with f whose models,
/// projected onto the named variables, are exactly the models of f. Allocates
/// one auxiliary variable per non-literal subterm (constants are folded away
/// first; Not reuses its child's literal). Entries of var_map pre-assign
/// indices for named variables; further named variables are appended in
/// first-reference order.
CnfInstance tseitin(const FormulaPtr& f, const std::map<std::string, int>& var_map = {});

/// Constant folding over the AST: removes Const children where the operator
/// allows it and collapses fully-constant subterms. Pure simplification; the
/// result is logically equivalent to the input.
FormulaPtr fold_constants(const FormulaPtr& f);

} // namespace bbfs
