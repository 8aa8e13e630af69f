#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "bbfs/errors.hpp"

namespace bbfs {

enum class VarKind { Input, Output, Auxiliary };

struct Var {
    std::string name;
    VarKind kind = VarKind::Input;
};

enum class NodeKind { Const, Ref, Not, And, Or, Xor, Iff, Implies };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable propositional formula node. And/Or take one or more children,
/// Xor two or more (odd-parity semantics), Iff/Implies exactly two.
class Formula {
public:
    NodeKind kind() const { return kind_; }
    bool value() const { return value_; }
    const std::string& var() const { return var_; }
    const std::vector<FormulaPtr>& children() const { return children_; }

    static FormulaPtr make_const(bool value);
    static FormulaPtr make_ref(std::string name);
    static FormulaPtr make_not(FormulaPtr child);
    static FormulaPtr make_and(std::vector<FormulaPtr> children);
    static FormulaPtr make_or(std::vector<FormulaPtr> children);
    static FormulaPtr make_xor(std::vector<FormulaPtr> children);
    static FormulaPtr make_iff(FormulaPtr lhs, FormulaPtr rhs);
    static FormulaPtr make_implies(FormulaPtr lhs, FormulaPtr rhs);

private:
    Formula(NodeKind kind, bool value, std::string var, std::vector<FormulaPtr> children)
        : kind_(kind), value_(value), var_(std::move(var)), children_(std::move(children)) {}

    NodeKind kind_;
    bool value_;
    std::string var_;
    std::vector<FormulaPtr> children_;
};

using VarAssignment = std::unordered_map<std::string, bool>;

/// A relational specification F(X, Y) over declared input and output
/// variables. Input and output names are disjoint and the formula may
/// reference only declared names.
struct BfsSpec {
    std::vector<Var> inputs;
    std::vector<Var> outputs;
    FormulaPtr spec;

    std::vector<std::string> input_names() const;
    std::vector<std::string> output_names() const;

    /// Throws ParseError if the invariants do not hold.
    void validate() const;
};

/// Parses the `.bfs` text format. Lines starting with `#` are comments;
/// the header is `inputs <name>*` then `outputs <name>*` (not both empty),
/// followed by `spec <sexpr>` where the s-expression may span lines.
BfsSpec parse_spec(const std::string& text);

bool eval(const FormulaPtr& f, const VarAssignment& assignment);

/// Replaces each Ref(v) with bindings[v]. The replacement formulas must not
/// reference any variable that is itself bound.
FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, FormulaPtr>& bindings);

std::string print_formula(const FormulaPtr& f);

/// Parses a single s-expression (the `spec` body grammar) against a set of
/// known variable names.
FormulaPtr parse_sexpr(const std::string& text, const std::set<std::string>& known_vars);

void collect_vars(const FormulaPtr& f, std::set<std::string>& out);
std::set<std::string> collect_vars(const FormulaPtr& f);

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

} // namespace bbfs
