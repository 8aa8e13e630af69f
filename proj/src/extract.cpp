#include "bbfs/extract.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "bbfs/errors.hpp"

namespace bbfs {

namespace {

using LitKey = std::pair<std::string, bool>; // (variable, negated)

FormulaPtr lit_formula(const LitKey& l) {
    FormulaPtr ref = Formula::make_ref(l.first);
    return l.second ? Formula::make_not(ref) : ref;
}

// Reads a literal from a Ref or Not(Ref) node; returns false otherwise.
bool read_literal(const FormulaPtr& f, LitKey& out) {
    if (f->kind() == NodeKind::Ref) {
        out = {f->var(), false};
        return true;
    }
    if (f->kind() == NodeKind::Not && f->children()[0]->kind() == NodeKind::Ref) {
        out = {f->children()[0]->var(), true};
        return true;
    }
    return false;
}

} // namespace

FormulaPtr fextract(const GclnParams& params, const std::vector<std::string>& input_names,
                    double threshold) {
    if (input_names.size() != size_t(params.n_inputs))
        throw Error("fextract: input name count mismatch");
    const bool cnf = params.arch == Arch::CNF;

    std::vector<FormulaPtr> groups;
    for (int j = 0; j < params.k; ++j) {
        if (!(params.clause_gates[j] > threshold))
            continue;
        std::vector<FormulaPtr> lits;
        for (size_t i = 0; i < params.literal_gates[j].size(); ++i) {
            if (!(params.literal_gates[j][i] > threshold))
                continue;
            FormulaPtr ref = Formula::make_ref(input_names[i / 2]);
            lits.push_back(i % 2 ? Formula::make_not(ref) : ref);
        }
        if (lits.empty()) {
            // An active clause with no literals is the empty disjunction
            // (false) in CNF, the empty conjunction (true) in DNF; either
            // way it decides the whole formula.
            return Formula::make_const(!cnf);
        }
        groups.push_back(cnf ? Formula::make_or(std::move(lits))
                             : Formula::make_and(std::move(lits)));
    }
    if (groups.empty())
        return Formula::make_const(cnf);
    return cnf ? Formula::make_and(std::move(groups)) : Formula::make_or(std::move(groups));
}

FormulaPtr simplify(const FormulaPtr& f) {
    if (f->kind() == NodeKind::Const)
        return f;

    LitKey single;
    if (read_literal(f, single))
        return f; // a bare literal is already minimal

    const bool cnf = f->kind() == NodeKind::And;
    if (!cnf && f->kind() != NodeKind::Or)
        throw Error("simplify: expected a CNF or DNF shaped formula");

    // Collect groups as ordered literal lists; `true` group = neutral
    // (tautological clause in CNF), decided constant otherwise.
    std::vector<std::vector<LitKey>> groups;
    for (const auto& child : f->children()) {
        if (child->kind() == NodeKind::Const) {
            if (child->value() == cnf)
                continue; // neutral element of the outer connective
            return Formula::make_const(!cnf);
        }
        std::vector<LitKey> lits;
        LitKey one;
        if (read_literal(child, one)) {
            lits.push_back(one);
        } else {
            if (child->kind() != (cnf ? NodeKind::Or : NodeKind::And))
                throw Error("simplify: expected a CNF or DNF shaped formula");
            bool degenerate = false;
            for (const auto& lf : child->children()) {
                if (lf->kind() == NodeKind::Const) {
                    if (lf->value() != cnf)
                        continue; // neutral inside the group
                    degenerate = true; // group decided: true clause / false term
                    break;
                }
                LitKey l;
                if (!read_literal(lf, l))
                    throw Error("simplify: expected a literal");
                if (std::find(lits.begin(), lits.end(), l) == lits.end())
                    lits.push_back(l);
            }
            if (degenerate)
                continue;
            // Complementary pair: a tautological clause (CNF) is dropped; a
            // contradictory term (DNF) likewise contributes nothing.
            bool complementary = false;
            for (const auto& l : lits)
                if (std::find(lits.begin(), lits.end(), LitKey{l.first, !l.second}) !=
                    lits.end()) {
                    complementary = true;
                    break;
                }
            if (complementary)
                continue;
            if (lits.empty())
                return Formula::make_const(!cnf); // empty disjunction / conjunction
        }
        groups.push_back(std::move(lits));
    }

    // Subsumption: a group whose literal set contains another group's set is
    // implied by it and dropped; equal sets keep the earlier occurrence.
    std::vector<std::set<LitKey>> sets;
    sets.reserve(groups.size());
    for (const auto& g : groups)
        sets.emplace_back(g.begin(), g.end());
    std::vector<bool> dropped(groups.size(), false);
    for (size_t i = 0; i < groups.size(); ++i) {
        if (dropped[i])
            continue;
        for (size_t j = 0; j < groups.size(); ++j) {
            if (i == j || dropped[j])
                continue;
            bool j_superset = std::includes(sets[j].begin(), sets[j].end(), sets[i].begin(),
                                            sets[i].end());
            if (j_superset && (sets[i].size() < sets[j].size() || i < j))
                dropped[j] = true;
        }
    }

    std::vector<FormulaPtr> out_groups;
    for (size_t i = 0; i < groups.size(); ++i) {
        if (dropped[i])
            continue;
        std::vector<FormulaPtr> lits;
        for (const auto& l : groups[i])
            lits.push_back(lit_formula(l));
        out_groups.push_back(cnf ? Formula::make_or(std::move(lits))
                                 : Formula::make_and(std::move(lits)));
    }
    if (out_groups.empty())
        return Formula::make_const(cnf);
    return cnf ? Formula::make_and(std::move(out_groups))
               : Formula::make_or(std::move(out_groups));
}

SkolemMetrics metrics(const SkolemVector& sv) {
    SkolemMetrics m;
    std::set<std::string> inputs;
    for (const auto& f : sv.formulas) {
        if (f->kind() == NodeKind::Const)
            continue;
        for (const auto& name : collect_vars(f))
            inputs.insert(name);
        LitKey one;
        if (read_literal(f, one)) {
            m.clauses += 1;
            m.literals += 1;
            continue;
        }
        const NodeKind outer = sv.arch == Arch::CNF ? NodeKind::And : NodeKind::Or;
        if (f->kind() != outer) {
            // A single clause/term without the outer wrapper.
            m.clauses += 1;
            m.literals += int(f->children().size());
            continue;
        }
        for (const auto& group : f->children()) {
            m.clauses += 1;
            LitKey l;
            m.literals += read_literal(group, l) ? 1 : int(group->children().size());
        }
    }
    m.unique_inputs = int(inputs.size());
    return m;
}

std::string print_skolem(const SkolemVector& sv) {
    std::ostringstream os;
    for (size_t i = 0; i < sv.output_names.size(); ++i)
        os << "skolem " << sv.output_names[i] << ' ' << print_formula(sv.formulas[i]) << '\n';
    return os.str();
}

SkolemVector parse_skolem(const std::string& text, const BfsSpec& spec) {
    std::set<std::string> known;
    for (const auto& v : spec.inputs)
        known.insert(v.name);
    std::set<std::string> wanted;
    for (const auto& v : spec.outputs)
        wanted.insert(v.name);

    SkolemVector sv;
    std::map<std::string, FormulaPtr> found;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        if (line[first] == '{')
            break; // trailing JSON metrics object
        std::istringstream ls(line);
        std::string kw, name;
        ls >> kw >> name;
        if (kw != "skolem")
            throw ParseError(ParseError::Code::Syntax, "expected 'skolem <name> <sexpr>'",
                             lineno, 1);
        if (!wanted.count(name))
            throw ParseError(ParseError::Code::UnknownVariable,
                             "'" + name + "' is not an output of the specification", lineno, 1);
        if (found.count(name))
            throw ParseError(ParseError::Code::DuplicateDeclaration,
                             "duplicate skolem entry for '" + name + "'", lineno, 1);
        std::string rest;
        std::getline(ls, rest);
        found.emplace(name, parse_sexpr(rest, known));
    }
    for (const auto& v : spec.outputs) {
        auto it = found.find(v.name);
        if (it == found.end())
            throw ParseError(ParseError::Code::Syntax,
                             "missing skolem entry for output '" + v.name + "'", lineno, 1);
        sv.output_names.push_back(v.name);
        sv.formulas.push_back(it->second);
    }
    return sv;
}

} // namespace bbfs
