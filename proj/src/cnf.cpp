#include "bbfs/cnf.hpp"

#include <algorithm>
#include <sstream>

namespace bbfs {

int CnfInstance::var_for(const std::string& name) {
    auto it = var_map.find(name);
    if (it != var_map.end())
        return it->second;
    int idx = fresh_var();
    var_map.emplace(name, idx);
    return idx;
}

void CnfInstance::add_clause(Clause c) {
    Clause out;
    for (const Lit& l : c) {
        if (std::find(out.begin(), out.end(), ~l) != out.end())
            return; // tautology: p and !p together
        if (std::find(out.begin(), out.end(), l) == out.end())
            out.push_back(l);
    }
    if (out.empty()) {
        trivially_unsat = true;
        return;
    }
    clauses.push_back(std::move(out));
}

std::string CnfInstance::to_dimacs() const {
    std::ostringstream os;
    for (const auto& [name, idx] : var_map)
        os << "c var " << idx << ' ' << name << '\n';
    if (trivially_unsat) {
        os << "p cnf " << num_vars << " 1\n0\n";
        return os.str();
    }
    os << "p cnf " << num_vars << ' ' << clauses.size() << '\n';
    for (const auto& cl : clauses) {
        for (const Lit& l : cl)
            os << (l.neg ? -l.var : l.var) << ' ';
        os << "0\n";
    }
    return os.str();
}

FormulaPtr fold_constants(const FormulaPtr& f) {
    switch (f->kind()) {
    case NodeKind::Const:
    case NodeKind::Ref:
        return f;
    case NodeKind::Not: {
        FormulaPtr c = fold_constants(f->children()[0]);
        if (c->kind() == NodeKind::Const)
            return Formula::make_const(!c->value());
        return c == f->children()[0] ? f : Formula::make_not(c);
    }
    case NodeKind::And:
    case NodeKind::Or: {
        const bool is_and = f->kind() == NodeKind::And;
        std::vector<FormulaPtr> kids;
        for (const auto& child : f->children()) {
            FormulaPtr c = fold_constants(child);
            if (c->kind() == NodeKind::Const) {
                if (c->value() != is_and)
                    return c; // absorbing element
                continue;     // identity element
            }
            kids.push_back(c);
        }
        if (kids.empty())
            return Formula::make_const(is_and);
        if (kids.size() == 1)
            return kids[0];
        return is_and ? Formula::make_and(std::move(kids)) : Formula::make_or(std::move(kids));
    }
    case NodeKind::Xor: {
        bool parity = false;
        std::vector<FormulaPtr> kids;
        for (const auto& child : f->children()) {
            FormulaPtr c = fold_constants(child);
            if (c->kind() == NodeKind::Const)
                parity ^= c->value();
            else
                kids.push_back(c);
        }
        if (kids.empty())
            return Formula::make_const(parity);
        FormulaPtr core = kids.size() == 1 ? kids[0] : Formula::make_xor(std::move(kids));
        return parity ? Formula::make_not(core) : core;
    }
    case NodeKind::Iff: {
        FormulaPtr a = fold_constants(f->children()[0]);
        FormulaPtr b = fold_constants(f->children()[1]);
        if (a->kind() == NodeKind::Const && b->kind() == NodeKind::Const)
            return Formula::make_const(a->value() == b->value());
        if (a->kind() == NodeKind::Const)
            return a->value() ? b : Formula::make_not(b);
        if (b->kind() == NodeKind::Const)
            return b->value() ? a : Formula::make_not(a);
        return Formula::make_iff(a, b);
    }
    case NodeKind::Implies: {
        FormulaPtr a = fold_constants(f->children()[0]);
        FormulaPtr b = fold_constants(f->children()[1]);
        if (a->kind() == NodeKind::Const)
            return a->value() ? b : Formula::make_const(true);
        if (b->kind() == NodeKind::Const)
            return b->value() ? b : Formula::make_not(a);
        return Formula::make_implies(a, b);
    }
    }
    throw Error("fold_constants: corrupt node");
}

namespace {

class TseitinEncoder {
public:
    explicit TseitinEncoder(CnfInstance& cnf) : cnf_(cnf) {}

    // Returns a literal equivalent to the (constant-free) subformula.
    Lit encode(const FormulaPtr& f) {
        switch (f->kind()) {
        case NodeKind::Ref:
            return {cnf_.var_for(f->var()), false};
        case NodeKind::Not:
            return ~encode(f->children()[0]);
        case NodeKind::And:
        case NodeKind::Or: {
            const bool is_and = f->kind() == NodeKind::And;
            std::vector<Lit> lits;
            lits.reserve(f->children().size());
            for (const auto& c : f->children())
                lits.push_back(encode(c));
            Lit a{cnf_.fresh_var(), false};
            Clause big{is_and ? a : ~a};
            for (Lit l : lits) {
                // and: a -> l ; or: l -> a
                cnf_.add_clause({is_and ? ~a : a, is_and ? l : ~l});
                big.push_back(is_and ? ~l : l);
            }
            cnf_.add_clause(std::move(big)); // and: a | !l1 | ... ; or: !a | l1 | ...
            return a;
        }
        case NodeKind::Xor: {
            std::vector<Lit> lits;
            for (const auto& c : f->children())
                lits.push_back(encode(c));
            Lit a{cnf_.fresh_var(), false};
            // a <-> XOR(lits): for every sign vector over lits, force a to the
            // parity of the chosen signs. 2^n clauses; arities here are small.
            const size_t n = lits.size();
            for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
                Clause cl;
                bool parity = false;
                for (size_t i = 0; i < n; ++i) {
                    bool bit = (mask >> i) & 1; // assumed value of lits[i]
                    parity ^= bit;
                    // Clause fires when every lit matches its assumed value.
                    cl.push_back(bit ? ~lits[i] : lits[i]);
                }
                cl.push_back(parity ? a : ~a);
                cnf_.add_clause(std::move(cl));
            }
            return a;
        }
        case NodeKind::Iff: {
            Lit p = encode(f->children()[0]);
            Lit q = encode(f->children()[1]);
            Lit a{cnf_.fresh_var(), false};
            cnf_.add_clause({~a, ~p, q});
            cnf_.add_clause({~a, p, ~q});
            cnf_.add_clause({a, p, q});
            cnf_.add_clause({a, ~p, ~q});
            return a;
        }
        case NodeKind::Implies: {
            Lit p = encode(f->children()[0]);
            Lit q = encode(f->children()[1]);
            Lit a{cnf_.fresh_var(), false};
            cnf_.add_clause({~a, ~p, q});
            cnf_.add_clause({a, p});
            cnf_.add_clause({a, ~q});
            return a;
        }
        default:
            throw Error("tseitin: unexpected node after constant folding");
        }
    }

private:
    CnfInstance& cnf_;
};

} // namespace

CnfInstance tseitin(const FormulaPtr& f, const std::map<std::string, int>& var_map) {
    CnfInstance cnf;
    cnf.var_map = var_map;
    for (const auto& [name, idx] : var_map) {
        (void)name;
        cnf.num_vars = std::max(cnf.num_vars, idx);
    }

    FormulaPtr g = fold_constants(f);
    if (g->kind() == NodeKind::Const) {
        if (!g->value())
            cnf.trivially_unsat = true;
        return cnf;
    }
    TseitinEncoder enc(cnf);
    Lit root = enc.encode(g);
    cnf.add_clause({root});
    return cnf;
}

} // namespace bbfs
