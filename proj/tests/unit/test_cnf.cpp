#include <doctest.h>

#include <random>
#include <set>

#include "bbfs/cnf.hpp"

using namespace bbfs;

namespace {

bool clause_satisfied(const Clause& cl, uint32_t assignment) {
    for (const Lit& l : cl) {
        bool v = (assignment >> (l.var - 1)) & 1;
        if (v != l.neg)
            return true;
    }
    return false;
}

// All satisfying assignments of the CNF by brute force, projected onto the
// named variables (sorted name order). Independent of any solver code.
std::set<std::vector<bool>> brute_force_projections(const CnfInstance& cnf) {
    std::set<std::vector<bool>> out;
    if (cnf.trivially_unsat)
        return out;
    REQUIRE(cnf.num_vars <= 20);
    for (uint32_t a = 0; a < (uint32_t{1} << cnf.num_vars); ++a) {
        bool ok = true;
        for (const auto& cl : cnf.clauses)
            if (!clause_satisfied(cl, a)) {
                ok = false;
                break;
            }
        if (!ok)
            continue;
        std::vector<bool> row;
        for (const auto& [name, idx] : cnf.var_map)
            row.push_back((a >> (idx - 1)) & 1);
        out.insert(row);
    }
    return out;
}

// Truth table of f over the given named variables (sorted map order).
std::set<std::vector<bool>> truth_table(const FormulaPtr& f,
                                        const std::map<std::string, int>& vars) {
    std::set<std::vector<bool>> out;
    std::vector<std::string> names;
    for (const auto& [name, idx] : vars)
        names.push_back(name);
    for (uint32_t a = 0; a < (uint32_t{1} << names.size()); ++a) {
        VarAssignment sigma;
        std::vector<bool> row;
        for (size_t i = 0; i < names.size(); ++i) {
            bool v = (a >> i) & 1;
            sigma[names[i]] = v;
            row.push_back(v);
        }
        if (eval(f, sigma))
            out.insert(row);
    }
    return out;
}

FormulaPtr random_ast(std::mt19937_64& rng, int nvars, int depth) {
    std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 7);
    std::uniform_int_distribution<int> var(0, nvars - 1);
    auto leaf = [&] { return Formula::make_ref("v" + std::to_string(var(rng))); };
    switch (pick(rng)) {
    case 0:
        return Formula::make_const(rng() & 1);
    case 1:
        return leaf();
    case 2:
        return Formula::make_not(random_ast(rng, nvars, depth - 1));
    case 3:
    case 4: {
        std::uniform_int_distribution<int> n(1, 3);
        std::vector<FormulaPtr> kids;
        int count = n(rng);
        for (int i = 0; i < count; ++i)
            kids.push_back(random_ast(rng, nvars, depth - 1));
        return pick(rng) & 1 ? Formula::make_and(std::move(kids))
                             : Formula::make_or(std::move(kids));
    }
    case 5: {
        std::vector<FormulaPtr> kids;
        for (int i = 0; i < 3; ++i)
            kids.push_back(random_ast(rng, nvars, depth - 1));
        return Formula::make_xor(std::move(kids));
    }
    case 6:
        return Formula::make_iff(random_ast(rng, nvars, depth - 1),
                                 random_ast(rng, nvars, depth - 1));
    default:
        return Formula::make_implies(random_ast(rng, nvars, depth - 1),
                                     random_ast(rng, nvars, depth - 1));
    }
}

int count_gate_nodes(const FormulaPtr& f) {
    switch (f->kind()) {
    case NodeKind::Const:
    case NodeKind::Ref:
        return 0;
    case NodeKind::Not:
        return count_gate_nodes(f->children()[0]);
    default: {
        int n = 1;
        for (const auto& c : f->children())
            n += count_gate_nodes(c);
        return n;
    }
    }
}

} // namespace

TEST_CASE("tseitin: constants") {
    CnfInstance unsat = tseitin(Formula::make_const(false));
    CHECK(unsat.trivially_unsat);
    CHECK(unsat.clauses.empty());
    CHECK(brute_force_projections(unsat).empty());

    CnfInstance sat = tseitin(Formula::make_const(true));
    CHECK(!sat.trivially_unsat);
    CHECK(sat.clauses.empty());
}

TEST_CASE("tseitin: literal passthrough allocates no auxiliaries") {
    CnfInstance pos = tseitin(Formula::make_ref("x"));
    CHECK(pos.num_vars == 1);
    REQUIRE(pos.clauses.size() == 1);
    REQUIRE(pos.clauses[0].size() == 1);
    CHECK(pos.clauses[0][0] == Lit{1, false});
    CHECK(pos.var_map.at("x") == 1);

    CnfInstance neg = tseitin(Formula::make_not(Formula::make_ref("x")));
    CHECK(neg.num_vars == 1);
    REQUIRE(neg.clauses.size() == 1);
    CHECK(neg.clauses[0][0] == Lit{1, true});
}

TEST_CASE("tseitin: and has exactly the conjunction's models") {
    auto f = Formula::make_and({Formula::make_ref("x1"), Formula::make_ref("x2")});
    CnfInstance cnf = tseitin(f);
    auto models = brute_force_projections(cnf);
    // Sorted name order: x1, x2.
    CHECK(models == std::set<std::vector<bool>>{{true, true}});
}

TEST_CASE("tseitin: or truth table") {
    auto f = Formula::make_or({Formula::make_ref("x0"), Formula::make_ref("y0")});
    CnfInstance cnf = tseitin(f);
    auto models = brute_force_projections(cnf);
    CHECK(models == std::set<std::vector<bool>>{{false, true}, {true, false}, {true, true}});
}

TEST_CASE("tseitin: pre-assigned var_map indices are respected") {
    std::map<std::string, int> vm{{"a", 1}, {"b", 2}, {"c", 3}};
    auto f = Formula::make_implies(Formula::make_ref("c"), Formula::make_ref("a"));
    CnfInstance cnf = tseitin(f, vm);
    CHECK(cnf.var_map.at("a") == 1);
    CHECK(cnf.var_map.at("b") == 2);
    CHECK(cnf.var_map.at("c") == 3);
    CHECK(cnf.num_vars == 4); // 3 named + 1 aux for the implies gate
    // b is unconstrained, so models pair every (c => a) row with both b values.
    auto models = brute_force_projections(cnf);
    CHECK(models.size() == 6);
}

TEST_CASE("tseitin: one auxiliary per gate node after folding") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        auto f = random_ast(rng, 4, 3);
        auto folded = fold_constants(f);
        std::map<std::string, int> vm;
        int next = 0;
        for (const auto& name : collect_vars(f))
            vm[name] = ++next;
        CnfInstance cnf = tseitin(f, vm);
        int aux = cnf.num_vars - static_cast<int>(vm.size());
        CHECK(aux == count_gate_nodes(folded));
    }
}

TEST_CASE("tseitin: equisatisfiability with exact projections on random ASTs") {
    std::mt19937_64 rng(20260822);
    int checked = 0;
    while (checked < 300) {
        auto f = random_ast(rng, 5, 3);
        std::map<std::string, int> vm;
        int next = 0;
        for (const auto& name : collect_vars(f))
            vm[name] = ++next;
        CnfInstance cnf = tseitin(f, vm);
        if (cnf.num_vars > 20)
            continue; // keep the brute-force oracle cheap
        CHECK(brute_force_projections(cnf) == truth_table(f, vm));
        ++checked;
    }
}

TEST_CASE("fold_constants: algebraic identities") {
    auto x = Formula::make_ref("x");
    CHECK(print_formula(fold_constants(
              Formula::make_and({x, Formula::make_const(true)}))) == "x");
    CHECK(print_formula(fold_constants(
              Formula::make_and({x, Formula::make_const(false)}))) == "false");
    CHECK(print_formula(fold_constants(
              Formula::make_or({x, Formula::make_const(true)}))) == "true");
    CHECK(print_formula(fold_constants(
              Formula::make_xor({x, Formula::make_const(true)}))) == "(not x)");
    CHECK(print_formula(fold_constants(
              Formula::make_xor({Formula::make_const(true), Formula::make_const(true)}))) ==
          "false");
    CHECK(print_formula(fold_constants(
              Formula::make_iff(x, Formula::make_const(false)))) == "(not x)");
    CHECK(print_formula(fold_constants(
              Formula::make_implies(Formula::make_const(false), x))) == "true");
    CHECK(print_formula(fold_constants(
              Formula::make_implies(x, Formula::make_const(false)))) == "(not x)");
}

TEST_CASE("fold_constants: preserves semantics on random ASTs") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
        auto f = random_ast(rng, 3, 3);
        auto g = fold_constants(f);
        for (uint32_t a = 0; a < 8; ++a) {
            VarAssignment sigma{{"v0", bool(a & 1)}, {"v1", bool(a & 2)}, {"v2", bool(a & 4)}};
            CHECK(eval(f, sigma) == eval(g, sigma));
        }
    }
}

TEST_CASE("add_clause: normalization") {
    CnfInstance cnf;
    cnf.num_vars = 2;
    cnf.add_clause({{1, false}, {1, false}, {2, true}});
    REQUIRE(cnf.clauses.size() == 1);
    CHECK(cnf.clauses[0].size() == 2); // duplicate removed

    cnf.add_clause({{1, false}, {1, true}});
    CHECK(cnf.clauses.size() == 1); // tautology dropped

    cnf.add_clause({});
    CHECK(cnf.trivially_unsat);
}

TEST_CASE("clause invariants on random Tseitin output") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
        auto f = random_ast(rng, 4, 3);
        CnfInstance cnf = tseitin(f);
        for (const auto& cl : cnf.clauses) {
            CHECK(!cl.empty());
            for (const Lit& l : cl) {
                CHECK(l.var >= 1);
                CHECK(l.var <= cnf.num_vars);
                // No complementary pair survives normalization.
                CHECK(std::find(cl.begin(), cl.end(), ~l) == cl.end());
            }
        }
    }
}

TEST_CASE("to_dimacs: format") {
    auto f = Formula::make_or({Formula::make_ref("a"), Formula::make_not(Formula::make_ref("b"))});
    CnfInstance cnf = tseitin(f);
    std::string d = cnf.to_dimacs();
    // Two named vars plus one gate var; three gate clauses plus the root unit.
    CHECK(d.find("p cnf 3 4") != std::string::npos);
    CHECK(d.find("3 0") != std::string::npos);
    CHECK(d.find("c var 1 a") != std::string::npos);

    CnfInstance lit = tseitin(Formula::make_not(Formula::make_ref("b")));
    CHECK(lit.to_dimacs().find("p cnf 1 1\n-1 0\n") != std::string::npos);

    CnfInstance unsat = tseitin(Formula::make_const(false));
    std::string du = unsat.to_dimacs();
    CHECK(du.find("p cnf 0 1") != std::string::npos);
    CHECK(du.find("\n0\n") != std::string::npos);
}
