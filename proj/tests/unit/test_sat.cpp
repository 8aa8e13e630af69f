#include <doctest.h>

#include <random>
#include <set>

#include "bbfs/sat.hpp"

using namespace bbfs;

namespace {

CnfInstance make_cnf(int nvars, std::vector<std::vector<int>> dimacs_clauses) {
    CnfInstance cnf;
    cnf.num_vars = nvars;
    for (int v = 1; v <= nvars; ++v)
        cnf.var_map["v" + std::to_string(v)] = v;
    for (auto& cl : dimacs_clauses) {
        Clause c;
        for (int l : cl)
            c.push_back({std::abs(l), l < 0});
        cnf.add_clause(std::move(c));
    }
    return cnf;
}

bool clause_satisfied(const Clause& cl, uint32_t assignment) {
    for (const Lit& l : cl) {
        bool v = (assignment >> (l.var - 1)) & 1;
        if (v != l.neg)
            return true;
    }
    return false;
}

bool brute_force_sat(const CnfInstance& cnf) {
    if (cnf.trivially_unsat)
        return false;
    REQUIRE(cnf.num_vars <= 20);
    for (uint32_t a = 0; a < (uint32_t{1} << cnf.num_vars); ++a) {
        bool ok = true;
        for (const auto& cl : cnf.clauses)
            if (!clause_satisfied(cl, a)) {
                ok = false;
                break;
            }
        if (ok)
            return true;
    }
    return false;
}

CnfInstance random_3cnf(std::mt19937_64& rng, int nvars, int nclauses) {
    std::uniform_int_distribution<int> var(1, nvars);
    std::vector<std::vector<int>> cls;
    for (int i = 0; i < nclauses; ++i) {
        std::vector<int> cl;
        for (int j = 0; j < 3; ++j) {
            int v = var(rng);
            cl.push_back(rng() & 1 ? v : -v);
        }
        cls.push_back(std::move(cl));
    }
    return make_cnf(nvars, std::move(cls));
}

} // namespace

TEST_CASE("solve: unit contradiction is Unsat") {
    CnfInstance cnf = make_cnf(1, {{1}, {-1}});
    CHECK(cnf.trivially_unsat == false);
    SatResult r = solve(cnf);
    CHECK(r.status == SatStatus::Unsat);
    CHECK(!r.model.has_value());
}

TEST_CASE("solve: unit propagation forces the model") {
    CnfInstance cnf = make_cnf(2, {{1, 2}, {-1}});
    SatResult r = solve(cnf);
    REQUIRE(r.status == SatStatus::Sat);
    REQUIRE(r.model.has_value());
    CHECK((*r.model)[1] == false);
    CHECK((*r.model)[2] == true);
}

TEST_CASE("solve: trivially unsat marker") {
    CnfInstance cnf;
    cnf.num_vars = 3;
    cnf.trivially_unsat = true;
    CHECK(solve(cnf).status == SatStatus::Unsat);
}

TEST_CASE("solve: empty clause set is Sat") {
    CnfInstance cnf;
    SatResult r = solve(cnf);
    CHECK(r.status == SatStatus::Sat);
}

TEST_CASE("solve: 200 random 3-CNFs agree with brute force") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> nv(3, 12);
    for (int i = 0; i < 200; ++i) {
        int nvars = nv(rng);
        std::uniform_int_distribution<int> nc(1, int(4.6 * nvars));
        CnfInstance cnf = random_3cnf(rng, nvars, nc(rng));
        SolverConfig cfg;
        cfg.seed = i;
        cfg.polarity_mode = i % 2 ? PolarityMode::Random : PolarityMode::FixedFalse;
        SatResult r = solve(cnf, cfg);
        CHECK(r.sat() == brute_force_sat(cnf));
        if (r.sat()) {
            // External soundness check of the returned model.
            uint32_t a = 0;
            for (int v = 1; v <= cnf.num_vars; ++v)
                if ((*r.model)[v])
                    a |= uint32_t{1} << (v - 1);
            for (const auto& cl : cnf.clauses)
                CHECK(clause_satisfied(cl, a));
        }
    }
}

TEST_CASE("solve: deterministic for fixed config") {
    std::mt19937_64 rng(777);
    CnfInstance cnf = random_3cnf(rng, 10, 30);
    SolverConfig cfg;
    cfg.seed = 42;
    cfg.polarity_mode = PolarityMode::Random;
    SatResult a = solve(cnf, cfg);
    SatResult b = solve(cnf, cfg);
    CHECK(a.status == b.status);
    CHECK(a.model == b.model);
}

TEST_CASE("solve: conflict limit") {
    // Forces at least two conflicts before Unsat is provable.
    CnfInstance cnf = make_cnf(2, {{1, 2}, {1, -2}, {-1, 2}, {-1, -2}});
    SolverConfig tight;
    tight.conflict_limit = 1;
    CHECK_THROWS_AS(solve(cnf, tight), ConflictLimitError);
    SolverConfig loose;
    loose.conflict_limit = 1000;
    CHECK(solve(cnf, loose).status == SatStatus::Unsat);
}

TEST_CASE("enumerate_models: or truth table") {
    auto f = Formula::make_or({Formula::make_ref("x0"), Formula::make_ref("y0")});
    CnfInstance cnf = tseitin(f);
    auto models = enumerate_models(cnf, {"x0", "y0"}, 10);
    REQUIRE(models.size() == 3);
    std::set<std::pair<bool, bool>> got;
    for (const auto& m : models)
        got.emplace(m.at("x0"), m.at("y0"));
    CHECK(got == std::set<std::pair<bool, bool>>{{false, true}, {true, false}, {true, true}});
}

TEST_CASE("enumerate_models: unsat gives empty list, limit 1 gives one") {
    CnfInstance unsat = make_cnf(1, {{1}, {-1}});
    CHECK(enumerate_models(unsat, {"v1"}, 10).empty());

    auto f = Formula::make_or({Formula::make_ref("x0"), Formula::make_ref("y0")});
    CnfInstance cnf = tseitin(f);
    CHECK(enumerate_models(cnf, {"x0", "y0"}, 1).size() == 1);
    CHECK(enumerate_models(cnf, {"x0", "y0"}, 0).empty());
}

TEST_CASE("enumerate_models: projection onto a subset") {
    auto f = Formula::make_or({Formula::make_ref("x0"), Formula::make_ref("y0")});
    CnfInstance cnf = tseitin(f);
    auto models = enumerate_models(cnf, {"x0"}, 10);
    CHECK(models.size() == 2); // both x0 values are extendable
}

TEST_CASE("enumerate_models: empty projection set") {
    auto f = Formula::make_ref("x");
    CnfInstance cnf = tseitin(f);
    auto models = enumerate_models(cnf, {}, 10);
    REQUIRE(models.size() == 1);
    CHECK(models[0].empty());
}

TEST_CASE("enumerate_models: distinct and complete on random instances") {
    std::mt19937_64 rng(55);
    for (int i = 0; i < 40; ++i) {
        CnfInstance cnf = random_3cnf(rng, 8, 12);
        SolverConfig cfg;
        cfg.seed = i;
        cfg.polarity_mode = PolarityMode::Random;
        std::set<std::string> proj{"v1", "v2", "v3"};
        auto models = enumerate_models(cnf, proj, 1000, cfg);
        // Distinctness.
        std::set<std::vector<bool>> got;
        for (const auto& m : models) {
            std::vector<bool> row;
            for (const auto& [k, v] : m)
                row.push_back(v);
            CHECK(got.insert(row).second);
        }
        // Completeness: compare against brute-force projections.
        std::set<std::vector<bool>> expect;
        if (!cnf.trivially_unsat) {
            for (uint32_t a = 0; a < (uint32_t{1} << cnf.num_vars); ++a) {
                bool ok = true;
                for (const auto& cl : cnf.clauses)
                    if (!clause_satisfied(cl, a)) {
                        ok = false;
                        break;
                    }
                if (ok)
                    expect.insert({bool(a & 1), bool(a & 2), bool(a & 4)});
            }
        }
        CHECK(got == expect);
    }
}

TEST_CASE("enumerate_models: seed varies visit order") {
    // A wide-open instance: 6 free variables, one satisfiable clause.
    CnfInstance cnf = make_cnf(6, {{1, -1, 2}});
    cnf.clauses.clear(); // all 64 assignments are models
    std::set<std::vector<bool>> firsts;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        SolverConfig cfg;
        cfg.seed = seed;
        cfg.polarity_mode = PolarityMode::Random;
        auto models = enumerate_models(cnf, {"v1", "v2", "v3", "v4", "v5", "v6"}, 1, cfg);
        REQUIRE(models.size() == 1);
        std::vector<bool> row;
        for (const auto& [k, v] : models[0])
            row.push_back(v);
        firsts.insert(row);
    }
    CHECK(firsts.size() >= 2);
}

TEST_CASE("enumerate_models: identical config reproduces the identical list") {
    std::mt19937_64 rng(9);
    CnfInstance cnf = random_3cnf(rng, 9, 15);
    SolverConfig cfg;
    cfg.seed = 1234;
    cfg.polarity_mode = PolarityMode::Random;
    auto a = enumerate_models(cnf, {"v1", "v2", "v3", "v4"}, 50, cfg);
    auto b = enumerate_models(cnf, {"v1", "v2", "v3", "v4"}, 50, cfg);
    CHECK(a == b);
}

TEST_CASE("solve: tseitin encodings of random ASTs agree with formula truth") {
    // SAT status of the encoding must equal "f has a model" computed by eval.
    std::mt19937_64 rng(31337);
    auto random_ast = [&](auto&& self, int nvars, int depth) -> FormulaPtr {
        std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 7);
        std::uniform_int_distribution<int> var(0, nvars - 1);
        switch (pick(rng)) {
        case 0: return Formula::make_const(rng() & 1);
        case 1: return Formula::make_ref("v" + std::to_string(var(rng)));
        case 2: return Formula::make_not(self(self, nvars, depth - 1));
        case 3:
        case 4: {
            std::vector<FormulaPtr> kids;
            std::uniform_int_distribution<int> n(1, 3);
            int count = n(rng);
            for (int i = 0; i < count; ++i)
                kids.push_back(self(self, nvars, depth - 1));
            return pick(rng) & 1 ? Formula::make_and(std::move(kids))
                                 : Formula::make_or(std::move(kids));
        }
        case 5: {
            std::vector<FormulaPtr> kids;
            for (int i = 0; i < 2; ++i)
                kids.push_back(self(self, nvars, depth - 1));
            return Formula::make_xor(std::move(kids));
        }
        case 6:
            return Formula::make_iff(self(self, nvars, depth - 1), self(self, nvars, depth - 1));
        default:
            return Formula::make_implies(self(self, nvars, depth - 1),
                                         self(self, nvars, depth - 1));
        }
    };
    for (int i = 0; i < 200; ++i) {
        auto f = random_ast(random_ast, 4, 3);
        auto names = collect_vars(f);
        CnfInstance cnf = tseitin(f);
        bool exists = false;
        std::vector<std::string> order(names.begin(), names.end());
        for (uint32_t a = 0; a < (uint32_t{1} << order.size()); ++a) {
            VarAssignment sigma;
            for (size_t j = 0; j < order.size(); ++j)
                sigma[order[j]] = (a >> j) & 1;
            if (eval(f, sigma)) {
                exists = true;
                break;
            }
        }
        CHECK(solve(cnf).sat() == exists);
    }
}
