#include "bbfs/sat.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "bbfs/errors.hpp"

namespace bbfs {

namespace {

// Internal 0-based literal encoding: 2*var + sign.
inline int enc(Lit l) { return 2 * (l.var - 1) + (l.neg ? 1 : 0); }
inline int neg(int p) { return p ^ 1; }
inline int var_of(int p) { return p >> 1; }
inline bool sign_of(int p) { return p & 1; }

constexpr uint8_t kTrue = 1, kFalse = 0, kUndef = 2;

// Luby restart sequence: 1,1,2,1,1,2,4,...
double luby(double y, int x) {
    int size, seq;
    for (size = 1, seq = 0; size < x + 1; seq++, size = 2 * size + 1)
        ;
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        seq--;
        x = x % size;
    }
    return std::pow(y, seq);
}

class Solver {
public:
    Solver(const CnfInstance& cnf, const SolverConfig& cfg)
        : cnf_(cnf), cfg_(cfg), rng_(cfg.seed) {
        nvars_ = cnf.num_vars;
        assigns_.assign(nvars_, kUndef);
        level_.assign(nvars_, 0);
        reason_.assign(nvars_, -1);
        seen_.assign(nvars_, 0);
        watches_.assign(2 * size_t(nvars_), {});
        activity_.assign(nvars_, 0.0);
        // Seeded jitter makes the branching order a deterministic function of
        // the seed, giving diverse-but-reproducible model enumeration.
        std::uniform_real_distribution<double> jitter(0.0, 1e-6);
        for (auto& a : activity_)
            a = jitter(rng_);
        ok_ = !cnf.trivially_unsat;
        for (const auto& cl : cnf.clauses) {
            if (!ok_)
                break;
            std::vector<int> lits;
            lits.reserve(cl.size());
            for (Lit l : cl)
                lits.push_back(enc(l));
            attach_clause(std::move(lits));
        }
    }

    /// Runs the CDCL search; true = Sat, false = Unsat.
    bool search() {
        if (!ok_)
            return false;
        int restarts = 0;
        int64_t since_restart = 0;
        for (;;) {
            int confl = propagate();
            if (confl >= 0) {
                ++conflicts_;
                ++since_restart;
                if (cfg_.conflict_limit && conflicts_ > *cfg_.conflict_limit)
                    throw ConflictLimitError("conflict limit exceeded");
                if (decision_level() == 0) {
                    ok_ = false;
                    return false;
                }
                std::vector<int> learnt;
                int bt_level;
                analyze(confl, learnt, bt_level);
                cancel_until(bt_level);
                record_learnt(std::move(learnt));
                decay_activity();
            } else {
                if (since_restart >= int64_t(100.0 * luby(2.0, restarts))) {
                    ++restarts;
                    since_restart = 0;
                    cancel_until(0);
                    continue;
                }
                int v = pick_branch_var();
                if (v < 0) {
                    check_model();
                    return true;
                }
                trail_lim_.push_back(int(trail_.size()));
                bool pol = cfg_.polarity_mode == PolarityMode::Random ? bool(rng_() & 1) : false;
                unchecked_enqueue(2 * v + (pol ? 0 : 1), -1);
            }
        }
    }

    /// For model enumeration: drop back to the root level and add a clause.
    /// Returns false if the instance became trivially unsatisfiable.
    bool add_clause_root(const std::vector<int>& lits) {
        if (!ok_)
            return false;
        cancel_until(0);
        std::vector<int> pruned;
        for (int p : lits) {
            if (value(p) == kTrue)
                return true; // already satisfied at the root; nothing to add
            if (value(p) == kUndef)
                pruned.push_back(p);
        }
        if (pruned.empty()) {
            ok_ = false;
            return false;
        }
        attach_clause(std::move(pruned));
        return ok_;
    }

    bool value_of_var(int v) const { return assigns_[v] == kTrue; }
    bool ok() const { return ok_; }

private:
    uint8_t value(int p) const {
        uint8_t a = assigns_[var_of(p)];
        return a == kUndef ? kUndef : (a ^ uint8_t(sign_of(p)));
    }

    int decision_level() const { return int(trail_lim_.size()); }

    void unchecked_enqueue(int p, int from) {
        assigns_[var_of(p)] = sign_of(p) ? kFalse : kTrue;
        level_[var_of(p)] = decision_level();
        reason_[var_of(p)] = from;
        trail_.push_back(p);
    }

    void attach_clause(std::vector<int> lits) {
        if (lits.empty()) {
            ok_ = false;
            return;
        }
        if (lits.size() == 1) {
            if (value(lits[0]) == kFalse)
                ok_ = false;
            else if (value(lits[0]) == kUndef)
                unchecked_enqueue(lits[0], -1);
            return;
        }
        int ci = int(clauses_.size());
        watches_[lits[0]].push_back({ci, lits[1]});
        watches_[lits[1]].push_back({ci, lits[0]});
        clauses_.push_back(std::move(lits));
    }

    // Two-watched-literal unit propagation. Returns the index of a
    // conflicting clause, or -1.
    int propagate() {
        while (qhead_ < trail_.size()) {
            int p = trail_[qhead_++];
            int fp = neg(p); // literal that just became false
            auto& ws = watches_[fp];
            size_t i = 0, j = 0;
            int confl = -1;
            while (i < ws.size()) {
                Watcher w = ws[i];
                if (value(w.blocker) == kTrue) {
                    ws[j++] = ws[i++];
                    continue;
                }
                auto& c = clauses_[w.ci];
                // Put the false literal at c[1].
                if (c[0] == fp)
                    std::swap(c[0], c[1]);
                int first = c[0];
                if (first != w.blocker && value(first) == kTrue) {
                    ws[j++] = {w.ci, first};
                    ++i;
                    continue;
                }
                bool moved = false;
                for (size_t k = 2; k < c.size(); ++k) {
                    if (value(c[k]) != kFalse) {
                        std::swap(c[1], c[k]);
                        watches_[c[1]].push_back({w.ci, first});
                        moved = true;
                        break;
                    }
                }
                if (moved) {
                    ++i; // watch moved elsewhere; drop from this list
                    continue;
                }
                if (value(first) == kFalse) {
                    confl = w.ci;
                    // Copy remaining watchers and stop propagating.
                    while (i < ws.size())
                        ws[j++] = ws[i++];
                    qhead_ = trail_.size();
                } else {
                    unchecked_enqueue(first, w.ci);
                    ws[j++] = ws[i++];
                }
                if (confl >= 0)
                    break;
            }
            ws.resize(j);
            if (confl >= 0)
                return confl;
        }
        return -1;
    }

    // First-UIP conflict analysis.
    void analyze(int confl, std::vector<int>& learnt, int& bt_level) {
        learnt.push_back(0); // slot for the asserting literal
        int counter = 0;
        int p = -1;
        size_t idx = trail_.size();
        do {
            const auto& c = clauses_[confl];
            for (size_t j = (p == -1 ? 0 : 1); j < c.size(); ++j) {
                int q = c[j];
                int v = var_of(q);
                if (!seen_[v] && level_[v] > 0) {
                    seen_[v] = 1;
                    bump_activity(v);
                    if (level_[v] >= decision_level())
                        ++counter;
                    else
                        learnt.push_back(q);
                }
            }
            while (!seen_[var_of(trail_[--idx])])
                ;
            p = trail_[idx];
            confl = reason_[var_of(p)];
            seen_[var_of(p)] = 0;
            --counter;
        } while (counter > 0);
        learnt[0] = neg(p);

        if (learnt.size() == 1) {
            bt_level = 0;
        } else {
            // Second watch: the literal with the highest decision level.
            size_t max_i = 1;
            for (size_t i = 2; i < learnt.size(); ++i)
                if (level_[var_of(learnt[i])] > level_[var_of(learnt[max_i])])
                    max_i = i;
            std::swap(learnt[1], learnt[max_i]);
            bt_level = level_[var_of(learnt[1])];
        }
        for (int q : learnt)
            seen_[var_of(q)] = 0;
    }

    void record_learnt(std::vector<int> learnt) {
        int asserting = learnt[0];
        if (learnt.size() == 1) {
            unchecked_enqueue(asserting, -1);
            return;
        }
        int ci = int(clauses_.size());
        watches_[learnt[0]].push_back({ci, learnt[1]});
        watches_[learnt[1]].push_back({ci, learnt[0]});
        clauses_.push_back(std::move(learnt));
        unchecked_enqueue(asserting, ci);
    }

    void cancel_until(int lvl) {
        if (decision_level() <= lvl)
            return;
        for (int c = int(trail_.size()) - 1; c >= trail_lim_[lvl]; --c)
            assigns_[var_of(trail_[c])] = kUndef;
        trail_.resize(trail_lim_[lvl]);
        trail_lim_.resize(lvl);
        qhead_ = trail_.size();
    }

    int pick_branch_var() {
        int best = -1;
        for (int v = 0; v < nvars_; ++v)
            if (assigns_[v] == kUndef && (best < 0 || activity_[v] > activity_[best]))
                best = v;
        return best;
    }

    void bump_activity(int v) {
        if ((activity_[v] += var_inc_) > 1e100) {
            for (auto& a : activity_)
                a *= 1e-100;
            var_inc_ *= 1e-100;
        }
    }

    void decay_activity() { var_inc_ /= 0.95; }

    // Internal soundness gate: never hand out an unchecked model.
    void check_model() const {
        for (const auto& c : clauses_) {
            bool sat = false;
            for (int p : c)
                if (value(p) == kTrue) {
                    sat = true;
                    break;
                }
            if (!sat)
                throw std::logic_error("sat: model fails a clause (solver bug)");
        }
    }

    struct Watcher {
        int ci;
        int blocker;
    };

    const CnfInstance& cnf_;
    SolverConfig cfg_;
    std::mt19937_64 rng_;
    int nvars_ = 0;
    bool ok_ = true;
    std::vector<std::vector<int>> clauses_;
    std::vector<std::vector<Watcher>> watches_;
    std::vector<uint8_t> assigns_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<uint8_t> seen_;
    std::vector<int> trail_;
    std::vector<int> trail_lim_;
    size_t qhead_ = 0;
    std::vector<double> activity_;
    double var_inc_ = 1.0;
    int64_t conflicts_ = 0;
};

} // namespace

SatResult solve(const CnfInstance& cnf, const SolverConfig& cfg) {
    Solver s(cnf, cfg);
    if (!s.search())
        return {SatStatus::Unsat, std::nullopt};
    std::vector<bool> model(size_t(cnf.num_vars) + 1, false);
    for (int v = 1; v <= cnf.num_vars; ++v)
        model[v] = s.value_of_var(v - 1);
    return {SatStatus::Sat, std::move(model)};
}

std::vector<Projection> enumerate_models(const CnfInstance& cnf,
                                         const std::set<std::string>& project_onto,
                                         size_t limit, const SolverConfig& cfg) {
    for (const auto& name : project_onto)
        if (!cnf.var_map.count(name))
            throw Error("enumerate_models: unknown variable '" + name + "'");

    std::vector<Projection> out;
    if (limit == 0)
        return out;
    Solver s(cnf, cfg);
    while (out.size() < limit && s.search()) {
        Projection m;
        std::vector<int> blocking;
        for (const auto& name : project_onto) {
            int idx = cnf.var_map.at(name);
            bool v = s.value_of_var(idx - 1);
            m.emplace(name, v);
            // Negation of this projected assignment.
            blocking.push_back(2 * (idx - 1) + (v ? 1 : 0));
        }
        out.push_back(std::move(m));
        if (blocking.empty())
            break; // empty projection set: one (empty) row is all there is
        if (!s.add_clause_root(blocking))
            break;
    }
    return out;
}

} // namespace bbfs
