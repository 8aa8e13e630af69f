#include "bbfs/cegis.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <stdexcept>

#include "bbfs/errors.hpp"
#include "bbfs/sat.hpp"

namespace bbfs {

std::vector<ScheduleEntry> default_schedule() {
    return {{1, 60}, {5, 120}, {20, 120}, {50, 180}, {500, 300}, {1000, 600}};
}

FormulaPtr build_error_formula(const BfsSpec& spec, const SkolemVector& sv) {
    std::set<std::string> taken;
    for (const Var& v : spec.inputs)
        taken.insert(v.name);
    for (const Var& v : spec.outputs)
        taken.insert(v.name);

    std::map<std::string, FormulaPtr> to_primed;
    std::map<std::string, std::string> primed_name;
    for (const Var& v : spec.outputs) {
        std::string p = v.name + "_prime";
        while (taken.count(p))
            p += "_";
        taken.insert(p);
        primed_name[v.name] = p;
        to_primed[v.name] = Formula::make_ref(p);
    }

    std::map<std::string, FormulaPtr> psi;
    for (size_t i = 0; i < sv.output_names.size(); ++i)
        psi[sv.output_names[i]] = sv.formulas[i];

    std::vector<FormulaPtr> conj{spec.spec, Formula::make_not(substitute(spec.spec, to_primed))};
    for (const Var& v : spec.outputs) {
        auto it = psi.find(v.name);
        if (it == psi.end())
            throw Error("skolem vector does not cover output '" + v.name + "'");
        conj.push_back(Formula::make_iff(Formula::make_ref(primed_name.at(v.name)), it->second));
    }
    return Formula::make_and(std::move(conj));
}

VerifyOutcome verify(const BfsSpec& spec, const SkolemVector& sv) {
    FormulaPtr e = build_error_formula(spec, sv);
    std::map<std::string, int> vm;
    int idx = 0;
    for (const Var& v : spec.inputs)
        vm[v.name] = ++idx;
    for (const Var& v : spec.outputs)
        vm[v.name] = ++idx;
    CnfInstance inst = tseitin(e, vm);
    SatResult r = solve(inst);
    if (!r.sat())
        return {VerifyStatus::Valid, std::nullopt};
    Counterexample cex;
    const std::vector<bool>& m = *r.model;
    for (const Var& v : spec.inputs)
        cex.x_star[v.name] = m[size_t(vm.at(v.name))];
    for (const Var& v : spec.outputs)
        cex.y_witness[v.name] = m[size_t(vm.at(v.name))];
    return {VerifyStatus::Invalid, std::move(cex)};
}

VerifyOutcome exhaustive_verify(const BfsSpec& spec, const SkolemVector& sv) {
    size_t nx = spec.inputs.size();
    size_t ny = spec.outputs.size();
    if (nx > 16)
        throw DomainTooLargeError("exhaustive verification is limited to 16 inputs, got " +
                                  std::to_string(nx));
    std::vector<std::string> in_names = spec.input_names();
    std::vector<std::string> out_names = spec.output_names();

    std::map<std::string, FormulaPtr> psi;
    for (size_t i = 0; i < sv.output_names.size(); ++i)
        psi[sv.output_names[i]] = sv.formulas[i];

    bool sat_path = ny > 16;
    CnfInstance base;
    std::map<std::string, int> vm;
    if (sat_path) {
        int idx = 0;
        for (const std::string& n : in_names)
            vm[n] = ++idx;
        for (const std::string& n : out_names)
            vm[n] = ++idx;
        base = tseitin(spec.spec, vm);
    }

    for (uint64_t a = 0; a < (uint64_t{1} << nx); ++a) {
        VarAssignment sigma;
        for (size_t i = 0; i < nx; ++i)
            sigma[in_names[i]] = (a >> i) & 1;

        std::optional<VarAssignment> witness;
        if (!sat_path) {
            for (uint64_t b = 0; b < (uint64_t{1} << ny) && !witness; ++b) {
                VarAssignment full = sigma;
                for (size_t j = 0; j < ny; ++j)
                    full[out_names[j]] = (b >> j) & 1;
                if (eval(spec.spec, full)) {
                    VarAssignment w;
                    for (size_t j = 0; j < ny; ++j)
                        w[out_names[j]] = (b >> j) & 1;
                    witness = std::move(w);
                }
            }
        } else {
            CnfInstance inst = base;
            for (size_t i = 0; i < nx; ++i)
                inst.add_clause({Lit{vm.at(in_names[i]), !sigma[in_names[i]]}});
            SatResult r = solve(inst);
            if (r.sat()) {
                VarAssignment w;
                for (const std::string& n : out_names)
                    w[n] = (*r.model)[size_t(vm.at(n))];
                witness = std::move(w);
            }
        }
        if (!witness)
            continue; // no y satisfies F here: nothing to demand of sv

        VarAssignment full = sigma;
        for (const std::string& n : out_names)
            full[n] = eval(psi.at(n), sigma);
        if (!eval(spec.spec, full))
            return {VerifyStatus::Invalid, Counterexample{std::move(sigma), std::move(*witness)}};
    }
    return {VerifyStatus::Valid, std::nullopt};
}

RoundResult cegis_round(const BfsSpec& spec, SampleTable& table, int k, Arch arch,
                        const TrainConfig& cfg) {
    std::vector<std::string> in_names = spec.input_names();
    SkolemVector sv;
    sv.output_names = spec.output_names();
    sv.arch = arch;

    if (table.rows.empty()) {
        // Every surviving x was a don't-care: any vector works, try the simplest.
        for (size_t i = 0; i < sv.output_names.size(); ++i)
            sv.formulas.push_back(Formula::make_const(true));
    } else {
        std::vector<TrainResult> results = train_all_outputs(table, k, arch, cfg);
        for (const TrainResult& r : results)
            if (!r.converged)
                return {RoundStatus::TrainFailed, std::nullopt, false};
        for (const TrainResult& r : results)
            sv.formulas.push_back(simplify(fextract(r.params, in_names, cfg.decision_threshold)));
    }

    VerifyOutcome vo = verify(spec, sv);
    if (vo.valid())
        return {RoundStatus::Solved, std::move(sv), false};

    const Counterexample& cex = *vo.counterexample;
    Row row(table.columns.size());
    for (size_t c = 0; c < table.columns.size(); ++c) {
        const VarAssignment& src = c < table.n_inputs ? cex.x_star : cex.y_witness;
        row[c] = src.at(table.columns[c]);
    }
    bool changed = true;
    for (const Row& existing : table.rows) {
        if (std::equal(existing.begin(), existing.begin() + ptrdiff_t(table.n_inputs), row.begin())) {
            changed = existing != row;
            break;
        }
    }
    table.upsert(row, RowProvenance::Counterexample);
    return {RoundStatus::CexAdded, std::move(sv), changed};
}

SynthesisReport run_schedule(const BfsSpec& spec, const std::vector<ScheduleEntry>& schedule,
                             const CegisConfig& cfg) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    auto elapsed = [&t0] { return std::chrono::duration<double>(clock::now() - t0).count(); };

    SampleTable table = build_table(spec, cfg.samples, cfg.seed);

    SynthesisReport rep;
    rep.status = SynthStatus::Exhausted;

    if (spec.outputs.empty()) {
        // Nothing to synthesize; realizability was settled by sampling.
        SkolemVector sv;
        sv.arch = cfg.arch;
        rep.status = SynthStatus::Solved;
        rep.skolem = std::move(sv);
        rep.wall_time = elapsed();
        return rep;
    }

    size_t ny = spec.outputs.size();
    std::optional<SkolemVector> last_candidate;
    int64_t iterations = 0;

    for (const ScheduleEntry& entry : schedule) {
        auto entry_t0 = clock::now();
        auto entry_left = [&] {
            return entry.timeout - std::chrono::duration<double>(clock::now() - entry_t0).count();
        };
        int reseed = 0;
        int stuck = 0;
        while (entry_left() > 0.0) {
            TrainConfig tc = cfg.train;
            tc.seed = cfg.seed + uint64_t(reseed);
            tc.max_wall_time = entry_left() / double(ny);
            RoundResult round = cegis_round(spec, table, entry.k, cfg.arch, tc);
            ++iterations;
            if (round.skolem)
                last_candidate = round.skolem;
            if (round.status == RoundStatus::Solved) {
                if (spec.inputs.size() <= 16 && !exhaustive_verify(spec, *round.skolem).valid())
                    throw std::logic_error("exhaustive oracle rejected a SAT-verified vector");
                rep.status = SynthStatus::Solved;
                rep.skolem = std::move(round.skolem);
                rep.k_used = entry.k;
                rep.metrics = metrics(*rep.skolem);
                rep.cegis_iterations = iterations;
                rep.wall_time = elapsed();
                return rep;
            }
            if (round.status == RoundStatus::TrainFailed)
                continue; // training consumed its slice; the clock decides
            if (round.table_changed) {
                stuck = 0;
                continue;
            }
            // Converged, verified Invalid, and the counterexample did not move
            // the table: gates landed on a wrong plateau. Re-seed a few times.
            if (++stuck >= 2) {
                if (reseed >= 3)
                    break;
                ++reseed;
                stuck = 0;
            }
        }
        rep.k_used = entry.k;
    }
    rep.skolem = std::move(last_candidate);
    if (rep.skolem)
        rep.metrics = metrics(*rep.skolem);
    rep.cegis_iterations = iterations;
    rep.wall_time = elapsed();
    return rep;
}

bool repair_check(const FormulaPtr& h, const BfsSpec& spec, const SkolemVector& sv) {
    std::map<std::string, FormulaPtr> binding;
    for (size_t i = 0; i < sv.output_names.size(); ++i)
        binding[sv.output_names[i]] = sv.formulas[i];
    FormulaPtr q =
        Formula::make_and({h, Formula::make_not(substitute(spec.spec, binding))});
    return solve(tseitin(q)).status == SatStatus::Unsat;
}

} // namespace bbfs
