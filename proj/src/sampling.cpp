#include "bbfs/sampling.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "bbfs/cnf.hpp"
#include "bbfs/sat.hpp"

namespace bbfs {

namespace {

std::vector<std::string> table_columns(const BfsSpec& spec) {
    std::vector<std::string> cols = spec.input_names();
    for (const auto& name : spec.output_names())
        cols.push_back(name);
    return cols;
}

VarAssignment row_assignment(const std::vector<std::string>& columns, const Row& row) {
    VarAssignment sigma;
    for (size_t i = 0; i < columns.size(); ++i)
        sigma[columns[i]] = row[i];
    return sigma;
}

} // namespace

void SampleTable::upsert(const Row& row, RowProvenance prov) {
    for (size_t i = 0; i < rows.size(); ++i) {
        if (std::equal(row.begin(), row.begin() + n_inputs, rows[i].begin())) {
            rows[i] = row;
            provenance[i] = prov;
            return;
        }
    }
    rows.push_back(row);
    provenance.push_back(prov);
}

void SampleTable::validate(const BfsSpec& spec) const {
    std::vector<Row> seen_x;
    for (const Row& row : rows) {
        if (row.size() != columns.size())
            throw Error("sample table: row width mismatch");
        if (!eval(spec.spec, row_assignment(columns, row)))
            throw Error("sample table: row does not satisfy the specification");
        Row x(row.begin(), row.begin() + n_inputs);
        if (std::find(seen_x.begin(), seen_x.end(), x) != seen_x.end())
            throw Error("sample table: duplicate input valuation");
        seen_x.push_back(std::move(x));
    }
}

std::vector<Row> sample_positive(const BfsSpec& spec, size_t n, uint64_t seed) {
    std::vector<std::string> cols = table_columns(spec);
    const size_t bits = cols.size();
    std::vector<Row> out;

    if (bits <= 12) { // 2^12 = 4096: enumerate the whole domain
        for (uint64_t a = 0; a < (uint64_t{1} << bits); ++a) {
            Row row(bits);
            for (size_t j = 0; j < bits; ++j)
                row[j] = (a >> j) & 1;
            if (eval(spec.spec, row_assignment(cols, row)))
                out.push_back(std::move(row));
        }
    } else {
        std::map<std::string, int> vm;
        int next = 0;
        for (const auto& name : cols)
            vm[name] = ++next;
        CnfInstance cnf = tseitin(spec.spec, vm);
        SolverConfig cfg;
        cfg.seed = seed;
        cfg.polarity_mode = PolarityMode::Random;
        std::set<std::string> proj(cols.begin(), cols.end());
        for (const auto& m : enumerate_models(cnf, proj, n, cfg)) {
            Row row(bits);
            for (size_t j = 0; j < bits; ++j)
                row[j] = m.at(cols[j]);
            out.push_back(std::move(row));
        }
    }
    if (out.empty())
        throw UnrealizableSpecError("specification unsatisfiable");
    return out;
}

std::vector<Row> remove_nondeterministic(const std::vector<Row>& rows, size_t n_inputs,
                                         uint64_t seed) {
    // Group rows by X valuation, preserving first-occurrence group order.
    std::vector<Row> group_keys;
    std::vector<std::vector<size_t>> groups;
    for (size_t i = 0; i < rows.size(); ++i) {
        Row x(rows[i].begin(), rows[i].begin() + n_inputs);
        auto it = std::find(group_keys.begin(), group_keys.end(), x);
        if (it == group_keys.end()) {
            group_keys.push_back(std::move(x));
            groups.push_back({i});
        } else {
            groups[size_t(it - group_keys.begin())].push_back(i);
        }
    }
    std::mt19937_64 rng(seed);
    std::vector<Row> out;
    out.reserve(groups.size());
    for (const auto& g : groups) {
        size_t pick = 0;
        if (g.size() > 1) {
            std::uniform_int_distribution<size_t> dist(0, g.size() - 1);
            pick = dist(rng);
        }
        out.push_back(rows[g[pick]]);
    }
    return out;
}

std::vector<Row> remove_dont_cares(const std::vector<Row>& rows, const BfsSpec& spec) {
    if (rows.empty())
        return {};
    std::vector<std::string> cols = table_columns(spec);
    std::map<std::string, int> vm;
    int next = 0;
    for (const auto& name : cols)
        vm[name] = ++next;
    // One encoding of not-F, shared; each row adds its own X unit clauses.
    CnfInstance base = tseitin(Formula::make_not(spec.spec), vm);

    std::vector<Row> out;
    for (const Row& row : rows) {
        CnfInstance cnf = base;
        for (size_t i = 0; i < spec.inputs.size(); ++i)
            cnf.add_clause({Lit{vm.at(cols[i]), !row[i]}});
        if (solve(cnf).sat())
            out.push_back(row); // some Y violates F here: the input is constrained
    }
    return out;
}

SampleTable build_table(const BfsSpec& spec, size_t n, uint64_t seed) {
    std::vector<Row> rows = sample_positive(spec, n, seed);
    rows = remove_nondeterministic(rows, spec.inputs.size(), seed);
    rows = remove_dont_cares(rows, spec);

    SampleTable table;
    table.columns = table_columns(spec);
    table.n_inputs = spec.inputs.size();
    table.rows = std::move(rows);
    table.provenance.assign(table.rows.size(), RowProvenance::Sampled);
    table.validate(spec);
    return table;
}

} // namespace bbfs
