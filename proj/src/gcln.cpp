#include "bbfs/gcln.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "bbfs/errors.hpp"

namespace bbfs {

std::vector<double> literal_vector(const std::vector<bool>& x_row) {
    std::vector<double> l(2 * x_row.size());
    for (size_t i = 0; i < x_row.size(); ++i) {
        l[2 * i] = x_row[i] ? 1.0 : 0.0;
        l[2 * i + 1] = 1.0 - l[2 * i];
    }
    return l;
}

double gated_tconorm(const std::vector<double>& l, const std::vector<double>& g) {
    double prod = 1.0;
    for (size_t i = 0; i < l.size(); ++i)
        prod *= 1.0 - g[i] * l[i];
    return 1.0 - prod;
}

double gated_tnorm(const std::vector<double>& c, const std::vector<double>& h) {
    double prod = 1.0;
    for (size_t j = 0; j < c.size(); ++j)
        prod *= 1.0 + h[j] * (c[j] - 1.0);
    return prod;
}

namespace {

// Forward pass over the literal vector, keeping the per-clause inner
// products so the backward pass can reuse them.
struct RowForward {
    double yhat = 0.0;
    // CNF: inner[j] = prod_i (1 - g_ji l_i)   (so clause_j = 1 - inner[j])
    //      outer[j] = 1 - h_j * inner[j]      (yhat = prod_j outer[j])
    // DNF: inner[j] = prod_i (1 - g_ji (1 - l_i))   (the term value t_j)
    //      outer[j] = 1 - h_j * inner[j]            (yhat = 1 - prod_j outer[j])
    std::vector<double> inner;
    std::vector<double> outer;
};

RowForward forward_row(const GclnParams& p, const std::vector<double>& l) {
    RowForward f;
    f.inner.resize(p.k);
    f.outer.resize(p.k);
    for (int j = 0; j < p.k; ++j) {
        double prod = 1.0;
        const auto& g = p.literal_gates[j];
        if (p.arch == Arch::CNF) {
            for (size_t i = 0; i < l.size(); ++i)
                prod *= 1.0 - g[i] * l[i];
        } else {
            for (size_t i = 0; i < l.size(); ++i)
                prod *= 1.0 - g[i] * (1.0 - l[i]);
        }
        f.inner[j] = prod;
        f.outer[j] = 1.0 - p.clause_gates[j] * prod;
    }
    double outer_prod = 1.0;
    for (int j = 0; j < p.k; ++j)
        outer_prod *= f.outer[j];
    f.yhat = p.arch == Arch::CNF ? outer_prod : 1.0 - outer_prod;
    return f;
}

// excl[i] = product of v over all indices except i.
std::vector<double> exclusion_products(const std::vector<double>& v) {
    const size_t m = v.size();
    std::vector<double> pre(m + 1, 1.0), suf(m + 1, 1.0), out(m);
    for (size_t i = 0; i < m; ++i)
        pre[i + 1] = pre[i] * v[i];
    for (size_t i = m; i-- > 0;)
        suf[i] = suf[i + 1] * v[i];
    for (size_t i = 0; i < m; ++i)
        out[i] = pre[i] * suf[i + 1];
    return out;
}

std::vector<bool> input_row(const SampleTable& table, size_t r) {
    const Row& row = table.rows[r];
    return std::vector<bool>(row.begin(), row.begin() + table.n_inputs);
}

void check_table(const GclnParams& p, const SampleTable& table, size_t output_index) {
    if (table.rows.empty())
        throw EmptyTableError("gcln: empty sample table");
    if (output_index >= table.n_outputs())
        throw Error("gcln: output index out of range");
    if (size_t(p.n_inputs) != table.n_inputs)
        throw Error("gcln: params/table input width mismatch");
}

double mse_plus_l1(const GclnParams& p, const SampleTable& table, size_t output_index,
                   double l1_lambda, GclnGradient* grad) {
    const size_t n_rows = table.rows.size();
    const size_t width = 2 * size_t(p.n_inputs);
    if (grad) {
        grad->literal_gates.assign(p.k, std::vector<double>(width, 0.0));
        grad->clause_gates.assign(p.k, 0.0);
    }
    double mse = 0.0;
    for (size_t r = 0; r < n_rows; ++r) {
        std::vector<double> l = literal_vector(input_row(table, r));
        RowForward f = forward_row(p, l);
        double target = table.rows[r][table.n_inputs + output_index] ? 1.0 : 0.0;
        double err = f.yhat - target;
        mse += err * err;
        if (!grad)
            continue;

        double dmse = 2.0 * err / double(n_rows);
        std::vector<double> excl_outer = exclusion_products(f.outer);
        for (int j = 0; j < p.k; ++j) {
            // d yhat / d outer_j, which flips sign for the DNF dual.
            double dy_douter = p.arch == Arch::CNF ? excl_outer[j] : -excl_outer[j];
            // outer_j = 1 - h_j * inner_j.
            grad->clause_gates[j] += dmse * dy_douter * -f.inner[j];
            double dy_dinner = dy_douter * -p.clause_gates[j];
            // inner_j is a product over the gated literal factors; each
            // factor is 1 - g_ji * a_i with a_i = l_i (CNF) or 1 - l_i (DNF).
            std::vector<double> factors(width);
            for (size_t i = 0; i < width; ++i) {
                double a = p.arch == Arch::CNF ? l[i] : 1.0 - l[i];
                factors[i] = 1.0 - p.literal_gates[j][i] * a;
            }
            std::vector<double> excl_inner = exclusion_products(factors);
            for (size_t i = 0; i < width; ++i) {
                double a = p.arch == Arch::CNF ? l[i] : 1.0 - l[i];
                grad->literal_gates[j][i] += dmse * dy_dinner * -a * excl_inner[i];
            }
        }
    }
    mse /= double(n_rows);

    double l1 = 0.0;
    for (int j = 0; j < p.k; ++j) {
        for (double g : p.literal_gates[j])
            l1 += std::abs(g);
        l1 += std::abs(p.clause_gates[j]);
    }
    if (grad) {
        // Subgradient 0 at gate == 0: a gate parked at zero feels no pull.
        for (int j = 0; j < p.k; ++j) {
            for (size_t i = 0; i < width; ++i)
                if (p.literal_gates[j][i] > 0.0)
                    grad->literal_gates[j][i] += l1_lambda;
            if (p.clause_gates[j] > 0.0)
                grad->clause_gates[j] += l1_lambda;
        }
    }
    return mse + l1_lambda * l1;
}

} // namespace

double forward(const GclnParams& params, const std::vector<bool>& x_row) {
    return forward_row(params, literal_vector(x_row)).yhat;
}

double loss(const GclnParams& params, const SampleTable& table, size_t output_index,
            double l1_lambda) {
    check_table(params, table, output_index);
    return mse_plus_l1(params, table, output_index, l1_lambda, nullptr);
}

GclnGradient gradient(const GclnParams& params, const SampleTable& table, size_t output_index,
                      double l1_lambda) {
    check_table(params, table, output_index);
    GclnGradient g;
    mse_plus_l1(params, table, output_index, l1_lambda, &g);
    return g;
}

double thresholded_accuracy(const GclnParams& params, const SampleTable& table,
                            size_t output_index, double threshold) {
    check_table(params, table, output_index);
    size_t hits = 0;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        bool pred = forward(params, input_row(table, r)) >= threshold;
        if (pred == table.rows[r][table.n_inputs + output_index])
            ++hits;
    }
    return double(hits) / double(table.rows.size());
}

bool gates_saturated(const GclnParams& params, double tol) {
    auto near01 = [tol](double g) { return g <= tol || g >= 1.0 - tol; };
    for (const auto& row : params.literal_gates)
        for (double g : row)
            if (!near01(g))
                return false;
    for (double h : params.clause_gates)
        if (!near01(h))
            return false;
    return true;
}

TrainResult train(const SampleTable& table, size_t output_index, int k, Arch arch,
                  const TrainConfig& cfg) {
    if (k < 1)
        throw Error("gcln: clause bound must be at least 1");
    if (table.rows.empty())
        throw EmptyTableError("gcln: empty sample table");

    GclnParams p;
    p.arch = arch;
    p.n_inputs = int(table.n_inputs);
    p.k = k;
    const size_t width = 2 * table.n_inputs;

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> init(0.5 - cfg.init_noise, 0.5 + cfg.init_noise);
    p.literal_gates.resize(k);
    for (auto& row : p.literal_gates) {
        row.resize(width);
        for (auto& g : row)
            g = init(rng);
    }
    p.clause_gates.resize(k);
    for (auto& h : p.clause_gates)
        h = init(rng);

    // Adam state.
    std::vector<std::vector<double>> m_lit(k, std::vector<double>(width, 0.0)), v_lit = m_lit;
    std::vector<double> m_cl(k, 0.0), v_cl(k, 0.0);
    double b1t = 1.0, b2t = 1.0;

    TrainResult res;
    auto start = std::chrono::steady_clock::now();
    auto seconds_since_start = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    GclnGradient g;
    for (;;) {
        mse_plus_l1(p, table, output_index, cfg.l1_lambda, &g);
        b1t *= cfg.adam_beta1;
        b2t *= cfg.adam_beta2;
        auto adam_step = [&](double& param, double& m, double& v, double grad_val) {
            m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * grad_val;
            v = cfg.adam_beta2 * v + (1.0 - cfg.adam_beta2) * grad_val * grad_val;
            double mhat = m / (1.0 - b1t);
            double vhat = v / (1.0 - b2t);
            param -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_eps);
            param = std::clamp(param, 0.0, 1.0);
        };
        for (int j = 0; j < k; ++j) {
            for (size_t i = 0; i < width; ++i)
                adam_step(p.literal_gates[j][i], m_lit[j][i], v_lit[j][i],
                          g.literal_gates[j][i]);
            adam_step(p.clause_gates[j], m_cl[j], v_cl[j], g.clause_gates[j]);
        }
        ++res.epochs;

        double acc = thresholded_accuracy(p, table, output_index, cfg.decision_threshold);
        if (acc == 1.0 && gates_saturated(p, cfg.gate_saturation_tol)) {
            res.converged = true;
            res.final_accuracy = acc;
            break;
        }
        if (seconds_since_start() >= cfg.max_wall_time) {
            res.final_accuracy = acc;
            break;
        }
    }
    res.params = std::move(p);
    res.elapsed = seconds_since_start();
    return res;
}

std::vector<TrainResult> train_all_outputs(const SampleTable& table, int k, Arch arch,
                                           const TrainConfig& cfg) {
    if (table.n_inputs >= table.columns.size())
        throw EmptyOutputsError("gcln: table has no output columns");
    if (table.rows.empty())
        throw EmptyTableError("gcln: empty sample table");
    std::vector<TrainResult> out;
    for (size_t i = 0; i < table.n_outputs(); ++i) {
        TrainConfig per = cfg;
        per.seed = cfg.seed + i;
        try {
            out.push_back(train(table, i, k, arch, per));
        } catch (const Error& e) {
            throw Error("output '" + table.columns[table.n_inputs + i] + "': " + e.what());
        }
    }
    return out;
}

} // namespace bbfs
