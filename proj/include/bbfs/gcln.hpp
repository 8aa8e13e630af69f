#pragma once

#include <cstdint>
#include <vector>

#include "bbfs/sampling.hpp"

namespace bbfs {

enum class Arch { CNF, DNF };

/// Learnable gates of one network: a literal-gate matrix (k x 2*n_inputs)
/// and a clause-gate vector (k), all values kept in [0,1] by projection.
/// Literal columns are paired: column 2i gates x_i, column 2i+1 gates !x_i.
struct GclnParams {
    Arch arch = Arch::CNF;
    int n_inputs = 0;
    int k = 1;
    std::vector<std::vector<double>> literal_gates;
    std::vector<double> clause_gates;
};

struct TrainConfig {
    double learning_rate = 0.01;
    double l1_lambda = 1e-6;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double decision_threshold = 0.5;
    double max_wall_time = 60.0; // seconds
    uint64_t seed = 0;
    double init_noise = 0.1; // gates start uniform in [0.5 - noise, 0.5 + noise]
    /// Convergence additionally requires every gate within this distance of
    /// 0 or 1, so thresholded extraction reads off the fitted formula rather
    /// than an accident of interior gate values.
    double gate_saturation_tol = 0.05;
};

struct TrainResult {
    GclnParams params;
    int64_t epochs = 0;
    double final_accuracy = 0.0;
    bool converged = false;
    double elapsed = 0.0; // seconds
};

/// Gradient of the loss with respect to each gate; shapes mirror GclnParams.
struct GclnGradient {
    std::vector<std::vector<double>> literal_gates;
    std::vector<double> clause_gates;
};

/// The doubled input layer: l[2i] = x_i, l[2i+1] = 1 - x_i.
std::vector<double> literal_vector(const std::vector<bool>& x_row);

/// Gated disjunction: 1 - prod_i (1 - g_i * l_i) under the product t-norm.
/// At gate values {0,1} this reduces to the plain t-conorm over the gated-in
/// inputs (0 when everything is gated out).
double gated_tconorm(const std::vector<double>& l, const std::vector<double>& g);

/// Gated conjunction: prod_j (1 + h_j * (c_j - 1)). At gate values {0,1}
/// this reduces to the plain product over the gated-in inputs (1 when
/// everything is gated out).
double gated_tnorm(const std::vector<double>& c, const std::vector<double>& h);

/// Network output for one input row, in [0,1]. CNF: conjunction of gated
/// disjunctions of literals. DNF: disjunction of gated conjunctions.
double forward(const GclnParams& params, const std::vector<bool>& x_row);

/// Mean squared error against the output_index-th Y column plus an L1 term
/// over all gates. Throws EmptyTableError on an empty table.
double loss(const GclnParams& params, const SampleTable& table, size_t output_index,
            double l1_lambda = 1e-6);

/// Exact analytic derivative of loss (the L1 term uses subgradient 0 at
/// gate == 0).
GclnGradient gradient(const GclnParams& params, const SampleTable& table, size_t output_index,
                      double l1_lambda = 1e-6);

/// Fraction of rows whose thresholded prediction matches the target column.
double thresholded_accuracy(const GclnParams& params, const SampleTable& table,
                            size_t output_index, double threshold);

/// True when every gate lies within tol of 0 or 1.
bool gates_saturated(const GclnParams& params, double tol);

/// Full-batch Adam with per-step projection of gates onto [0,1]. Stops
/// converged when thresholded accuracy is 1.0 and the gates are saturated,
/// or unconverged at the wall-time budget. Bit-deterministic given the seed.
TrainResult train(const SampleTable& table, size_t output_index, int k, Arch arch,
                  const TrainConfig& cfg);

/// One network per output variable, trained sequentially (output i uses
/// seed cfg.seed + i). Throws EmptyOutputsError when the table has no output
/// columns; per-output failures are rethrown naming the output.
std::vector<TrainResult> train_all_outputs(const SampleTable& table, int k, Arch arch,
                                           const TrainConfig& cfg);

} // namespace bbfs
