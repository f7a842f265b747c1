#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "plrec/matrix.hpp"
#include "plrec/optimizer.hpp"
#include "plrec/tfidf.hpp"

namespace plrec {

struct ModelShape {
    std::size_t steps = 20;    // T
    std::size_t step_dim = 0;  // d, T * d = feature dimension
    std::size_t hidden = 8;    // H
};

struct GateParams {
    Matrix input_weights;      // H x d
    Matrix recurrent_weights;  // H x H
    std::vector<double> bias;  // H
};

struct LstmParams {
    GateParams input_gate;
    GateParams forget_gate;
    GateParams output_gate;
    GateParams candidate;
};

enum class CombineMode { Concat, Add, Average, Multiply };

CombineMode parse_combine_mode(const std::string& name);
const char* combine_mode_name(CombineMode mode);

struct BiLstmModel {
    LstmParams forward;
    LstmParams backward;
    std::vector<double> head_weights;  // 2H for concat, H otherwise
    double head_bias = 0.0;
    CombineMode combine = CombineMode::Concat;
    ModelShape shape;
};

// Flattened search-space view of a model. Layout: forward gates E,J,P,m
// (each W row-major, U row-major, b), backward likewise, head weights, head
// bias.
using ParamVector = std::vector<double>;

std::size_t combined_size(const ModelShape& shape, CombineMode combine);
std::size_t param_count(const ModelShape& shape, CombineMode combine);

ParamVector flatten(const BiLstmModel& model);
BiLstmModel unflatten(const ParamVector& values, const ModelShape& shape, CombineMode combine);

// Splits a flat feature into T step vectors of length d.
std::vector<std::vector<double>> reshape_input(const FeatureVector& feature,
                                               const ModelShape& shape);

std::pair<std::vector<double>, std::vector<double>> lstm_step(
    const LstmParams& params, const std::vector<double>& x,
    const std::vector<double>& h_prev, const std::vector<double>& c_prev);

std::vector<double> bilstm_forward(const BiLstmModel& model, const FeatureVector& feature);

// Sigmoid score over the combined hidden states.
double predict(const BiLstmModel& model, const FeatureVector& feature);

// Scores many examples; OpenMP kernel with a serial reference.
std::vector<double> score_batch(const BiLstmModel& model,
                                const std::vector<FeatureVector>& features);
std::vector<double> score_batch_serial(const BiLstmModel& model,
                                       const std::vector<FeatureVector>& features);

struct TrainingExample {
    FeatureVector feature;
    int label = 0;
};

// Mean squared error of predictions against {0,1} labels. Per-example terms
// may be computed in parallel; the sum is taken in fixed index order.
double mse_objective(const ParamVector& params, const std::vector<TrainingExample>& dataset,
                     const ModelShape& shape, CombineMode combine);
double mse_objective_serial(const ParamVector& params,
                            const std::vector<TrainingExample>& dataset,
                            const ModelShape& shape, CombineMode combine);

struct TrainResult {
    BiLstmModel model;
    std::vector<double> trace;
};

// Gradient-free training: optimizes the flattened parameters over
// [-param_bound, param_bound] per coordinate against the MSE objective.
TrainResult train(const std::vector<TrainingExample>& train_set, const ModelShape& shape,
                  CombineMode combine, const PasserConfig& opt_config, double param_bound);
TrainResult train_with(OptimizerKind kind, const std::vector<TrainingExample>& train_set,
                       const ModelShape& shape, CombineMode combine,
                       const PasserConfig& opt_config, double param_bound);

// Model files: <path> holds one parameter per line (17 significant digits),
// <path>.meta records shape, combine mode, and the search bound.
void save_model(const BiLstmModel& model, double param_bound, const std::string& path);
BiLstmModel load_model(const std::string& path);

}  // namespace plrec
