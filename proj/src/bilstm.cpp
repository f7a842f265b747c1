#include "plrec/bilstm.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "plrec/parallel.hpp"

namespace plrec {

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void gate_preactivation(const GateParams& gate, const double* x, std::size_t d,
                        const std::vector<double>& h_prev, std::vector<double>& out) {
    const std::size_t hidden = gate.bias.size();
    for (std::size_t r = 0; r < hidden; ++r) {
        double acc = gate.bias[r];
        const double* w = &gate.input_weights.a[r * d];
        for (std::size_t c = 0; c < d; ++c) acc += w[c] * x[c];
        const double* u = &gate.recurrent_weights.a[r * hidden];
        for (std::size_t c = 0; c < hidden; ++c) acc += u[c] * h_prev[c];
        out[r] = acc;
    }
}

// One direction over the sequence; `reversed` walks the steps back to front.
std::vector<double> run_chain(const LstmParams& params, const FeatureVector& feature,
                              const ModelShape& shape, bool reversed) {
    const std::size_t hidden = shape.hidden;
    std::vector<double> h(hidden, 0.0), c(hidden, 0.0);
    std::vector<double> in_gate(hidden), forget(hidden), out_gate(hidden), cand(hidden);
    for (std::size_t t = 0; t < shape.steps; ++t) {
        const std::size_t at = reversed ? shape.steps - 1 - t : t;
        const double* x = feature.data() + at * shape.step_dim;
        gate_preactivation(params.input_gate, x, shape.step_dim, h, in_gate);
        gate_preactivation(params.forget_gate, x, shape.step_dim, h, forget);
        gate_preactivation(params.output_gate, x, shape.step_dim, h, out_gate);
        gate_preactivation(params.candidate, x, shape.step_dim, h, cand);
        for (std::size_t r = 0; r < hidden; ++r) {
            const double ig = sigmoid(in_gate[r]);
            const double fg = sigmoid(forget[r]);
            const double og = sigmoid(out_gate[r]);
            c[r] = fg * c[r] + ig * std::tanh(cand[r]);
            h[r] = og * std::tanh(c[r]);
        }
    }
    return h;
}

void check_feature_dim(const FeatureVector& feature, const ModelShape& shape) {
    if (feature.size() != shape.steps * shape.step_dim) {
        throw std::invalid_argument("feature dimension does not match model shape");
    }
}

GateParams zero_gate(const ModelShape& shape) {
    GateParams gate;
    gate.input_weights = Matrix(shape.hidden, shape.step_dim);
    gate.recurrent_weights = Matrix(shape.hidden, shape.hidden);
    gate.bias.assign(shape.hidden, 0.0);
    return gate;
}

void append_gate(const GateParams& gate, ParamVector& out) {
    out.insert(out.end(), gate.input_weights.a.begin(), gate.input_weights.a.end());
    out.insert(out.end(), gate.recurrent_weights.a.begin(), gate.recurrent_weights.a.end());
    out.insert(out.end(), gate.bias.begin(), gate.bias.end());
}

void read_gate(const ParamVector& values, std::size_t& at, GateParams& gate) {
    for (auto& v : gate.input_weights.a) v = values[at++];
    for (auto& v : gate.recurrent_weights.a) v = values[at++];
    for (auto& v : gate.bias) v = values[at++];
}

}  // namespace

CombineMode parse_combine_mode(const std::string& name) {
    if (name == "concat") return CombineMode::Concat;
    if (name == "add") return CombineMode::Add;
    if (name == "average") return CombineMode::Average;
    if (name == "multiply") return CombineMode::Multiply;
    throw std::domain_error("unknown combine mode: " + name);
}

const char* combine_mode_name(CombineMode mode) {
    switch (mode) {
        case CombineMode::Concat: return "concat";
        case CombineMode::Add: return "add";
        case CombineMode::Average: return "average";
        case CombineMode::Multiply: return "multiply";
    }
    return "unknown";
}

std::size_t combined_size(const ModelShape& shape, CombineMode combine) {
    return combine == CombineMode::Concat ? 2 * shape.hidden : shape.hidden;
}

std::size_t param_count(const ModelShape& shape, CombineMode combine) {
    const std::size_t per_gate =
        shape.hidden * shape.step_dim + shape.hidden * shape.hidden + shape.hidden;
    return 2 * 4 * per_gate + combined_size(shape, combine) + 1;
}

ParamVector flatten(const BiLstmModel& model) {
    ParamVector out;
    out.reserve(param_count(model.shape, model.combine));
    for (const LstmParams* dir : {&model.forward, &model.backward}) {
        append_gate(dir->input_gate, out);
        append_gate(dir->forget_gate, out);
        append_gate(dir->output_gate, out);
        append_gate(dir->candidate, out);
    }
    out.insert(out.end(), model.head_weights.begin(), model.head_weights.end());
    out.push_back(model.head_bias);
    return out;
}

BiLstmModel unflatten(const ParamVector& values, const ModelShape& shape,
                      CombineMode combine) {
    if (values.size() != param_count(shape, combine)) {
        throw std::invalid_argument("parameter vector length does not match layout");
    }
    BiLstmModel model;
    model.shape = shape;
    model.combine = combine;
    for (LstmParams* dir : {&model.forward, &model.backward}) {
        dir->input_gate = zero_gate(shape);
        dir->forget_gate = zero_gate(shape);
        dir->output_gate = zero_gate(shape);
        dir->candidate = zero_gate(shape);
    }
    std::size_t at = 0;
    for (LstmParams* dir : {&model.forward, &model.backward}) {
        read_gate(values, at, dir->input_gate);
        read_gate(values, at, dir->forget_gate);
        read_gate(values, at, dir->output_gate);
        read_gate(values, at, dir->candidate);
    }
    model.head_weights.resize(combined_size(shape, combine));
    for (auto& v : model.head_weights) v = values[at++];
    model.head_bias = values[at++];
    return model;
}

std::vector<std::vector<double>> reshape_input(const FeatureVector& feature,
                                               const ModelShape& shape) {
    if (shape.steps == 0 || feature.size() % shape.steps != 0 ||
        feature.size() / shape.steps != shape.step_dim) {
        throw std::invalid_argument("feature dimension not divisible into steps");
    }
    std::vector<std::vector<double>> steps(shape.steps);
    for (std::size_t t = 0; t < shape.steps; ++t) {
        steps[t].assign(feature.begin() + static_cast<std::ptrdiff_t>(t * shape.step_dim),
                        feature.begin() + static_cast<std::ptrdiff_t>((t + 1) * shape.step_dim));
    }
    return steps;
}

std::pair<std::vector<double>, std::vector<double>> lstm_step(
    const LstmParams& params, const std::vector<double>& x,
    const std::vector<double>& h_prev, const std::vector<double>& c_prev) {
    const std::size_t hidden = params.input_gate.bias.size();
    const std::size_t d = x.size();
    std::vector<double> in_gate(hidden), forget(hidden), out_gate(hidden), cand(hidden);
    gate_preactivation(params.input_gate, x.data(), d, h_prev, in_gate);
    gate_preactivation(params.forget_gate, x.data(), d, h_prev, forget);
    gate_preactivation(params.output_gate, x.data(), d, h_prev, out_gate);
    gate_preactivation(params.candidate, x.data(), d, h_prev, cand);

    std::vector<double> c(hidden), h(hidden);
    for (std::size_t r = 0; r < hidden; ++r) {
        const double ig = sigmoid(in_gate[r]);
        const double fg = sigmoid(forget[r]);
        const double og = sigmoid(out_gate[r]);
        c[r] = fg * c_prev[r] + ig * std::tanh(cand[r]);
        h[r] = og * std::tanh(c[r]);
    }
    return {h, c};
}

std::vector<double> bilstm_forward(const BiLstmModel& model, const FeatureVector& feature) {
    check_feature_dim(feature, model.shape);
    const std::vector<double> fwd = run_chain(model.forward, feature, model.shape, false);
    const std::vector<double> bwd = run_chain(model.backward, feature, model.shape, true);

    const std::size_t hidden = model.shape.hidden;
    std::vector<double> combined;
    switch (model.combine) {
        case CombineMode::Concat:
            combined = fwd;
            combined.insert(combined.end(), bwd.begin(), bwd.end());
            break;
        case CombineMode::Add:
            combined.resize(hidden);
            for (std::size_t r = 0; r < hidden; ++r) combined[r] = fwd[r] + bwd[r];
            break;
        case CombineMode::Average:
            combined.resize(hidden);
            for (std::size_t r = 0; r < hidden; ++r) combined[r] = 0.5 * (fwd[r] + bwd[r]);
            break;
        case CombineMode::Multiply:
            combined.resize(hidden);
            for (std::size_t r = 0; r < hidden; ++r) combined[r] = fwd[r] * bwd[r];
            break;
    }
    return combined;
}

double predict(const BiLstmModel& model, const FeatureVector& feature) {
    const std::vector<double> combined = bilstm_forward(model, feature);
    double z = model.head_bias;
    for (std::size_t r = 0; r < combined.size(); ++r) {
        z += model.head_weights[r] * combined[r];
    }
    return sigmoid(z);
}

std::vector<double> score_batch_serial(const BiLstmModel& model,
                                       const std::vector<FeatureVector>& features) {
    std::vector<double> scores(features.size());
    serial_for(features.size(), [&](std::size_t i) { scores[i] = predict(model, features[i]); });
    return scores;
}

std::vector<double> score_batch(const BiLstmModel& model,
                                const std::vector<FeatureVector>& features) {
    std::vector<double> scores(features.size());
    parallel_for(features.size(), [&](std::size_t i) { scores[i] = predict(model, features[i]); });
    return scores;
}

namespace {

template <class ForLoop>
double mse_objective_impl(const ParamVector& params,
                          const std::vector<TrainingExample>& dataset,
                          const ModelShape& shape, CombineMode combine, ForLoop&& loop) {
    if (dataset.empty()) throw std::domain_error("mse_objective: empty dataset");
    const BiLstmModel model = unflatten(params, shape, combine);
    std::vector<double> losses(dataset.size());
    loop(dataset.size(), [&](std::size_t i) {
        const double diff = predict(model, dataset[i].feature) - dataset[i].label;
        losses[i] = diff * diff;
    });
    double sum = 0.0;  // fixed index order keeps reruns bit-identical
    for (double loss : losses) sum += loss;
    return sum / static_cast<double>(dataset.size());
}

}  // namespace

double mse_objective(const ParamVector& params, const std::vector<TrainingExample>& dataset,
                     const ModelShape& shape, CombineMode combine) {
    return mse_objective_impl(params, dataset, shape, combine,
                              [](std::size_t n, auto&& body) { parallel_for(n, body); });
}

double mse_objective_serial(const ParamVector& params,
                            const std::vector<TrainingExample>& dataset,
                            const ModelShape& shape, CombineMode combine) {
    return mse_objective_impl(params, dataset, shape, combine,
                              [](std::size_t n, auto&& body) { serial_for(n, body); });
}

TrainResult train_with(OptimizerKind kind, const std::vector<TrainingExample>& train_set,
                       const ModelShape& shape, CombineMode combine,
                       const PasserConfig& opt_config, double param_bound) {
    if (train_set.empty()) throw std::domain_error("train: empty training set");
    if (!(param_bound > 0.0)) throw std::domain_error("train: param_bound <= 0");
    check_feature_dim(train_set.front().feature, shape);

    const std::size_t dim = param_count(shape, combine);
    Objective objective;
    objective.dim = dim;
    objective.eval = [&train_set, shape, combine](const std::vector<double>& params) {
        return mse_objective(params, train_set, shape, combine);
    };

    PasserConfig config = opt_config;
    config.bounds = uniform_bounds(dim, -param_bound, param_bound);

    const OptimizationResult result = run_optimizer(kind, objective, config);
    TrainResult out;
    out.model = unflatten(result.best_position, shape, combine);
    out.trace = result.trace;
    return out;
}

TrainResult train(const std::vector<TrainingExample>& train_set, const ModelShape& shape,
                  CombineMode combine, const PasserConfig& opt_config, double param_bound) {
    return train_with(OptimizerKind::Passer, train_set, shape, combine, opt_config,
                      param_bound);
}

void save_model(const BiLstmModel& model, double param_bound, const std::string& path) {
    const ParamVector values = flatten(model);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    for (double v : values) out << format_sig(v, 17) << '\n';
    if (!out) throw std::runtime_error("write failure: " + path);

    std::ofstream meta(path + ".meta", std::ios::binary);
    if (!meta) throw std::runtime_error("cannot open output file: " + path + ".meta");
    meta << "bilstm v1\n"
         << "steps " << model.shape.steps << '\n'
         << "step_dim " << model.shape.step_dim << '\n'
         << "hidden " << model.shape.hidden << '\n'
         << "combine " << combine_mode_name(model.combine) << '\n'
         << "param_bound " << format_sig(param_bound, 17) << '\n';
    if (!meta) throw std::runtime_error("write failure: " + path + ".meta");
}

BiLstmModel load_model(const std::string& path) {
    std::ifstream meta(path + ".meta", std::ios::binary);
    if (!meta) throw std::runtime_error("cannot open model meta file: " + path + ".meta");
    std::string magic, version;
    meta >> magic >> version;
    if (magic != "bilstm" || version != "v1") {
        throw std::runtime_error("not a bilstm v1 model: " + path);
    }
    ModelShape shape;
    std::string combine_name = "concat";
    std::string key;
    while (meta >> key) {
        if (key == "steps") meta >> shape.steps;
        else if (key == "step_dim") meta >> shape.step_dim;
        else if (key == "hidden") meta >> shape.hidden;
        else if (key == "combine") meta >> combine_name;
        else {
            std::string skip;
            meta >> skip;
        }
    }
    const CombineMode combine = parse_combine_mode(combine_name);

    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    ParamVector values;
    double v = 0.0;
    while (in >> v) values.push_back(v);
    return unflatten(values, shape, combine);
}

}  // namespace plrec
