// plrec: gradient-free recommendation toolkit command line.
//
// Subcommands: ingest, featurize, train, evaluate, experiment, bench-opt.
// Every subcommand accepts --config <file> (plain "key = value" lines) and
// --seed <u64>; precedence is built-in defaults < config file < flags.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "plrec/bilstm.hpp"
#include "plrec/data_ingest.hpp"
#include "plrec/eval_harness.hpp"
#include "plrec/graph_embedding.hpp"
#include "plrec/optimizer.hpp"
#include "plrec/tfidf.hpp"

namespace {

struct Settings {
    std::uint64_t seed = 0;
    std::string dataset;  // defaults to the input file stem

    // features
    std::size_t vocab_cap = 1936;
    std::size_t embedding_rank = 64;
    int walks_per_node = 10;
    int walk_length = 8;
    int window = 2;
    int factorize_iterations = 100;

    // model
    std::size_t steps = 20;
    std::size_t hidden = 8;
    std::string combine = "concat";
    double param_bound = 2.0;

    // optimizer
    int pop_size = 30;
    int max_iter = 300;
    double producer_fraction = 0.2;
    double investigator_fraction = 0.1;
    double awareness_probability = 0.8;
    double flight_length = 1.0;

    // experiment grid
    std::string fractions = "0.4,0.5,0.6,0.7,0.8,0.9";
    std::string budgets = "10,15,20,25,30";
    std::string seeds = "0";
    std::string methods = "pl";
    int epoch_scale = 10;
    double threshold = 0.5;

    // bench-opt
    int bench_iterations = 200;
};

std::string trim(const std::string& s) {
    const auto from = s.find_first_not_of(" \t\r\n");
    if (from == std::string::npos) return "";
    const auto to = s.find_last_not_of(" \t\r\n");
    return s.substr(from, to - from + 1);
}

template <class T>
T parse_value(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    T value;
    if (!(in >> value)) throw std::runtime_error("config: bad value for " + key);
    std::string extra;
    if (in >> extra) throw std::runtime_error("config: bad value for " + key);
    return value;
}

void apply_config_file(Settings& s, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);

    std::map<std::string, std::function<void(const std::string&)>> schema = {
        {"seed", [&](const std::string& v) { s.seed = parse_value<std::uint64_t>(v, "seed"); }},
        {"dataset", [&](const std::string& v) { s.dataset = v; }},
        {"vocab_cap", [&](const std::string& v) { s.vocab_cap = parse_value<std::size_t>(v, "vocab_cap"); }},
        {"embedding_rank", [&](const std::string& v) { s.embedding_rank = parse_value<std::size_t>(v, "embedding_rank"); }},
        {"walks_per_node", [&](const std::string& v) { s.walks_per_node = parse_value<int>(v, "walks_per_node"); }},
        {"walk_length", [&](const std::string& v) { s.walk_length = parse_value<int>(v, "walk_length"); }},
        {"window", [&](const std::string& v) { s.window = parse_value<int>(v, "window"); }},
        {"factorize_iterations", [&](const std::string& v) { s.factorize_iterations = parse_value<int>(v, "factorize_iterations"); }},
        {"steps", [&](const std::string& v) { s.steps = parse_value<std::size_t>(v, "steps"); }},
        {"hidden", [&](const std::string& v) { s.hidden = parse_value<std::size_t>(v, "hidden"); }},
        {"combine", [&](const std::string& v) { s.combine = v; }},
        {"param_bound", [&](const std::string& v) { s.param_bound = parse_value<double>(v, "param_bound"); }},
        {"pop_size", [&](const std::string& v) { s.pop_size = parse_value<int>(v, "pop_size"); }},
        {"max_iter", [&](const std::string& v) { s.max_iter = parse_value<int>(v, "max_iter"); }},
        {"producer_fraction", [&](const std::string& v) { s.producer_fraction = parse_value<double>(v, "producer_fraction"); }},
        {"investigator_fraction", [&](const std::string& v) { s.investigator_fraction = parse_value<double>(v, "investigator_fraction"); }},
        {"awareness_probability", [&](const std::string& v) { s.awareness_probability = parse_value<double>(v, "awareness_probability"); }},
        {"flight_length", [&](const std::string& v) { s.flight_length = parse_value<double>(v, "flight_length"); }},
        {"fractions", [&](const std::string& v) { s.fractions = v; }},
        {"budgets", [&](const std::string& v) { s.budgets = v; }},
        {"seeds", [&](const std::string& v) { s.seeds = v; }},
        {"methods", [&](const std::string& v) { s.methods = v; }},
        {"epoch_scale", [&](const std::string& v) { s.epoch_scale = parse_value<int>(v, "epoch_scale"); }},
        {"threshold", [&](const std::string& v) { s.threshold = parse_value<double>(v, "threshold"); }},
        {"bench_iterations", [&](const std::string& v) { s.bench_iterations = parse_value<int>(v, "bench_iterations"); }},
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config: missing '=' at line " + std::to_string(line_no));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto it = schema.find(key);
        if (it == schema.end()) throw std::runtime_error("config: unknown key: " + key);
        it->second(value);
    }
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string current;
    for (char c : text) {
        if (c == ',') {
            if (!trim(current).empty()) out.push_back(trim(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!trim(current).empty()) out.push_back(trim(current));
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(parse_value<double>(item, key));
    if (out.empty()) throw std::runtime_error("empty list for " + key);
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& key) {
    std::vector<int> out;
    for (const auto& item : split_list(text)) out.push_back(parse_value<int>(item, key));
    if (out.empty()) throw std::runtime_error("empty list for " + key);
    return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text, const std::string& key) {
    std::vector<std::uint64_t> out;
    for (const auto& item : split_list(text)) {
        out.push_back(parse_value<std::uint64_t>(item, key));
    }
    if (out.empty()) throw std::runtime_error("empty list for " + key);
    return out;
}

plrec::OptimizerKind parse_method(const std::string& name) {
    if (name == "pl") return plrec::OptimizerKind::Passer;
    if (name == "pso") return plrec::OptimizerKind::Pso;
    if (name == "random") return plrec::OptimizerKind::RandomSearch;
    throw std::runtime_error("unknown method: " + name + " (expected pl, pso, or random)");
}

std::string file_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

plrec::PasserConfig optimizer_config(const Settings& s) {
    plrec::PasserConfig config;
    config.pop_size = s.pop_size;
    config.max_iter = s.max_iter;
    config.producer_fraction = s.producer_fraction;
    config.investigator_fraction = s.investigator_fraction;
    config.awareness_probability = s.awareness_probability;
    config.flight_length = s.flight_length;
    config.seed = s.seed;
    return config;
}

plrec::FeatureParams feature_params(const Settings& s) {
    plrec::FeatureParams params;
    params.vocab_cap = s.vocab_cap;
    params.embedding.rank = s.embedding_rank;
    params.embedding.walks_per_node = s.walks_per_node;
    params.embedding.walk_length = s.walk_length;
    params.embedding.window = s.window;
    params.embedding.iterations = s.factorize_iterations;
    params.embedding.seed = s.seed;
    return params;
}

int run_ingest(const Settings&, const std::string& input, const std::string& output) {
    const plrec::ParseResult parsed = plrec::parse_reviews_file(input);
    plrec::write_records_file(parsed.records, output);
    std::cout << "ingested " << parsed.records.size() << " records, skipped "
              << parsed.skipped << " malformed lines -> " << output << '\n';
    return 0;
}

int run_featurize(const Settings& s, const std::string& input, const std::string& output,
                  const std::string& tfidf_out, const std::string& emb_out) {
    const plrec::ParseResult parsed = plrec::parse_reviews_file(input);
    if (parsed.records.empty()) throw std::runtime_error("no records in " + input);

    const plrec::FeaturePipeline pipeline =
        plrec::FeaturePipeline::fit(parsed.records, feature_params(s));

    std::vector<plrec::TrainingExample> examples;
    examples.reserve(parsed.records.size());
    for (const auto& record : parsed.records) {
        examples.push_back({pipeline.transform(record), plrec::derive_label(record.rating)});
    }
    plrec::save_features(examples, output);
    if (!tfidf_out.empty()) plrec::save_tfidf(pipeline.tfidf, tfidf_out);
    if (!emb_out.empty()) plrec::save_embeddings(pipeline.embeddings, emb_out);
    std::cout << "featurized " << examples.size() << " examples, dimension "
              << pipeline.dimension() << " -> " << output << '\n';
    return 0;
}

int run_train(const Settings& s, const std::string& input, const std::string& output,
              const std::string& trace_out, const std::string& method_name) {
    std::vector<plrec::TrainingExample> examples = plrec::load_features(input);
    if (examples.empty()) throw std::runtime_error("no examples in " + input);
    for (auto& ex : examples) ex.feature = plrec::pad_to_steps(std::move(ex.feature), s.steps);

    plrec::ModelShape shape;
    shape.steps = s.steps;
    shape.step_dim = examples.front().feature.size() / s.steps;
    shape.hidden = s.hidden;

    const plrec::CombineMode combine = plrec::parse_combine_mode(s.combine);
    const plrec::TrainResult trained =
        plrec::train_with(parse_method(method_name), examples, shape, combine,
                          optimizer_config(s), s.param_bound);
    plrec::save_model(trained.model, s.param_bound, output);
    if (!trace_out.empty()) {
        plrec::OptimizationResult result;
        result.trace = trained.trace;
        plrec::write_trace_csv(result, trace_out);
    }
    std::cout << "trained " << method_name << " model on " << examples.size()
              << " examples, final objective " << plrec::format_sig(trained.trace.back(), 9)
              << " -> " << output << '\n';
    return 0;
}

int run_evaluate(const Settings& s, const std::string& model_path,
                 const std::string& features_path, const std::string& out_dir,
                 const std::string& method_name) {
    const plrec::BiLstmModel model = plrec::load_model(model_path);
    std::vector<plrec::TrainingExample> examples = plrec::load_features(features_path);
    if (examples.empty()) throw std::runtime_error("no examples in " + features_path);

    const std::size_t expect = model.shape.steps * model.shape.step_dim;
    std::vector<plrec::FeatureVector> features;
    std::vector<int> labels;
    features.reserve(examples.size());
    for (auto& ex : examples) {
        plrec::FeatureVector f = std::move(ex.feature);
        if (f.size() < expect) f.resize(expect, 0.0);
        if (f.size() != expect) {
            throw std::runtime_error("feature dimension does not match model shape");
        }
        features.push_back(std::move(f));
        labels.push_back(ex.label);
    }

    const std::vector<double> scores = plrec::score_batch(model, features);
    plrec::RunRecord record;
    record.dataset_id = s.dataset.empty() ? file_stem(features_path) : s.dataset;
    record.method = method_name;
    record.seed = s.seed;
    record.metrics =
        plrec::metrics(plrec::confusion(scores, labels, s.threshold), scores, labels);

    const plrec::ReportFiles files = plrec::emit_report({record}, out_dir);
    std::cout << "precision " << plrec::format_sig(record.metrics.precision, 6) << ", recall "
              << plrec::format_sig(record.metrics.recall, 6) << ", f1 "
              << plrec::format_sig(record.metrics.f1, 6) << ", mse "
              << plrec::format_sig(record.metrics.mse, 6) << '\n'
              << "report -> " << files.csv_path << '\n';
    return 0;
}

int run_experiment_cmd(const Settings& s, const std::string& input,
                       const std::string& out_dir, bool grid_defaults) {
    const plrec::ParseResult parsed = plrec::parse_reviews_file(input);
    if (parsed.records.empty()) throw std::runtime_error("no records in " + input);
    const std::vector<plrec::LabeledExample> examples = plrec::label_examples(parsed.records);

    plrec::ExperimentGrid grid;
    if (!grid_defaults) {
        grid.fractions = parse_double_list(s.fractions, "fractions");
        grid.budget_levels = parse_int_list(s.budgets, "budgets");
        grid.seeds = parse_seed_list(s.seeds, "seeds");
    }

    plrec::ExperimentConfig config;
    config.dataset_id = s.dataset.empty() ? file_stem(input) : s.dataset;
    config.features = feature_params(s);
    config.steps = s.steps;
    config.hidden = s.hidden;
    config.combine = plrec::parse_combine_mode(s.combine);
    config.param_bound = s.param_bound;
    config.epoch_scale = s.epoch_scale;
    config.threshold = s.threshold;
    config.optimizer = optimizer_config(s);

    std::map<std::string, std::vector<plrec::RunRecord>> by_method;
    std::vector<plrec::RunRecord> all_records;
    for (const auto& method_name : split_list(s.methods)) {
        config.method = parse_method(method_name);
        std::vector<plrec::RunRecord> records = plrec::run_experiment(examples, grid, config);
        all_records.insert(all_records.end(), records.begin(), records.end());
        by_method.emplace(method_name, std::move(records));
    }

    const plrec::ReportFiles files = plrec::emit_report(all_records, out_dir);
    std::cout << "report -> " << files.csv_path << '\n';

    if (by_method.size() > 1) {
        const plrec::ComparisonTable table = plrec::compare_table(by_method);
        const auto table_path = std::filesystem::path(out_dir) / "comparison.csv";
        std::ofstream table_file(table_path, std::ios::binary);
        table_file << plrec::table_to_csv(table);
        std::cout << plrec::table_to_text(table) << "comparison -> " << table_path.string()
                  << '\n';
    }
    return 0;
}

int run_bench(const Settings& s, const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + out_dir);

    const plrec::OptimizerKind kinds[] = {plrec::OptimizerKind::Passer,
                                          plrec::OptimizerKind::Pso,
                                          plrec::OptimizerKind::RandomSearch};
    std::ostringstream summary;
    summary << "function,method,best_fitness\n";
    for (const auto& fn : plrec::benchmark_suite()) {
        for (const auto kind : kinds) {
            plrec::PasserConfig config = optimizer_config(s);
            config.max_iter = s.bench_iterations;
            config.bounds = fn.bounds;
            const plrec::OptimizationResult result =
                plrec::run_optimizer(kind, fn.objective, config);
            const auto trace_path = std::filesystem::path(out_dir) /
                                    (fn.name + "_" + plrec::optimizer_name(kind) + ".csv");
            plrec::write_trace_csv(result, trace_path.string());
            summary << fn.name << ',' << plrec::optimizer_name(kind) << ','
                    << plrec::format_sig(result.best_fitness, 9) << '\n';
        }
    }
    const auto summary_path = std::filesystem::path(out_dir) / "summary.csv";
    std::ofstream out(summary_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + summary_path.string());
    out << summary.str();
    std::cout << "benchmark traces -> " << out_dir << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Settings settings;

    // --config applies before flag parsing so flags can override it.
    try {
        for (int i = 1; i + 1 < argc; ++i) {
            if (std::string(argv[i]) == "--config") {
                apply_config_file(settings, argv[i + 1]);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    CLI::App app{"gradient-free Bi-LSTM recommendation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.footer(
        "Config file keys (key = value lines, '#' comments):\n"
        "  seed, dataset, vocab_cap, embedding_rank, walks_per_node, walk_length,\n"
        "  window, factorize_iterations, steps, hidden, combine, param_bound,\n"
        "  pop_size, max_iter, producer_fraction, investigator_fraction,\n"
        "  awareness_probability, flight_length, fractions, budgets, seeds,\n"
        "  methods, epoch_scale, threshold, bench_iterations");
    std::string config_path;
    app.add_option("--config", config_path, "configuration file (key = value lines)");
    app.add_option("--seed", settings.seed, "random seed");

    std::string input, output, tfidf_out, emb_out, trace_out, model_path, method = "pl";
    bool grid_defaults = false;

    CLI::App* ingest = app.add_subcommand("ingest", "parse raw review JSON lines");
    ingest->add_option("reviews-file", input, "newline-delimited review records")->required();
    ingest->add_option("--out", output, "output records file")->required();

    CLI::App* featurize = app.add_subcommand("featurize", "extract TF-IDF + graph features");
    featurize->add_option("records", input, "records file from ingest")->required();
    featurize->add_option("--out", output, "output features file")->required();
    featurize->add_option("--tfidf-out", tfidf_out, "also write the TF-IDF model");
    featurize->add_option("--emb-out", emb_out, "also write the embedding table");
    featurize->add_option("--vocab-cap", settings.vocab_cap, "vocabulary size cap");
    featurize->add_option("--embedding-rank", settings.embedding_rank, "embedding rank");

    CLI::App* train = app.add_subcommand("train", "train the Bi-LSTM gradient-free");
    train->add_option("features", input, "features file from featurize")->required();
    train->add_option("--out", output, "output model file")->required();
    train->add_option("--trace-out", trace_out, "also write the fitness trace CSV");
    train->add_option("--method", method, "optimizer: pl, pso, or random");
    train->add_option("--steps", settings.steps, "sequence steps T");
    train->add_option("--hidden", settings.hidden, "hidden units H");
    train->add_option("--combine", settings.combine, "concat, add, average, or multiply");
    train->add_option("--pop-size", settings.pop_size, "population size");
    train->add_option("--max-iter", settings.max_iter, "optimizer iterations");
    train->add_option("--param-bound", settings.param_bound, "search bound per parameter");

    CLI::App* evaluate = app.add_subcommand("evaluate", "score features against a model");
    evaluate->add_option("model", model_path, "model file from train")->required();
    evaluate->add_option("features", input, "features file")->required();
    evaluate->add_option("--out", output, "output report directory")->required();
    evaluate->add_option("--method", method, "method label for the report");
    evaluate->add_option("--dataset", settings.dataset, "dataset label for the report");
    evaluate->add_option("--threshold", settings.threshold, "positive decision threshold");

    CLI::App* experiment = app.add_subcommand("experiment", "run the full evaluation grid");
    experiment->add_option("records", input, "records file")->required();
    experiment->add_option("--out", output, "output report directory")->required();
    experiment->add_flag("--grid-defaults", grid_defaults,
                         "use the default fraction/budget grid");
    experiment->add_option("--fractions", settings.fractions, "train fractions, e.g. 0.4,0.9");
    experiment->add_option("--budgets", settings.budgets, "budget levels, e.g. 10,20,30");
    experiment->add_option("--seeds", settings.seeds, "comma-separated seeds");
    experiment->add_option("--methods", settings.methods, "methods to run: pl,pso,random");
    experiment->add_option("--epoch-scale", settings.epoch_scale,
                           "optimizer iterations per budget unit");
    experiment->add_option("--dataset", settings.dataset, "dataset label for the report");
    experiment->add_option("--pop-size", settings.pop_size, "population size");
    experiment->add_option("--steps", settings.steps, "sequence steps T");
    experiment->add_option("--hidden", settings.hidden, "hidden units H");
    experiment->add_option("--vocab-cap", settings.vocab_cap, "vocabulary size cap");
    experiment->add_option("--embedding-rank", settings.embedding_rank, "embedding rank");

    CLI::App* bench = app.add_subcommand("bench-opt", "optimizer benchmark suite");
    bool suite = true;
    bench->add_flag("--suite", suite, "run the full benchmark suite");
    bench->add_option("--out", output, "output trace directory")->required();
    bench->add_option("--pop-size", settings.pop_size, "population size");
    bench->add_option("--iterations", settings.bench_iterations, "iterations per run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*ingest) return run_ingest(settings, input, output);
        if (*featurize) return run_featurize(settings, input, output, tfidf_out, emb_out);
        if (*train) return run_train(settings, input, output, trace_out, method);
        if (*evaluate) return run_evaluate(settings, model_path, input, output, method);
        if (*experiment) return run_experiment_cmd(settings, input, output, grid_defaults);
        if (*bench) return run_bench(settings, output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
