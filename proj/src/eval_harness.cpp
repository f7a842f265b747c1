#include "plrec/eval_harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace plrec {

ConfusionCounts confusion(const std::vector<double>& scores, const std::vector<int>& labels,
                          double threshold) {
    if (scores.empty()) throw std::domain_error("confusion: empty inputs");
    if (scores.size() != labels.size()) {
        throw std::domain_error("confusion: scores/labels length mismatch");
    }
    ConfusionCounts counts;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted = scores[i] >= threshold;
        const bool actual = labels[i] == 1;
        if (predicted && actual) ++counts.tp;
        else if (predicted && !actual) ++counts.fp;
        else if (!predicted && actual) ++counts.fn;
        else ++counts.tn;
    }
    return counts;
}

MetricReport metrics(const ConfusionCounts& counts, const std::vector<double>& scores,
                     const std::vector<int>& labels) {
    if (scores.size() != labels.size()) {
        throw std::domain_error("metrics: scores/labels length mismatch");
    }
    if (counts.total() != static_cast<std::int64_t>(scores.size())) {
        throw std::domain_error("metrics: counts inconsistent with scores");
    }
    MetricReport report;
    const double tp = static_cast<double>(counts.tp);
    const double fp = static_cast<double>(counts.fp);
    const double fn = static_cast<double>(counts.fn);
    report.precision = (counts.tp + counts.fp) > 0 ? tp / (tp + fp) : 0.0;
    report.recall = (counts.tp + counts.fn) > 0 ? tp / (tp + fn) : 0.0;
    const double f1_denom = 2.0 * tp + fp + fn;
    report.f1 = f1_denom > 0.0 ? 2.0 * tp / f1_denom : 0.0;

    double sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double diff = scores[i] - labels[i];
        sum += diff * diff;
    }
    report.mse = sum / static_cast<double>(scores.size());
    return report;
}

FeaturePipeline FeaturePipeline::fit(const std::vector<ReviewRecord>& train_records,
                                     const FeatureParams& params) {
    std::vector<TokenList> corpus;
    corpus.reserve(train_records.size());
    for (const auto& r : train_records) corpus.push_back(tokenize(clean_text(r.text)));

    FeaturePipeline pipeline;
    const Vocabulary vocab = build_vocabulary(corpus, params.vocab_cap);
    pipeline.tfidf = fit_idf(corpus, vocab);
    pipeline.embeddings =
        fit_node_embeddings(build_interaction_graph(train_records), params.embedding);
    pipeline.rank = params.embedding.rank;
    return pipeline;
}

FeatureVector FeaturePipeline::transform(const ReviewRecord& record) const {
    const FeatureVector text_part = tfidf_vector(tokenize(clean_text(record.text)), tfidf);
    const std::vector<double> graph_part = item_feature(record.item_id, embeddings, rank);
    return concat_features(text_part, graph_part);
}

FeatureVector pad_to_steps(FeatureVector feature, std::size_t steps) {
    if (steps == 0) throw std::domain_error("pad_to_steps: zero steps");
    const std::size_t remainder = feature.size() % steps;
    if (remainder != 0) feature.resize(feature.size() + steps - remainder, 0.0);
    return feature;
}

std::uint64_t run_derived_seed(std::uint64_t base, double fraction, int budget) {
    return Rng::derive(base, static_cast<std::uint64_t>(std::llround(fraction * 1000.0)),
                       static_cast<std::uint64_t>(budget));
}

namespace {

RunRecord execute_run(const std::vector<LabeledExample>& examples, double fraction,
                      int budget, std::uint64_t seed, const ExperimentConfig& config) {
    RunRecord record;
    record.dataset_id = config.dataset_id;
    record.method = optimizer_name(config.method);
    record.train_fraction = fraction;
    record.budget_level = budget;
    record.seed = seed;

    const auto started = std::chrono::steady_clock::now();
    try {
        const std::uint64_t derived = run_derived_seed(seed, fraction, budget);
        const DatasetSplit data = split(examples, fraction, derived);
        if (data.test.empty()) throw std::domain_error("run: empty test split");

        std::vector<ReviewRecord> train_records;
        train_records.reserve(data.train.size());
        for (const auto& ex : data.train) train_records.push_back(ex.record);

        FeatureParams feature_params = config.features;
        feature_params.embedding.seed = Rng::derive(derived, 1);
        const FeaturePipeline pipeline = FeaturePipeline::fit(train_records, feature_params);

        ModelShape shape;
        shape.steps = config.steps;
        shape.hidden = config.hidden;
        const std::size_t padded = pad_to_steps(FeatureVector(pipeline.dimension(), 0.0),
                                                config.steps)
                                       .size();
        shape.step_dim = padded / config.steps;

        auto featurize = [&](const std::vector<LabeledExample>& split_part) {
            std::vector<TrainingExample> out;
            out.reserve(split_part.size());
            for (const auto& ex : split_part) {
                out.push_back({pad_to_steps(pipeline.transform(ex.record), config.steps),
                               ex.label});
            }
            return out;
        };
        const std::vector<TrainingExample> train_set = featurize(data.train);
        const std::vector<TrainingExample> test_set = featurize(data.test);

        PasserConfig optimizer = config.optimizer;
        optimizer.max_iter = budget * config.epoch_scale;
        optimizer.seed = Rng::derive(derived, 2);
        const TrainResult trained = train_with(config.method, train_set, shape,
                                               config.combine, optimizer, config.param_bound);

        std::vector<FeatureVector> test_features;
        std::vector<int> test_labels;
        test_features.reserve(test_set.size());
        for (const auto& ex : test_set) {
            test_features.push_back(ex.feature);
            test_labels.push_back(ex.label);
        }
        const std::vector<double> scores = score_batch(trained.model, test_features);
        record.metrics = metrics(confusion(scores, test_labels, config.threshold), scores,
                                 test_labels);
    } catch (const std::exception& e) {
        record.error = e.what();
    }
    record.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return record;
}

}  // namespace

std::vector<RunRecord> run_experiment(const std::vector<LabeledExample>& examples,
                                      const ExperimentGrid& grid,
                                      const ExperimentConfig& config) {
    if (examples.empty()) throw std::domain_error("run_experiment: no examples");
    std::vector<RunRecord> records;
    records.reserve(grid.fractions.size() * grid.budget_levels.size() * grid.seeds.size());
    for (double fraction : grid.fractions) {
        for (int budget : grid.budget_levels) {
            for (std::uint64_t seed : grid.seeds) {
                records.push_back(execute_run(examples, fraction, budget, seed, config));
            }
        }
    }
    return records;
}

namespace {

std::string percent(double value) { return format_sig(value * 100.0, 6); }

struct GridKey {
    std::string dataset;
    double fraction;
    int budget;
    std::uint64_t seed;

    auto operator<=>(const GridKey&) const = default;
};

}  // namespace

ComparisonTable compare_table(const std::map<std::string, std::vector<RunRecord>>& by_method) {
    if (by_method.empty()) throw std::domain_error("compare_table: no methods");

    std::set<GridKey> reference_grid;
    bool first = true;
    for (const auto& [method, records] : by_method) {
        std::set<GridKey> grid;
        for (const auto& r : records) {
            grid.insert({r.dataset_id, r.train_fraction, r.budget_level, r.seed});
        }
        if (first) {
            reference_grid = std::move(grid);
            first = false;
        } else if (grid != reference_grid) {
            throw std::domain_error("compare_table: methods cover different grids");
        }
    }

    ComparisonTable table;
    table.header = {"Method", "F1-score", "MSE", "Precision", "Recall"};
    for (const auto& [method, records] : by_method) {
        double best_f1 = 0.0, best_precision = 0.0, best_recall = 0.0;
        double best_mse = std::numeric_limits<double>::infinity();
        bool any = false;
        for (const auto& r : records) {
            if (!r.ok()) continue;
            any = true;
            best_f1 = std::max(best_f1, r.metrics.f1);
            best_precision = std::max(best_precision, r.metrics.precision);
            best_recall = std::max(best_recall, r.metrics.recall);
            best_mse = std::min(best_mse, r.metrics.mse);
        }
        if (!any) {
            table.rows.push_back({method, "n/a", "n/a", "n/a", "n/a"});
            continue;
        }
        table.rows.push_back({method, percent(best_f1), percent(best_mse),
                              percent(best_precision), percent(best_recall)});
    }
    table.rows.push_back({"reference (paper-reported, not reproduced)", "90.72", "1.22",
                          "93.52", "92.54"});
    return table;
}

std::string table_to_text(const ComparisonTable& table) {
    std::vector<std::size_t> widths(table.header.size(), 0);
    auto widen = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    };
    widen(table.header);
    for (const auto& row : table.rows) widen(row);

    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c];
            if (c + 1 < row.size()) out << std::string(widths[c] - row[c].size() + 2, ' ');
        }
        out << '\n';
    };
    emit(table.header);
    for (const auto& row : table.rows) emit(row);
    return out.str();
}

std::string table_to_csv(const ComparisonTable& table) {
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::string cell = row[c];
            if (cell.find(',') != std::string::npos) cell = '"' + cell + '"';
            out << cell << (c + 1 < row.size() ? "," : "\n");
        }
    };
    emit(table.header);
    for (const auto& row : table.rows) emit(row);
    return out.str();
}

namespace {

std::string format_fraction(double fraction) { return format_sig(fraction, 6); }

std::vector<std::array<std::string, 7>> report_rows(const std::vector<RunRecord>& records) {
    std::vector<std::array<std::string, 7>> rows;
    rows.reserve(records.size() * 4);
    for (const auto& r : records) {
        if (!r.ok()) {
            rows.push_back({r.dataset_id, r.method, format_fraction(r.train_fraction),
                            std::to_string(r.budget_level), std::to_string(r.seed), "error",
                            "nan"});
            continue;
        }
        const std::pair<const char*, double> values[] = {
            {"f1", r.metrics.f1},
            {"mse", r.metrics.mse},
            {"precision", r.metrics.precision},
            {"recall", r.metrics.recall},
        };
        for (const auto& [metric, value] : values) {
            rows.push_back({r.dataset_id, r.method, format_fraction(r.train_fraction),
                            std::to_string(r.budget_level), std::to_string(r.seed), metric,
                            format_sig(value, 6)});
        }
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::string report_csv_string(const std::vector<RunRecord>& records) {
    std::ostringstream out;
    out << "dataset,method,train_fraction,budget,seed,metric,value\n";
    for (const auto& row : report_rows(records)) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c] << (c + 1 < row.size() ? "," : "\n");
        }
    }
    return out.str();
}

std::string report_json_string(const std::vector<RunRecord>& records) {
    std::ostringstream out;
    out << "[\n";
    const auto rows = report_rows(records);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        out << "  {\"dataset\": \"" << json_escape(row[0]) << "\", \"method\": \""
            << json_escape(row[1]) << "\", \"train_fraction\": " << row[2]
            << ", \"budget\": " << row[3] << ", \"seed\": " << row[4] << ", \"metric\": \""
            << row[5] << "\", \"value\": " << (row[6] == "nan" ? "null" : row[6]) << "}"
            << (i + 1 < rows.size() ? "," : "") << '\n';
    }
    out << "]\n";
    return out.str();
}

ReportFiles emit_report(const std::vector<RunRecord>& records, const std::string& directory) {
    if (records.empty()) throw std::domain_error("emit_report: no records");
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw std::runtime_error("cannot create report directory: " + directory);

    ReportFiles files;
    files.csv_path = (std::filesystem::path(directory) / "report.csv").string();
    files.json_path = (std::filesystem::path(directory) / "report.json").string();

    std::ofstream csv(files.csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open report file: " + files.csv_path);
    csv << report_csv_string(records);
    if (!csv) throw std::runtime_error("write failure: " + files.csv_path);

    std::ofstream json(files.json_path, std::ios::binary);
    if (!json) throw std::runtime_error("cannot open report file: " + files.json_path);
    json << report_json_string(records);
    if (!json) throw std::runtime_error("write failure: " + files.json_path);
    return files;
}

void save_features(const std::vector<TrainingExample>& examples, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    const std::size_t dim = examples.empty() ? 0 : examples.front().feature.size();
    out << "feat v1 " << examples.size() << ' ' << dim << '\n';
    for (const auto& ex : examples) {
        if (ex.feature.size() != dim) {
            throw std::domain_error("save_features: inconsistent feature dimensions");
        }
        out << ex.label;
        for (double v : ex.feature) out << ' ' << format_sig(v, 17);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failure: " + path);
}

std::vector<TrainingExample> load_features(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open features file: " + path);
    std::string magic, version;
    std::size_t n = 0, dim = 0;
    in >> magic >> version >> n >> dim;
    if (magic != "feat" || version != "v1" || !in) {
        throw std::runtime_error("not a feat v1 file: " + path);
    }
    std::vector<TrainingExample> examples(n);
    for (auto& ex : examples) {
        if (!(in >> ex.label)) throw std::runtime_error("truncated features file: " + path);
        ex.feature.resize(dim);
        for (auto& v : ex.feature) {
            if (!(in >> v)) throw std::runtime_error("truncated features file: " + path);
        }
    }
    return examples;
}

}  // namespace plrec
