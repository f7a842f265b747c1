#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "plrec/bilstm.hpp"
#include "plrec/data_ingest.hpp"
#include "plrec/graph_embedding.hpp"
#include "plrec/optimizer.hpp"
#include "plrec/tfidf.hpp"

namespace plrec {

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    std::int64_t total() const { return tp + fp + fn + tn; }
};

struct MetricReport {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double mse = 0.0;
};

// score >= threshold predicts positive (the boundary counts as positive).
ConfusionCounts confusion(const std::vector<double>& scores, const std::vector<int>& labels,
                          double threshold);

// precision tp/(tp+fp), recall tp/(tp+fn), f1 2tp/(2tp+fp+fn), mse over raw
// scores; zero-denominator cases are defined as 0.
MetricReport metrics(const ConfusionCounts& counts, const std::vector<double>& scores,
                     const std::vector<int>& labels);

// Fit-on-train feature extraction: TF-IDF vocabulary/IDF plus item graph
// embeddings come from the train records only, then apply anywhere.
struct FeatureParams {
    std::size_t vocab_cap = 1936;
    EmbeddingParams embedding;  // rank 64 by default: 1936 + 64 = 2000
};

struct FeaturePipeline {
    TfidfModel tfidf;
    EmbeddingTable embeddings;
    std::size_t rank = 0;

    static FeaturePipeline fit(const std::vector<ReviewRecord>& train_records,
                               const FeatureParams& params);
    FeatureVector transform(const ReviewRecord& record) const;
    std::size_t dimension() const { return tfidf.vocabulary.size() + rank; }
};

// Zero-pads to the next multiple of `steps` so any vocabulary size reshapes
// cleanly into T x d.
FeatureVector pad_to_steps(FeatureVector feature, std::size_t steps);

struct ExperimentGrid {
    std::vector<double> fractions = {0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<int> budget_levels = {10, 15, 20, 25, 30};
    std::vector<std::uint64_t> seeds = {0};
};

struct ExperimentConfig {
    std::string dataset_id = "dataset";
    OptimizerKind method = OptimizerKind::Passer;
    FeatureParams features;
    std::size_t steps = 20;
    std::size_t hidden = 8;
    CombineMode combine = CombineMode::Concat;
    double param_bound = 2.0;
    int epoch_scale = 10;  // optimizer iterations per budget level unit
    double threshold = 0.5;
    PasserConfig optimizer;  // pop size, fractions, etc.; max_iter set per run
};

struct RunRecord {
    std::string dataset_id;
    std::string method;
    double train_fraction = 0.0;
    int budget_level = 0;
    std::uint64_t seed = 0;
    MetricReport metrics;
    double wall_time_seconds = 0.0;
    std::string error;  // empty on success

    bool ok() const { return error.empty(); }
};

// Per-run derived seed: every grid cell owns an independent stream.
std::uint64_t run_derived_seed(std::uint64_t base, double fraction, int budget);

std::vector<RunRecord> run_experiment(const std::vector<LabeledExample>& examples,
                                      const ExperimentGrid& grid,
                                      const ExperimentConfig& config);

struct ComparisonTable {
    std::vector<std::string> header;            // Method, F1, MSE, Precision, Recall
    std::vector<std::vector<std::string>> rows; // percent-scale, reference row last
};

// Best-over-grid summary per method, plus the published reference row
// (labeled as reported elsewhere, not reproduced here).
ComparisonTable compare_table(const std::map<std::string, std::vector<RunRecord>>& by_method);
std::string table_to_text(const ComparisonTable& table);
std::string table_to_csv(const ComparisonTable& table);

struct ReportFiles {
    std::string csv_path;
    std::string json_path;
};

// Long-format report: header dataset,method,train_fraction,budget,seed,metric,value
// with one row per (record x metric), rows sorted, 6 significant digits, and a
// JSON mirror. Byte-deterministic for identical inputs.
ReportFiles emit_report(const std::vector<RunRecord>& records, const std::string& directory);

std::string report_csv_string(const std::vector<RunRecord>& records);
std::string report_json_string(const std::vector<RunRecord>& records);

// Labeled feature files: header "feat v1 <n> <dim>", then one example per
// line: "<label> <v1> ... <vdim>".
void save_features(const std::vector<TrainingExample>& examples, const std::string& path);
std::vector<TrainingExample> load_features(const std::string& path);

}  // namespace plrec
