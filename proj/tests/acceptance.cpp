// Acceptance suite: one pass/fail line per criterion, non-zero exit if any
// criterion fails. Runs the whole thing on a laptop-scale budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "plrec/bilstm.hpp"
#include "plrec/data_ingest.hpp"
#include "plrec/eval_harness.hpp"
#include "plrec/graph_embedding.hpp"
#include "plrec/optimizer.hpp"
#include "plrec/rng.hpp"
#include "plrec/tfidf.hpp"

#ifndef PLREC_FIXTURE_PATH
#define PLREC_FIXTURE_PATH "data/synthetic_reviews.jsonl"
#endif

namespace {

using namespace plrec;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail, double seconds) {
    std::printf("[%s] %-24s %s (%.2fs)\n", pass ? "PASS" : "FAIL", name.c_str(),
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

// limit_seconds <= 0 means no runtime bound for this criterion
template <class Fn>
void criterion(const std::string& name, double limit_seconds, Fn&& body) {
    const auto start = Clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (pass && limit_seconds > 0.0 && seconds > limit_seconds) {
        pass = false;
        detail += " [over runtime limit]";
    }
    report(name, pass, detail, seconds);
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Objective sphere(std::size_t dim) {
    return {dim, [](const std::vector<double>& x) {
                double sum = 0.0;
                for (double v : x) sum += v * v;
                return sum;
            }};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---- criterion bodies -----------------------------------------------------

bool unit_fidelity(std::string& detail) {
    PasserConfig cfg;
    cfg.bounds = uniform_bounds(1, -100.0, 100.0);
    cfg.max_iter = 10;

    double worst = 0.0;
    auto track = [&worst](double got, double want) {
        worst = std::max(worst, std::fabs(got - want));
    };

    track(producer_update({1.0}, {2.0}, 1, cfg, {0.5, 0.3, 0.0})[0], 1.8187307530779818);
    track(producer_update({1.0}, {2.0}, 1, cfg, {0.5, 0.9, 0.5})[0], 1.5);
    cfg.max_iter = 7;
    track(producer_update({2.0}, {2.0}, 7, cfg, {1.0, 0.3, 0.0})[0],
          2.0 * 0.36787944117144233);

    track(scrounger_update({1.0}, {0.0}, 1, 4, {9.0}, {2.0}, {7.0}, 4.0, 2.0, cfg,
                           {0.0, 0.9, 1.0})[0],
          0.5);
    track(scrounger_update({1.0}, {0.0}, 2, 3, {2.0}, {9.0}, {3.0}, 4.0, 2.0, cfg,
                           {1.0, 0.5, 0.0})[0],
          1.7737212707001281);

    PasserConfig cfg2;
    cfg2.bounds = uniform_bounds(2, -100.0, 100.0);
    const auto inv = investigator_update({1.0, -1.0}, {0.0, 0.0}, {2.0, 2.0}, cfg2,
                                         {0.5, {1.0, 1.0}});
    track(inv[0], 0.5);
    track(inv[1], -0.5);

    std::ostringstream out;
    out << "max deviation " << format_sig(worst, 3) << " <= 1e-12";
    detail = out.str();
    return worst <= 1e-12;
}

bool convergence(std::string& detail) {
    std::vector<double> sphere_finals;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        PasserConfig cfg;
        cfg.pop_size = 30;
        cfg.max_iter = 500;
        cfg.bounds = uniform_bounds(5, -5.0, 5.0);
        cfg.seed = seed;
        sphere_finals.push_back(optimize(sphere(5), cfg).best_fitness);
    }
    const double sphere_median = median(sphere_finals);

    const Objective quad{1, [](const std::vector<double>& x) {
                             return (x[0] - 3.0) * (x[0] - 3.0);
                         }};
    std::vector<double> distances;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        PasserConfig cfg;
        cfg.pop_size = 20;
        cfg.max_iter = 200;
        cfg.bounds = uniform_bounds(1, 0.0, 10.0);
        cfg.seed = seed;
        distances.push_back(std::fabs(optimize(quad, cfg).best_position[0] - 3.0));
    }
    const double quad_median = median(distances);

    std::ostringstream out;
    out << "sphere median " << format_sig(sphere_median, 3) << " <= 1e-3, |x*-3| median "
        << format_sig(quad_median, 3) << " <= 0.01";
    detail = out.str();
    return sphere_median <= 1e-3 && quad_median <= 0.01;
}

bool comparative(std::string& detail) {
    std::vector<double> pl_finals, rs_finals;
    std::vector<std::vector<double>> pl_traces, rs_traces;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        PasserConfig cfg;
        cfg.pop_size = 30;
        cfg.max_iter = 500;
        cfg.bounds = uniform_bounds(5, -5.0, 5.0);
        cfg.seed = seed;
        const OptimizationResult pl = optimize(sphere(5), cfg);
        const OptimizationResult rs = random_search(sphere(5), cfg);
        pl_finals.push_back(pl.best_fitness);
        rs_finals.push_back(rs.best_fitness);
        pl_traces.push_back(pl.trace);
        rs_traces.push_back(rs.trace);
    }

    auto hits_threshold = [](const std::vector<std::vector<double>>& traces) {
        const std::size_t iterations = traces.front().size();
        for (std::size_t i = 0; i < iterations; ++i) {
            std::vector<double> column;
            column.reserve(traces.size());
            for (const auto& t : traces) column.push_back(t[i]);
            if (median(column) <= 1e-2) return i + 1;
        }
        return iterations + 1;
    };

    const double pl_median = median(pl_finals);
    const double rs_median = median(rs_finals);
    const std::size_t pl_hit = hits_threshold(pl_traces);
    const std::size_t rs_hit = hits_threshold(rs_traces);

    std::ostringstream out;
    out << "final " << format_sig(pl_median, 3) << " <= " << format_sig(rs_median, 3)
        << ", reaches 1e-2 by iter " << pl_hit << " vs " << rs_hit;
    detail = out.str();
    return pl_median <= rs_median && pl_hit <= rs_hit;
}

bool tfidf_oracle(std::string& detail) {
    Rng rng(1001);
    const char* const pool[] = {"ant", "bee", "cat", "dog", "elk", "fox", "gnu",
                                "hen", "ibis", "jay", "koi", "lynx", "mole", "newt"};
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<TokenList> corpus(1 + rng.below(50));
        for (auto& doc : corpus) {
            const std::size_t len = rng.below(31);
            for (std::size_t i = 0; i < len; ++i) doc.push_back(pool[rng.below(14)]);
        }
        bool any = false;
        for (const auto& doc : corpus) any = any || !doc.empty();
        if (!any) corpus[0].push_back("ant");

        const Vocabulary vocab = build_vocabulary(corpus, 1 + rng.below(14));
        const TfidfModel model = fit_idf(corpus, vocab);
        for (const auto& doc : corpus) {
            const FeatureVector ours = tfidf_vector(doc, model);
            const auto expected = oracle::tfidf_weights(corpus, doc, vocab.terms);
            for (std::size_t i = 0; i < ours.size(); ++i) {
                worst = std::max(worst, std::fabs(ours[i] - expected[i]));
            }
        }
    }
    std::ostringstream out;
    out << "max deviation " << format_sig(worst, 3) << " <= 1e-12 over 100 corpora";
    detail = out.str();
    return worst <= 1e-12;
}

bool lstm_oracle(std::string& detail) {
    Rng rng(1003);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t hidden = 1 + rng.below(4);
        const std::size_t d = 1 + rng.below(4);
        const ModelShape shape{1, d, hidden};
        ParamVector params(param_count(shape, CombineMode::Concat));
        for (auto& v : params) v = rng.uniform(-2.0, 2.0);
        const BiLstmModel model = unflatten(params, shape, CombineMode::Concat);

        std::vector<double> x(d), h_prev(hidden), c_prev(hidden);
        for (auto& v : x) v = rng.uniform(-2.0, 2.0);
        for (auto& v : h_prev) v = rng.uniform(-1.0, 1.0);
        for (auto& v : c_prev) v = rng.uniform(-2.0, 2.0);

        oracle::ScalarLstmCell cell;
        auto convert = [](const GateParams& gate) {
            oracle::ScalarLstmGate out;
            const std::size_t rows = gate.bias.size();
            const std::size_t cols = gate.input_weights.cols;
            out.w.assign(rows, std::vector<double>(cols));
            out.u.assign(rows, std::vector<double>(rows));
            out.b = gate.bias;
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t c = 0; c < cols; ++c) out.w[r][c] = gate.input_weights(r, c);
                for (std::size_t c = 0; c < rows; ++c) {
                    out.u[r][c] = gate.recurrent_weights(r, c);
                }
            }
            return out;
        };
        cell.input_gate = convert(model.forward.input_gate);
        cell.forget_gate = convert(model.forward.forget_gate);
        cell.output_gate = convert(model.forward.output_gate);
        cell.candidate = convert(model.forward.candidate);

        const auto [h, c] = lstm_step(model.forward, x, h_prev, c_prev);
        std::vector<double> h_ref, c_ref;
        oracle::scalar_lstm_step(cell, x, h_prev, c_prev, h_ref, c_ref);
        for (std::size_t r = 0; r < hidden; ++r) {
            worst = std::max(worst, std::fabs(h[r] - h_ref[r]));
            worst = std::max(worst, std::fabs(c[r] - c_ref[r]));
        }
    }
    std::ostringstream out;
    out << "max deviation " << format_sig(worst, 3) << " <= 1e-10 over 100 shapes";
    detail = out.str();
    return worst <= 1e-10;
}

bool metrics_oracle(std::string& detail) {
    // the worked example must hold exactly
    const std::vector<double> scores = {0.9, 0.8, 0.7, 0.6, 0.2, 0.1};
    const std::vector<int> labels = {1, 1, 1, 0, 1, 0};
    const MetricReport worked = metrics(confusion(scores, labels, 0.5), scores, labels);
    bool ok = worked.precision == 0.75 && worked.recall == 0.75 && worked.f1 == 0.75;

    Rng rng(1005);
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng.below(50);
        std::vector<double> s(n);
        std::vector<int> l(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = rng.next_double();
            l[i] = rng.next_double() < 0.45 ? 1 : 0;
        }
        const MetricReport ours = metrics(confusion(s, l, 0.5), s, l);
        const oracle::TallyMetrics ref = oracle::tally_metrics(s, l, 0.5);
        if (ours.precision != ref.precision || ours.recall != ref.recall ||
            ours.f1 != ref.f1 || ours.mse != ref.mse) {
            ++mismatches;
        }
    }
    std::ostringstream out;
    out << "worked example " << (ok ? "exact" : "WRONG") << ", " << mismatches
        << " mismatches in 1000 random sets";
    detail = out.str();
    return ok && mismatches == 0;
}

bool eigen_oracle(std::string& detail) {
    Rng rng(1007);
    double worst = 0.0;
    for (std::size_t n = 2; n <= 8; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            Matrix m(n, n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i; j < n; ++j) {
                    m(i, j) = m(j, i) = rng.uniform(-3.0, 3.0);
                }
            }
            const std::vector<double> ours =
                top_eigenvalues(m, n, 150, Rng::derive(1007, n, trial));
            const std::vector<double> expected = oracle::symmetric_eigenvalues(m.a, n);
            for (std::size_t k = 0; k < n; ++k) {
                worst = std::max(worst, std::fabs(ours[k] - expected[k]));
            }
        }
    }
    std::ostringstream out;
    out << "max eigenvalue deviation " << format_sig(worst, 3) << " <= 1e-6 up to 8x8";
    detail = out.str();
    return worst <= 1e-6;
}

ExperimentConfig fixture_config(OptimizerKind method) {
    ExperimentConfig config;
    config.dataset_id = "synthetic";
    config.method = method;
    config.features.vocab_cap = 64;
    config.features.embedding.rank = 8;
    config.steps = 2;
    config.hidden = 8;
    config.param_bound = 4.0;
    config.epoch_scale = 2;  // budget level 30 -> 60 optimizer iterations
    config.optimizer.pop_size = 60;
    return config;
}

std::vector<LabeledExample> load_fixture() {
    const ParseResult parsed = parse_reviews_file(PLREC_FIXTURE_PATH);
    return label_examples(parsed.records);
}

bool end_to_end(std::string& detail) {
    const auto examples = load_fixture();
    if (examples.size() < 2000) {
        detail = "fixture smaller than 2000 reviews";
        return false;
    }

    ExperimentGrid grid;
    grid.fractions = {0.9};
    grid.budget_levels = {30};
    grid.seeds = {0, 1, 2};

    const auto pl_records =
        run_experiment(examples, grid, fixture_config(OptimizerKind::Passer));
    const auto rs_records =
        run_experiment(examples, grid, fixture_config(OptimizerKind::RandomSearch));

    std::vector<double> pl_f1, rs_f1, majority_f1;
    for (const auto& r : pl_records) {
        if (!r.ok()) {
            detail = "pl run failed: " + r.error;
            return false;
        }
        pl_f1.push_back(r.metrics.f1);
    }
    for (const auto& r : rs_records) {
        if (!r.ok()) {
            detail = "random run failed: " + r.error;
            return false;
        }
        rs_f1.push_back(r.metrics.f1);
    }

    // majority-class baseline on the same splits the harness used
    for (const std::uint64_t seed : grid.seeds) {
        const DatasetSplit ds = split(examples, 0.9, run_derived_seed(seed, 0.9, 30));
        std::int64_t positives = 0;
        for (const auto& e : ds.train) positives += e.label;
        const bool majority_positive = 2 * positives >= static_cast<std::int64_t>(ds.train.size());
        std::vector<double> constant(ds.test.size(), majority_positive ? 1.0 : 0.0);
        std::vector<int> labels;
        labels.reserve(ds.test.size());
        for (const auto& e : ds.test) labels.push_back(e.label);
        majority_f1.push_back(
            metrics(confusion(constant, labels, 0.5), constant, labels).f1);
    }

    const double pl = median(pl_f1);
    const double rs = median(rs_f1);
    const double baseline = median(majority_f1);

    std::ostringstream out;
    out << "PL f1 " << format_sig(pl, 4) << " > majority " << format_sig(baseline, 4)
        << " and > random-trained " << format_sig(rs, 4);
    detail = out.str();
    return pl > baseline && pl > rs;
}

bool determinism(std::string& detail) {
    // trace export from two fresh optimizer runs
    PasserConfig cfg;
    cfg.pop_size = 20;
    cfg.max_iter = 100;
    cfg.bounds = uniform_bounds(5, -5.0, 5.0);
    cfg.seed = 99;

    const auto dir = std::filesystem::temp_directory_path() / "plrec_acceptance";
    std::filesystem::create_directories(dir);
    const std::string trace1 = (dir / "trace1.csv").string();
    const std::string trace2 = (dir / "trace2.csv").string();
    write_trace_csv(optimize(sphere(5), cfg), trace1);
    write_trace_csv(optimize(sphere(5), cfg), trace2);
    const bool traces_equal = slurp(trace1) == slurp(trace2);

    // full experiment grid cell twice, byte-compared report files
    const auto examples = load_fixture();
    ExperimentGrid grid;
    grid.fractions = {0.9};
    grid.budget_levels = {30};
    grid.seeds = {0};
    ExperimentConfig config = fixture_config(OptimizerKind::Passer);

    const auto first = run_experiment(examples, grid, config);
    const auto second = run_experiment(examples, grid, config);
    const ReportFiles files1 = emit_report(first, (dir / "rep1").string());
    const ReportFiles files2 = emit_report(second, (dir / "rep2").string());
    const bool reports_equal = slurp(files1.csv_path) == slurp(files2.csv_path) &&
                               slurp(files1.json_path) == slurp(files2.json_path);

    std::filesystem::remove_all(dir);
    detail = std::string("trace bytes ") + (traces_equal ? "identical" : "DIFFER") +
             ", report bytes " + (reports_equal ? "identical" : "DIFFER");
    return traces_equal && reports_equal;
}

}  // namespace

int main() {
    std::printf("acceptance suite (fixture: %s)\n", PLREC_FIXTURE_PATH);

    criterion("optimizer-unit-fidelity", 1.0, [](std::string& d) { return unit_fidelity(d); });
    criterion("optimizer-convergence", 30.0, [](std::string& d) { return convergence(d); });
    criterion("optimizer-comparative", 0.0, [](std::string& d) { return comparative(d); });
    criterion("tfidf-oracle", 10.0, [](std::string& d) { return tfidf_oracle(d); });
    criterion("lstm-cell-oracle", 10.0, [](std::string& d) { return lstm_oracle(d); });
    criterion("metrics-oracle", 0.0, [](std::string& d) { return metrics_oracle(d); });
    criterion("eigen-oracle", 0.0, [](std::string& d) { return eigen_oracle(d); });
    criterion("end-to-end-fixture", 600.0, [](std::string& d) { return end_to_end(d); });
    criterion("determinism", 0.0, [](std::string& d) { return determinism(d); });

    if (failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criterion(s) failed\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
