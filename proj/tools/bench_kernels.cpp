// Times the OpenMP kernels against their serial reference paths and checks
// that both produce identical bytes. Usage: bench_kernels [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "plrec/bilstm.hpp"
#include "plrec/graph_embedding.hpp"
#include "plrec/optimizer.hpp"
#include "plrec/parallel.hpp"
#include "plrec/rng.hpp"
#include "plrec/synthetic.hpp"
#include "plrec/tfidf.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <class Fn>
double time_best_of(int repeats, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto start = Clock::now();
        fn();
        const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
        if (elapsed < best) best = elapsed;
    }
    return best;
}

void report(const std::string& name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-24s %10.4f ms %10.4f ms %7.2fx   %s\n", name.c_str(), serial_s * 1e3,
                parallel_s * 1e3, serial_s / parallel_s, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
    std::printf("%-24s %13s %13s %9s   %s\n", "kernel", "serial", "parallel", "speedup",
                "outputs");
    std::printf("(threads available: %d)\n", plrec::worker_count());

    // population fitness evaluation on a heavy objective
    {
        plrec::Rng rng(11);
        const std::size_t dim = 400;
        plrec::Objective objective;
        objective.dim = dim;
        objective.eval = [](const std::vector<double>& x) {
            double sum = 0.0;
            for (std::size_t i = 0; i + 1 < x.size(); ++i) {
                const double a = x[i + 1] - x[i] * x[i];
                const double b = 1.0 - x[i];
                sum += 100.0 * a * a + b * b;
            }
            return sum;
        };
        std::vector<std::vector<double>> positions(256, std::vector<double>(dim));
        for (auto& x : positions)
            for (auto& v : x) v = rng.uniform(-2.0, 2.0);

        std::vector<double> serial_out, parallel_out;
        const double ts = time_best_of(
            repeats, [&] { serial_out = plrec::evaluate_batch_serial(objective, positions); });
        const double tp = time_best_of(
            repeats, [&] { parallel_out = plrec::evaluate_batch(objective, positions); });
        report("evaluate_batch", ts, tp, serial_out == parallel_out);
    }

    // Bi-LSTM objective over a labeled feature batch
    {
        plrec::Rng rng(12);
        plrec::ModelShape shape{10, 16, 6};
        const auto combine = plrec::CombineMode::Concat;
        const std::size_t n_params = plrec::param_count(shape, combine);
        plrec::ParamVector params(n_params);
        for (auto& v : params) v = rng.uniform(-1.0, 1.0);

        std::vector<plrec::TrainingExample> dataset(512);
        for (auto& ex : dataset) {
            ex.feature.resize(shape.steps * shape.step_dim);
            for (auto& v : ex.feature) v = rng.uniform(-1.0, 1.0);
            ex.label = rng.next_double() < 0.5 ? 0 : 1;
        }

        double serial_out = 0.0, parallel_out = 0.0;
        const double ts = time_best_of(repeats, [&] {
            serial_out = plrec::mse_objective_serial(params, dataset, shape, combine);
        });
        const double tp = time_best_of(repeats, [&] {
            parallel_out = plrec::mse_objective(params, dataset, shape, combine);
        });
        report("mse_objective", ts, tp, serial_out == parallel_out);

        const plrec::BiLstmModel model = plrec::unflatten(params, shape, combine);
        std::vector<plrec::FeatureVector> features;
        features.reserve(dataset.size());
        for (const auto& ex : dataset) features.push_back(ex.feature);
        std::vector<double> ss, pp;
        const double ts2 =
            time_best_of(repeats, [&] { ss = plrec::score_batch_serial(model, features); });
        const double tp2 =
            time_best_of(repeats, [&] { pp = plrec::score_batch(model, features); });
        report("score_batch", ts2, tp2, ss == pp);
    }

    // TF-IDF corpus vectorization and walk sampling on synthetic reviews
    {
        const auto records = plrec::make_synthetic_reviews(4000, 13);
        std::vector<plrec::TokenList> corpus;
        corpus.reserve(records.size());
        for (const auto& r : records) corpus.push_back(plrec::tokenize(plrec::clean_text(r.text)));
        const plrec::Vocabulary vocab = plrec::build_vocabulary(corpus, 2000);
        const plrec::TfidfModel model = plrec::fit_idf(corpus, vocab);

        std::vector<plrec::FeatureVector> ss, pp;
        const double ts =
            time_best_of(repeats, [&] { ss = plrec::vectorize_corpus_serial(corpus, model); });
        const double tp =
            time_best_of(repeats, [&] { pp = plrec::vectorize_corpus(corpus, model); });
        report("vectorize_corpus", ts, tp, ss == pp);

        const plrec::InteractionGraph graph = plrec::build_interaction_graph(records);
        plrec::WalkCorpus ws, wp;
        const double ts2 = time_best_of(
            repeats, [&] { ws = plrec::sample_walks_serial(graph, 20, 12, 17); });
        const double tp2 =
            time_best_of(repeats, [&] { wp = plrec::sample_walks(graph, 20, 12, 17); });
        report("sample_walks", ts2, tp2, ws.walks == wp.walks);
    }

    return 0;
}
