#include "plrec/parallel.hpp"

#include <vector>

#include "doctest.h"
#include "plrec/bilstm.hpp"
#include "plrec/graph_embedding.hpp"
#include "plrec/optimizer.hpp"
#include "plrec/rng.hpp"
#include "plrec/synthetic.hpp"
#include "plrec/tfidf.hpp"

using namespace plrec;

TEST_CASE("parallel_for covers every index exactly once") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);

    bool ran = false;
    parallel_for(0, [&](std::size_t) { ran = true; });
    CHECK_FALSE(ran);
}

TEST_CASE("parallel toggle is observable") {
    set_parallel(false);
    CHECK_FALSE(parallel_enabled());
    CHECK(worker_count() == 1);
    set_parallel(true);
    CHECK(parallel_enabled());
}

TEST_CASE("evaluate_batch serial and parallel agree bitwise") {
    Rng rng(301);
    const Objective rosenbrock{8, [](const std::vector<double>& x) {
                                   double sum = 0.0;
                                   for (std::size_t i = 0; i + 1 < x.size(); ++i) {
                                       const double a = x[i + 1] - x[i] * x[i];
                                       const double b = 1.0 - x[i];
                                       sum += 100.0 * a * a + b * b;
                                   }
                                   return sum;
                               }};
    std::vector<std::vector<double>> positions(64, std::vector<double>(8));
    for (auto& x : positions)
        for (auto& v : x) v = rng.uniform(-2.0, 2.0);

    set_parallel(true);
    const auto parallel_result = evaluate_batch(rosenbrock, positions);
    const auto serial_result = evaluate_batch_serial(rosenbrock, positions);
    CHECK(parallel_result == serial_result);

    set_parallel(false);  // the dispatcher must fall back to the serial path
    CHECK(evaluate_batch(rosenbrock, positions) == serial_result);
    set_parallel(true);
}

TEST_CASE("mse_objective and score_batch agree bitwise") {
    Rng rng(303);
    const ModelShape shape{4, 5, 3};
    const CombineMode mode = CombineMode::Concat;
    ParamVector params(param_count(shape, mode));
    for (auto& v : params) v = rng.uniform(-1.5, 1.5);

    std::vector<TrainingExample> dataset(97);
    for (auto& ex : dataset) {
        ex.feature.resize(20);
        for (auto& v : ex.feature) v = rng.uniform(-1.0, 1.0);
        ex.label = rng.next_double() < 0.5 ? 0 : 1;
    }

    CHECK(mse_objective(params, dataset, shape, mode) ==
          mse_objective_serial(params, dataset, shape, mode));

    const BiLstmModel model = unflatten(params, shape, mode);
    std::vector<FeatureVector> features;
    for (const auto& ex : dataset) features.push_back(ex.feature);
    CHECK(score_batch(model, features) == score_batch_serial(model, features));
}

TEST_CASE("vectorize_corpus and sample_walks agree bitwise") {
    const auto records = make_synthetic_reviews(400, 9);
    std::vector<TokenList> corpus;
    for (const auto& r : records) corpus.push_back(tokenize(clean_text(r.text)));
    const TfidfModel model = fit_idf(corpus, build_vocabulary(corpus, 100));
    CHECK(vectorize_corpus(corpus, model) == vectorize_corpus_serial(corpus, model));

    const InteractionGraph graph = build_interaction_graph(records);
    const WalkCorpus parallel_walks = sample_walks(graph, 4, 6, 31);
    const WalkCorpus serial_walks = sample_walks_serial(graph, 4, 6, 31);
    CHECK(parallel_walks.walks == serial_walks.walks);
}

TEST_CASE("nested parallel dispatch stays serial inside a region") {
#ifdef _OPENMP
    std::vector<int> outer(4, 0);
    parallel_for(outer.size(), [&](std::size_t i) {
        // inner call must not spawn nested teams; it still covers all indices
        std::vector<int> inner(50, 0);
        parallel_for(inner.size(), [&](std::size_t j) { inner[j] = 1; });
        int sum = 0;
        for (int v : inner) sum += v;
        outer[i] = sum;
    });
    for (int v : outer) CHECK(v == 50);
#endif
}
