#include "plrec/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "oracles.hpp"
#include "plrec/rng.hpp"

using namespace plrec;

namespace {

std::vector<TokenList> random_corpus(Rng& rng, std::size_t max_docs, std::size_t max_tokens) {
    const char* const pool[] = {"alpha", "bravo", "charlie", "delta", "echo",  "foxtrot",
                                "golf",  "hotel", "india",   "julia", "kilo",  "lima",
                                "mike",  "nova",  "oscar",   "papa",  "quebec", "romeo"};
    std::vector<TokenList> corpus(1 + rng.below(max_docs));
    for (auto& doc : corpus) {
        const std::size_t len = rng.below(max_tokens + 1);
        for (std::size_t i = 0; i < len; ++i) {
            doc.push_back(pool[rng.below(std::size(pool))]);
        }
    }
    // at least one token somewhere so the vocabulary is buildable
    if (std::all_of(corpus.begin(), corpus.end(),
                    [](const TokenList& d) { return d.empty(); })) {
        corpus[0].push_back("alpha");
    }
    return corpus;
}

}  // namespace

TEST_CASE("tokenize splits on non-alphanumeric runs") {
    CHECK(tokenize("a b") == TokenList{"a", "b"});
    CHECK(tokenize("don't stop") == TokenList{"don", "t", "stop"});
    CHECK(tokenize("") == TokenList{});
    CHECK(tokenize("Hello, WORLD-42!") == TokenList{"hello", "world", "42"});
}

TEST_CASE("build_vocabulary ranks by document frequency then term") {
    const std::vector<TokenList> corpus = {{"a", "b"}, {"a"}};

    const Vocabulary full = build_vocabulary(corpus, 10);
    CHECK(full.size() == 2);
    CHECK(full.corpus_size == 2);
    CHECK(full.term_to_index.at("a") == 0);
    CHECK(full.term_to_index.at("b") == 1);
    CHECK(full.document_frequency[0] == 2);
    CHECK(full.document_frequency[1] == 1);

    const Vocabulary capped = build_vocabulary(corpus, 1);
    CHECK(capped.size() == 1);
    CHECK(capped.terms[0] == "a");

    const Vocabulary single = build_vocabulary({{"a"}}, 10);
    CHECK(single.size() == 1);
    CHECK(single.document_frequency[0] == 1);
    CHECK(single.corpus_size == 1);
}

TEST_CASE("build_vocabulary breaks frequency ties lexicographically") {
    const Vocabulary vocab = build_vocabulary({{"zeta", "eta", "beta"}}, 2);
    CHECK(vocab.terms == std::vector<std::string>{"beta", "eta"});
}

TEST_CASE("build_vocabulary rejects empty input") {
    CHECK_THROWS_AS(build_vocabulary({}, 5), std::domain_error);
    CHECK_THROWS_AS(build_vocabulary({{}, {}}, 5), std::domain_error);
}

TEST_CASE("term_frequency normalizes by in-vocabulary tokens") {
    const Vocabulary vocab = build_vocabulary({{"a", "b"}}, 10);
    CHECK(term_frequency({"a", "a", "b"}, vocab) == std::vector<double>{2.0 / 3.0, 1.0 / 3.0});
    CHECK(term_frequency({}, vocab) == std::vector<double>{0.0, 0.0});
    CHECK(term_frequency({"a"}, vocab) == std::vector<double>{1.0, 0.0});
    // out-of-vocabulary tokens count in neither numerator nor denominator
    CHECK(term_frequency({"a", "zzz"}, vocab) == std::vector<double>{1.0, 0.0});
}

TEST_CASE("fit_idf matches ln(corpus size / df)") {
    const std::vector<TokenList> corpus = {{"a", "b"}, {"a", "c"}};
    const TfidfModel model = fit_idf(corpus, build_vocabulary(corpus, 10));
    CHECK(model.idf[model.vocabulary.term_to_index.at("a")] == doctest::Approx(0.0));
    CHECK(model.idf[model.vocabulary.term_to_index.at("b")] ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));

    const std::vector<TokenList> wide = {{"x", "y"}, {"x"}, {"y"}, {"z"}};
    const TfidfModel wide_model = fit_idf(wide, build_vocabulary(wide, 10));
    CHECK(wide_model.idf[wide_model.vocabulary.term_to_index.at("x")] ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("tfidf_vector worked example") {
    const std::vector<TokenList> corpus = {{"a", "b"}, {"a", "c"}};
    const TfidfModel model = fit_idf(corpus, build_vocabulary(corpus, 10));
    const FeatureVector v = tfidf_vector({"a", "b"}, model);
    REQUIRE(v.size() == 3);
    CHECK(v[model.vocabulary.term_to_index.at("a")] == doctest::Approx(0.0));
    CHECK(v[model.vocabulary.term_to_index.at("b")] ==
          doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));
    CHECK(v[model.vocabulary.term_to_index.at("c")] == 0.0);

    CHECK(tfidf_vector({}, model) == FeatureVector{0.0, 0.0, 0.0});
    CHECK(tfidf_vector({"zzz", "qqq"}, model) == FeatureVector{0.0, 0.0, 0.0});
}

TEST_CASE("tf entries sum to one and idf is non-negative") {
    Rng rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        const auto corpus = random_corpus(rng, 20, 15);
        const Vocabulary vocab = build_vocabulary(corpus, 1 + rng.below(25));
        const TfidfModel model = fit_idf(corpus, vocab);

        for (double idf : model.idf) CHECK(idf >= 0.0);
        for (std::size_t i = 0; i < vocab.size(); ++i) {
            const bool ubiquitous =
                vocab.document_frequency[i] == static_cast<std::int64_t>(corpus.size());
            CHECK((model.idf[i] == 0.0) == ubiquitous);
        }

        for (const auto& doc : corpus) {
            const std::vector<double> tf = term_frequency(doc, vocab);
            double sum = 0.0;
            bool in_vocab = false;
            for (double v : tf) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
                sum += v;
                if (v > 0.0) in_vocab = true;
            }
            if (in_vocab) CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("idf is invariant to document order") {
    Rng rng(102);
    const auto corpus = random_corpus(rng, 15, 10);
    const TfidfModel model = fit_idf(corpus, build_vocabulary(corpus, 50));

    auto shuffled = corpus;
    shuffle(shuffled, rng);
    const TfidfModel again = fit_idf(shuffled, build_vocabulary(shuffled, 50));

    REQUIRE(model.vocabulary.terms == again.vocabulary.terms);
    for (std::size_t i = 0; i < model.idf.size(); ++i) {
        CHECK(model.idf[i] == doctest::Approx(again.idf[i]).epsilon(1e-15));
    }
}

TEST_CASE("tfidf matches the brute-force oracle") {
    Rng rng(103);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto corpus = random_corpus(rng, 50, 30);
        const Vocabulary vocab = build_vocabulary(corpus, 1 + rng.below(20));
        const TfidfModel model = fit_idf(corpus, vocab);

        for (const auto& doc : corpus) {
            const FeatureVector ours = tfidf_vector(doc, model);
            const std::vector<double> expected =
                oracle::tfidf_weights(corpus, doc, vocab.terms);
            REQUIRE(ours.size() == expected.size());
            for (std::size_t i = 0; i < ours.size(); ++i) {
                worst = std::max(worst, std::fabs(ours[i] - expected[i]));
            }
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("tfidf model file round trip") {
    const std::vector<TokenList> corpus = {{"apple", "pie"}, {"apple"}, {"banana", "pie"}};
    const TfidfModel model = fit_idf(corpus, build_vocabulary(corpus, 10));

    const auto path = std::filesystem::temp_directory_path() / "plrec_tfidf_test.txt";
    save_tfidf(model, path.string());
    const TfidfModel loaded = load_tfidf(path.string());
    std::filesystem::remove(path);

    CHECK(loaded.vocabulary.terms == model.vocabulary.terms);
    CHECK(loaded.vocabulary.document_frequency == model.vocabulary.document_frequency);
    CHECK(loaded.vocabulary.corpus_size == model.vocabulary.corpus_size);
    REQUIRE(loaded.idf.size() == model.idf.size());
    for (std::size_t i = 0; i < model.idf.size(); ++i) {
        CHECK(loaded.idf[i] == model.idf[i]);  // 17 digits round-trips exactly
    }
}
