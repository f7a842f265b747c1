#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace plrec {

using TokenList = std::vector<std::string>;
using FeatureVector = std::vector<double>;

struct Vocabulary {
    std::unordered_map<std::string, std::size_t> term_to_index;
    std::vector<std::string> terms;               // index -> term
    std::vector<std::int64_t> document_frequency; // index -> df
    std::int64_t corpus_size = 0;

    std::size_t size() const { return terms.size(); }
};

struct TfidfModel {
    Vocabulary vocabulary;
    std::vector<double> idf;  // ln(corpus_size / df)
};

// Lowercases and splits on any non-alphanumeric run.
TokenList tokenize(const std::string& text);

// Terms ranked by document frequency descending, ties lexicographic; the top
// max_terms get dense indices in rank order.
Vocabulary build_vocabulary(const std::vector<TokenList>& corpus, std::size_t max_terms);

// Entry i = count(term_i) / (in-vocabulary tokens in doc); zero vector when
// the doc has no in-vocabulary tokens.
std::vector<double> term_frequency(const TokenList& doc, const Vocabulary& vocab);

TfidfModel fit_idf(const std::vector<TokenList>& corpus, const Vocabulary& vocab);

FeatureVector tfidf_vector(const TokenList& doc, const TfidfModel& model);

// Vectorizes many documents; OpenMP kernel with a serial reference.
std::vector<FeatureVector> vectorize_corpus(const std::vector<TokenList>& docs,
                                            const TfidfModel& model);
std::vector<FeatureVector> vectorize_corpus_serial(const std::vector<TokenList>& docs,
                                                   const TfidfModel& model);

void save_tfidf(const TfidfModel& model, const std::string& path);
TfidfModel load_tfidf(const std::string& path);

}  // namespace plrec
