#include "plrec/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "plrec/matrix.hpp"
#include "plrec/parallel.hpp"

namespace plrec {

TokenList tokenize(const std::string& text) {
    TokenList tokens;
    std::string current;
    for (unsigned char c : text) {
        if (c >= 'A' && c <= 'Z') {
            current.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            current.push_back(static_cast<char>(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

Vocabulary build_vocabulary(const std::vector<TokenList>& corpus, std::size_t max_terms) {
    if (corpus.empty()) throw std::domain_error("build_vocabulary: empty corpus");

    // std::map keeps term iteration order deterministic.
    std::map<std::string, std::int64_t> df;
    for (const auto& doc : corpus) {
        std::map<std::string, bool> seen;
        for (const auto& tok : doc) {
            if (!seen.emplace(tok, true).second) continue;
            ++df[tok];
        }
    }
    if (df.empty()) throw std::domain_error("build_vocabulary: corpus has no tokens");

    std::vector<std::pair<std::string, std::int64_t>> ranked(df.begin(), df.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second > y.second;
        return x.first < y.first;
    });
    if (ranked.size() > max_terms) ranked.resize(max_terms);

    Vocabulary vocab;
    vocab.corpus_size = static_cast<std::int64_t>(corpus.size());
    vocab.terms.reserve(ranked.size());
    vocab.document_frequency.reserve(ranked.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        vocab.term_to_index.emplace(ranked[i].first, i);
        vocab.terms.push_back(ranked[i].first);
        vocab.document_frequency.push_back(ranked[i].second);
    }
    return vocab;
}

std::vector<double> term_frequency(const TokenList& doc, const Vocabulary& vocab) {
    std::vector<double> tf(vocab.size(), 0.0);
    std::int64_t in_vocab = 0;
    for (const auto& tok : doc) {
        auto it = vocab.term_to_index.find(tok);
        if (it == vocab.term_to_index.end()) continue;  // OOV tokens excluded entirely
        tf[it->second] += 1.0;
        ++in_vocab;
    }
    if (in_vocab == 0) return tf;  // 0/0 defined as the zero vector
    const double denom = static_cast<double>(in_vocab);
    for (auto& v : tf) v /= denom;
    return tf;
}

TfidfModel fit_idf(const std::vector<TokenList>& corpus, const Vocabulary& vocab) {
    std::vector<std::int64_t> df(vocab.size(), 0);
    for (const auto& doc : corpus) {
        std::vector<bool> seen(vocab.size(), false);
        for (const auto& tok : doc) {
            auto it = vocab.term_to_index.find(tok);
            if (it == vocab.term_to_index.end()) continue;
            if (!seen[it->second]) {
                seen[it->second] = true;
                ++df[it->second];
            }
        }
    }

    if (vocab.corpus_size != static_cast<std::int64_t>(corpus.size())) {
        throw std::logic_error("fit_idf: vocabulary built from a different corpus");
    }
    TfidfModel model;
    model.vocabulary = vocab;
    model.idf.resize(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        if (df[i] <= 0) {
            throw std::logic_error("fit_idf: term absent from corpus: " + vocab.terms[i]);
        }
        model.idf[i] = std::log(static_cast<double>(corpus.size()) / static_cast<double>(df[i]));
    }
    return model;
}

FeatureVector tfidf_vector(const TokenList& doc, const TfidfModel& model) {
    FeatureVector weights = term_frequency(doc, model.vocabulary);
    for (std::size_t i = 0; i < weights.size(); ++i) weights[i] *= model.idf[i];
    return weights;
}

std::vector<FeatureVector> vectorize_corpus_serial(const std::vector<TokenList>& docs,
                                                   const TfidfModel& model) {
    std::vector<FeatureVector> out(docs.size());
    serial_for(docs.size(), [&](std::size_t i) { out[i] = tfidf_vector(docs[i], model); });
    return out;
}

std::vector<FeatureVector> vectorize_corpus(const std::vector<TokenList>& docs,
                                            const TfidfModel& model) {
    std::vector<FeatureVector> out(docs.size());
    parallel_for(docs.size(), [&](std::size_t i) { out[i] = tfidf_vector(docs[i], model); });
    return out;
}

void save_tfidf(const TfidfModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "tfidf v1 " << model.vocabulary.size() << ' ' << model.vocabulary.corpus_size << '\n';
    for (std::size_t i = 0; i < model.vocabulary.size(); ++i) {
        out << model.vocabulary.terms[i] << '\t' << i << '\t'
            << model.vocabulary.document_frequency[i] << '\t'
            << format_sig(model.idf[i], 17) << '\n';
    }
    if (!out) throw std::runtime_error("write failure: " + path);
}

TfidfModel load_tfidf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open tfidf file: " + path);
    std::string magic, version;
    std::size_t n = 0;
    std::int64_t corpus_size = 0;
    in >> magic >> version >> n >> corpus_size;
    if (magic != "tfidf" || version != "v1" || !in) {
        throw std::runtime_error("not a tfidf v1 file: " + path);
    }
    std::string rest;
    std::getline(in, rest);

    TfidfModel model;
    model.vocabulary.corpus_size = corpus_size;
    model.vocabulary.terms.resize(n);
    model.vocabulary.document_frequency.resize(n);
    model.idf.resize(n);
    std::string line;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("truncated tfidf file: " + path);
        std::istringstream row(line);
        std::string term;
        std::size_t index = 0;
        std::int64_t df = 0;
        double idf = 0.0;
        if (!std::getline(row, term, '\t') || !(row >> index >> df >> idf) || index != i) {
            throw std::runtime_error("malformed tfidf row: " + line);
        }
        model.vocabulary.terms[i] = term;
        model.vocabulary.term_to_index.emplace(term, i);
        model.vocabulary.document_frequency[i] = df;
        model.idf[i] = idf;
    }
    return model;
}

}  // namespace plrec
