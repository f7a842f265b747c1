#include "plrec/data_ingest.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>

#include "json.hpp"
#include "plrec/rng.hpp"

namespace plrec {

namespace {

using nlohmann::json;

bool record_from_json(const json& j, ReviewRecord& out) {
    if (!j.is_object()) return false;
    auto user = j.find("reviewerID");
    auto item = j.find("asin");
    auto rating = j.find("overall");
    auto text = j.find("reviewText");
    if (user == j.end() || !user->is_string()) return false;
    if (item == j.end() || !item->is_string()) return false;
    if (rating == j.end() || !rating->is_number()) return false;
    if (text == j.end() || !text->is_string()) return false;

    out.user_id = user->get<std::string>();
    out.item_id = item->get<std::string>();
    out.rating = rating->get<double>();
    out.text = text->get<std::string>();
    if (out.user_id.empty() || out.item_id.empty()) return false;
    if (!std::isfinite(out.rating) || out.rating < 1.0 || out.rating > 5.0) return false;

    out.timestamp.reset();
    auto ts = j.find("unixReviewTime");
    if (ts != j.end() && ts->is_number_integer()) {
        out.timestamp = ts->get<std::int64_t>();
    }
    return true;
}

}  // namespace

ParseResult parse_reviews(std::istream& in) {
    ParseResult result;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        ReviewRecord record;
        if (j.is_discarded() || !record_from_json(j, record)) {
            ++result.skipped;
            continue;
        }
        result.records.push_back(std::move(record));
    }
    if (in.bad()) throw std::runtime_error("parse_reviews: stream read failure");
    return result;
}

ParseResult parse_reviews_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open reviews file: " + path);
    return parse_reviews(in);
}

std::string clean_text(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (unsigned char c : raw) {
        char kept = 0;
        if (c >= 'A' && c <= 'Z') {
            kept = static_cast<char>(c - 'A' + 'a');
        } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            kept = static_cast<char>(c);
        } else if (std::isspace(c)) {
            pending_space = true;
            continue;
        } else {
            continue;  // punctuation, emoji bytes, anything non-alphanumeric
        }
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        out.push_back(kept);
    }
    return out;
}

int derive_label(double rating) {
    if (!(rating >= 1.0 && rating <= 5.0)) {
        throw std::domain_error("derive_label: rating outside [1, 5]");
    }
    return rating >= 4.0 ? 1 : 0;
}

std::vector<LabeledExample> label_examples(const std::vector<ReviewRecord>& records) {
    std::vector<LabeledExample> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back({r, derive_label(r.rating)});
    return out;
}

DatasetSplit split(const std::vector<LabeledExample>& examples, double train_fraction,
                   std::uint64_t seed) {
    if (examples.empty()) throw std::domain_error("split: no examples");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::domain_error("split: train_fraction outside (0, 1)");
    }
    std::vector<LabeledExample> shuffled = examples;
    Rng rng(seed);
    shuffle(shuffled, rng);

    const auto n = shuffled.size();
    auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
    if (n_train > n) n_train = n;

    DatasetSplit out;
    out.train.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train), shuffled.end());
    out.train_fraction = train_fraction;
    out.seed = seed;
    return out;
}

std::string to_json_line(const ReviewRecord& record) {
    json j;
    j["reviewerID"] = record.user_id;
    j["asin"] = record.item_id;
    j["overall"] = record.rating;
    j["reviewText"] = record.text;
    if (record.timestamp) j["unixReviewTime"] = *record.timestamp;
    return j.dump();
}

void write_records_file(const std::vector<ReviewRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    for (const auto& r : records) out << to_json_line(r) << '\n';
    if (!out) throw std::runtime_error("write failure: " + path);
}

}  // namespace plrec
