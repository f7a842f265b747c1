#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace plrec {

struct ReviewRecord {
    std::string user_id;
    std::string item_id;
    double rating = 0.0;  // [1, 5]
    std::string text;
    std::optional<std::int64_t> timestamp;
};

struct LabeledExample {
    ReviewRecord record;
    int label = 0;  // 1 = recommended
};

struct ParseResult {
    std::vector<ReviewRecord> records;
    std::size_t skipped = 0;
};

struct DatasetSplit {
    std::vector<LabeledExample> train;
    std::vector<LabeledExample> test;
    double train_fraction = 0.0;
    std::uint64_t seed = 0;
};

// Reads newline-delimited JSON review records (reviewerID, asin, overall,
// reviewText, unixReviewTime). Malformed or field-missing lines are counted
// and skipped; they never abort the stream.
ParseResult parse_reviews(std::istream& in);
ParseResult parse_reviews_file(const std::string& path);

// Lowercases, drops every codepoint outside [a-z0-9 space], collapses
// whitespace runs, trims. Idempotent.
std::string clean_text(const std::string& raw);

// rating >= 4 counts as recommended. Throws std::domain_error outside [1,5].
int derive_label(double rating);

std::vector<LabeledExample> label_examples(const std::vector<ReviewRecord>& records);

// Deterministic shuffle split; first round(fraction * n) examples train.
DatasetSplit split(const std::vector<LabeledExample>& examples, double train_fraction,
                   std::uint64_t seed);

// Canonical JSON-lines form of a record, used when materializing parsed
// records back to disk.
std::string to_json_line(const ReviewRecord& record);
void write_records_file(const std::vector<ReviewRecord>& records, const std::string& path);

}  // namespace plrec
