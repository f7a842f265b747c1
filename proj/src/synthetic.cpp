#include "plrec/synthetic.hpp"

#include <algorithm>
#include <string>

#include "plrec/rng.hpp"

namespace plrec {

namespace {

const char* const kPositiveWords[] = {
    "excellent", "amazing",   "love",  "perfect", "wonderful",
    "fantastic", "great",     "best",  "awesome", "delighted",
    "sturdy",    "beautiful", "happy", "smooth",  "recommend",
};

const char* const kNegativeWords[] = {
    "terrible", "awful",    "broken", "waste",   "disappointing",
    "poor",     "bad",      "refund", "useless", "horrible",
    "cheap",    "defective", "flimsy", "annoying", "returned",
};

const char* const kFillerWords[] = {
    "the",     "product", "this",  "item",  "bought", "time",  "price",
    "quality", "box",     "shipping", "arrived", "used", "day", "works",
    "month",   "ordered", "color", "size",  "one",    "really", "would",
    "after",   "first",   "packaging", "store",
};

template <std::size_t N>
const char* pick(const char* const (&pool)[N], Rng& rng) {
    return pool[rng.below(N)];
}

std::string compose_text(bool positive, Rng& rng) {
    const std::size_t sentiment_count = 3 + rng.below(4);  // 3..6
    const std::size_t filler_count = 2 + rng.below(4);     // 2..5
    std::vector<const char*> words;
    words.reserve(sentiment_count + filler_count);
    for (std::size_t i = 0; i < sentiment_count; ++i) {
        // small amount of cross-talk so the text signal is strong, not exact
        const bool flip = rng.next_double() < 0.03;
        const bool pos = positive != flip;
        words.push_back(pos ? pick(kPositiveWords, rng) : pick(kNegativeWords, rng));
    }
    for (std::size_t i = 0; i < filler_count; ++i) words.push_back(pick(kFillerWords, rng));
    shuffle(words, rng);

    std::string text;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) text.push_back(' ');
        text += words[i];
    }
    return text;
}

}  // namespace

std::vector<ReviewRecord> make_synthetic_reviews(std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t user_count = std::max<std::size_t>(8, count / 20);
    const std::size_t item_count = std::max<std::size_t>(8, count / 25);

    // per-item probability that a review of it comes out positive
    std::vector<double> item_positive_rate(item_count);
    for (auto& rate : item_positive_rate) {
        const double tier = rng.next_double();
        if (tier < 0.35) rate = 0.85;      // well liked
        else if (tier < 0.65) rate = 0.55; // mixed
        else rate = 0.18;                  // poorly rated
    }

    std::vector<ReviewRecord> records;
    records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t user = rng.below(user_count);
        const std::size_t item = rng.below(item_count);
        const bool positive = rng.next_double() < item_positive_rate[item];

        ReviewRecord record;
        record.user_id = "u" + std::to_string(user);
        record.item_id = "i" + std::to_string(item);
        record.rating = positive ? (rng.next_double() < 0.5 ? 4.0 : 5.0)
                                 : 1.0 + static_cast<double>(rng.below(3));
        record.text = compose_text(positive, rng);
        record.timestamp = 1300000000 + static_cast<std::int64_t>(i) * 86400;
        records.push_back(std::move(record));
    }
    return records;
}

}  // namespace plrec
