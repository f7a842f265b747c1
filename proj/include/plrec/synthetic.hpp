#pragma once

#include <cstdint>
#include <vector>

#include "plrec/data_ingest.hpp"

namespace plrec {

// Deterministic synthetic review corpus with a planted rating-text
// correlation: high ratings draw from a positive word pool, low ratings from
// a negative one, with neutral filler mixed in. Items carry a quality bias so
// the interaction graph is informative too. Roughly 55% of ratings land at 4+.
std::vector<ReviewRecord> make_synthetic_reviews(std::size_t count, std::uint64_t seed);

}  // namespace plrec
