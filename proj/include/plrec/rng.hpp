#pragma once

#include <cstdint>
#include <vector>

namespace plrec {

// Deterministic PRNG (xoshiro256++ seeded through splitmix64). All randomness
// in the library goes through this type: std::mt19937 streams are portable but
// the standard distributions are not, and byte-identical reruns are a contract
// here.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    double next_double();                  // [0, 1)
    double unit_open();                    // (0, 1]
    double uniform(double lo, double hi);  // [lo, hi)
    double normal();                       // N(0, 1), Box-Muller
    double sign();                         // +1.0 or -1.0
    std::uint64_t below(std::uint64_t n);  // [0, n), n > 0

    // splitmix64 finalizer, also used to derive independent sub-seeds.
    static std::uint64_t mix(std::uint64_t x);
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

private:
    std::uint64_t s_[4];
};

// Seeded Fisher-Yates shuffle.
template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace plrec
