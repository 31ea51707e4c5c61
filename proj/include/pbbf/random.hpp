#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "pbbf/types.hpp"

namespace pbbf {

// Seedable source of randomness owned by exactly one consumer.
//
// Streams are derived from a master seed and a path of integer labels, so
// every realization, channel and noise consumer gets its own reproducible
// sequence no matter which worker thread runs it.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    // Independent child stream keyed by `labels`; does not advance *this.
    RandomStream derive(std::initializer_list<std::uint64_t> labels) const;

    static RandomStream from_path(std::uint64_t master_seed,
                                  std::initializer_list<std::uint64_t> labels);

    double uniform();                         // [0, 1)
    double uniform(double lo, double hi);     // [lo, hi)
    double normal();                          // N(0, 1)
    cplx complex_gaussian(double variance);   // CN(0, variance)
    std::uint8_t bit();

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// Stream labels used throughout the engine.
namespace stream_label {
inline constexpr std::uint64_t channel = 0x6368616e;   // "chan"
inline constexpr std::uint64_t noise = 0x6e6f6973;     // "nois"
inline constexpr std::uint64_t jakes = 0x6a616b65;     // "jake"
inline constexpr std::uint64_t oracle = 0x6f72636c;    // "orcl"
}  // namespace stream_label

}  // namespace pbbf
