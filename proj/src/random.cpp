#include "pbbf/random.hpp"

#include <cmath>

namespace pbbf {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix_path(std::uint64_t seed, std::initializer_list<std::uint64_t> labels)
{
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t label : labels) {
        h = splitmix64(h ^ splitmix64(label + 0x632be59bd9b4e019ULL));
    }
    return h;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

RandomStream RandomStream::derive(std::initializer_list<std::uint64_t> labels) const
{
    return RandomStream(mix_path(seed_, labels));
}

RandomStream RandomStream::from_path(std::uint64_t master_seed,
                                     std::initializer_list<std::uint64_t> labels)
{
    return RandomStream(mix_path(master_seed, labels));
}

double RandomStream::uniform()
{
    // 53 random mantissa bits.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

double RandomStream::normal()
{
    return normal_(engine_);
}

cplx RandomStream::complex_gaussian(double variance)
{
    const double s = std::sqrt(variance / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

std::uint8_t RandomStream::bit()
{
    return static_cast<std::uint8_t>(engine_() >> 63);
}

}  // namespace pbbf
