#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pbbf/random.hpp"
#include "pbbf/types.hpp"

namespace pbbf {

// Per-relay path-loss distances; coefficient variance is d_i^{-2}.
class PathLoss {
public:
    explicit PathLoss(std::vector<double> distances);

    std::size_t size() const { return distances_.size(); }
    double distance(std::size_t i) const { return distances_[i]; }
    double variance(std::size_t i) const { return 1.0 / (distances_[i] * distances_[i]); }
    const std::vector<double>& distances() const { return distances_; }

private:
    std::vector<double> distances_;
};

// Backward (source -> relay) and forward (relay -> destination) coefficients
// of all relays at one instant.
struct ChannelRealization {
    CVec h;
    CVec g;

    std::size_t size() const { return h.size(); }
};

ChannelRealization sample_static_rayleigh(RandomStream& rng, const PathLoss& path_loss);

inline constexpr int kDefaultOscillators = 32;
inline constexpr int kDefaultSymbolsPerFrame = 50;

// Sum-of-sinusoids generator for one fading coefficient with a Jakes
// (Clarke) Doppler spectrum:
//
//   c(n) = A / sqrt(M) * sum_m exp(j (2 pi f n cos(theta_m) + phi_m))
//
// with f the Doppler per symbol, theta_m = (2 pi m - pi + psi) / M for one
// random offset psi, and phi_m i.i.d. uniform. Averaged over psi, the
// autocorrelation is exactly A^2 J0(2 pi f tau).
struct JakesState {
    std::vector<double> oscillator_phases;
    std::vector<double> oscillator_angles;
    double normalized_doppler = 0.0;  // Doppler [Hz] times frame duration [s]
    double amplitude = 1.0;
    int symbols_per_frame = kDefaultSymbolsPerFrame;
    std::int64_t symbol_clock = 0;

    // Rotating phasors at symbol_clock; refreshed from the exact formula
    // periodically to bound round-off drift.
    CVec phasors;
    CVec step;
    std::int64_t anchor = 0;

    double doppler_per_symbol() const { return normalized_doppler / symbols_per_frame; }
};

JakesState jakes_init(RandomStream& rng, double normalized_doppler, double amplitude,
                      int num_oscillators = kDefaultOscillators,
                      int symbols_per_frame = kDefaultSymbolsPerFrame);

// Coefficient at `symbol_index`; time may not run backwards.
cplx jakes_sample(JakesState& state, std::int64_t symbol_index);

// 2R independent Jakes processes, one per backward and forward coefficient.
class JakesChannel {
public:
    JakesChannel(RandomStream& rng, const PathLoss& path_loss, double normalized_doppler,
                 int num_oscillators = kDefaultOscillators,
                 int symbols_per_frame = kDefaultSymbolsPerFrame);

    ChannelRealization sample(std::int64_t symbol_index);
    std::size_t size() const { return backward_.size(); }

private:
    std::vector<JakesState> backward_;
    std::vector<JakesState> forward_;
};

}  // namespace pbbf
