#include "pbbf/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pbbf {

namespace {

constexpr std::int64_t kReanchorInterval = 1024;
constexpr std::int64_t kMaxRecursiveSteps = 64;

void reanchor(JakesState& s, std::int64_t n)
{
    const double w = 2.0 * kPi * s.doppler_per_symbol() * static_cast<double>(n);
    for (std::size_t m = 0; m < s.phasors.size(); ++m) {
        s.phasors[m] =
            std::polar(1.0, w * std::cos(s.oscillator_angles[m]) + s.oscillator_phases[m]);
    }
    s.anchor = n;
}

}  // namespace

PathLoss::PathLoss(std::vector<double> distances) : distances_(std::move(distances))
{
    if (distances_.empty()) {
        throw std::invalid_argument("path loss: at least one relay distance required");
    }
    for (double d : distances_) {
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw std::invalid_argument("path loss: distances must be positive, got " +
                                        std::to_string(d));
        }
    }
}

ChannelRealization sample_static_rayleigh(RandomStream& rng, const PathLoss& path_loss)
{
    ChannelRealization c;
    c.h.resize(path_loss.size());
    c.g.resize(path_loss.size());
    for (std::size_t i = 0; i < path_loss.size(); ++i) {
        c.h[i] = rng.complex_gaussian(path_loss.variance(i));
        c.g[i] = rng.complex_gaussian(path_loss.variance(i));
    }
    return c;
}

JakesState jakes_init(RandomStream& rng, double normalized_doppler, double amplitude,
                      int num_oscillators, int symbols_per_frame)
{
    if (!(normalized_doppler >= 0.0)) {
        throw std::invalid_argument("jakes: normalized Doppler must be >= 0");
    }
    if (num_oscillators < 8) {
        throw std::invalid_argument("jakes: at least 8 oscillators required");
    }
    if (symbols_per_frame < 1) {
        throw std::invalid_argument("jakes: symbols_per_frame must be >= 1");
    }

    JakesState s;
    s.normalized_doppler = normalized_doppler;
    s.amplitude = amplitude;
    s.symbols_per_frame = symbols_per_frame;

    const auto m_count = static_cast<std::size_t>(num_oscillators);
    s.oscillator_angles.resize(m_count);
    s.oscillator_phases.resize(m_count);
    const double offset = rng.uniform(-kPi, kPi);
    for (std::size_t m = 0; m < m_count; ++m) {
        s.oscillator_angles[m] = (2.0 * kPi * static_cast<double>(m) - kPi + offset) /
                                 static_cast<double>(m_count);
    }
    for (std::size_t m = 0; m < m_count; ++m) {
        s.oscillator_phases[m] = rng.uniform(-kPi, kPi);
    }

    s.phasors.resize(m_count);
    s.step.resize(m_count);
    const double w = 2.0 * kPi * s.doppler_per_symbol();
    for (std::size_t m = 0; m < m_count; ++m) {
        s.step[m] = std::polar(1.0, w * std::cos(s.oscillator_angles[m]));
    }
    reanchor(s, 0);
    return s;
}

cplx jakes_sample(JakesState& s, std::int64_t symbol_index)
{
    if (symbol_index < s.symbol_clock) {
        throw std::invalid_argument("jakes: symbol index " + std::to_string(symbol_index) +
                                    " precedes clock " + std::to_string(s.symbol_clock));
    }
    const std::int64_t advance = symbol_index - s.symbol_clock;
    if (advance > kMaxRecursiveSteps || symbol_index - s.anchor >= kReanchorInterval) {
        reanchor(s, symbol_index);
    } else {
        for (std::int64_t k = 0; k < advance; ++k) {
            for (std::size_t m = 0; m < s.phasors.size(); ++m) {
                s.phasors[m] *= s.step[m];
            }
        }
    }
    s.symbol_clock = symbol_index;

    cplx sum{0.0, 0.0};
    for (const cplx& p : s.phasors) {
        sum += p;
    }
    return sum * (s.amplitude / std::sqrt(static_cast<double>(s.phasors.size())));
}

JakesChannel::JakesChannel(RandomStream& rng, const PathLoss& path_loss,
                           double normalized_doppler, int num_oscillators,
                           int symbols_per_frame)
{
    backward_.reserve(path_loss.size());
    forward_.reserve(path_loss.size());
    for (std::size_t i = 0; i < path_loss.size(); ++i) {
        const double amp = 1.0 / path_loss.distance(i);
        backward_.push_back(
            jakes_init(rng, normalized_doppler, amp, num_oscillators, symbols_per_frame));
        forward_.push_back(
            jakes_init(rng, normalized_doppler, amp, num_oscillators, symbols_per_frame));
    }
}

ChannelRealization JakesChannel::sample(std::int64_t symbol_index)
{
    ChannelRealization c;
    c.h.resize(backward_.size());
    c.g.resize(forward_.size());
    for (std::size_t i = 0; i < backward_.size(); ++i) {
        c.h[i] = jakes_sample(backward_[i], symbol_index);
        c.g[i] = jakes_sample(forward_[i], symbol_index);
    }
    return c;
}

}  // namespace pbbf
