#include "pbbf/network.hpp"

#include <cmath>
#include <stdexcept>

namespace pbbf {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what)
{
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": length mismatch (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

}  // namespace

void NetworkParams::validate() const
{
    if (num_relays < 1) {
        throw std::invalid_argument("network: num_relays must be >= 1");
    }
    if (!(source_power > 0.0) || !(relay_power > 0.0) || !(noise_power > 0.0)) {
        throw std::invalid_argument("network: powers must be strictly positive");
    }
}

double relay_gain(const NetworkParams& params, cplx h_i, GainMode mode,
                  std::optional<double> measured_power)
{
    if (mode == GainMode::ideal) {
        return std::sqrt(params.relay_power /
                         (params.source_power * std::norm(h_i) + params.noise_power));
    }
    if (!measured_power || !(*measured_power > 0.0)) {
        throw std::invalid_argument("relay_gain: measured power must be positive");
    }
    return std::sqrt(params.relay_power / *measured_power);
}

std::vector<double> ideal_relay_gains(const NetworkParams& params, const ChannelRealization& chan)
{
    std::vector<double> alphas(chan.size());
    for (std::size_t i = 0; i < chan.size(); ++i) {
        alphas[i] = relay_gain(params, chan.h[i], GainMode::ideal);
    }
    return alphas;
}

CompoundParams compound_params(const NetworkParams& params, const ChannelRealization& chan,
                               std::span<const double> alphas)
{
    require_same_size(chan.h.size(), chan.g.size(), "compound_params");
    require_same_size(chan.h.size(), alphas.size(), "compound_params");
    const double sqrt_ps = std::sqrt(params.source_power);
    CompoundParams cp;
    cp.hbar.resize(chan.size());
    cp.gbar.resize(chan.size());
    for (std::size_t i = 0; i < chan.size(); ++i) {
        cp.gbar[i] = chan.g[i] * alphas[i];
        cp.hbar[i] = chan.h[i] * cp.gbar[i] * sqrt_ps;
    }
    return cp;
}

cplx relay_chain_output(const NetworkParams& params, const ChannelRealization& chan,
                        std::span<const double> alphas, std::span<const cplx> w, cplx s,
                        std::span<const cplx> relay_noise, cplx destination_noise)
{
    require_same_size(chan.size(), w.size(), "relay_chain_output");
    require_same_size(chan.size(), alphas.size(), "relay_chain_output");
    require_same_size(chan.size(), relay_noise.size(), "relay_chain_output");
    const double sqrt_ps = std::sqrt(params.source_power);
    cplx y = destination_noise;
    for (std::size_t i = 0; i < chan.size(); ++i) {
        const cplx x = sqrt_ps * chan.h[i] * s + relay_noise[i];
        const cplx r = std::conj(w[i]) * alphas[i] * x;
        y += chan.g[i] * r;
    }
    return y;
}

cplx simulate_symbol(const NetworkParams& params, const ChannelRealization& chan,
                     std::span<const double> alphas, std::span<const cplx> w, cplx s,
                     RandomStream& rng)
{
    require_same_size(chan.size(), w.size(), "simulate_symbol");
    require_same_size(chan.size(), alphas.size(), "simulate_symbol");
    const double sqrt_ps = std::sqrt(params.source_power);
    cplx y{0.0, 0.0};
    for (std::size_t i = 0; i < chan.size(); ++i) {
        const cplx x = sqrt_ps * chan.h[i] * s + rng.complex_gaussian(params.noise_power);
        y += chan.g[i] * (std::conj(w[i]) * alphas[i] * x);
    }
    return y + rng.complex_gaussian(params.noise_power);
}

cplx effective_channel(std::span<const cplx> w, const CompoundParams& cp)
{
    require_same_size(w.size(), cp.size(), "effective_channel");
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += std::conj(w[i]) * cp.hbar[i];
    }
    return acc;
}

double objective_power(std::span<const cplx> w, const CompoundParams& cp)
{
    return std::norm(effective_channel(w, cp));
}

double compound_noise_variance(std::span<const cplx> w, const CompoundParams& cp,
                               double noise_power)
{
    require_same_size(w.size(), cp.size(), "compound_noise_variance");
    double amp = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        amp += std::norm(w[i]) * std::norm(cp.gbar[i]);
    }
    return noise_power * (1.0 + amp);
}

double objective_snr(std::span<const cplx> w, const CompoundParams& cp, double noise_power)
{
    return objective_power(w, cp) / compound_noise_variance(w, cp, noise_power);
}

}  // namespace pbbf
