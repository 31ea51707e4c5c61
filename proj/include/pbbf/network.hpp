#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pbbf/channel.hpp"
#include "pbbf/random.hpp"
#include "pbbf/types.hpp"

namespace pbbf {

// Powers of the two-hop link. Noise power is shared by relays and
// destination.
struct NetworkParams {
    int num_relays = 3;
    double source_power = 1.0;  // Ps
    double relay_power = 1.0;   // P
    double noise_power = 1.0;   // N0

    void validate() const;
};

// Compound-channel parameters after amplification:
//   hbar_i = h_i g_i alpha_i sqrt(Ps),   gbar_i = g_i alpha_i
struct CompoundParams {
    CVec hbar;
    CVec gbar;

    std::size_t size() const { return hbar.size(); }
};

enum class GainMode { ideal, measured };

// Amplification factor alpha_i that makes the average relay output power
// |w_i|^2 P. Ideal mode uses the known backward channel, measured mode the
// receive power observed over one frame.
double relay_gain(const NetworkParams& params, cplx h_i, GainMode mode,
                  std::optional<double> measured_power = std::nullopt);

std::vector<double> ideal_relay_gains(const NetworkParams& params, const ChannelRealization& chan);

CompoundParams compound_params(const NetworkParams& params, const ChannelRealization& chan,
                               std::span<const double> alphas);

// y = sum_i g_i w_i^* alpha_i (sqrt(Ps) h_i s + n_i) + v for given noise samples.
cplx relay_chain_output(const NetworkParams& params, const ChannelRealization& chan,
                        std::span<const double> alphas, std::span<const cplx> w, cplx s,
                        std::span<const cplx> relay_noise, cplx destination_noise);

// Same chain with fresh n_i, v ~ CN(0, N0).
cplx simulate_symbol(const NetworkParams& params, const ChannelRealization& chan,
                     std::span<const double> alphas, std::span<const cplx> w, cplx s,
                     RandomStream& rng);

// Effective scalar channel w^H hbar.
cplx effective_channel(std::span<const cplx> w, const CompoundParams& cp);

// |w^H hbar|^2
double objective_power(std::span<const cplx> w, const CompoundParams& cp);

// |w^H hbar|^2 / (N0 (1 + sum_i |w_i|^2 |gbar_i|^2))
double objective_snr(std::span<const cplx> w, const CompoundParams& cp, double noise_power);

// Variance of the compound noise w^H Gbar n + v.
double compound_noise_variance(std::span<const cplx> w, const CompoundParams& cp,
                               double noise_power);

}  // namespace pbbf
