#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pbbf/adaptation.hpp"
#include "pbbf/network.hpp"

namespace pbbf {

// Closed-form batch beamformers that need full CSI.

class DegenerateChannelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EgcResult {
    BeamVector weights;
    // Relays whose compound coefficient vanished; their weight is set to 1.
    std::vector<std::size_t> zero_coefficients;
};

// Equal-gain coherent combining, w_i = hbar_i / |hbar_i| (per-relay constraint).
EgcResult egc_weights(const CompoundParams& cp);

// Received-power maximizer under the sum constraint, w = hbar / ||hbar||.
BeamVector psp_weights(const CompoundParams& cp);

// SNR maximizer under the sum constraint, w ~ (I + Gbar Gbar^H)^{-1} hbar.
// Gbar is diagonal, so this is w_i ~ hbar_i / (1 + |gbar_i|^2).
BeamVector ssp_weights(const CompoundParams& cp);

// Uniform power, no phase alignment.
BeamVector nobf_weights(std::size_t num_relays);

}  // namespace pbbf
