#pragma once

#include <span>

#include "pbbf/types.hpp"

namespace pbbf {

// Returned by estimate_snr when the pilot residual vanishes.
inline constexpr double kSnrCap = 1e12;
inline constexpr double kResidualFloor = 1e-30;

// Known pilot symbols and the matching destination observations.
class PilotBlock {
public:
    PilotBlock(std::span<const cplx> pilots, std::span<const cplx> observations);

    std::span<const cplx> pilots() const { return pilots_; }
    std::span<const cplx> observations() const { return observations_; }
    std::size_t size() const { return pilots_.size(); }

    PilotBlock subblock(std::size_t offset, std::size_t count) const;

private:
    std::span<const cplx> pilots_;
    std::span<const cplx> observations_;
};

// ML compound-channel estimate sum y p^* / sum |p|^2.
cplx estimate_compound_channel(const PilotBlock& block);

double estimate_power(cplx h_hat);

// |h_hat|^2 over the mean squared pilot residual.
double estimate_snr(cplx h_hat, const PilotBlock& block);

struct PilotEstimate {
    cplx h_hat;
    double power = 0.0;
    double snr = 0.0;
};

PilotEstimate estimate_all(const PilotBlock& block);

}  // namespace pbbf
