#include "pbbf/estimation.hpp"

#include <stdexcept>

namespace pbbf {

PilotBlock::PilotBlock(std::span<const cplx> pilots, std::span<const cplx> observations)
    : pilots_(pilots), observations_(observations)
{
    if (pilots_.empty() || pilots_.size() != observations_.size()) {
        throw std::invalid_argument("pilot block: pilots and observations must be nonempty "
                                    "and of equal length");
    }
}

PilotBlock PilotBlock::subblock(std::size_t offset, std::size_t count) const
{
    if (offset + count > size()) {
        throw std::out_of_range("pilot block: subblock exceeds block");
    }
    return PilotBlock(pilots_.subspan(offset, count), observations_.subspan(offset, count));
}

cplx estimate_compound_channel(const PilotBlock& block)
{
    cplx num{0.0, 0.0};
    double energy = 0.0;
    for (std::size_t t = 0; t < block.size(); ++t) {
        num += block.observations()[t] * std::conj(block.pilots()[t]);
        energy += std::norm(block.pilots()[t]);
    }
    if (!(energy > 0.0)) {
        throw std::invalid_argument("pilot block has zero energy");
    }
    return num / energy;
}

double estimate_power(cplx h_hat)
{
    return std::norm(h_hat);
}

double estimate_snr(cplx h_hat, const PilotBlock& block)
{
    double residual = 0.0;
    for (std::size_t t = 0; t < block.size(); ++t) {
        residual += std::norm(block.observations()[t] - h_hat * block.pilots()[t]);
    }
    if (residual < kResidualFloor) {
        return kSnrCap;
    }
    return std::norm(h_hat) / (residual / static_cast<double>(block.size()));
}

PilotEstimate estimate_all(const PilotBlock& block)
{
    const cplx h = estimate_compound_channel(block);
    return PilotEstimate{h, estimate_power(h), estimate_snr(h, block)};
}

}  // namespace pbbf
