#include "pbbf/oracles.hpp"

#include <cmath>

namespace pbbf {

namespace {

BeamVector unit_norm_or_throw(CVec v, const char* who)
{
    double e = 0.0;
    for (const cplx& x : v) {
        e += std::norm(x);
    }
    if (!(e > 0.0)) {
        throw DegenerateChannelError(std::string(who) + ": compound channel is zero");
    }
    const double n = std::sqrt(e);
    for (cplx& x : v) {
        x /= n;
    }
    return BeamVector(std::move(v), ConstraintKind::sum_power);
}

}  // namespace

EgcResult egc_weights(const CompoundParams& cp)
{
    CVec w(cp.size());
    std::vector<std::size_t> zeros;
    for (std::size_t i = 0; i < cp.size(); ++i) {
        const double m = std::abs(cp.hbar[i]);
        if (m > 0.0) {
            w[i] = cp.hbar[i] / m;
        } else {
            w[i] = 1.0;
            zeros.push_back(i);
        }
    }
    return EgcResult{BeamVector(std::move(w), ConstraintKind::per_relay), std::move(zeros)};
}

BeamVector psp_weights(const CompoundParams& cp)
{
    return unit_norm_or_throw(cp.hbar, "psp_weights");
}

BeamVector ssp_weights(const CompoundParams& cp)
{
    CVec w(cp.size());
    for (std::size_t i = 0; i < cp.size(); ++i) {
        w[i] = cp.hbar[i] / (1.0 + std::norm(cp.gbar[i]));
    }
    return unit_norm_or_throw(std::move(w), "ssp_weights");
}

BeamVector nobf_weights(std::size_t num_relays)
{
    return init_weights(num_relays, ConstraintKind::sum_power);
}

}  // namespace pbbf
