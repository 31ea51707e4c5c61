#include "pbbf/adaptation.hpp"

#include <cmath>
#include <stdexcept>

namespace pbbf {

bool satisfies(std::span<const cplx> w, ConstraintKind constraint)
{
    if (w.empty()) {
        return false;
    }
    if (constraint == ConstraintKind::sum_power) {
        double e = 0.0;
        for (const cplx& x : w) {
            e += std::norm(x);
        }
        return std::abs(e - 1.0) < kConstraintTolerance;
    }
    for (const cplx& x : w) {
        if (!(std::abs(std::norm(x) - 1.0) < kConstraintTolerance)) {
            return false;
        }
    }
    return true;
}

BeamVector::BeamVector(CVec weights, ConstraintKind constraint)
    : weights_(std::move(weights)), constraint_(constraint)
{
    if (!satisfies(weights_, constraint_)) {
        throw std::invalid_argument("beam vector violates its power constraint");
    }
}

BeamVector normalize(std::span<const cplx> raw, ConstraintKind constraint,
                     const BeamVector& fallback)
{
    if (raw.size() != fallback.size()) {
        throw std::invalid_argument("normalize: fallback length mismatch");
    }
    if (fallback.constraint() != constraint) {
        throw std::invalid_argument("normalize: fallback has a different constraint");
    }
    CVec out(raw.begin(), raw.end());
    if (constraint == ConstraintKind::sum_power) {
        double e = 0.0;
        for (const cplx& x : raw) {
            e += std::norm(x);
        }
        const double n = std::sqrt(e);
        if (n < kNormalizeFloor) {
            return fallback;
        }
        for (cplx& x : out) {
            x /= n;
        }
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double m = std::abs(out[i]);
            out[i] = m < kNormalizeFloor ? fallback[i] : out[i] / m;
        }
    }
    return BeamVector(std::move(out), constraint);
}

BeamVector init_weights(std::size_t num_relays, ConstraintKind constraint)
{
    if (num_relays < 1) {
        throw std::invalid_argument("init_weights: at least one relay required");
    }
    const double v = constraint == ConstraintKind::sum_power
                         ? 1.0 / std::sqrt(static_cast<double>(num_relays))
                         : 1.0;
    return BeamVector(CVec(num_relays, cplx{v, 0.0}), constraint);
}

cplx dft_entry(std::size_t row, std::size_t col, std::size_t size)
{
    // Reduce the exponent modulo size first to keep the angle small.
    const auto k = static_cast<double>((row * col) % size);
    return std::polar(1.0 / std::sqrt(static_cast<double>(size)),
                      -2.0 * kPi * k / static_cast<double>(size));
}

std::span<const cplx> PerturbationSet::column(std::size_t index) const
{
    if (index >= num_columns_) {
        throw std::out_of_range("perturbation set: column index out of range");
    }
    return std::span<const cplx>(data_).subspan(index * num_relays_, num_relays_);
}

std::span<const cplx> PerturbationSet::for_frame(std::int64_t frame_index) const
{
    if (frame_index < 0) {
        throw std::invalid_argument("perturbation set: negative frame index");
    }
    return column(static_cast<std::size_t>(frame_index) % num_columns_);
}

PerturbationSet build_perturbation_set(std::size_t num_relays, Scheme scheme)
{
    if (num_relays < 1) {
        throw std::invalid_argument("perturbation set: at least one relay required");
    }
    const cplx j{0.0, 1.0};
    const std::vector<cplx> rotations = scheme == Scheme::take_reject
                                            ? std::vector<cplx>{1.0, j, -1.0, -j}
                                            : std::vector<cplx>{1.0, j};
    PerturbationSet set;
    set.num_relays_ = num_relays;
    set.num_columns_ = rotations.size() * num_relays;
    set.scheme_ = scheme;
    set.data_.reserve(set.num_columns_ * num_relays);
    for (const cplx& rot : rotations) {
        for (std::size_t col = 0; col < num_relays; ++col) {
            for (std::size_t row = 0; row < num_relays; ++row) {
                set.data_.push_back(rot * dft_entry(row, col, num_relays));
            }
        }
    }
    return set;
}

TrState tr_init(std::size_t num_relays, ConstraintKind constraint, double forgetting_factor)
{
    if (!(forgetting_factor > 0.0 && forgetting_factor <= 1.0)) {
        throw std::invalid_argument("forgetting factor must lie in (0, 1]");
    }
    return TrState{init_weights(num_relays, constraint), 0.0, 0, forgetting_factor};
}

PmState pm_init(std::size_t num_relays, ConstraintKind constraint)
{
    return PmState{init_weights(num_relays, constraint), 0};
}

BeamVector perturb_along(const BeamVector& base, double scale, std::span<const cplx> q)
{
    if (q.size() != base.size()) {
        throw std::invalid_argument("perturbation dimension does not match weights");
    }
    CVec raw(base.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        raw[i] = base[i] + scale * q[i];
    }
    return normalize(raw, base.constraint(), base);
}

namespace {

void check_step(double beta, const PerturbationSet& pset, Scheme expected)
{
    if (!(beta >= 0.0)) {
        throw std::invalid_argument("step size must be nonnegative");
    }
    if (pset.scheme() != expected) {
        throw std::invalid_argument("perturbation set built for the other scheme");
    }
}

}  // namespace

BeamVector tr_perturb(const TrState& state, double beta, const PerturbationSet& pset)
{
    check_step(beta, pset, Scheme::take_reject);
    return perturb_along(state.w_data, beta, pset.for_frame(state.frame_index));
}

TrStep tr_step(const TrState& state, const BeamVector& w_tilde, double training_objective)
{
    if (!(training_objective >= 0.0)) {
        throw std::invalid_argument("tr_step: objective must be nonnegative");
    }
    TrStep out{state, 0};
    const double reference = state.forgetting_factor * state.best_objective;
    out.feedback_bit = training_objective > reference ? 1 : 0;
    if (out.feedback_bit == 1) {
        out.state.w_data = w_tilde;
        out.state.best_objective = training_objective;
    } else {
        out.state.best_objective = reference;
    }
    ++out.state.frame_index;
    return out;
}

TrState tr_apply_feedback(const TrState& state, const BeamVector& w_tilde, int feedback_bit)
{
    TrState next = state;
    if (feedback_bit == 1) {
        next.w_data = w_tilde;
    }
    ++next.frame_index;
    return next;
}

PmPair pm_perturb(const PmState& state, double beta, const PerturbationSet& pset)
{
    check_step(beta, pset, Scheme::plus_minus);
    const auto q = pset.for_frame(state.frame_index);
    return PmPair{perturb_along(state.w_data, beta, q), perturb_along(state.w_data, -beta, q)};
}

PmStep pm_step(const PmState& state, const PmPair& candidates, double objective_plus,
               double objective_minus)
{
    if (!(objective_plus >= 0.0) || !(objective_minus >= 0.0)) {
        throw std::invalid_argument("pm_step: objectives must be nonnegative");
    }
    const int bit = objective_minus > objective_plus ? 1 : 0;
    return PmStep{pm_apply_feedback(state, candidates, bit), bit};
}

PmState pm_apply_feedback(const PmState& state, const PmPair& candidates, int feedback_bit)
{
    PmState next{feedback_bit == 1 ? candidates.minus : candidates.plus, state.frame_index + 1};
    return next;
}

}  // namespace pbbf
