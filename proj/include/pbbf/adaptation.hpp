#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "pbbf/types.hpp"

namespace pbbf {

enum class ConstraintKind {
    sum_power,  // ||w||^2 = 1
    per_relay,  // |w_i|^2 = 1 for every relay
};

inline constexpr double kConstraintTolerance = 1e-10;
inline constexpr double kNormalizeFloor = 1e-12;

// Beamforming weights that satisfy their power constraint. Construction
// checks the constraint, so every instance is feasible.
class BeamVector {
public:
    BeamVector(CVec weights, ConstraintKind constraint);

    std::span<const cplx> weights() const { return weights_; }
    const CVec& vector() const { return weights_; }
    ConstraintKind constraint() const { return constraint_; }
    std::size_t size() const { return weights_.size(); }
    const cplx& operator[](std::size_t i) const { return weights_[i]; }

    friend bool operator==(const BeamVector&, const BeamVector&) = default;

private:
    CVec weights_;
    ConstraintKind constraint_;
};

bool satisfies(std::span<const cplx> w, ConstraintKind constraint);

// Projects raw weights onto the constraint set. Entries (per-relay) or the
// whole vector (sum power) that are numerically zero are taken from
// `fallback`.
BeamVector normalize(std::span<const cplx> raw, ConstraintKind constraint,
                     const BeamVector& fallback);

BeamVector init_weights(std::size_t num_relays, ConstraintKind constraint);

enum class Scheme {
    take_reject,  // T/R
    plus_minus,   // P/M
};

// Deterministic perturbation vectors built from the unitary DFT matrix Q:
// [Q, jQ, -Q, -jQ] for T/R and [Q, jQ] for P/M. Column k mod N is used in
// frame k.
class PerturbationSet {
public:
    std::size_t num_relays() const { return num_relays_; }
    std::size_t num_columns() const { return num_columns_; }
    Scheme scheme() const { return scheme_; }

    std::span<const cplx> column(std::size_t index) const;
    std::span<const cplx> for_frame(std::int64_t frame_index) const;

private:
    friend PerturbationSet build_perturbation_set(std::size_t num_relays, Scheme scheme);

    std::size_t num_relays_ = 0;
    std::size_t num_columns_ = 0;
    Scheme scheme_ = Scheme::take_reject;
    CVec data_;  // column-major
};

PerturbationSet build_perturbation_set(std::size_t num_relays, Scheme scheme);

// Unitary DFT matrix entries exp(-j 2 pi a b / R) / sqrt(R).
cplx dft_entry(std::size_t row, std::size_t col, std::size_t size);

// normalize(base + scale * q) with `base` as the fallback.
BeamVector perturb_along(const BeamVector& base, double scale, std::span<const cplx> q);

// Destination-side take/reject state.
struct TrState {
    BeamVector w_data;
    double best_objective = 0.0;
    std::int64_t frame_index = 0;
    double forgetting_factor = 1.0;
};

struct PmState {
    BeamVector w_data;
    std::int64_t frame_index = 0;
};

TrState tr_init(std::size_t num_relays, ConstraintKind constraint, double forgetting_factor = 1.0);
PmState pm_init(std::size_t num_relays, ConstraintKind constraint);

BeamVector tr_perturb(const TrState& state, double beta, const PerturbationSet& pset);

struct TrStep {
    TrState state;
    int feedback_bit = 0;
};

// Compares the training objective against the (decayed) best-so-far value
// and applies the feedback bit.
TrStep tr_step(const TrState& state, const BeamVector& w_tilde, double training_objective);

// Relay-side T/R update: only the feedback bit is needed.
TrState tr_apply_feedback(const TrState& state, const BeamVector& w_tilde, int feedback_bit);

struct PmPair {
    BeamVector plus;
    BeamVector minus;
};

PmPair pm_perturb(const PmState& state, double beta, const PerturbationSet& pset);

struct PmStep {
    PmState state;
    int feedback_bit = 0;
};

PmStep pm_step(const PmState& state, const PmPair& candidates, double objective_plus,
               double objective_minus);

PmState pm_apply_feedback(const PmState& state, const PmPair& candidates, int feedback_bit);

}  // namespace pbbf
