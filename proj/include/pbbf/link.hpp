#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "pbbf/adaptation.hpp"
#include "pbbf/channel.hpp"
#include "pbbf/estimation.hpp"
#include "pbbf/network.hpp"
#include "pbbf/random.hpp"

namespace pbbf {

enum class Scenario {
    idealized,  // static channel, exact objectives and compound channel at D
    realistic,  // Jakes fading, pilot-based estimates, measured relay gains
};

enum class Objective { power, snr };

enum class PmEstimation {
    split,  // each half estimated separately, winner's estimate kept for the next frame
    whole,  // data detected with an estimate over the whole training interval
};

struct FrameConfig {
    int num_pilots = 10;
    int num_data = 40;

    int num_symbols() const { return num_pilots + num_data; }
    int half() const { return num_pilots / 2; }
    void validate(Scheme scheme) const;
};

struct LinkConfig {
    Scenario scenario = Scenario::idealized;
    Scheme scheme = Scheme::take_reject;
    Objective objective = Objective::snr;
    ConstraintKind constraint = ConstraintKind::sum_power;
    double beta = 0.1;
    double forgetting_factor = 1.0;
    PmEstimation pm_estimation = PmEstimation::split;
    FrameConfig frame;
    NetworkParams network;
};

struct FrameResult {
    std::int64_t frame_index = 0;
    int feedback_bit = 0;
    // One value for T/R, plus then minus for P/M; as seen by the destination.
    std::vector<double> objective_training;
    // True objective of the data weights.
    double objective_data = 0.0;
    std::vector<std::uint8_t> detected_bits;
    int bit_errors = 0;
    cplx h_hat_used;
};

std::vector<cplx> bpsk_modulate(std::span<const std::uint8_t> bits);
std::uint8_t bpsk_detect(cplx y, cplx h_hat);

// Pilot sequence used in every frame: unit-modulus BPSK ones.
std::vector<cplx> pilot_sequence(int length);

// One source-relays-destination link with its adaptation state.
class Link {
public:
    Link(LinkConfig config, ChannelRealization static_channel, RandomStream noise);
    Link(LinkConfig config, JakesChannel channel, RandomStream noise);

    // Transmits one frame carrying `bits` as data and runs one adaptation step.
    FrameResult run_frame(std::span<const std::uint8_t> bits);

    // Idealized scenario only: the adaptation step of a frame without
    // simulating its data symbols. Returns the feedback bit.
    int adapt_frame();

    const BeamVector& data_weights() const;
    std::int64_t frame_index() const;
    const LinkConfig& config() const { return config_; }
    const PerturbationSet& perturbations() const { return pset_; }

    // Idealized scenario: exact compound parameters and objective.
    const CompoundParams& compound() const;
    double exact_objective(std::span<const cplx> w) const;

private:
    struct Training {
        std::vector<BeamVector> vectors;
        std::vector<double> objectives;
        int feedback_bit = 0;
        cplx next_estimate;
        bool estimate_updated = false;
    };

    FrameResult run_idealized(std::span<const std::uint8_t> bits);
    FrameResult run_realistic(std::span<const std::uint8_t> bits);
    int adapt_exact(FrameResult* out);
    double objective_value(const PilotEstimate& e) const;

    LinkConfig config_;
    PerturbationSet pset_;
    std::variant<TrState, PmState> state_;
    RandomStream noise_;
    std::vector<cplx> pilots_;

    // Idealized.
    ChannelRealization static_channel_;
    std::vector<double> ideal_gains_;
    CompoundParams compound_;

    // Realistic.
    std::optional<JakesChannel> jakes_;
    cplx carried_estimate_{0.0, 0.0};
};

}  // namespace pbbf
