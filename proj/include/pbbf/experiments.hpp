#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pbbf/link.hpp"

namespace pbbf {

// Beamforming schemes compared in the BER and tracking experiments.
enum class BeamformingScheme {
    no_bf,    // uniform power, no phase alignment
    egc,      // equal-gain combining (per-relay constraint)
    p_sp,     // received-power maximizer (sum constraint)
    s_sp,     // SNR maximizer (sum constraint)
    pb_egc,   // adaptive, per-relay constraint, power objective
    pb_p_sp,  // adaptive, sum constraint, power objective
    pb_s_sp,  // adaptive, sum constraint, SNR objective
};

std::string to_string(BeamformingScheme scheme);
BeamformingScheme beamforming_scheme_from_string(const std::string& name);
bool is_adaptive(BeamformingScheme scheme);
ConstraintKind constraint_of(BeamformingScheme scheme);
Objective objective_of(BeamformingScheme scheme);

struct ExperimentConfig {
    Scenario scenario = Scenario::idealized;
    Scheme scheme = Scheme::plus_minus;
    Objective objective = Objective::snr;
    ConstraintKind constraint = ConstraintKind::sum_power;
    double beta = 0.1;
    std::vector<double> snr_db_grid{18.0};
    std::vector<double> normalized_doppler_grid;
    int num_relays = 3;
    std::vector<double> distances{1.0, 3.0, 5.0};
    // Convergence: realizations run. BER/tracking: cap per grid point.
    int num_realizations = 10000;
    int num_frames = 100;
    std::uint64_t seed = 1;
    double forgetting_factor = 1.0;
    PmEstimation pm_estimation = PmEstimation::split;
    FrameConfig frame;

    // Convergence.
    std::vector<int> cdf_frames{40, 70};
    std::vector<double> cdf_thresholds{0.01, 0.02, 0.043, 0.05, 0.1, 0.2};
    int trajectories_written = 100;

    // BER and tracking.
    std::vector<BeamformingScheme> schemes{BeamformingScheme::no_bf, BeamformingScheme::egc,
                                           BeamformingScheme::p_sp,  BeamformingScheme::s_sp,
                                           BeamformingScheme::pb_egc, BeamformingScheme::pb_p_sp,
                                           BeamformingScheme::pb_s_sp};
    std::vector<double> betas{0.1, 0.5};
    int warmup_frames = 300;
    int data_frames = 25;
    int min_realizations = 2000;
    std::int64_t target_errors = 100;
    std::int64_t max_bits = 10'000'000;
    int batch_size = 250;
    int num_oscillators = kDefaultOscillators;

    // 0 = hardware concurrency. Results do not depend on this.
    int workers = 0;

    void validate() const;
};

// Link parameters for nominal SNR Psum/N0 in dB: N0 = 1, Ps = Psum, and a
// relay budget of Psum (sum constraint) or Psum/R (per-relay constraint).
NetworkParams nominal_network(double snr_db, int num_relays, ConstraintKind constraint);

struct TrajectoryRow {
    int realization = 0;
    int frame = 0;
    double snr_normalized = 0.0;
    double gap = 0.0;
    int feedback_bit = 0;
};

struct GapCdfRow {
    int frames = 0;
    double gap_threshold = 0.0;
    double fraction = 0.0;
};

struct ConvergenceResult {
    std::vector<TrajectoryRow> trajectories;  // first `trajectories_written` realizations
    std::vector<GapCdfRow> gap_cdf;
    // gaps[r][k]: gap of realization r after k frames, k = 0..num_frames.
    std::vector<std::vector<double>> gaps;
    std::vector<std::vector<double>> normalized_snr;
};

struct BerRow {
    std::string scheme;
    double snr_db = 0.0;
    std::int64_t bits = 0;
    std::int64_t errors = 0;
    double ber = 0.0;
};

struct TrackingRow {
    std::string scheme;
    double beta = 0.0;
    double normalized_doppler = 0.0;
    std::int64_t bits = 0;
    std::int64_t errors = 0;
    double ber = 0.0;
};

ConvergenceResult run_convergence_experiment(const ExperimentConfig& cfg);
std::vector<BerRow> run_ber_experiment(const ExperimentConfig& cfg);
std::vector<TrackingRow> run_tracking_experiment(const ExperimentConfig& cfg);

struct OracleCheckResult {
    int channels = 0;
    int random_vectors = 0;
    double worst_snr_excess = 0.0;    // max over channels of (best random - ssp) / ssp
    double worst_power_excess = 0.0;  // same for psp
    double worst_psp_deviation = 0.0; // |P(psp) - ||hbar||^2| / ||hbar||^2
    double worst_egc_excess = 0.0;    // unit-modulus random vectors vs egc on power
    bool passed = false;
};

// Random-search verification of the batch designs on idealized channels.
OracleCheckResult run_oracle_check(const ExperimentConfig& cfg, int channels, int random_vectors,
                                   double tolerance = 1e-9);

// Worker count actually used for `requested` (0 = hardware concurrency).
int resolve_workers(int requested);

}  // namespace pbbf
