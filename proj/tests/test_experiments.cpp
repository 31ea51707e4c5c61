#include "doctest.h"

#include <cmath>

#include "pbbf/experiments.hpp"
#include "pbbf/oracles.hpp"
#include "test_support.hpp"

using namespace pbbf;

namespace {

ExperimentConfig small_convergence(Scheme scheme)
{
    ExperimentConfig cfg;
    cfg.scheme = scheme;
    cfg.num_realizations = 40;
    cfg.num_frames = 120;
    cfg.trajectories_written = 3;
    cfg.workers = 1;
    return cfg;
}

ExperimentConfig small_ber()
{
    ExperimentConfig cfg;
    cfg.scheme = Scheme::take_reject;
    cfg.snr_db_grid = {6.0, 12.0};
    cfg.schemes = {BeamformingScheme::no_bf, BeamformingScheme::s_sp, BeamformingScheme::pb_s_sp};
    cfg.num_realizations = 300;
    cfg.min_realizations = 100;
    cfg.batch_size = 50;
    cfg.warmup_frames = 100;
    cfg.data_frames = 10;
    cfg.workers = 1;
    return cfg;
}

}  // namespace

TEST_CASE("scheme names round trip")
{
    for (auto s : {BeamformingScheme::no_bf, BeamformingScheme::egc, BeamformingScheme::p_sp,
                   BeamformingScheme::s_sp, BeamformingScheme::pb_egc, BeamformingScheme::pb_p_sp,
                   BeamformingScheme::pb_s_sp}) {
        CHECK(beamforming_scheme_from_string(to_string(s)) == s);
    }
    CHECK_THROWS(beamforming_scheme_from_string("mrc"));
    CHECK(constraint_of(BeamformingScheme::pb_egc) == ConstraintKind::per_relay);
    CHECK(objective_of(BeamformingScheme::pb_p_sp) == Objective::power);
    CHECK(objective_of(BeamformingScheme::s_sp) == Objective::snr);
    CHECK(is_adaptive(BeamformingScheme::pb_egc));
    CHECK_FALSE(is_adaptive(BeamformingScheme::egc));
}

TEST_CASE("nominal network mapping")
{
    const auto sum = nominal_network(10.0, 4, ConstraintKind::sum_power);
    CHECK(sum.noise_power == 1.0);
    CHECK(sum.source_power == doctest::Approx(10.0));
    CHECK(sum.relay_power == doctest::Approx(10.0));
    const auto per = nominal_network(10.0, 4, ConstraintKind::per_relay);
    CHECK(per.relay_power == doctest::Approx(2.5));
    CHECK(per.source_power == doctest::Approx(10.0));
}

TEST_CASE("experiment configuration is validated")
{
    ExperimentConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.beta = 0.0;
    CHECK_THROWS(cfg.validate());
    cfg = ExperimentConfig{};
    cfg.distances = {1.0, 2.0};
    CHECK_THROWS(cfg.validate());
    cfg = ExperimentConfig{};
    cfg.snr_db_grid = {};
    CHECK_THROWS(run_ber_experiment(cfg));
    cfg = ExperimentConfig{};
    cfg.scenario = Scenario::realistic;
    cfg.normalized_doppler_grid = {};
    CHECK_THROWS(run_tracking_experiment(cfg));
}

TEST_CASE("convergence trajectories are normalized and T/R gaps never grow")
{
    const auto res = run_convergence_experiment(small_convergence(Scheme::take_reject));
    REQUIRE(res.gaps.size() == 40);
    for (const auto& g : res.gaps) {
        REQUIRE(g.size() == 121);
        CHECK(g[0] >= 0.0);
        CHECK(g[0] <= 1.0);
        for (std::size_t k = 1; k < g.size(); ++k) {
            REQUIRE(g[k] <= g[k - 1]);
            REQUIRE(g[k] >= -1e-12);
        }
    }
    CHECK(res.trajectories.size() == 3 * 121);
    CHECK(res.trajectories.front().feedback_bit == 0);
    for (const auto& row : res.trajectories) {
        CHECK(row.snr_normalized + row.gap == doctest::Approx(1.0));
    }
}

TEST_CASE("initial gap equals the uniform-vector gap")
{
    auto cfg = small_convergence(Scheme::plus_minus);
    cfg.num_realizations = 5;
    const auto res = run_convergence_experiment(cfg);
    // Recompute realization 0 from its channel stream with independent code.
    RandomStream rng = RandomStream::from_path(cfg.seed, {stream_label::channel, 0});
    const auto ch = sample_static_rayleigh(rng, PathLoss(cfg.distances));
    const auto net = nominal_network(cfg.snr_db_grid[0], 3, ConstraintKind::sum_power);
    const auto cp = compound_params(net, ch, ideal_relay_gains(net, ch));
    const double s = 1.0 / std::sqrt(3.0);
    const CVec w0{s, s, s};
    CVec wopt(3);
    double norm = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        wopt[i] = cp.hbar[i] / (1.0 + std::norm(cp.gbar[i]));
        norm += std::norm(wopt[i]);
    }
    for (auto& x : wopt) {
        x /= std::sqrt(norm);
    }
    const double expected = 1.0 - test::reference_snr(w0, cp.hbar, cp.gbar, 1.0) /
                                      test::reference_snr(wopt, cp.hbar, cp.gbar, 1.0);
    CHECK(res.gaps[0][0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("gap cdf rows agree with the gap matrix")
{
    auto cfg = small_convergence(Scheme::plus_minus);
    cfg.cdf_frames = {10, 40};
    cfg.cdf_thresholds = {0.043, 0.2};
    const auto res = run_convergence_experiment(cfg);
    REQUIRE(res.gap_cdf.size() == 4);
    for (const auto& row : res.gap_cdf) {
        int below = 0;
        for (const auto& g : res.gaps) {
            below += g[static_cast<std::size_t>(row.frames)] < row.gap_threshold ? 1 : 0;
        }
        CHECK(row.fraction == doctest::Approx(below / 40.0));
    }
}

TEST_CASE("convergence experiment preconditions")
{
    auto cfg = small_convergence(Scheme::take_reject);
    cfg.objective = Objective::power;
    CHECK_THROWS(run_convergence_experiment(cfg));
    cfg = small_convergence(Scheme::take_reject);
    cfg.scenario = Scenario::realistic;
    CHECK_THROWS(run_convergence_experiment(cfg));
}

TEST_CASE("noiseless BER is zero")
{
    auto cfg = small_ber();
    cfg.snr_db_grid = {250.0};
    cfg.num_realizations = 50;
    cfg.min_realizations = 50;
    const auto rows = run_ber_experiment(cfg);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.errors == 0);
        CHECK(r.ber == 0.0);
        CHECK(r.bits > 0);
    }
}

TEST_CASE("S-SP oracle BER does not exceed no-BF BER")
{
    auto cfg = small_ber();
    cfg.num_realizations = 2000;
    cfg.min_realizations = 2000;
    const auto rows = run_ber_experiment(cfg);
    for (double snr : cfg.snr_db_grid) {
        double nobf = -1;
        double ssp = -1;
        for (const auto& r : rows) {
            if (r.snr_db == snr && r.scheme == "no-bf") {
                nobf = r.ber;
                CHECK(r.bits >= 100000);
            }
            if (r.snr_db == snr && r.scheme == "s-sp") {
                ssp = r.ber;
            }
        }
        CHECK(ssp <= nobf);
    }
}

TEST_CASE("BER stopping rule honours its limits")
{
    auto cfg = small_ber();
    cfg.snr_db_grid = {0.0};
    cfg.target_errors = 10;
    cfg.min_realizations = 100;
    cfg.num_realizations = 10000;
    const auto rows = run_ber_experiment(cfg);
    for (const auto& r : rows) {
        // Low SNR: the error target is met after the minimum number of
        // realizations, i.e. two batches of 50 at 400 bits each.
        CHECK(r.bits == 100 * 400);
        CHECK(r.errors >= 10);
    }
    cfg.max_bits = 20000;
    cfg.min_realizations = 10000;
    for (const auto& r : run_ber_experiment(cfg)) {
        CHECK(r.bits == 20000);
    }
}

TEST_CASE("experiments are independent of the worker count")
{
    auto a = small_ber();
    auto b = small_ber();
    b.workers = 3;
    const auto ra = run_ber_experiment(a);
    const auto rb = run_ber_experiment(b);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
        CHECK(ra[i].errors == rb[i].errors);
        CHECK(ra[i].bits == rb[i].bits);
    }
    auto c = small_convergence(Scheme::plus_minus);
    auto d = c;
    d.workers = 4;
    CHECK(run_convergence_experiment(c).gaps == run_convergence_experiment(d).gaps);
}

TEST_CASE("tracking experiment produces one row per scheme, beta and Doppler")
{
    ExperimentConfig cfg;
    cfg.scenario = Scenario::realistic;
    cfg.scheme = Scheme::plus_minus;
    cfg.snr_db_grid = {22.0};
    cfg.normalized_doppler_grid = {0.0, 0.05};
    cfg.schemes = {BeamformingScheme::pb_s_sp};
    cfg.betas = {0.1, 0.5};
    cfg.warmup_frames = 50;
    cfg.data_frames = 20;
    cfg.num_realizations = 20;
    cfg.min_realizations = 20;
    cfg.batch_size = 10;
    cfg.workers = 1;
    const auto rows = run_tracking_experiment(cfg);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.scheme == "pb-s-sp");
        CHECK(r.bits == 20 * 20 * 40);
        CHECK(r.ber == doctest::Approx(static_cast<double>(r.errors) / static_cast<double>(r.bits)));
    }
    cfg.schemes = {BeamformingScheme::s_sp};
    CHECK_THROWS(run_tracking_experiment(cfg));
}

TEST_CASE("oracle check passes for the default network")
{
    ExperimentConfig cfg;
    cfg.workers = 1;
    const auto r = run_oracle_check(cfg, 50, 2000);
    CHECK(r.passed);
    CHECK(r.channels == 50);
    CHECK(r.worst_snr_excess <= 1e-9);
    CHECK(r.worst_power_excess <= 1e-9);
    CHECK(r.worst_psp_deviation <= 1e-9);
    CHECK(r.worst_egc_excess <= 1e-9);
}

TEST_CASE("resolve workers")
{
    CHECK(resolve_workers(3) == 3);
    CHECK(resolve_workers(0) >= 1);
}
