#include "pbbf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "pbbf/oracles.hpp"

namespace pbbf {

namespace {

constexpr std::uint64_t kDataLabel = 0x64617461;  // "data"

template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, int workers, Fn&& fn)
{
    std::vector<T> out(count);
    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = fn(i);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            if (failed) {
                return;
            }
            try {
                out[i] = fn(i);
            } catch (...) {
                if (!failed.exchange(true)) {
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

struct Tally {
    std::int64_t bits = 0;
    std::int64_t errors = 0;
};

// Runs realizations in fixed-size batches until the stopping rule fires.
// Batches are evaluated in parallel but reduced in order, so the result is
// independent of the worker count.
template <typename Fn>
Tally run_until_converged(const ExperimentConfig& cfg, Fn&& realization)
{
    Tally total;
    int done = 0;
    const int workers = resolve_workers(cfg.workers);
    while (done < cfg.num_realizations) {
        const int batch = std::min(cfg.batch_size, cfg.num_realizations - done);
        const auto tallies = parallel_map<Tally>(
            static_cast<std::size_t>(batch), workers,
            [&](std::size_t i) { return realization(done + static_cast<int>(i)); });
        for (const Tally& t : tallies) {
            total.bits += t.bits;
            total.errors += t.errors;
        }
        done += batch;
        if (total.bits >= cfg.max_bits) {
            break;
        }
        if (done >= cfg.min_realizations && total.errors >= cfg.target_errors) {
            break;
        }
    }
    return total;
}

std::vector<std::uint8_t> draw_bits(RandomStream& rng, int count)
{
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(count));
    for (auto& b : bits) {
        b = rng.bit();
    }
    return bits;
}

RandomStream stream(const ExperimentConfig& cfg, std::uint64_t label, int realization)
{
    return RandomStream::from_path(cfg.seed, {label, static_cast<std::uint64_t>(realization)});
}

BeamVector batch_weights(BeamformingScheme scheme, const CompoundParams& cp, std::size_t relays)
{
    switch (scheme) {
    case BeamformingScheme::no_bf:
        return nobf_weights(relays);
    case BeamformingScheme::egc:
        return egc_weights(cp).weights;
    case BeamformingScheme::p_sp:
        return psp_weights(cp);
    case BeamformingScheme::s_sp:
        return ssp_weights(cp);
    default:
        throw std::logic_error("batch_weights: adaptive scheme");
    }
}

LinkConfig link_config(const ExperimentConfig& cfg, Scenario scenario, BeamformingScheme scheme,
                       double beta, double snr_db)
{
    LinkConfig lc;
    lc.scenario = scenario;
    lc.scheme = cfg.scheme;
    lc.objective = objective_of(scheme);
    lc.constraint = constraint_of(scheme);
    lc.beta = beta;
    lc.forgetting_factor = cfg.forgetting_factor;
    lc.pm_estimation = cfg.pm_estimation;
    lc.frame = cfg.frame;
    lc.network = nominal_network(snr_db, cfg.num_relays, lc.constraint);
    return lc;
}

Tally ber_realization(const ExperimentConfig& cfg, BeamformingScheme scheme, double snr_db,
                      int r)
{
    const PathLoss path_loss(cfg.distances);
    RandomStream chan_rng = stream(cfg, stream_label::channel, r);
    const ChannelRealization chan = sample_static_rayleigh(chan_rng, path_loss);
    RandomStream noise = stream(cfg, stream_label::noise, r);
    RandomStream data = stream(cfg, kDataLabel, r);

    Tally t;
    if (is_adaptive(scheme)) {
        Link link(link_config(cfg, Scenario::idealized, scheme, cfg.beta, snr_db), chan,
                  std::move(noise));
        for (int k = 0; k < cfg.warmup_frames; ++k) {
            link.adapt_frame();
        }
        for (int k = 0; k < cfg.data_frames; ++k) {
            const auto bits = draw_bits(data, cfg.frame.num_data);
            t.errors += link.run_frame(bits).bit_errors;
            t.bits += cfg.frame.num_data;
        }
        return t;
    }

    const NetworkParams net = nominal_network(snr_db, cfg.num_relays, constraint_of(scheme));
    const std::vector<double> alphas = ideal_relay_gains(net, chan);
    const CompoundParams cp = compound_params(net, chan, alphas);
    const BeamVector w = batch_weights(scheme, cp, chan.size());
    const cplx h_eff = effective_channel(w.weights(), cp);
    for (int k = 0; k < cfg.data_frames; ++k) {
        const auto bits = draw_bits(data, cfg.frame.num_data);
        const auto symbols = bpsk_modulate(bits);
        for (std::size_t i = 0; i < symbols.size(); ++i) {
            const cplx y = simulate_symbol(net, chan, alphas, w.weights(), symbols[i], noise);
            t.errors += bpsk_detect(y, h_eff) != bits[i] ? 1 : 0;
        }
        t.bits += cfg.frame.num_data;
    }
    return t;
}

Tally tracking_realization(const ExperimentConfig& cfg, BeamformingScheme scheme, double beta,
                           double doppler, int r)
{
    const PathLoss path_loss(cfg.distances);
    RandomStream jakes_rng = stream(cfg, stream_label::jakes, r);
    JakesChannel channel(jakes_rng, path_loss, doppler, cfg.num_oscillators,
                         cfg.frame.num_symbols());
    RandomStream data = stream(cfg, kDataLabel, r);
    Link link(link_config(cfg, Scenario::realistic, scheme, beta, cfg.snr_db_grid.front()),
              std::move(channel), stream(cfg, stream_label::noise, r));

    Tally t;
    for (int k = 0; k < cfg.warmup_frames + cfg.data_frames; ++k) {
        const auto bits = draw_bits(data, cfg.frame.num_data);
        const FrameResult fr = link.run_frame(bits);
        if (k >= cfg.warmup_frames) {
            t.errors += fr.bit_errors;
            t.bits += cfg.frame.num_data;
        }
    }
    return t;
}

double ratio(std::int64_t num, std::int64_t den)
{
    return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

}  // namespace

int resolve_workers(int requested)
{
    if (requested > 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string to_string(BeamformingScheme scheme)
{
    switch (scheme) {
    case BeamformingScheme::no_bf:
        return "no-bf";
    case BeamformingScheme::egc:
        return "egc";
    case BeamformingScheme::p_sp:
        return "p-sp";
    case BeamformingScheme::s_sp:
        return "s-sp";
    case BeamformingScheme::pb_egc:
        return "pb-egc";
    case BeamformingScheme::pb_p_sp:
        return "pb-p-sp";
    case BeamformingScheme::pb_s_sp:
        return "pb-s-sp";
    }
    return "unknown";
}

BeamformingScheme beamforming_scheme_from_string(const std::string& name)
{
    for (auto s : {BeamformingScheme::no_bf, BeamformingScheme::egc, BeamformingScheme::p_sp,
                   BeamformingScheme::s_sp, BeamformingScheme::pb_egc, BeamformingScheme::pb_p_sp,
                   BeamformingScheme::pb_s_sp}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw std::invalid_argument("unknown beamforming scheme '" + name + "'");
}

bool is_adaptive(BeamformingScheme scheme)
{
    return scheme == BeamformingScheme::pb_egc || scheme == BeamformingScheme::pb_p_sp ||
           scheme == BeamformingScheme::pb_s_sp;
}

ConstraintKind constraint_of(BeamformingScheme scheme)
{
    return scheme == BeamformingScheme::egc || scheme == BeamformingScheme::pb_egc
               ? ConstraintKind::per_relay
               : ConstraintKind::sum_power;
}

Objective objective_of(BeamformingScheme scheme)
{
    return scheme == BeamformingScheme::s_sp || scheme == BeamformingScheme::pb_s_sp
               ? Objective::snr
               : Objective::power;
}

NetworkParams nominal_network(double snr_db, int num_relays, ConstraintKind constraint)
{
    const double p_sum = std::pow(10.0, snr_db / 10.0);
    NetworkParams net;
    net.num_relays = num_relays;
    net.noise_power = 1.0;
    net.source_power = p_sum;
    net.relay_power =
        constraint == ConstraintKind::per_relay ? p_sum / static_cast<double>(num_relays) : p_sum;
    return net;
}

void ExperimentConfig::validate() const
{
    auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
    if (!(beta > 0.0)) {
        fail("beta must be > 0");
    }
    if (num_relays < 1) {
        fail("num_relays must be >= 1");
    }
    if (distances.size() != static_cast<std::size_t>(num_relays)) {
        fail("distances must have num_relays entries");
    }
    (void)PathLoss(distances);
    if (num_realizations < 1) {
        fail("num_realizations must be >= 1");
    }
    if (num_frames < 0 || warmup_frames < 0 || data_frames < 0) {
        fail("frame counts must be nonnegative");
    }
    if (!(forgetting_factor > 0.0 && forgetting_factor <= 1.0)) {
        fail("forgetting_factor must lie in (0, 1]");
    }
    if (batch_size < 1) {
        fail("batch_size must be >= 1");
    }
    if (num_oscillators < 8) {
        fail("num_oscillators must be >= 8");
    }
    if (target_errors < 0 || max_bits < 1 || min_realizations < 0) {
        fail("invalid stopping rule");
    }
    for (double b : betas) {
        if (!(b > 0.0)) {
            fail("betas must be > 0");
        }
    }
    for (double d : normalized_doppler_grid) {
        if (!(d >= 0.0)) {
            fail("normalized Doppler must be >= 0");
        }
    }
    frame.validate(scheme);
}

ConvergenceResult run_convergence_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    if (cfg.scenario != Scenario::idealized || cfg.objective != Objective::snr ||
        cfg.constraint != ConstraintKind::sum_power) {
        throw std::invalid_argument(
            "convergence experiment needs the idealized scenario with SNR objective and sum "
            "power constraint");
    }
    if (cfg.snr_db_grid.empty()) {
        throw std::invalid_argument("convergence experiment needs one SNR point");
    }
    for (int f : cfg.cdf_frames) {
        if (f < 0 || f > cfg.num_frames) {
            throw std::invalid_argument("cdf frame count outside [0, num_frames]");
        }
    }

    const PathLoss path_loss(cfg.distances);
    const double snr_db = cfg.snr_db_grid.front();

    struct Run {
        std::vector<double> normalized;
        std::vector<int> bits;
    };
    auto runs = parallel_map<Run>(
        static_cast<std::size_t>(cfg.num_realizations), resolve_workers(cfg.workers),
        [&](std::size_t r) {
            RandomStream chan_rng = stream(cfg, stream_label::channel, static_cast<int>(r));
            const ChannelRealization chan = sample_static_rayleigh(chan_rng, path_loss);
            Link link(link_config(cfg, Scenario::idealized, BeamformingScheme::pb_s_sp, cfg.beta,
                                  snr_db),
                      chan, stream(cfg, stream_label::noise, static_cast<int>(r)));
            const double noise = link.config().network.noise_power;
            const double best =
                objective_snr(ssp_weights(link.compound()).weights(), link.compound(), noise);
            Run run;
            run.normalized.reserve(static_cast<std::size_t>(cfg.num_frames) + 1);
            run.bits.reserve(static_cast<std::size_t>(cfg.num_frames) + 1);
            int last_bit = 0;
            for (int k = 0; k <= cfg.num_frames; ++k) {
                run.normalized.push_back(
                    objective_snr(link.data_weights().weights(), link.compound(), noise) / best);
                run.bits.push_back(last_bit);
                if (k < cfg.num_frames) {
                    last_bit = link.adapt_frame();
                }
            }
            return run;
        });

    ConvergenceResult result;
    result.gaps.reserve(runs.size());
    result.normalized_snr.reserve(runs.size());
    for (std::size_t r = 0; r < runs.size(); ++r) {
        std::vector<double> gaps(runs[r].normalized.size());
        for (std::size_t k = 0; k < gaps.size(); ++k) {
            gaps[k] = 1.0 - runs[r].normalized[k];
            if (static_cast<int>(r) < cfg.trajectories_written) {
                result.trajectories.push_back(TrajectoryRow{static_cast<int>(r), static_cast<int>(k),
                                                            runs[r].normalized[k], gaps[k],
                                                            runs[r].bits[k]});
            }
        }
        result.gaps.push_back(std::move(gaps));
        result.normalized_snr.push_back(std::move(runs[r].normalized));
    }

    for (int frames : cfg.cdf_frames) {
        for (double threshold : cfg.cdf_thresholds) {
            std::int64_t below = 0;
            for (const auto& g : result.gaps) {
                below += g[static_cast<std::size_t>(frames)] < threshold ? 1 : 0;
            }
            result.gap_cdf.push_back(
                GapCdfRow{frames, threshold, ratio(below, static_cast<std::int64_t>(result.gaps.size()))});
        }
    }
    return result;
}

std::vector<BerRow> run_ber_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    if (cfg.scenario != Scenario::idealized) {
        throw std::invalid_argument("BER experiment runs in the idealized scenario");
    }
    if (cfg.snr_db_grid.empty() || cfg.schemes.empty()) {
        throw std::invalid_argument("BER experiment needs SNR points and schemes");
    }
    std::vector<BerRow> rows;
    for (BeamformingScheme scheme : cfg.schemes) {
        for (double snr_db : cfg.snr_db_grid) {
            const Tally t = run_until_converged(
                cfg, [&](int r) { return ber_realization(cfg, scheme, snr_db, r); });
            rows.push_back(BerRow{to_string(scheme), snr_db, t.bits, t.errors, ratio(t.errors, t.bits)});
        }
    }
    return rows;
}

std::vector<TrackingRow> run_tracking_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    if (cfg.scenario != Scenario::realistic) {
        throw std::invalid_argument("tracking experiment runs in the realistic scenario");
    }
    if (cfg.normalized_doppler_grid.empty() || cfg.betas.empty() || cfg.snr_db_grid.empty()) {
        throw std::invalid_argument("tracking experiment needs Doppler points, betas and an SNR");
    }
    std::vector<TrackingRow> rows;
    for (BeamformingScheme scheme : cfg.schemes) {
        if (!is_adaptive(scheme)) {
            throw std::invalid_argument("tracking experiment takes adaptive schemes only, got " +
                                        to_string(scheme));
        }
        for (double beta : cfg.betas) {
            for (double doppler : cfg.normalized_doppler_grid) {
                const Tally t = run_until_converged(cfg, [&](int r) {
                    return tracking_realization(cfg, scheme, beta, doppler, r);
                });
                rows.push_back(TrackingRow{to_string(scheme), beta, doppler, t.bits, t.errors,
                                           ratio(t.errors, t.bits)});
            }
        }
    }
    return rows;
}

OracleCheckResult run_oracle_check(const ExperimentConfig& cfg, int channels, int random_vectors,
                                   double tolerance)
{
    cfg.validate();
    const PathLoss path_loss(cfg.distances);
    const double snr_db = cfg.snr_db_grid.empty() ? 18.0 : cfg.snr_db_grid.front();
    const auto relays = static_cast<std::size_t>(cfg.num_relays);

    struct Excess {
        double snr = 0.0;
        double power = 0.0;
        double psp_dev = 0.0;
        double egc = 0.0;
    };
    const auto per_channel = parallel_map<Excess>(
        static_cast<std::size_t>(channels), resolve_workers(cfg.workers), [&](std::size_t c) {
            RandomStream rng = stream(cfg, stream_label::oracle, static_cast<int>(c));
            const ChannelRealization chan = sample_static_rayleigh(rng, path_loss);
            const NetworkParams sum_net =
                nominal_network(snr_db, cfg.num_relays, ConstraintKind::sum_power);
            const NetworkParams per_net =
                nominal_network(snr_db, cfg.num_relays, ConstraintKind::per_relay);
            const CompoundParams cp = compound_params(sum_net, chan, ideal_relay_gains(sum_net, chan));
            const CompoundParams cp_per =
                compound_params(per_net, chan, ideal_relay_gains(per_net, chan));

            const double snr_opt = objective_snr(ssp_weights(cp).weights(), cp, sum_net.noise_power);
            const double pow_opt = objective_power(psp_weights(cp).weights(), cp);
            double hbar_energy = 0.0;
            for (const cplx& x : cp.hbar) {
                hbar_energy += std::norm(x);
            }
            const double egc_opt = objective_power(egc_weights(cp_per).weights.weights(), cp_per);

            Excess e;
            e.psp_dev = std::abs(pow_opt - hbar_energy) / hbar_energy;
            CVec w(relays);
            CVec u(relays);
            double best_snr = 0.0;
            double best_pow = 0.0;
            double best_egc = 0.0;
            for (int v = 0; v < random_vectors; ++v) {
                double energy = 0.0;
                for (std::size_t i = 0; i < relays; ++i) {
                    w[i] = rng.complex_gaussian(1.0);
                    energy += std::norm(w[i]);
                }
                const double n = std::sqrt(energy);
                for (std::size_t i = 0; i < relays; ++i) {
                    w[i] /= n;
                    u[i] = std::polar(1.0, rng.uniform(-kPi, kPi));
                }
                best_snr = std::max(best_snr, objective_snr(w, cp, sum_net.noise_power));
                best_pow = std::max(best_pow, objective_power(w, cp));
                best_egc = std::max(best_egc, objective_power(u, cp_per));
            }
            e.snr = (best_snr - snr_opt) / snr_opt;
            e.power = (best_pow - pow_opt) / pow_opt;
            e.egc = (best_egc - egc_opt) / egc_opt;
            return e;
        });

    OracleCheckResult res;
    res.channels = channels;
    res.random_vectors = random_vectors;
    res.worst_snr_excess = -1.0;
    res.worst_power_excess = -1.0;
    res.worst_egc_excess = -1.0;
    for (const Excess& e : per_channel) {
        res.worst_snr_excess = std::max(res.worst_snr_excess, e.snr);
        res.worst_power_excess = std::max(res.worst_power_excess, e.power);
        res.worst_psp_deviation = std::max(res.worst_psp_deviation, e.psp_dev);
        res.worst_egc_excess = std::max(res.worst_egc_excess, e.egc);
    }
    res.passed = res.worst_snr_excess <= tolerance && res.worst_power_excess <= tolerance &&
                 res.worst_psp_deviation <= tolerance && res.worst_egc_excess <= tolerance;
    return res;
}

}  // namespace pbbf
