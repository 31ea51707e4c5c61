#include "pbbf/link.hpp"

#include <cmath>
#include <stdexcept>

namespace pbbf {

namespace {

std::variant<TrState, PmState> initial_state(const LinkConfig& c)
{
    const auto r = static_cast<std::size_t>(c.network.num_relays);
    if (c.scheme == Scheme::take_reject) {
        return tr_init(r, c.constraint, c.forgetting_factor);
    }
    return pm_init(r, c.constraint);
}

void validate(const LinkConfig& c)
{
    c.network.validate();
    c.frame.validate(c.scheme);
    if (!(c.beta >= 0.0)) {
        throw std::invalid_argument("link: beta must be nonnegative");
    }
}

}  // namespace

void FrameConfig::validate(Scheme scheme) const
{
    if (num_pilots < 1 || num_data < 0) {
        throw std::invalid_argument("frame: need at least one pilot and nonnegative data length");
    }
    if (scheme == Scheme::plus_minus && (num_pilots < 2 || num_pilots % 2 != 0)) {
        throw std::invalid_argument("frame: P/M needs an even pilot count >= 2");
    }
}

std::vector<cplx> bpsk_modulate(std::span<const std::uint8_t> bits)
{
    std::vector<cplx> out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        out[i] = bits[i] ? -1.0 : 1.0;
    }
    return out;
}

std::uint8_t bpsk_detect(cplx y, cplx h_hat)
{
    const double metric = h_hat == cplx{0.0, 0.0} ? y.real() : (std::conj(h_hat) * y).real();
    return metric >= 0.0 ? 0 : 1;
}

std::vector<cplx> pilot_sequence(int length)
{
    return std::vector<cplx>(static_cast<std::size_t>(length), cplx{1.0, 0.0});
}

Link::Link(LinkConfig config, ChannelRealization static_channel, RandomStream noise)
    : config_(std::move(config)),
      pset_(build_perturbation_set(static_cast<std::size_t>(config_.network.num_relays),
                                   config_.scheme)),
      state_(initial_state(config_)),
      noise_(std::move(noise)),
      pilots_(pilot_sequence(config_.frame.num_pilots)),
      static_channel_(std::move(static_channel))
{
    validate(config_);
    if (config_.scenario != Scenario::idealized) {
        throw std::invalid_argument("link: static channel requires the idealized scenario");
    }
    if (static_channel_.size() != static_cast<std::size_t>(config_.network.num_relays)) {
        throw std::invalid_argument("link: channel size does not match relay count");
    }
    ideal_gains_ = ideal_relay_gains(config_.network, static_channel_);
    compound_ = compound_params(config_.network, static_channel_, ideal_gains_);
}

Link::Link(LinkConfig config, JakesChannel channel, RandomStream noise)
    : config_(std::move(config)),
      pset_(build_perturbation_set(static_cast<std::size_t>(config_.network.num_relays),
                                   config_.scheme)),
      state_(initial_state(config_)),
      noise_(std::move(noise)),
      pilots_(pilot_sequence(config_.frame.num_pilots)),
      jakes_(std::move(channel))
{
    validate(config_);
    if (config_.scenario != Scenario::realistic) {
        throw std::invalid_argument("link: time-varying channel requires the realistic scenario");
    }
    if (jakes_->size() != static_cast<std::size_t>(config_.network.num_relays)) {
        throw std::invalid_argument("link: channel size does not match relay count");
    }
}

const BeamVector& Link::data_weights() const
{
    return std::visit([](const auto& s) -> const BeamVector& { return s.w_data; }, state_);
}

std::int64_t Link::frame_index() const
{
    return std::visit([](const auto& s) { return s.frame_index; }, state_);
}

const CompoundParams& Link::compound() const
{
    if (config_.scenario != Scenario::idealized) {
        throw std::logic_error("link: exact compound channel exists only in the idealized scenario");
    }
    return compound_;
}

double Link::exact_objective(std::span<const cplx> w) const
{
    const CompoundParams& cp = compound();
    return config_.objective == Objective::power
               ? objective_power(w, cp)
               : objective_snr(w, cp, config_.network.noise_power);
}

double Link::objective_value(const PilotEstimate& e) const
{
    return config_.objective == Objective::power ? e.power : e.snr;
}

int Link::adapt_exact(FrameResult* out)
{
    int bit = 0;
    if (auto* tr = std::get_if<TrState>(&state_)) {
        const BeamVector w_tilde = tr_perturb(*tr, config_.beta, pset_);
        const double j1 = exact_objective(w_tilde.weights());
        TrStep step = tr_step(*tr, w_tilde, j1);
        bit = step.feedback_bit;
        *tr = std::move(step.state);
        if (out) {
            out->objective_training = {j1};
        }
    } else {
        auto& pm = std::get<PmState>(state_);
        const PmPair pair = pm_perturb(pm, config_.beta, pset_);
        const double jp = exact_objective(pair.plus.weights());
        const double jm = exact_objective(pair.minus.weights());
        PmStep step = pm_step(pm, pair, jp, jm);
        bit = step.feedback_bit;
        pm = std::move(step.state);
        if (out) {
            out->objective_training = {jp, jm};
        }
    }
    return bit;
}

int Link::adapt_frame()
{
    if (config_.scenario != Scenario::idealized) {
        throw std::logic_error("link: adaptation without transmission needs exact objectives");
    }
    return adapt_exact(nullptr);
}

FrameResult Link::run_frame(std::span<const std::uint8_t> bits)
{
    if (bits.size() != static_cast<std::size_t>(config_.frame.num_data)) {
        throw std::invalid_argument("link: frame needs exactly num_data bits");
    }
    return config_.scenario == Scenario::idealized ? run_idealized(bits) : run_realistic(bits);
}

FrameResult Link::run_idealized(std::span<const std::uint8_t> bits)
{
    FrameResult out;
    out.frame_index = frame_index();
    const BeamVector w = data_weights();
    out.objective_data = exact_objective(w.weights());
    out.h_hat_used = effective_channel(w.weights(), compound_);

    const std::vector<cplx> symbols = bpsk_modulate(bits);
    out.detected_bits.resize(symbols.size());
    for (std::size_t t = 0; t < symbols.size(); ++t) {
        const cplx y = simulate_symbol(config_.network, static_channel_, ideal_gains_,
                                       w.weights(), symbols[t], noise_);
        out.detected_bits[t] = bpsk_detect(y, out.h_hat_used);
        out.bit_errors += out.detected_bits[t] != bits[t] ? 1 : 0;
    }

    out.feedback_bit = adapt_exact(&out);
    return out;
}

FrameResult Link::run_realistic(std::span<const std::uint8_t> bits)
{
    const FrameConfig& fc = config_.frame;
    const auto n_sym = static_cast<std::size_t>(fc.num_symbols());
    const auto n_pilot = static_cast<std::size_t>(fc.num_pilots);
    const auto relays = static_cast<std::size_t>(config_.network.num_relays);
    const NetworkParams& net = config_.network;
    const double sqrt_ps = std::sqrt(net.source_power);

    FrameResult out;
    out.frame_index = frame_index();
    const BeamVector w_data = data_weights();

    // Transmitted symbols: pilots then data.
    std::vector<cplx> s(pilots_);
    const std::vector<cplx> data = bpsk_modulate(bits);
    s.insert(s.end(), data.begin(), data.end());

    // Weights per training segment.
    std::vector<BeamVector> training;
    PmPair pm_pair{w_data, w_data};
    if (const auto* tr = std::get_if<TrState>(&state_)) {
        training.push_back(tr_perturb(*tr, config_.beta, pset_));
    } else {
        pm_pair = pm_perturb(std::get<PmState>(state_), config_.beta, pset_);
        training = {pm_pair.plus, pm_pair.minus};
    }
    auto weights_at = [&](std::size_t t) -> const BeamVector& {
        if (t >= n_pilot) {
            return w_data;
        }
        if (training.size() == 1) {
            return training[0];
        }
        return t < static_cast<std::size_t>(fc.half()) ? training[0] : training[1];
    };

    // First hop over the whole frame; relays measure their receive power.
    const std::int64_t base = out.frame_index * static_cast<std::int64_t>(n_sym);
    std::vector<ChannelRealization> chan(n_sym);
    std::vector<CVec> x(n_sym, CVec(relays));
    std::vector<double> rx_power(relays, 0.0);
    for (std::size_t t = 0; t < n_sym; ++t) {
        chan[t] = jakes_->sample(base + static_cast<std::int64_t>(t));
        for (std::size_t i = 0; i < relays; ++i) {
            x[t][i] = sqrt_ps * chan[t].h[i] * s[t] + noise_.complex_gaussian(net.noise_power);
            rx_power[i] += std::norm(x[t][i]);
        }
    }
    std::vector<double> alphas(relays);
    for (std::size_t i = 0; i < relays; ++i) {
        alphas[i] = relay_gain(net, chan[0].h[i], GainMode::measured,
                               rx_power[i] / static_cast<double>(n_sym));
    }

    // Second hop.
    std::vector<cplx> y(n_sym);
    for (std::size_t t = 0; t < n_sym; ++t) {
        const BeamVector& w = weights_at(t);
        cplx acc = noise_.complex_gaussian(net.noise_power);
        for (std::size_t i = 0; i < relays; ++i) {
            acc += chan[t].g[i] * std::conj(w[i]) * alphas[i] * x[t][i];
        }
        y[t] = acc;
    }

    const std::size_t first_data = n_pilot;
    if (first_data < n_sym) {
        const CompoundParams cp = compound_params(net, chan[first_data], alphas);
        out.objective_data = config_.objective == Objective::power
                                 ? objective_power(w_data.weights(), cp)
                                 : objective_snr(w_data.weights(), cp, net.noise_power);
    }

    // Destination: estimates over the training interval.
    const PilotBlock block(pilots_, std::span<const cplx>(y).first(n_pilot));
    cplx h_for_data = carried_estimate_;
    if (auto* tr = std::get_if<TrState>(&state_)) {
        const PilotEstimate e = estimate_all(block);
        const double j1 = objective_value(e);
        out.objective_training = {j1};
        TrStep step = tr_step(*tr, training[0], j1);
        out.feedback_bit = step.feedback_bit;
        *tr = std::move(step.state);
        if (out.feedback_bit == 1) {
            carried_estimate_ = e.h_hat;
        }
    } else {
        auto& pm = std::get<PmState>(state_);
        const auto half = static_cast<std::size_t>(fc.half());
        const PilotEstimate ep = estimate_all(block.subblock(0, half));
        const PilotEstimate em = estimate_all(block.subblock(half, half));
        const double jp = objective_value(ep);
        const double jm = objective_value(em);
        out.objective_training = {jp, jm};
        PmStep step = pm_step(pm, pm_pair, jp, jm);
        out.feedback_bit = step.feedback_bit;
        pm = std::move(step.state);
        carried_estimate_ = out.feedback_bit == 1 ? em.h_hat : ep.h_hat;
        if (config_.pm_estimation == PmEstimation::whole) {
            h_for_data = estimate_compound_channel(block);
        }
    }

    out.h_hat_used = h_for_data;
    out.detected_bits.resize(data.size());
    for (std::size_t t = 0; t < data.size(); ++t) {
        out.detected_bits[t] = bpsk_detect(y[first_data + t], h_for_data);
        out.bit_errors += out.detected_bits[t] != bits[t] ? 1 : 0;
    }
    return out;
}

}  // namespace pbbf
