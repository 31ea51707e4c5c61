#include "pbbf/membership.hpp"

#include <algorithm>
#include <string>

namespace pbbf {

RelayRegistry::RelayRegistry(int max_relays, std::vector<bool> active) : active_(std::move(active))
{
    if (max_relays < 1) {
        throw std::invalid_argument("registry: Rmax must be >= 1");
    }
    if (static_cast<int>(active_.size()) != max_relays) {
        throw std::invalid_argument("registry: bitmap length must equal Rmax");
    }
    if (std::none_of(active_.begin(), active_.end(), [](bool b) { return b; })) {
        throw std::invalid_argument("registry: at least one relay must be active");
    }
}

RelayRegistry RelayRegistry::first_n(int max_relays, int count)
{
    if (count < 1 || count > max_relays) {
        throw std::invalid_argument("registry: active count out of range");
    }
    std::vector<bool> active(static_cast<std::size_t>(std::max(max_relays, 0)), false);
    std::fill_n(active.begin(), count, true);
    return RelayRegistry(max_relays, std::move(active));
}

bool RelayRegistry::is_active(int identity) const
{
    return identity >= 0 && identity < max_relays() && active_[static_cast<std::size_t>(identity)];
}

std::size_t RelayRegistry::active_count() const
{
    return static_cast<std::size_t>(std::count(active_.begin(), active_.end(), true));
}

std::vector<int> RelayRegistry::active_identities() const
{
    std::vector<int> ids;
    for (int i = 0; i < max_relays(); ++i) {
        if (active_[static_cast<std::size_t>(i)]) {
            ids.push_back(i);
        }
    }
    return ids;
}

std::size_t RelayRegistry::position_of(int identity) const
{
    if (!is_active(identity)) {
        throw ProtocolError("relay " + std::to_string(identity) + " is not active");
    }
    return static_cast<std::size_t>(
        std::count(active_.begin(), active_.begin() + identity, true));
}

MembershipUpdate apply_death(const RelayRegistry& registry, int i0)
{
    if (!registry.is_active(i0)) {
        throw ProtocolError("death of inactive relay " + std::to_string(i0));
    }
    if (registry.active_count() < 2) {
        throw ProtocolError("the last active relay cannot leave");
    }
    std::vector<bool> active = registry.bitmap();
    active[static_cast<std::size_t>(i0)] = false;
    return MembershipUpdate{RelayRegistry(registry.max_relays(), std::move(active)),
                            DeathMessage{i0}};
}

MembershipUpdate apply_birth(const RelayRegistry& registry, int i_new)
{
    if (i_new < 0 || i_new >= registry.max_relays()) {
        throw ProtocolError("birth index " + std::to_string(i_new) + " outside [0, Rmax)");
    }
    if (registry.is_active(i_new)) {
        throw ProtocolError("birth of already active relay " + std::to_string(i_new));
    }
    std::vector<bool> active = registry.bitmap();
    active[static_cast<std::size_t>(i_new)] = true;
    RelayRegistry next(registry.max_relays(), active);
    return MembershipUpdate{std::move(next), BirthMessage{std::move(active)}};
}

RelayRegistry apply_message(const RelayRegistry& registry, const MembershipMessage& message)
{
    if (const auto* death = std::get_if<DeathMessage>(&message)) {
        return apply_death(registry, death->index).registry;
    }
    const auto& birth = std::get<BirthMessage>(message);
    return RelayRegistry(registry.max_relays(), birth.bitmap);
}

int death_index_width(int max_relays)
{
    if (max_relays < 1) {
        throw std::invalid_argument("Rmax must be >= 1");
    }
    int width = 0;
    while ((1LL << width) < max_relays) {
        ++width;
    }
    return width;
}

Bits encode_message(const MembershipMessage& message, int max_relays)
{
    Bits bits;
    if (const auto* death = std::get_if<DeathMessage>(&message)) {
        if (death->index < 0 || death->index >= max_relays) {
            throw std::invalid_argument("death index does not fit Rmax");
        }
        const int width = death_index_width(max_relays);
        bits.push_back(false);
        for (int b = width - 1; b >= 0; --b) {
            bits.push_back(((death->index >> b) & 1) != 0);
        }
        return bits;
    }
    const auto& birth = std::get<BirthMessage>(message);
    if (static_cast<int>(birth.bitmap.size()) != max_relays) {
        throw std::invalid_argument("birth bitmap length must equal Rmax");
    }
    bits.push_back(true);
    bits.insert(bits.end(), birth.bitmap.begin(), birth.bitmap.end());
    return bits;
}

MembershipMessage decode_message(const Bits& bits, int max_relays)
{
    if (bits.empty()) {
        throw DecodeError("empty membership message");
    }
    if (!bits[0]) {
        const int width = death_index_width(max_relays);
        if (static_cast<int>(bits.size()) != 1 + width) {
            throw DecodeError("death message must have " + std::to_string(1 + width) + " bits");
        }
        int index = 0;
        for (int b = 1; b <= width; ++b) {
            index = (index << 1) | (bits[static_cast<std::size_t>(b)] ? 1 : 0);
        }
        if (index >= max_relays) {
            throw DecodeError("death index exceeds Rmax");
        }
        return DeathMessage{index};
    }
    if (static_cast<int>(bits.size()) != 1 + max_relays) {
        throw DecodeError("birth message must have " + std::to_string(1 + max_relays) + " bits");
    }
    BirthMessage birth{std::vector<bool>(bits.begin() + 1, bits.end())};
    if (std::none_of(birth.bitmap.begin(), birth.bitmap.end(), [](bool b) { return b; })) {
        throw DecodeError("birth bitmap has no active relay");
    }
    return birth;
}

BeamVector drop_coordinate(const BeamVector& w, std::size_t position)
{
    if (position >= w.size() || w.size() < 2) {
        throw ProtocolError("cannot drop coordinate " + std::to_string(position));
    }
    CVec raw = w.vector();
    raw.erase(raw.begin() + static_cast<std::ptrdiff_t>(position));
    const BeamVector fallback = init_weights(raw.size(), w.constraint());
    return normalize(raw, w.constraint(), fallback);
}

BeamVector insert_coordinate(const BeamVector& w, std::size_t position)
{
    if (position > w.size()) {
        throw ProtocolError("cannot insert coordinate " + std::to_string(position));
    }
    if (w.constraint() == ConstraintKind::sum_power) {
        return init_weights(w.size() + 1, ConstraintKind::sum_power);
    }
    CVec raw = w.vector();
    raw.insert(raw.begin() + static_cast<std::ptrdiff_t>(position), cplx{1.0, 0.0});
    return BeamVector(std::move(raw), ConstraintKind::per_relay);
}

TrState on_death(const TrState& state, std::size_t position)
{
    TrState next = state;
    next.w_data = drop_coordinate(state.w_data, position);
    return next;
}

PmState on_death(const PmState& state, std::size_t position)
{
    return PmState{drop_coordinate(state.w_data, position), state.frame_index};
}

TrState on_birth(const TrState& state, std::size_t position)
{
    return TrState{insert_coordinate(state.w_data, position), 0.0, 0, state.forgetting_factor};
}

PmState on_birth(const PmState& state, std::size_t position)
{
    return PmState{insert_coordinate(state.w_data, position), 0};
}

RelayAgent::RelayAgent(int identity, RelayRegistry registry, Scheme scheme,
                       ConstraintKind constraint, double beta)
    : identity_(identity),
      registry_(std::move(registry)),
      scheme_(scheme),
      constraint_(constraint),
      beta_(beta),
      pset_(build_perturbation_set(registry_.active_count(), scheme)),
      state_(scheme == Scheme::take_reject
                 ? std::variant<TrState, PmState>(tr_init(registry_.active_count(), constraint))
                 : std::variant<TrState, PmState>(pm_init(registry_.active_count(), constraint)))
{
}

const BeamVector& RelayAgent::data_weights() const
{
    return std::visit([](const auto& s) -> const BeamVector& { return s.w_data; }, state_);
}

std::int64_t RelayAgent::frame_index() const
{
    return std::visit([](const auto& s) { return s.frame_index; }, state_);
}

std::vector<BeamVector> RelayAgent::training_weights() const
{
    if (const auto* tr = std::get_if<TrState>(&state_)) {
        return {tr_perturb(*tr, beta_, pset_)};
    }
    PmPair pair = pm_perturb(std::get<PmState>(state_), beta_, pset_);
    return {std::move(pair.plus), std::move(pair.minus)};
}

cplx RelayAgent::own_data_weight() const
{
    return data_weights()[registry_.position_of(identity_)];
}

void RelayAgent::receive_feedback(int bit)
{
    if (auto* tr = std::get_if<TrState>(&state_)) {
        *tr = tr_apply_feedback(*tr, tr_perturb(*tr, beta_, pset_), bit);
        return;
    }
    auto& pm = std::get<PmState>(state_);
    pm = pm_apply_feedback(pm, pm_perturb(pm, beta_, pset_), bit);
}

void RelayAgent::receive_broadcast(const Bits& bits)
{
    const MembershipMessage message = decode_message(bits, registry_.max_relays());
    if (const auto* death = std::get_if<DeathMessage>(&message)) {
        const std::size_t position = registry_.position_of(death->index);
        registry_ = apply_message(registry_, message);
        std::visit([&](auto& s) { s = on_death(s, position); }, state_);
    } else {
        const RelayRegistry next = apply_message(registry_, message);
        // The birth bitmap differs from ours in exactly the newcomer's bit.
        int newcomer = -1;
        for (int i = 0; i < next.max_relays(); ++i) {
            if (next.is_active(i) && !registry_.is_active(i)) {
                newcomer = i;
            }
        }
        if (newcomer < 0 || next.active_count() != registry_.active_count() + 1) {
            throw ProtocolError("birth bitmap is inconsistent with local registry");
        }
        registry_ = next;
        const std::size_t position = registry_.position_of(newcomer);
        std::visit([&](auto& s) { s = on_birth(s, position); }, state_);
    }
    rebuild_perturbations();
}

void RelayAgent::rebuild_perturbations()
{
    pset_ = build_perturbation_set(registry_.active_count(), scheme_);
}

}  // namespace pbbf
