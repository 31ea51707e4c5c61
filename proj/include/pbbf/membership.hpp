#pragma once

#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

#include "pbbf/adaptation.hpp"

namespace pbbf {

class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Which of the Rmax relay identities are currently active.
class RelayRegistry {
public:
    RelayRegistry(int max_relays, std::vector<bool> active);

    static RelayRegistry first_n(int max_relays, int count);

    int max_relays() const { return static_cast<int>(active_.size()); }
    bool is_active(int identity) const;
    std::size_t active_count() const;
    std::vector<int> active_identities() const;
    // Index of `identity` within the active set (the coordinate it owns in w).
    std::size_t position_of(int identity) const;
    const std::vector<bool>& bitmap() const { return active_; }

    friend bool operator==(const RelayRegistry&, const RelayRegistry&) = default;

private:
    std::vector<bool> active_;
};

struct DeathMessage {
    int index = 0;
    friend bool operator==(const DeathMessage&, const DeathMessage&) = default;
};

struct BirthMessage {
    std::vector<bool> bitmap;
    friend bool operator==(const BirthMessage&, const BirthMessage&) = default;
};

using MembershipMessage = std::variant<DeathMessage, BirthMessage>;

struct MembershipUpdate {
    RelayRegistry registry;
    MembershipMessage message;
};

// Destination side: relay i0 left; broadcast its index.
MembershipUpdate apply_death(const RelayRegistry& registry, int i0);

// Destination side: relay i_new joined; broadcast the full activity bitmap.
MembershipUpdate apply_birth(const RelayRegistry& registry, int i_new);

// Receiver side: registry after a broadcast.
RelayRegistry apply_message(const RelayRegistry& registry, const MembershipMessage& message);

// Wire format, most significant bit first:
//   death: 0 | index (ceil(log2 Rmax) bits)
//   birth: 1 | bitmap (Rmax bits, relay 0 first)
using Bits = std::vector<bool>;

int death_index_width(int max_relays);
Bits encode_message(const MembershipMessage& message, int max_relays);
MembershipMessage decode_message(const Bits& bits, int max_relays);

// Weights after the relay at `position` in the active set leaves: the
// coordinate is dropped and sum-power vectors are renormalized.
BeamVector drop_coordinate(const BeamVector& w, std::size_t position);

// Weights after a relay joins at `position`. Sum power re-initializes to the
// uniform vector; per-relay keeps existing weights and inserts 1.
BeamVector insert_coordinate(const BeamVector& w, std::size_t position);

// Adaptation state transitions on membership changes. Deaths keep the
// frame counter and the stored objective; births restart the frame counter
// and clear the stored objective.
TrState on_death(const TrState& state, std::size_t position);
PmState on_death(const PmState& state, std::size_t position);
TrState on_birth(const TrState& state, std::size_t position);
PmState on_birth(const PmState& state, std::size_t position);

// A relay that knows only its identity, the broadcast feedback bits and the
// broadcast membership messages. It keeps track of the whole weight vector
// so it can normalize locally.
class RelayAgent {
public:
    RelayAgent(int identity, RelayRegistry registry, Scheme scheme, ConstraintKind constraint,
               double beta);

    int identity() const { return identity_; }
    const RelayRegistry& registry() const { return registry_; }
    bool active() const { return registry_.is_active(identity_); }
    ConstraintKind constraint() const { return constraint_; }

    const BeamVector& data_weights() const;
    std::int64_t frame_index() const;

    // Full training vectors for the current frame: one for T/R, plus then
    // minus for P/M.
    std::vector<BeamVector> training_weights() const;

    // Weight this relay applies itself.
    cplx own_data_weight() const;

    void receive_feedback(int bit);
    void receive_broadcast(const Bits& bits);

private:
    void rebuild_perturbations();

    int identity_;
    RelayRegistry registry_;
    Scheme scheme_;
    ConstraintKind constraint_;
    double beta_;
    PerturbationSet pset_;
    std::variant<TrState, PmState> state_;
};

}  // namespace pbbf
