/*
 * policy.hpp
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "qroute/distance.hpp"
#include "qroute/experience.hpp"
#include "qroute/features.hpp"
#include "qroute/mlp.hpp"
#include "qroute/queueing.hpp"
#include "qroute/topology.hpp"

namespace qroute {

/// Read-only view of the simulation state handed to policies each time a
/// device gets its transmission opportunity.
struct SimContext {
    const Topology& topo;
    const LinkState& links;
    const DistanceTable& dist;
    const std::vector<DeviceQueue>& queues;
    std::int64_t now;
    int cap_queue;  // B
    int cap_ttl;    // L

    FeatureContext features() const {
        return FeatureContext{&topo, &links, &dist, &queues, cap_queue, cap_ttl};
    }
};

/// What a device does with its one transmission opportunity this timestep.
/// None: no eligible packet to act on. Stay: an explicit decision to hold
/// (queue_index set when the decision concerns a specific packet). Forward:
/// transmit the packet at queue_index over the up link to next_hop.
struct Decision {
    enum class Kind : std::uint8_t { None, Stay, Forward };
    static constexpr std::size_t no_index = std::numeric_limits<std::size_t>::max();

    Kind kind = Kind::None;
    std::size_t queue_index = no_index;
    DeviceId next_hop = 0;

    static Decision none() { return {}; }
    static Decision stay(std::size_t qi = no_index) { return {Kind::Stay, qi, 0}; }
    static Decision forward(std::size_t qi, DeviceId u) { return {Kind::Forward, qi, u}; }
};

class RoutingPolicy {
public:
    virtual ~RoutingPolicy() = default;
    virtual Decision decide(const SimContext& ctx, DeviceId v) = 0;

    /// Reported by the engine right after a decision is applied: Transition
    /// if the packet was queued (or stayed), Delivery/Drop if its arrival
    /// ended the episode.
    virtual void on_outcome(const Packet& p, OutcomeClass outcome) { (void)p; (void)outcome; }

    /// Policies restricted to transmitting the head of the queue.
    virtual bool fifo_only() const { return true; }
    virtual const char* name() const = 0;
};

/// Head-of-queue forwarding along the estimated shortest path: among
/// currently-up neighbors with strictly smaller estimated distance to the
/// packet's destination, the lowest-id one; otherwise the packet stays.
Decision sp_next_hop(const SimContext& ctx, DeviceId v);

/// Differential-backlog selection: over destinations present in v's queue
/// and currently-up neighbors u, maximize count_v(d) - count_u(d) (ties:
/// lowest d, then lowest u). If the maximum is positive, forward the oldest
/// eligible packet bound for d* to u*; otherwise send nothing.
Decision bp_select(const SimContext& ctx, DeviceId v);

class SpPolicy final : public RoutingPolicy {
public:
    Decision decide(const SimContext& ctx, DeviceId v) override { return sp_next_hop(ctx, v); }
    const char* name() const override { return "sp"; }
};

class BpPolicy final : public RoutingPolicy {
public:
    Decision decide(const SimContext& ctx, DeviceId v) override { return bp_select(ctx, v); }
    bool fifo_only() const override { return false; }
    const char* name() const override { return "bp"; }
};

/// Epsilon-greedy pick over per-candidate values from the network: uniform
/// with probability epsilon, otherwise the argmax (ties to the lowest
/// candidate index). Returns the chosen index.
std::size_t select_action(const Mlp& net, const std::array<double, kStateFeatureCount>& state,
                          const std::vector<std::array<double, kActionFeatureCount>>& actions,
                          double epsilon, Rng& rng);

/// Value-network routing agent. In training mode (store != nullptr) every
/// decision is recorded with one row per candidate, and the engine's
/// outcome callback closes the option.
class DrlPolicy final : public RoutingPolicy {
public:
    DrlPolicy(const Mlp* net, double epsilon, std::uint64_t seed,
              ExperienceStore* store = nullptr)
        : net_(net), epsilon_(epsilon), rng_(seed), store_(store) {}

    void set_network(const Mlp* net) { net_ = net; }
    void set_epsilon(double epsilon) { epsilon_ = epsilon; }

    Decision decide(const SimContext& ctx, DeviceId v) override;
    void on_outcome(const Packet& p, OutcomeClass outcome) override;
    const char* name() const override { return "drl"; }

private:
    const Mlp* net_;
    double epsilon_;
    Rng rng_;
    ExperienceStore* store_;
    std::size_t pending_ = ExperienceStore::npos;
    std::uint64_t pending_packet_ = 0;
};

}  // namespace qroute
