/*
 * simcore.hpp
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
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qroute/distance.hpp"
#include "qroute/policy.hpp"
#include "qroute/queueing.hpp"
#include "qroute/topology.hpp"
#include "qroute/traffic.hpp"

namespace qroute {

struct SimParams {
    std::size_t queue_capacity = 50;  // B
    int ttl = 200;                    // L
    /// Abort if a queue-overflow drop ever occurs (differential-backlog
    /// runs size queues so that this cannot happen).
    bool forbid_queue_overflow = false;
};

enum class EnqueueOutcome : std::uint8_t { Delivered, DroppedQueueFull, DroppedTtl, Queued };

struct Counters {
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped_full = 0;
    std::uint64_t dropped_ttl = 0;
    std::uint64_t total_delay = 0;  // summed delivery delays, timesteps
};

/// Cumulative-by-round metrics plus end-of-round snapshots.
struct MetricsRecord {
    std::int64_t round = 0;
    double pct_delivered = 1.0;     // delivered/generated; 1.0 when nothing generated
    double delay_per_packet = 0.0;  // total delay / delivered; 0 when none delivered
    double avg_queue_len = 0.0;     // mean queue length at the round's last timestep
    double alg_connectivity = 0.0;  // of the up subgraph at the round's last timestep
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped_full = 0;
    std::uint64_t dropped_ttl = 0;
};

/// Per-step event log, mainly for tests.
struct StepEvents {
    struct Tx {
        DeviceId from;
        DeviceId to;
        std::uint64_t packet;
        EnqueueOutcome outcome;
    };
    std::vector<Tx> transmissions;
    std::vector<DeviceId> stays;  // devices that decided to hold a packet
};

/// Discrete-time engine. Each timestep: evolve links, evolve flows and
/// inject their packets at the sources, then visit every device once in a
/// fresh random order and let the policy spend its single transmission
/// opportunity. A transmitted packet has its ttl decremented and arrives
/// at the neighbor within the same timestep; anything received or created
/// at t first becomes eligible at t+1. Single-threaded per instance;
/// byte-for-byte deterministic given the seed.
class Simulation {
public:
    Simulation(Topology topo, double alpha, double beta, TrafficConfig traffic,
               SimParams params, std::uint64_t seed);

    StepEvents step(RoutingPolicy& policy);

    /// Runs total_steps timesteps, emitting one record per round_length
    /// steps. on_round, when set, runs after each record is captured
    /// (training hooks between rounds). Verifies packet conservation at
    /// every round boundary.
    std::vector<MetricsRecord> run(
        RoutingPolicy& policy, std::int64_t total_steps, std::int64_t round_length,
        const std::function<void(const MetricsRecord&)>& on_round = nullptr);

    /// Delivered on arrival at its destination, dropped on a full queue,
    /// dropped on exhausted ttl, else queued (eligible next timestep).
    EnqueueOutcome enqueue(Packet p, DeviceId v);

    /// Hand-injects one packet at src as if a flow had produced it now;
    /// counted as generated. For deterministic experiments.
    EnqueueOutcome inject(DeviceId src, DeviceId dst);

    MetricsRecord snapshot(std::int64_t round) const;
    void check_conservation() const;

    std::int64_t now() const { return clock_; }
    const Counters& counters() const { return counters_; }
    const Topology& topology() const { return topo_; }
    const LinkState& links() const { return links_; }
    const DistanceTable& distances() const { return dist_; }
    const std::vector<DeviceQueue>& queues() const { return queues_; }
    std::uint64_t packets_in_queues() const;
    SimContext context() const {
        return SimContext{topo_,   links_,
                          dist_,   queues_,
                          clock_,  static_cast<int>(params_.queue_capacity),
                          params_.ttl};
    }

private:
    Topology topo_;
    Rng rng_;  // consumed by links, then flows, then the per-step phases
    LinkState links_;
    TrafficModel traffic_;
    DistanceTable dist_;
    std::vector<DeviceQueue> queues_;
    SimParams params_;
    std::int64_t clock_ = 0;
    Counters counters_;
    std::vector<DeviceId> visit_order_;
};

/// Metrics CSV: `# key=value ...` provenance line, a header, then one row
/// per round.
void write_metrics_csv(std::ostream& os, const std::vector<MetricsRecord>& records,
                       const std::string& provenance);

/// Canonical artifact name: {scenario}_{policy}_{N}_{seed}.csv
std::string metrics_filename(const std::string& scenario, const std::string& policy, int n,
                             std::uint64_t seed);

}  // namespace qroute
