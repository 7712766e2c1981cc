/*
 * traffic.hpp
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
#include <vector>

#include "qroute/rng.hpp"
#include "qroute/topology.hpp"

namespace qroute {

/// Poisson traffic parameters: mean new flows per timestep, mean flow
/// duration in timesteps, mean packets per flow per timestep.
struct TrafficConfig {
    double lambda_f = 0.0;
    double lambda_d = 0.0;
    double lambda_p = 0.0;
};

struct Flow {
    std::uint64_t id;
    DeviceId src;
    DeviceId dst;
    std::int64_t start_time;
    std::int64_t end_time;  // last timestep the flow generates packets
    double lambda_p;
};

struct Packet {
    std::uint64_t id;
    DeviceId src;
    DeviceId dst;
    int ttl;
    std::int64_t created_at;
    std::int64_t arrived_at_current;  // start of the current residence
    std::int64_t eligible_at;         // first timestep it may be forwarded
};

/// Flow and packet source. Owns the active flow list and the global id
/// counters; all randomness comes from the caller's generator in a fixed
/// draw order, so traces reproduce exactly.
class TrafficModel {
public:
    TrafficModel(TrafficConfig cfg, std::size_t n_devices);

    /// Creates the round(lambda_f * lambda_d) flows present at time 0.
    void init_flows(Rng& rng);

    /// Removes flows with end_time < t, then adds Poisson(lambda_f) new
    /// flows starting at t. t >= 1.
    void step_flows(std::int64_t t, Rng& rng);

    /// Poisson(lambda_p) packets per active flow, created at the flow's
    /// source with the flow's destination and a fresh ttl.
    std::vector<Packet> generate_packets(std::int64_t t, int ttl_init, Rng& rng);

    /// One hand-crafted packet drawing from the same id sequence.
    Packet make_packet(DeviceId src, DeviceId dst, int ttl, std::int64_t t);

    const std::vector<Flow>& flows() const { return flows_; }
    std::uint64_t packets_created() const { return next_packet_id_; }

private:
    Flow make_flow(std::int64_t start, Rng& rng);

    TrafficConfig cfg_;
    std::size_t n_devices_;
    std::vector<Flow> flows_;
    std::uint64_t next_flow_id_ = 0;
    std::uint64_t next_packet_id_ = 0;
};

}  // namespace qroute
