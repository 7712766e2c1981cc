/*
 * features.hpp
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

#include <array>

#include "qroute/distance.hpp"
#include "qroute/queueing.hpp"
#include "qroute/topology.hpp"

namespace qroute {

// Relational descriptors of a routing decision; independent of device and
// packet identity so one value network serves every device in any network.
//
// State vector layout (18 slots):
//   [0]      packet ttl
//   [1]      packet position in the local queue (0 = head)
//   [2..5]   local device: distance-to-destination, queue length,
//            queue length toward the destination, degree
//   [6..17]  neighbor aggregates, a (min, mean, max) triple per local
//            device feature, in the same feature order
// Action vector (4 slots): the candidate device's local features.
//
// Raw values are mapped through (raw + 1) / (cap + 1) so every real feature
// is positive; the caps are N for distances and degrees, B for queue
// quantities, L for ttl. A device with no up neighbors gets 0 in all twelve
// aggregate slots, a value no real feature can take.

inline constexpr int kStateFeatureCount = 18;
inline constexpr int kActionFeatureCount = 4;
inline constexpr int kInputFeatureCount = kStateFeatureCount + kActionFeatureCount;

/// Raw slot value marking "no neighbors"; normalizes to the 0 sentinel.
inline constexpr double kNoNeighborRaw = -1.0;

struct FeatureContext {
    const Topology* topo;
    const LinkState* links;
    const DistanceTable* dist;
    const std::vector<DeviceQueue>* queues;
    int cap_queue;  // B
    int cap_ttl;    // L
    int cap_graph() const { return static_cast<int>(topo->device_count()); }  // N
};

/// [distance(u, dst), qlen(u), qlen(u, dst), degree(u)], unnormalized.
std::array<double, kActionFeatureCount> device_features_raw(const FeatureContext& ctx,
                                                            DeviceId u, const Packet& p);

/// Full raw state vector for packet p residing at device v.
std::array<double, kStateFeatureCount> state_features_raw(const FeatureContext& ctx,
                                                          const Packet& p, DeviceId v);

/// (raw + 1) / (cap + 1), with raw clamped to [0, cap]; negative raw is the
/// empty-neighbor marker and maps to 0.
double normalize_feature(double raw, double cap);

std::array<double, kStateFeatureCount> normalize_state(
    const FeatureContext& ctx, const std::array<double, kStateFeatureCount>& raw);

/// Normalized action features of candidate u (u may equal the packet's
/// current device for the stay action).
std::array<double, kActionFeatureCount> action_features(const FeatureContext& ctx, DeviceId u,
                                                        const Packet& p);

/// Concatenated network input: normalized state then normalized action.
std::array<double, kInputFeatureCount> decision_input(
    const std::array<double, kStateFeatureCount>& state,
    const std::array<double, kActionFeatureCount>& action);

}  // namespace qroute
