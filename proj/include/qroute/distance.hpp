/*
 * distance.hpp
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

#include <vector>

#include "qroute/topology.hpp"

namespace qroute {

/// Distance-vector hop-count estimates with a persistent-link rule: once a
/// link has been observed up it stays in the distance calculation forever
/// (devices are stationary, so the potential graph is eventually learned).
/// Unknown or unreachable destinations report N, which doubles as the
/// normalization cap of the distance feature.
class DistanceTable {
public:
    explicit DistanceTable(const Topology& topo);

    /// Folds the currently-up links into the persistent link set; when a
    /// link is seen for the first time, re-relaxes all estimates to the
    /// fixpoint (Bellman-Ford over the seen-link list).
    void observe(const Topology& topo, const LinkState& links);

    /// Estimated hop count from v to d; unknown() when no route is known.
    int distance(DeviceId v, DeviceId d) const {
        return dist_[static_cast<std::size_t>(v) * n_ + d];
    }

    int unknown() const { return static_cast<int>(n_); }
    std::size_t seen_link_count() const { return seen_edges_.size(); }

private:
    void relax();

    std::size_t n_;
    std::vector<int> dist_;            // n x n, row v = estimates at device v
    std::vector<std::uint8_t> seen_;   // per potential edge
    std::vector<Edge> seen_edges_;
};

}  // namespace qroute
