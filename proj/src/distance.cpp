/*
 * distance.cpp
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

#include "qroute/distance.hpp"

namespace qroute {

DistanceTable::DistanceTable(const Topology& topo) : n_(topo.device_count()) {
    dist_.assign(n_ * n_, static_cast<int>(n_));
    for (std::size_t v = 0; v < n_; ++v) dist_[v * n_ + v] = 0;
    seen_.assign(topo.edge_count(), 0);
}

void DistanceTable::observe(const Topology& topo, const LinkState& links) {
    bool fresh = false;
    for (EdgeId e = 0; e < topo.edge_count(); ++e) {
        if (links.up(e) && !seen_[e]) {
            seen_[e] = 1;
            seen_edges_.push_back(topo.edges()[e]);
            fresh = true;
        }
    }
    if (fresh) relax();
}

void DistanceTable::relax() {
    // Bellman-Ford sweeps over the seen-link list until no estimate moves.
    // Warm-started from the previous fixpoint, so adding a link settles in
    // a handful of sweeps.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Edge& e : seen_edges_) {
            int* row_a = &dist_[static_cast<std::size_t>(e.a) * n_];
            int* row_b = &dist_[static_cast<std::size_t>(e.b) * n_];
            for (std::size_t d = 0; d < n_; ++d) {
                if (row_b[d] + 1 < row_a[d]) {
                    row_a[d] = row_b[d] + 1;
                    changed = true;
                }
                if (row_a[d] + 1 < row_b[d]) {
                    row_b[d] = row_a[d] + 1;
                    changed = true;
                }
            }
        }
    }
}

}  // namespace qroute
