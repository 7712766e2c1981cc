/*
 * topology.hpp
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
#include <cstdint>
#include <utility>
#include <vector>

#include "qroute/rng.hpp"

namespace qroute {

using DeviceId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class TopologyKind { Lattice, RandomGeometric, Custom };

/// Undirected potential link, normalized so that a < b.
struct Edge {
    DeviceId a;
    DeviceId b;
};

/// Static potential-link graph: the devices and the set of links that can
/// ever exist. Immutable after construction; safe to share across threads.
class Topology {
public:
    /// Square grid with side*side devices in row-major order and links
    /// between horizontally/vertically adjacent cells. side >= 2.
    static Topology lattice(int side);

    /// n devices placed i.i.d. uniformly in the unit square; a link joins
    /// every pair at Euclidean distance <= radius (ties included).
    /// n >= 2, 0 < radius <= sqrt(2).
    static Topology random_geometric(int n, double radius, Rng& rng);

    /// Arbitrary graph from an explicit edge list (no self-loops,
    /// duplicates collapse). Positions are undefined.
    static Topology from_edges(int n, const std::vector<Edge>& edges);

    TopologyKind kind() const { return kind_; }
    std::size_t device_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    /// Device position; only meaningful for random-geometric topologies.
    const std::array<double, 2>& position(DeviceId v) const { return positions_[v]; }

    /// Potential neighbors of v, each with the index of the joining edge.
    /// Sorted by neighbor id.
    const std::vector<std::pair<DeviceId, EdgeId>>& incident(DeviceId v) const {
        return incident_[v];
    }

private:
    Topology(TopologyKind kind, std::size_t n) : kind_(kind), n_(n) {}
    void add_edge(DeviceId u, DeviceId v);
    void finalize();

    TopologyKind kind_;
    std::size_t n_;
    std::vector<std::array<double, 2>> positions_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<DeviceId, EdgeId>>> incident_;
};

/// Steady-state up probability of the two-state link chain where an up link
/// stays up with probability alpha and a down link stays down with
/// probability beta. Rejects the degenerate alpha = beta = 1 chain.
double steady_state_prob(double alpha, double beta);

/// Per-link two-state Markov process over a topology's potential links.
/// Mutated only by the owning simulation loop.
class LinkState {
public:
    /// Draws each link up independently with the steady-state probability.
    LinkState(const Topology& topo, double alpha, double beta, Rng& rng);

    /// One Markov transition per link, independent across links.
    void step(Rng& rng);

    bool up(EdgeId e) const { return up_[e] != 0; }
    std::size_t up_count() const;

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double pi() const { return pi_; }

private:
    double alpha_;
    double beta_;
    double pi_;
    std::vector<std::uint8_t> up_;
};

/// Devices with a currently-up link to v, ascending by id.
std::vector<DeviceId> up_neighbors(const Topology& topo, const LinkState& links, DeviceId v);

/// Number of currently-up links at v.
int up_degree(const Topology& topo, const LinkState& links, DeviceId v);

/// True when every device is reachable from every other over up links.
/// A device with no up links makes the graph disconnected (N >= 2).
bool connected(const Topology& topo, const LinkState& links);

/// Second-smallest eigenvalue of the symmetric normalized Laplacian of the
/// currently-up subgraph. Rows/columns of degree-0 devices are zeroed, so a
/// disconnected graph (including any isolated device) yields exactly 0.
/// Range [0, 2].
double algebraic_connectivity(const Topology& topo, const LinkState& links);

}  // namespace qroute
