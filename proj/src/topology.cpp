/*
 * topology.cpp
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

#include "qroute/topology.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qroute {

void Topology::add_edge(DeviceId u, DeviceId v) {
    if (u == v) throw std::logic_error("self-loop");
    if (u > v) std::swap(u, v);
    edges_.push_back(Edge{u, v});
}

void Topology::finalize() {
    incident_.assign(n_, {});
    for (EdgeId e = 0; e < edges_.size(); ++e) {
        incident_[edges_[e].a].emplace_back(edges_[e].b, e);
        incident_[edges_[e].b].emplace_back(edges_[e].a, e);
    }
    for (auto& inc : incident_) std::sort(inc.begin(), inc.end());
}

Topology Topology::lattice(int side) {
    if (side < 2) throw std::invalid_argument("lattice: side must be >= 2");
    const auto k = static_cast<std::size_t>(side);
    Topology t(TopologyKind::Lattice, k * k);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) {
            const auto v = static_cast<DeviceId>(r * k + c);
            if (c + 1 < k) t.add_edge(v, v + 1);
            if (r + 1 < k) t.add_edge(v, static_cast<DeviceId>(v + k));
        }
    }
    t.finalize();
    return t;
}

Topology Topology::random_geometric(int n, double radius, Rng& rng) {
    if (n < 2) throw std::invalid_argument("random_geometric: n must be >= 2");
    if (!(radius > 0.0) || radius > std::sqrt(2.0))
        throw std::invalid_argument("random_geometric: radius must be in (0, sqrt(2)]");
    Topology t(TopologyKind::RandomGeometric, static_cast<std::size_t>(n));
    t.positions_.resize(t.n_);
    for (auto& p : t.positions_) {
        p[0] = rng.uniform();
        p[1] = rng.uniform();
    }
    const double r2 = radius * radius;
    for (DeviceId u = 0; u < t.n_; ++u) {
        for (DeviceId v = u + 1; v < t.n_; ++v) {
            const double dx = t.positions_[u][0] - t.positions_[v][0];
            const double dy = t.positions_[u][1] - t.positions_[v][1];
            if (dx * dx + dy * dy <= r2) t.add_edge(u, v);
        }
    }
    t.finalize();
    return t;
}

Topology Topology::from_edges(int n, const std::vector<Edge>& edges) {
    if (n < 2) throw std::invalid_argument("from_edges: need at least 2 devices");
    Topology t(TopologyKind::Custom, static_cast<std::size_t>(n));
    for (const Edge& e : edges) {
        if (e.a >= t.n_ || e.b >= t.n_) throw std::invalid_argument("from_edges: device out of range");
        t.add_edge(e.a, e.b);
    }
    std::sort(t.edges_.begin(), t.edges_.end(),
              [](const Edge& x, const Edge& y) { return x.a != y.a ? x.a < y.a : x.b < y.b; });
    t.edges_.erase(std::unique(t.edges_.begin(), t.edges_.end(),
                               [](const Edge& x, const Edge& y) {
                                   return x.a == y.a && x.b == y.b;
                               }),
                   t.edges_.end());
    t.finalize();
    return t;
}

double steady_state_prob(double alpha, double beta) {
    if (alpha < 0.0 || alpha > 1.0 || beta < 0.0 || beta > 1.0)
        throw std::invalid_argument("link probabilities must lie in [0, 1]");
    if (alpha == 1.0 && beta == 1.0)
        throw std::invalid_argument("degenerate link chain: alpha = beta = 1 never mixes");
    return (1.0 - beta) / (2.0 - alpha - beta);
}

LinkState::LinkState(const Topology& topo, double alpha, double beta, Rng& rng)
    : alpha_(alpha), beta_(beta), pi_(steady_state_prob(alpha, beta)) {
    up_.resize(topo.edge_count());
    for (auto& u : up_) u = rng.bernoulli(pi_) ? 1 : 0;
}

void LinkState::step(Rng& rng) {
    for (auto& u : up_) {
        const double stay = u ? alpha_ : beta_;
        if (!rng.bernoulli(stay)) u = !u;
    }
}

std::size_t LinkState::up_count() const {
    std::size_t c = 0;
    for (auto u : up_) c += u;
    return c;
}

std::vector<DeviceId> up_neighbors(const Topology& topo, const LinkState& links, DeviceId v) {
    std::vector<DeviceId> out;
    for (const auto& [u, e] : topo.incident(v))
        if (links.up(e)) out.push_back(u);
    return out;  // incident() is sorted, so this is ascending
}

int up_degree(const Topology& topo, const LinkState& links, DeviceId v) {
    int d = 0;
    for (const auto& [u, e] : topo.incident(v))
        if (links.up(e)) ++d;
    return d;
}

bool connected(const Topology& topo, const LinkState& links) {
    const std::size_t n = topo.device_count();
    if (n < 2) return true;
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<DeviceId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const DeviceId v = stack.back();
        stack.pop_back();
        for (const auto& [u, e] : topo.incident(v)) {
            if (links.up(e) && !seen[u]) {
                seen[u] = 1;
                ++reached;
                stack.push_back(u);
            }
        }
    }
    return reached == n;
}

double algebraic_connectivity(const Topology& topo, const LinkState& links) {
    const std::size_t n = topo.device_count();
    if (n < 2) throw std::invalid_argument("algebraic_connectivity: need at least 2 devices");
    if (!connected(topo, links)) return 0.0;

    Eigen::VectorXd deg = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (EdgeId e = 0; e < topo.edge_count(); ++e) {
        if (!links.up(e)) continue;
        deg[topo.edges()[e].a] += 1.0;
        deg[topo.edges()[e].b] += 1.0;
    }
    // Connected with n >= 2 implies every degree is positive.
    Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                    static_cast<Eigen::Index>(n));
    for (EdgeId e = 0; e < topo.edge_count(); ++e) {
        if (!links.up(e)) continue;
        const auto a = topo.edges()[e].a;
        const auto b = topo.edges()[e].b;
        const double w = -1.0 / std::sqrt(deg[a] * deg[b]);
        lap(a, b) = w;
        lap(b, a) = w;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
    const double lambda2 = solver.eigenvalues()[1];
    return std::clamp(lambda2, 0.0, 2.0);
}

}  // namespace qroute
