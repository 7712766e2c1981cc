/*
 * test_features.cpp
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

#include <doctest.h>

#include <numeric>

#include "qroute/features.hpp"

using namespace qroute;

namespace {

struct World {
    Topology topo;
    Rng rng;
    LinkState links;
    DistanceTable dist;
    std::vector<DeviceQueue> queues;
    int b = 50;
    int l = 200;

    World(Topology t, double alpha, double beta, std::uint64_t seed, int capacity = 50)
        : topo(std::move(t)), rng(seed), links(topo, alpha, beta, rng), dist(topo), b(capacity) {
        queues.assign(topo.device_count(),
                      DeviceQueue(static_cast<std::size_t>(b), topo.device_count()));
        dist.observe(topo, links);
    }

    FeatureContext ctx() const { return {&topo, &links, &dist, &queues, b, l}; }
};

Packet packet_at(World& w, std::uint64_t id, DeviceId at, DeviceId dst, int ttl = 200) {
    Packet p{id, at, dst, ttl, 0, 0, 1};
    w.queues[at].push(p);
    return p;
}

}  // namespace

TEST_SUITE_BEGIN("features");

TEST_CASE("local device features") {
    World w(Topology::lattice(3), 1.0, 0.0, 1);

    SUBCASE("at the destination with an empty queue") {
        const Packet probe{1, 0, 4, 200, 0, 0, 1};  // bound for 4, not queued there
        const auto f = device_features_raw(w.ctx(), 4, probe);
        CHECK(f[0] == 0.0);  // distance
        CHECK(f[1] == 0.0);
        CHECK(f[2] == 0.0);
        CHECK(f[3] == 4.0);  // center degree
    }
    SUBCASE("full queue, every packet for the same destination") {
        World v(Topology::lattice(3), 1.0, 0.0, 2, 50);
        Packet probe{999, 0, 8, 200, 0, 0, 1};
        for (int i = 0; i < 50; ++i) packet_at(v, static_cast<std::uint64_t>(i), 0, 8);
        const auto f = device_features_raw(v.ctx(), 0, probe);
        CHECK(f[1] == 50.0);
        CHECK(f[2] == 50.0);
    }
    SUBCASE("isolated device") {
        World v(Topology::lattice(3), 0.0, 1.0, 3);  // all links down
        Packet probe{1, 0, 8, 200, 0, 0, 1};
        const auto f = device_features_raw(v.ctx(), 0, probe);
        CHECK(f[0] == 9.0);  // unknown distance = N
        CHECK(f[3] == 0.0);
        const auto fd = device_features_raw(v.ctx(), 8, probe);
        CHECK(fd[0] == 0.0);  // own destination is always distance 0
    }
}

TEST_CASE("state vector layout and aggregates") {
    SUBCASE("no neighbors: aggregate slots carry the sentinel") {
        World w(Topology::lattice(3), 0.0, 1.0, 4);
        Packet p = packet_at(w, 1, 4, 0);
        const auto raw = state_features_raw(w.ctx(), p, 4);
        for (int i = 6; i < kStateFeatureCount; ++i) CHECK(raw[i] == kNoNeighborRaw);
        const auto norm = normalize_state(w.ctx(), raw);
        for (int i = 6; i < kStateFeatureCount; ++i) CHECK(norm[i] == 0.0);
        // real features are never 0
        for (int i = 0; i < 6; ++i) CHECK(norm[i] > 0.0);
    }
    SUBCASE("one neighbor: min = mean = max") {
        // path 0-1: device 0 has the single neighbor 1
        World w(Topology::from_edges(3, {{0, 1}}), 1.0, 0.0, 5);
        Packet p = packet_at(w, 1, 0, 2);
        const auto raw = state_features_raw(w.ctx(), p, 0);
        const auto nbr = device_features_raw(w.ctx(), 1, p);
        for (int i = 0; i < 4; ++i) {
            CHECK(raw[6 + 3 * i] == nbr[i]);
            CHECK(raw[6 + 3 * i + 1] == nbr[i]);
            CHECK(raw[6 + 3 * i + 2] == nbr[i]);
        }
    }
    SUBCASE("two neighbors at distances 2 and 4 aggregate to (2, 3, 4)") {
        // v = 0 with neighbors 1 and 2; 1 is 2 hops from dst 5, 2 is 4 hops.
        const auto t = Topology::from_edges(
            8, {{0, 1}, {0, 2}, {1, 3}, {3, 5}, {2, 4}, {4, 6}, {6, 7}, {7, 5}});
        World w(t, 1.0, 0.0, 6);
        REQUIRE(w.dist.distance(1, 5) == 2);
        REQUIRE(w.dist.distance(2, 5) == 4);
        Packet p = packet_at(w, 1, 0, 5);
        const auto raw = state_features_raw(w.ctx(), p, 0);
        CHECK(raw[6] == 2.0);
        CHECK(raw[7] == 3.0);
        CHECK(raw[8] == 4.0);
    }
    SUBCASE("packet slots") {
        World w(Topology::lattice(3), 1.0, 0.0, 7);
        packet_at(w, 10, 0, 8);
        Packet p2 = packet_at(w, 11, 0, 8, 137);
        const auto raw = state_features_raw(w.ctx(), p2, 0);
        CHECK(raw[0] == 137.0);
        CHECK(raw[1] == 1.0);  // second in the queue
    }
}

TEST_CASE("normalization") {
    CHECK(normalize_feature(0.0, 50.0) == doctest::Approx(1.0 / 51.0));
    CHECK(normalize_feature(50.0, 50.0) == 1.0);
    CHECK(normalize_feature(200.0, 200.0) == 1.0);
    CHECK(normalize_feature(260.0, 200.0) == 1.0);  // clamped at the cap
    CHECK(normalize_feature(kNoNeighborRaw, 50.0) == 0.0);
}

TEST_CASE("action features") {
    World w(Topology::lattice(3), 1.0, 0.0, 8);
    Packet p = packet_at(w, 1, 4, 8);

    SUBCASE("the stay candidate mirrors the device's own features") {
        const auto stay = action_features(w.ctx(), 4, p);
        const auto raw = state_features_raw(w.ctx(), p, 4);
        const auto norm = normalize_state(w.ctx(), raw);
        for (int i = 0; i < 4; ++i) CHECK(stay[i] == norm[2 + i]);
    }
    SUBCASE("a destination candidate has the minimal distance slot") {
        const auto f = action_features(w.ctx(), 8, p);
        CHECK(f[0] == doctest::Approx(1.0 / 10.0));  // (0+1)/(N+1), N=9
    }
    SUBCASE("every value lies in (0, 1]") {
        for (DeviceId u : up_neighbors(w.topo, w.links, 4)) {
            for (double v : action_features(w.ctx(), u, p)) {
                CHECK(v > 0.0);
                CHECK(v <= 1.0);
            }
        }
    }
}

TEST_CASE("aggregate triples are ordered min <= mean <= max") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Rng topo_rng(rng.next());
        World w(Topology::random_geometric(12, 0.5, topo_rng), 0.7, 0.3, rng.next());
        for (DeviceId v = 0; v < 12; ++v) {
            DeviceId dst = (v + 1) % 12;
            Packet p = packet_at(w, 100 + v, v, dst);
            const auto raw = state_features_raw(w.ctx(), p, v);
            for (int i = 0; i < 4; ++i) {
                CHECK(raw[6 + 3 * i] <= raw[6 + 3 * i + 1]);
                CHECK(raw[6 + 3 * i + 1] <= raw[6 + 3 * i + 2]);
            }
        }
    }
}

TEST_CASE("features are independent of device relabeling") {
    // Relabel every device by a permutation and rebuild the same situation;
    // all feature vectors must be unchanged.
    const auto base = Topology::from_edges(
        7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 5}, {5, 6}});
    std::vector<DeviceId> perm{3, 6, 0, 5, 2, 4, 1};

    std::vector<Edge> remapped;
    for (const Edge& e : base.edges()) remapped.push_back({perm[e.a], perm[e.b]});
    const auto relabeled = Topology::from_edges(7, remapped);

    World w1(base, 1.0, 0.0, 12);
    World w2(relabeled, 1.0, 0.0, 12);

    const DeviceId v = 1, dst = 6;
    Packet p1 = packet_at(w1, 42, v, dst, 150);
    Packet p2 = packet_at(w2, 777, perm[v], perm[dst], 150);  // packet id also relabeled

    const auto s1 = normalize_state(w1.ctx(), state_features_raw(w1.ctx(), p1, v));
    const auto s2 = normalize_state(w2.ctx(), state_features_raw(w2.ctx(), p2, perm[v]));
    for (int i = 0; i < kStateFeatureCount; ++i) CHECK(s1[i] == s2[i]);

    for (DeviceId u : up_neighbors(w1.topo, w1.links, v)) {
        const auto a1 = action_features(w1.ctx(), u, p1);
        const auto a2 = action_features(w2.ctx(), perm[u], p2);
        for (int i = 0; i < kActionFeatureCount; ++i) CHECK(a1[i] == a2[i]);
    }
}

TEST_CASE("decision input concatenates state then action") {
    std::array<double, kStateFeatureCount> s{};
    std::array<double, kActionFeatureCount> a{};
    std::iota(s.begin(), s.end(), 1.0);
    std::iota(a.begin(), a.end(), 100.0);
    const auto in = decision_input(s, a);
    REQUIRE(in.size() == 22);
    CHECK(in[0] == 1.0);
    CHECK(in[17] == 18.0);
    CHECK(in[18] == 100.0);
    CHECK(in[21] == 103.0);
}

TEST_SUITE_END();
