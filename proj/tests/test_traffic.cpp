/*
 * test_traffic.cpp
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

#include <cmath>

#include "qroute/traffic.hpp"

using namespace qroute;

TEST_SUITE_BEGIN("traffic");

TEST_CASE("initial flow counts round the mean load") {
    Rng rng(1);
    TrafficModel a({0.00512, 5000.0, 0.2}, 64);  // 0.002 * 64 / 25
    a.init_flows(rng);
    CHECK(a.flows().size() == 26);

    TrafficModel b({0.002, 5000.0, 0.05}, 25);
    b.init_flows(rng);
    CHECK(b.flows().size() == 10);

    TrafficModel c({0.0, 5000.0, 0.05}, 25);
    c.init_flows(rng);
    CHECK(c.flows().empty());
}

TEST_CASE("flows carry valid endpoints and horizons") {
    Rng rng(2);
    TrafficModel m({0.01, 300.0, 0.1}, 9);
    m.init_flows(rng);
    for (std::int64_t t = 1; t <= 2000; ++t) m.step_flows(t, rng);
    for (const Flow& f : m.flows()) {
        CHECK(f.src != f.dst);
        CHECK(f.src < 9);
        CHECK(f.dst < 9);
        CHECK(f.end_time >= f.start_time);
    }
}

TEST_CASE("expired flows leave; zero rate empties the system") {
    Rng rng(3);
    TrafficModel m({0.0, 10.0, 0.1}, 4);
    m.init_flows(rng);
    CHECK(m.flows().empty());
    // nothing arrives with lambda_f = 0
    for (std::int64_t t = 1; t < 100; ++t) m.step_flows(t, rng);
    CHECK(m.flows().empty());
    CHECK_THROWS_AS(m.step_flows(0, rng), std::invalid_argument);
}

TEST_CASE("flow arrivals match the configured rate") {
    Rng rng(4);
    const double lambda_f = 0.05;
    TrafficModel m({lambda_f, 1.0, 0.0}, 4);  // short flows so the list stays small
    std::uint64_t before = 0;
    std::size_t arrivals = 0;
    const int steps = 100000;
    for (std::int64_t t = 1; t <= steps; ++t) {
        before = m.flows().size();
        m.step_flows(t, rng);
        // flows added this step all have start_time == t
        for (auto it = m.flows().rbegin(); it != m.flows().rend() && it->start_time == t; ++it)
            ++arrivals;
    }
    (void)before;
    const double mean = static_cast<double>(arrivals) / steps;
    CHECK(std::abs(mean - lambda_f) < 3.0 * std::sqrt(lambda_f / steps));
}

TEST_CASE("sampled durations match the configured mean") {
    Rng rng(5);
    const double lambda_d = 200.0;
    TrafficModel m({1.0, lambda_d, 0.0}, 4);
    double total = 0.0;
    std::size_t count = 0;
    for (std::int64_t t = 1; count < 10000; ++t) {
        m.step_flows(t, rng);
        for (auto it = m.flows().rbegin(); it != m.flows().rend() && it->start_time == t; ++it) {
            total += static_cast<double>(it->end_time - it->start_time);
            ++count;
        }
    }
    // ceil() adds at most 1 to each sample
    CHECK(std::abs(total / static_cast<double>(count) - lambda_d) / lambda_d < 0.05);
}

TEST_CASE("packet generation") {
    Rng rng(6);
    TrafficModel none({0.0, 0.0, 0.2}, 4);
    CHECK(none.generate_packets(0, 200, rng).empty());

    TrafficModel one({0.0002, 5000.0, 0.2}, 9);
    one.init_flows(rng);
    REQUIRE(one.flows().size() == 1);
    std::uint64_t produced = 0;
    const int steps = 100000;
    for (int t = 0; t < steps; ++t) {
        const auto pkts = one.generate_packets(t, 200, rng);
        produced += pkts.size();
        for (const Packet& p : pkts) {
            CHECK(p.ttl == 200);
            CHECK(p.src != p.dst);
            CHECK(p.created_at == t);
            CHECK(p.eligible_at == t + 1);
        }
    }
    const double expect = 0.2 * steps;
    CHECK(std::abs(static_cast<double>(produced) - expect) < 3.0 * std::sqrt(expect));
}

TEST_CASE("packet ids are globally unique and monotone") {
    Rng rng(7);
    TrafficModel m({0.01, 500.0, 0.3}, 16);
    m.init_flows(rng);
    std::uint64_t last = 0;
    bool first = true;
    for (std::int64_t t = 0; t < 2000; ++t) {
        if (t >= 1) m.step_flows(t, rng);
        for (const Packet& p : m.generate_packets(t, 200, rng)) {
            if (!first) CHECK(p.id > last);
            last = p.id;
            first = false;
        }
    }
    CHECK(m.packets_created() > 0);
}

TEST_CASE("traces are reproducible bit for bit") {
    auto trace = [](std::uint64_t seed) {
        Rng rng(seed);
        TrafficModel m({0.02, 100.0, 0.25}, 9);
        m.init_flows(rng);
        std::vector<std::uint64_t> ids;
        std::vector<DeviceId> endpoints;
        for (std::int64_t t = 0; t < 500; ++t) {
            if (t >= 1) m.step_flows(t, rng);
            for (const Packet& p : m.generate_packets(t, 200, rng)) {
                ids.push_back(p.id);
                endpoints.push_back(p.src);
                endpoints.push_back(p.dst);
            }
        }
        return std::pair{ids, endpoints};
    };
    CHECK(trace(42) == trace(42));
    CHECK(trace(42) != trace(43));
}

TEST_SUITE_END();
