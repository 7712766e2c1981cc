/*
 * traffic.cpp
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

#include "qroute/traffic.hpp"

#include <cmath>
#include <stdexcept>

namespace qroute {

TrafficModel::TrafficModel(TrafficConfig cfg, std::size_t n_devices)
    : cfg_(cfg), n_devices_(n_devices) {
    if (n_devices < 2) throw std::invalid_argument("traffic: need at least 2 devices");
    if (cfg.lambda_f < 0.0 || cfg.lambda_d < 0.0 || cfg.lambda_p < 0.0)
        throw std::invalid_argument("traffic: rates must be nonnegative");
}

Flow TrafficModel::make_flow(std::int64_t start, Rng& rng) {
    const auto src = static_cast<DeviceId>(rng.uniform_int(n_devices_));
    auto dst = static_cast<DeviceId>(rng.uniform_int(n_devices_ - 1));
    if (dst >= src) ++dst;  // uniform over devices != src
    const auto duration = static_cast<std::int64_t>(std::ceil(rng.exponential(cfg_.lambda_d)));
    return Flow{next_flow_id_++, src, dst, start, start + duration, cfg_.lambda_p};
}

void TrafficModel::init_flows(Rng& rng) {
    const auto count = static_cast<std::size_t>(std::llround(cfg_.lambda_f * cfg_.lambda_d));
    flows_.reserve(count);
    for (std::size_t i = 0; i < count; ++i) flows_.push_back(make_flow(0, rng));
}

void TrafficModel::step_flows(std::int64_t t, Rng& rng) {
    if (t < 1) throw std::invalid_argument("step_flows: t must be >= 1");
    std::erase_if(flows_, [t](const Flow& f) { return f.end_time < t; });
    const int fresh = rng.poisson(cfg_.lambda_f);
    for (int i = 0; i < fresh; ++i) flows_.push_back(make_flow(t, rng));
}

Packet TrafficModel::make_packet(DeviceId src, DeviceId dst, int ttl, std::int64_t t) {
    if (src == dst) throw std::invalid_argument("make_packet: src must differ from dst");
    return Packet{next_packet_id_++, src, dst, ttl, t, t, t + 1};
}

std::vector<Packet> TrafficModel::generate_packets(std::int64_t t, int ttl_init, Rng& rng) {
    std::vector<Packet> out;
    for (const Flow& f : flows_) {
        const int count = rng.poisson(f.lambda_p);
        for (int i = 0; i < count; ++i)
            out.push_back(Packet{next_packet_id_++, f.src, f.dst, ttl_init, t, t, t + 1});
    }
    return out;
}

}  // namespace qroute
