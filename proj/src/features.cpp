/*
 * features.cpp
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

#include "qroute/features.hpp"

#include <algorithm>
#include <stdexcept>

namespace qroute {

std::array<double, kActionFeatureCount> device_features_raw(const FeatureContext& ctx,
                                                            DeviceId u, const Packet& p) {
    const DeviceQueue& q = (*ctx.queues)[u];
    return {static_cast<double>(ctx.dist->distance(u, p.dst)),
            static_cast<double>(q.size()),
            static_cast<double>(q.count_to(p.dst)),
            static_cast<double>(up_degree(*ctx.topo, *ctx.links, u))};
}

std::array<double, kStateFeatureCount> state_features_raw(const FeatureContext& ctx,
                                                          const Packet& p, DeviceId v) {
    std::array<double, kStateFeatureCount> out{};
    out[0] = static_cast<double>(p.ttl);

    const DeviceQueue& q = (*ctx.queues)[v];
    std::size_t pos = 0;
    while (pos < q.size() && q.at(pos).id != p.id) ++pos;
    if (pos == q.size()) throw std::logic_error("state_features: packet not queued at device");
    out[1] = static_cast<double>(pos);

    const auto self = device_features_raw(ctx, v, p);
    std::copy(self.begin(), self.end(), out.begin() + 2);

    const auto nbrs = up_neighbors(*ctx.topo, *ctx.links, v);
    if (nbrs.empty()) {
        std::fill(out.begin() + 6, out.end(), kNoNeighborRaw);
        return out;
    }
    std::array<double, kActionFeatureCount> mins, maxs, sums;
    mins.fill(0.0);
    maxs.fill(0.0);
    sums.fill(0.0);
    bool first = true;
    for (DeviceId u : nbrs) {
        const auto f = device_features_raw(ctx, u, p);
        for (int i = 0; i < kActionFeatureCount; ++i) {
            if (first || f[i] < mins[i]) mins[i] = f[i];
            if (first || f[i] > maxs[i]) maxs[i] = f[i];
            sums[i] += f[i];
        }
        first = false;
    }
    for (int i = 0; i < kActionFeatureCount; ++i) {
        out[6 + 3 * i] = mins[i];
        out[6 + 3 * i + 1] = sums[i] / static_cast<double>(nbrs.size());
        out[6 + 3 * i + 2] = maxs[i];
    }
    return out;
}

double normalize_feature(double raw, double cap) {
    if (raw < 0.0) return 0.0;  // empty-neighbor sentinel
    return (std::min(raw, cap) + 1.0) / (cap + 1.0);
}

std::array<double, kStateFeatureCount> normalize_state(
    const FeatureContext& ctx, const std::array<double, kStateFeatureCount>& raw) {
    const double n = ctx.cap_graph();
    const double b = ctx.cap_queue;
    // Caps per slot: ttl, queue position, then the four local-feature caps
    // repeated for the self features and each aggregate triple.
    const std::array<double, kActionFeatureCount> device_caps{n, b, b, n};
    std::array<double, kStateFeatureCount> out{};
    out[0] = normalize_feature(raw[0], ctx.cap_ttl);
    out[1] = normalize_feature(raw[1], b);
    for (int i = 0; i < kActionFeatureCount; ++i)
        out[2 + i] = normalize_feature(raw[2 + i], device_caps[i]);
    for (int i = 0; i < kActionFeatureCount; ++i)
        for (int j = 0; j < 3; ++j)
            out[6 + 3 * i + j] = normalize_feature(raw[6 + 3 * i + j], device_caps[i]);
    return out;
}

std::array<double, kActionFeatureCount> action_features(const FeatureContext& ctx, DeviceId u,
                                                        const Packet& p) {
    const auto raw = device_features_raw(ctx, u, p);
    const double n = ctx.cap_graph();
    const double b = ctx.cap_queue;
    const std::array<double, kActionFeatureCount> caps{n, b, b, n};
    std::array<double, kActionFeatureCount> out{};
    for (int i = 0; i < kActionFeatureCount; ++i) out[i] = normalize_feature(raw[i], caps[i]);
    return out;
}

std::array<double, kInputFeatureCount> decision_input(
    const std::array<double, kStateFeatureCount>& state,
    const std::array<double, kActionFeatureCount>& action) {
    std::array<double, kInputFeatureCount> out{};
    std::copy(state.begin(), state.end(), out.begin());
    std::copy(action.begin(), action.end(), out.begin() + kStateFeatureCount);
    return out;
}

}  // namespace qroute
