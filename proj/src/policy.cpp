/*
 * policy.cpp
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

#include "qroute/policy.hpp"

#include <algorithm>
#include <stdexcept>

namespace qroute {

Decision sp_next_hop(const SimContext& ctx, DeviceId v) {
    const DeviceQueue& q = ctx.queues[v];
    if (q.empty() || q.at(0).eligible_at > ctx.now) return Decision::none();
    const Packet& p = q.at(0);

    const int own = ctx.dist.distance(v, p.dst);
    int best = own;
    DeviceId hop = v;
    for (DeviceId u : up_neighbors(ctx.topo, ctx.links, v)) {
        const int d = ctx.dist.distance(u, p.dst);
        if (d < best) {  // strict improvement; ascending scan keeps lowest id on ties
            best = d;
            hop = u;
        }
    }
    if (hop == v) return Decision::stay(0);
    return Decision::forward(0, hop);
}

Decision bp_select(const SimContext& ctx, DeviceId v) {
    const DeviceQueue& q = ctx.queues[v];
    if (q.empty()) return Decision::stay();
    const auto nbrs = up_neighbors(ctx.topo, ctx.links, v);
    if (nbrs.empty()) return Decision::stay();

    // Destinations actually present in the queue, ascending for tie order.
    std::vector<DeviceId> dests;
    for (const Packet& p : q.items()) dests.push_back(p.dst);
    std::sort(dests.begin(), dests.end());
    dests.erase(std::unique(dests.begin(), dests.end()), dests.end());

    int best_diff = 0;
    DeviceId best_dst = 0;
    DeviceId best_hop = 0;
    for (DeviceId d : dests) {
        const int own = q.count_to(d);
        for (DeviceId u : nbrs) {
            const int diff = own - ctx.queues[u].count_to(d);
            if (diff > best_diff) {
                best_diff = diff;
                best_dst = d;
                best_hop = u;
            }
        }
    }
    if (best_diff <= 0) return Decision::stay();

    // Oldest eligible packet for the winning destination; queue order is
    // arrival order. Every packet for d* may have arrived this timestep,
    // in which case the slot is forfeited.
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q.at(i).dst == best_dst && q.at(i).eligible_at <= ctx.now)
            return Decision::forward(i, best_hop);
    return Decision::stay();
}

std::size_t select_action(const Mlp& net, const std::array<double, kStateFeatureCount>& state,
                          const std::vector<std::array<double, kActionFeatureCount>>& actions,
                          double epsilon, Rng& rng) {
    if (actions.empty()) throw std::invalid_argument("select_action: no candidates");
    if (rng.uniform() < epsilon) return static_cast<std::size_t>(rng.uniform_int(actions.size()));

    Eigen::MatrixXd in(kInputFeatureCount, static_cast<Eigen::Index>(actions.size()));
    for (std::size_t c = 0; c < actions.size(); ++c) {
        const auto row = decision_input(state, actions[c]);
        for (int k = 0; k < kInputFeatureCount; ++k)
            in(k, static_cast<Eigen::Index>(c)) = row[static_cast<std::size_t>(k)];
    }
    const Eigen::VectorXd q = net.forward_batch(in);
    std::size_t best = 0;
    for (Eigen::Index i = 1; i < q.size(); ++i)
        if (q(i) > q(best)) best = static_cast<std::size_t>(i);
    return best;
}

Decision DrlPolicy::decide(const SimContext& ctx, DeviceId v) {
    const DeviceQueue& q = ctx.queues[v];
    if (q.empty() || q.at(0).eligible_at > ctx.now) return Decision::none();
    const Packet& p = q.at(0);

    std::vector<DeviceId> candidates = up_neighbors(ctx.topo, ctx.links, v);
    candidates.push_back(v);  // the stay action is always available
    std::sort(candidates.begin(), candidates.end());

    const FeatureContext fctx = ctx.features();
    const auto state = normalize_state(fctx, state_features_raw(fctx, p, v));
    std::vector<std::array<double, kActionFeatureCount>> acts;
    acts.reserve(candidates.size());
    for (DeviceId u : candidates) acts.push_back(action_features(fctx, u, p));

    const std::size_t chosen = select_action(*net_, state, acts, epsilon_, rng_);

    if (store_) {
        DecisionRecord rec;
        rec.packet_id = p.id;
        rec.device = v;
        rec.t_arrive = p.arrived_at_current;
        rec.t_decide = ctx.now;
        rec.state = state;
        rec.candidates = candidates;
        rec.actions = std::move(acts);
        rec.chosen = static_cast<int>(chosen);
        pending_ = store_->record_decision(std::move(rec));
        pending_packet_ = p.id;
    }

    const DeviceId target = candidates[chosen];
    if (target == v) return Decision::stay(0);
    return Decision::forward(0, target);
}

void DrlPolicy::on_outcome(const Packet& p, OutcomeClass outcome) {
    if (!store_ || pending_ == ExperienceStore::npos) return;
    if (p.id != pending_packet_)
        throw std::logic_error("drl: outcome reported for an unexpected packet");
    store_->finalize_option(pending_, outcome);
    pending_ = ExperienceStore::npos;
}

}  // namespace qroute
