/*
 * experience.cpp
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

#include "qroute/experience.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace qroute {

double option_return(std::int64_t delta, double reward, double gamma) {
    if (delta < 1) throw std::invalid_argument("option_return: delta must be >= 1");
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("option_return: bad gamma");
    if (gamma == 1.0) return reward * static_cast<double>(delta);
    return reward * (1.0 - std::pow(gamma, static_cast<double>(delta))) / (1.0 - gamma);
}

std::size_t ExperienceStore::record_decision(DecisionRecord rec) {
    if (rec.candidates.size() != rec.actions.size() || rec.candidates.empty())
        throw std::invalid_argument("record_decision: malformed candidate set");
    if (rec.chosen < 0 || rec.chosen >= static_cast<int>(rec.candidates.size()))
        throw std::invalid_argument("record_decision: chosen index out of range");

    const std::size_t idx = decisions_.size();
    auto [it, inserted] = last_by_packet_.try_emplace(rec.packet_id, idx);
    if (!inserted) {
        const std::size_t prev = it->second;
        if (decisions_[prev].t_decide != rec.t_arrive)
            throw std::logic_error("record_decision: arrival does not chain to prior departure");
        successor_[prev] = idx;
        it->second = idx;
    }
    rows_ += rec.candidates.size();
    decisions_.push_back(std::move(rec));
    successor_.push_back(npos);
    return idx;
}

void ExperienceStore::finalize_option(std::size_t i, OutcomeClass outcome) {
    if (outcome == OutcomeClass::Pending)
        throw std::invalid_argument("finalize_option: outcome must be definite");
    decisions_[i].outcome = outcome;
}

void ExperienceStore::write_csv(std::ostream& os) const {
    os << "packet_id,device_id,t_arrive,t_decide";
    for (int i = 0; i < kStateFeatureCount; ++i) os << ",fs_" << i;
    for (int i = 0; i < kActionFeatureCount; ++i) os << ",fa_" << i;
    os << ",action_device_id,outcome,chosen\n";
    static const char* names[] = {"pending", "transition", "delivery", "drop"};
    char buf[32];
    for (const DecisionRecord& d : decisions_) {
        for (std::size_t c = 0; c < d.candidates.size(); ++c) {
            os << d.packet_id << ',' << d.device << ',' << d.t_arrive << ',' << d.t_decide;
            for (double v : d.state) {
                std::snprintf(buf, sizeof(buf), "%.12g", v);
                os << ',' << buf;
            }
            for (double v : d.actions[c]) {
                std::snprintf(buf, sizeof(buf), "%.12g", v);
                os << ',' << buf;
            }
            os << ',' << d.candidates[c] << ',' << names[static_cast<int>(d.outcome)] << ','
               << (static_cast<int>(c) == d.chosen ? 1 : 0) << '\n';
        }
    }
}

TargetSet compute_targets(const ExperienceStore& store, const Mlp& net,
                          const RewardSpec& rewards) {
    const auto& decisions = store.decisions();
    const std::size_t n = decisions.size();

    TargetSet out;
    out.y.assign(n, 0.0);
    out.has.assign(n, 0);
    out.max_q.assign(n, 0.0);

    // One batched evaluation over every candidate row, then a per-decision
    // max. Chunked so the activation matrices stay small.
    constexpr Eigen::Index kChunk = 8192;
    Eigen::MatrixXd block(kInputFeatureCount, kChunk);
    std::vector<std::pair<std::size_t, std::size_t>> slots(kChunk);  // (decision, candidate)

    Eigen::Index filled = 0;
    auto flush = [&]() {
        if (filled == 0) return;
        const Eigen::VectorXd q = net.forward_batch(block.leftCols(filled));
        for (Eigen::Index i = 0; i < filled; ++i) {
            const auto [d, c] = slots[static_cast<std::size_t>(i)];
            if (c == 0 || q(i) > out.max_q[d]) out.max_q[d] = q(i);
        }
        filled = 0;
    };
    for (std::size_t d = 0; d < n; ++d) {
        const DecisionRecord& rec = decisions[d];
        for (std::size_t c = 0; c < rec.candidates.size(); ++c) {
            const auto row = decision_input(rec.state, rec.actions[c]);
            for (int k = 0; k < kInputFeatureCount; ++k) block(k, filled) = row[static_cast<std::size_t>(k)];
            slots[static_cast<std::size_t>(filled)] = {d, c};
            if (++filled == kChunk) flush();
        }
    }
    flush();

    for (std::size_t d = 0; d < n; ++d) {
        const DecisionRecord& rec = decisions[d];
        switch (rec.outcome) {
            case OutcomeClass::Delivery:
                out.y[d] = rewards.r_delivery;
                out.has[d] = 1;
                break;
            case OutcomeClass::Drop:
                out.y[d] = rewards.r_drop();
                out.has[d] = 1;
                break;
            case OutcomeClass::Transition: {
                const std::size_t s = store.successor(d);
                if (s == ExperienceStore::npos) break;  // option still open
                const DecisionRecord& next = decisions[s];
                const std::int64_t dt = next.t_decide - next.t_arrive;
                out.y[d] = option_return(dt, rewards.r_transition, rewards.gamma) +
                           std::pow(rewards.gamma, static_cast<double>(dt)) * out.max_q[s];
                out.has[d] = 1;
                break;
            }
            case OutcomeClass::Pending:
                break;
        }
    }
    return out;
}

TrainingSet chain_join(const ExperienceStore& store, const TargetSet& targets) {
    const auto& decisions = store.decisions();
    std::size_t pairs = 0;
    for (std::size_t d = 0; d < decisions.size(); ++d) pairs += targets.has[d] ? 1 : 0;

    TrainingSet out;
    out.inputs.resize(kInputFeatureCount, static_cast<Eigen::Index>(pairs));
    out.targets.resize(static_cast<Eigen::Index>(pairs));
    Eigen::Index col = 0;
    for (std::size_t d = 0; d < decisions.size(); ++d) {
        if (!targets.has[d]) continue;
        const DecisionRecord& rec = decisions[d];
        const auto row = decision_input(rec.state, rec.actions[static_cast<std::size_t>(rec.chosen)]);
        for (int k = 0; k < kInputFeatureCount; ++k) out.inputs(k, col) = row[static_cast<std::size_t>(k)];
        out.targets(col) = targets.y[d];
        ++col;
    }
    return out;
}

Mlp train_round(const ExperienceStore& store, const Mlp::Config& net_cfg,
                const RewardSpec& rewards, int k_iterations, int epochs, int batch_size,
                Rng& rng, RoundTrainStats* stats) {
    if (k_iterations < 1) throw std::invalid_argument("train_round: k_iterations must be >= 1");
    Mlp net(net_cfg, rng.next());

    double last_loss = 0.0;
    double last_mean_target = 0.0;
    std::size_t last_pairs = 0;
    for (int k = 0; k < k_iterations; ++k) {
        const TargetSet targets = compute_targets(store, net, rewards);
        const TrainingSet set = chain_join(store, targets);
        last_pairs = static_cast<std::size_t>(set.targets.size());
        if (last_pairs == 0) break;
        const auto losses = net.fit(set.inputs, set.targets, epochs, batch_size, rng);
        last_loss = losses.back();
        last_mean_target = set.targets.mean();
    }
    if (stats) {
        stats->rows_total = store.row_count();
        stats->pairs_trained = last_pairs;
        stats->mean_loss = last_loss;
        stats->mean_target = last_mean_target;
    }
    return net;
}

}  // namespace qroute
