/*
 * runner.cpp
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

#include "qroute/runner.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace qroute {

namespace {
// Seed streams, so runs with one user seed share realizations where they
// should and stay independent where they must.
enum : std::uint64_t { kSimStream = 0, kPolicyStream = 1, kInitNetStream = 2, kTrainerStream = 4 };
}  // namespace

TrainOutput run_training(const ScenarioConfig& cfg, int n, std::uint64_t seed) {
    cfg.validate(n);
    Simulation sim(cfg.build_topology(n, seed), cfg.alpha, cfg.beta, cfg.traffic(n),
                   SimParams{cfg.queue_capacity_for(PolicyKind::Drl, n), cfg.ttl, false},
                   derive_seed(seed, kSimStream));

    TrainOutput out;
    out.model = Mlp(cfg.network(), derive_seed(seed, kInitNetStream));
    DrlPolicy policy(&out.model, cfg.eps_train, derive_seed(seed, kPolicyStream), &out.store);
    Rng trainer(derive_seed(seed, kTrainerStream));

    out.rounds = sim.run(policy, cfg.t_train, cfg.t_round, [&](const MetricsRecord& rec) {
        RoundTrainStats stats;
        Mlp next = train_round(out.store, cfg.network(), cfg.rewards(), cfg.k_iterations,
                               cfg.epochs, cfg.batch_size, trainer, &stats);
        out.trace.emplace_back(rec.round, stats);
        out.model = std::move(next);  // policy holds &out.model; address is stable
    });
    return out;
}

std::vector<MetricsRecord> run_test(const ScenarioConfig& cfg, PolicyKind kind, int n,
                                    std::uint64_t seed, const Mlp* model,
                                    std::int64_t steps_override) {
    cfg.validate(n);
    const std::int64_t steps = steps_override > 0 ? steps_override : cfg.t_test;
    Simulation sim(cfg.build_topology(n, seed), cfg.alpha, cfg.beta, cfg.traffic(n),
                   SimParams{cfg.queue_capacity_for(kind, n), cfg.ttl, kind == PolicyKind::Bp},
                   derive_seed(seed, kSimStream));
    switch (kind) {
        case PolicyKind::Sp: {
            SpPolicy policy;
            return sim.run(policy, steps, cfg.t_round);
        }
        case PolicyKind::Bp: {
            BpPolicy policy;
            return sim.run(policy, steps, cfg.t_round);
        }
        case PolicyKind::Drl: {
            if (!model) throw std::invalid_argument("run_test: drl policy requires a model");
            if (model->input_size() != kInputFeatureCount)
                throw std::invalid_argument("run_test: model input width does not match features");
            DrlPolicy policy(model, cfg.eps_test, derive_seed(seed, kPolicyStream));
            return sim.run(policy, steps, cfg.t_round);
        }
    }
    throw std::logic_error("run_test: unreachable");
}

void write_trace_csv(std::ostream& os,
                     const std::vector<std::pair<std::int64_t, RoundTrainStats>>& trace,
                     const std::string& provenance) {
    if (!provenance.empty()) os << "# " << provenance << '\n';
    os << "round,rows_total,pairs_trained,mean_loss,mean_target\n";
    char buf[64];
    for (const auto& [round, st] : trace) {
        os << round << ',' << st.rows_total << ',' << st.pairs_trained << ',';
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g", st.mean_loss, st.mean_target);
        os << buf << '\n';
    }
}

std::string provenance_line(const ScenarioConfig& cfg, const std::string& policy, int n,
                            std::uint64_t seed) {
    return "scenario=" + cfg.name + " policy=" + policy + " n=" + std::to_string(n) +
           " seed=" + std::to_string(seed);
}

}  // namespace qroute
