/*
 * runner.hpp
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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qroute/scenario.hpp"

namespace qroute {

/// A full training run: rounds of epsilon-greedy data collection, each
/// followed by a fresh fitted value-iteration pass over everything
/// collected so far. The network fitted after round r collects round r+1;
/// the one fitted after the last round is the frozen result.
struct TrainOutput {
    Mlp model;
    std::vector<MetricsRecord> rounds;
    std::vector<std::pair<std::int64_t, RoundTrainStats>> trace;  // (round, stats)
    ExperienceStore store;                                        // everything collected
};
TrainOutput run_training(const ScenarioConfig& cfg, int n, std::uint64_t seed);

/// A test run with exploration off. model is required for the drl policy.
/// steps_override, when positive, replaces the configured t_test. Runs with
/// the same seed share topology, link and traffic realizations across
/// policies. bp runs get capacity-scaled queues and must never overflow.
std::vector<MetricsRecord> run_test(const ScenarioConfig& cfg, PolicyKind policy, int n,
                                    std::uint64_t seed, const Mlp* model,
                                    std::int64_t steps_override = 0);

/// `round,rows_total,pairs_trained,mean_loss,mean_target` per round.
void write_trace_csv(std::ostream& os,
                     const std::vector<std::pair<std::int64_t, RoundTrainStats>>& trace,
                     const std::string& provenance);

std::string provenance_line(const ScenarioConfig& cfg, const std::string& policy, int n,
                            std::uint64_t seed);

}  // namespace qroute
