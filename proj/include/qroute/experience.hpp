/*
 * experience.hpp
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
#include <iosfwd>
#include <limits>
#include <unordered_map>
#include <vector>

#include "qroute/features.hpp"
#include "qroute/mlp.hpp"

namespace qroute {

/// Per-step rewards of the three packet outcomes. A drop is worth the
/// whole discounted tail of transition rewards, so on-policy value
/// estimates stay bounded below by it.
struct RewardSpec {
    double gamma = 0.99;
    double r_transition = -1.0;
    double r_delivery = 0.0;
    double r_drop() const { return r_transition / (1.0 - gamma); }
};

/// Discounted sum of a constant per-step reward over delta timesteps:
/// r * (1 - gamma^delta) / (1 - gamma). delta >= 1. For gamma = 1 the sum
/// degenerates to r * delta.
double option_return(std::int64_t delta, double reward, double gamma);

/// What happened to a packet when its chosen action was applied: queued at
/// the next device (or stayed), delivered on arrival, or dropped on
/// arrival. Terminal outcomes close the episode.
enum class OutcomeClass : std::uint8_t { Pending, Transition, Delivery, Drop };

/// One routing decision: the shared state vector plus one action vector
/// per candidate next hop (up neighbors and the device itself). Expands to
/// candidates.size() data rows, exactly one of them flagged chosen.
struct DecisionRecord {
    std::uint64_t packet_id = 0;
    DeviceId device = 0;           // v
    std::int64_t t_arrive = 0;     // packet's arrival at v (option start)
    std::int64_t t_decide = 0;     // decision/departure timestep
    std::array<double, kStateFeatureCount> state{};
    std::vector<DeviceId> candidates;  // ascending device ids, includes v
    std::vector<std::array<double, kActionFeatureCount>> actions;
    int chosen = -1;
    OutcomeClass outcome = OutcomeClass::Pending;
};

/// Append-only table of decisions accumulated from time 0. Successive
/// decisions of one packet are linked at insertion (a departure time always
/// matches the next arrival time), which is the self-join the trainer needs.
class ExperienceStore {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    /// Appends a decision and links it to the packet's previous one.
    std::size_t record_decision(DecisionRecord rec);

    /// Sets the outcome of the option that begins with decision i.
    void finalize_option(std::size_t i, OutcomeClass outcome);

    const std::vector<DecisionRecord>& decisions() const { return decisions_; }
    std::size_t decision_count() const { return decisions_.size(); }

    /// Total data rows (one per candidate across all decisions).
    std::size_t row_count() const { return rows_; }

    /// The packet's next decision after i, or npos while the option is
    /// still open (packet waiting in a queue) or the episode ended.
    std::size_t successor(std::size_t i) const { return successor_[i]; }

    /// Row-per-candidate dump: packet/device/time columns, the feature
    /// vectors, the outcome of the chosen option, and the chosen flag.
    void write_csv(std::ostream& os) const;

private:
    std::vector<DecisionRecord> decisions_;
    std::vector<std::size_t> successor_;
    std::unordered_map<std::uint64_t, std::size_t> last_by_packet_;
    std::size_t rows_ = 0;
};

/// Bootstrap targets for every decision whose option has finished.
/// For decision i choosing action u:
///   Delivery            y_i = r_delivery
///   Drop                y_i = r_drop
///   Transition, with successor s at the next device:
///                       y_i = option_return(dt, r_transition) +
///                             gamma^dt * max_a Q(state_s, a),  dt = t_decide(s) - t_arrive(s)
/// Decisions whose option has not finished get has[i] = false.
struct TargetSet {
    std::vector<double> y;
    std::vector<std::uint8_t> has;
    std::vector<double> max_q;  // per decision, max over its candidates
};
TargetSet compute_targets(const ExperienceStore& store, const Mlp& net, const RewardSpec& rewards);

/// Training pairs: each finished chosen row contributes its own features
/// as input and its successor-derived target as output. Inputs are columns.
struct TrainingSet {
    Eigen::MatrixXd inputs;   // kInputFeatureCount x pairs
    Eigen::VectorXd targets;  // pairs
};
TrainingSet chain_join(const ExperienceStore& store, const TargetSet& targets);

struct RoundTrainStats {
    std::size_t rows_total = 0;
    std::size_t pairs_trained = 0;
    double mean_loss = 0.0;
    double mean_target = 0.0;
};

/// One training round: a freshly initialized network refit k_iterations
/// times against targets recomputed from itself over the whole store.
/// Returns the fitted network (the next round's behavior policy).
Mlp train_round(const ExperienceStore& store, const Mlp::Config& net_cfg,
                const RewardSpec& rewards, int k_iterations, int epochs, int batch_size,
                Rng& rng, RoundTrainStats* stats = nullptr);

}  // namespace qroute
