/*
 * scenario.hpp
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
#include <vector>

#include "qroute/experience.hpp"
#include "qroute/mlp.hpp"
#include "qroute/simcore.hpp"
#include "qroute/topology.hpp"
#include "qroute/traffic.hpp"

namespace qroute {

enum class PolicyKind { Sp, Bp, Drl };

const char* policy_name(PolicyKind p);
PolicyKind parse_policy(const std::string& s);  // throws std::invalid_argument

/// Flow arrival rate, either a constant or scale * N / divisor so that
/// sweeps over the device count keep the intended per-device load.
struct FlowRate {
    double scale = 0.002;
    double divisor = 25.0;
    bool per_n = true;

    double value(int n) const { return per_n ? scale * n / divisor : scale; }
    std::string to_string() const;
    static FlowRate parse(const std::string& text);  // "0.002*N/25" or a number
};

/// One complete experiment description. Defaults follow the standard
/// parameter set; the named presets vary topology, link dynamics, packet
/// rate and training length.
struct ScenarioConfig {
    std::string name = "custom";

    TopologyKind topology = TopologyKind::Lattice;
    int n_devices = 64;
    double radius = 0.5;  // random-geometric only

    double alpha = 1.0;
    double beta = 0.0;

    FlowRate lambda_f;
    double lambda_d = 5000.0;
    double lambda_p = 0.05;

    int queue_capacity = 50;  // per-destination-scaled at run time for bp
    int ttl = 200;

    std::int64_t t_train = 30000;
    std::int64_t t_test = 100000;
    std::int64_t t_round = 1000;

    double gamma = 0.99;
    double eps_train = 0.1;
    double eps_test = 0.0;
    double r_transition = -1.0;
    double r_delivery = 0.0;

    int k_iterations = 30;
    int epochs = 10;
    int batch_size = 32;
    double learning_rate = 3e-3;
    std::string optimizer = "adam";

    std::uint64_t seed = 1;

    RewardSpec rewards() const;
    TrafficConfig traffic(int n) const;
    Mlp::Config network() const;
    /// Queue capacity for a policy: B for sp/drl, B*N for bp.
    std::size_t queue_capacity_for(PolicyKind p, int n) const;
    /// Builds the topology for a run; random-geometric placement draws
    /// from its own seed stream so all policies see the same graph.
    Topology build_topology(int n, std::uint64_t seed) const;
    /// Throws std::invalid_argument on out-of-range values (e.g. a lattice
    /// size that is not a perfect square).
    void validate(int n) const;
};

const std::vector<std::string>& preset_names();
bool is_preset(const std::string& name);
/// Throws std::invalid_argument listing the presets when name is unknown.
ScenarioConfig preset(const std::string& name);

/// Flat key=value config format ('#' comments, cosmetic [section] headers).
/// Unknown keys are errors; missing keys keep their defaults.
ScenarioConfig parse_config(std::istream& is, const std::string& origin);
ScenarioConfig load_config(const std::string& path);
void dump_config(std::ostream& os, const ScenarioConfig& cfg);

/// Preset name or a config file path, as taken by the command line.
ScenarioConfig resolve_scenario(const std::string& name_or_path);

}  // namespace qroute
