/*
 * scenario.cpp
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

#include "qroute/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qroute {

namespace {

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& s, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number '" + s + "' for " + key);
    }
}

std::int64_t to_int(const std::string& s, const std::string& key) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer '" + s + "' for " + key);
    }
}

}  // namespace

const char* policy_name(PolicyKind p) {
    switch (p) {
        case PolicyKind::Sp: return "sp";
        case PolicyKind::Bp: return "bp";
        case PolicyKind::Drl: return "drl";
    }
    return "?";
}

PolicyKind parse_policy(const std::string& s) {
    if (s == "sp") return PolicyKind::Sp;
    if (s == "bp") return PolicyKind::Bp;
    if (s == "drl") return PolicyKind::Drl;
    throw std::invalid_argument("unknown policy '" + s + "' (expected sp, bp or drl)");
}

std::string FlowRate::to_string() const {
    if (!per_n) return fmt_num(scale);
    return fmt_num(scale) + "*N/" + fmt_num(divisor);
}

FlowRate FlowRate::parse(const std::string& text) {
    FlowRate r;
    const auto star = text.find("*N/");
    if (star == std::string::npos) {
        r.per_n = false;
        r.scale = to_double(trim(text), "lambda_f");
        r.divisor = 1.0;
        return r;
    }
    r.per_n = true;
    r.scale = to_double(trim(text.substr(0, star)), "lambda_f");
    r.divisor = to_double(trim(text.substr(star + 3)), "lambda_f");
    if (r.divisor <= 0.0) throw std::invalid_argument("lambda_f: divisor must be positive");
    return r;
}

RewardSpec ScenarioConfig::rewards() const {
    RewardSpec r;
    r.gamma = gamma;
    r.r_transition = r_transition;
    r.r_delivery = r_delivery;
    return r;
}

TrafficConfig ScenarioConfig::traffic(int n) const {
    return TrafficConfig{lambda_f.value(n), lambda_d, lambda_p};
}

Mlp::Config ScenarioConfig::network() const {
    Mlp::Config c;
    c.layer_sizes = {kInputFeatureCount, 10 * kInputFeatureCount, kInputFeatureCount / 2, 1};
    c.learning_rate = learning_rate;
    if (optimizer == "adam")
        c.optimizer = Mlp::Optimizer::Adam;
    else if (optimizer == "sgd")
        c.optimizer = Mlp::Optimizer::Sgd;
    else
        throw std::invalid_argument("config: unknown optimizer '" + optimizer + "'");
    return c;
}

std::size_t ScenarioConfig::queue_capacity_for(PolicyKind p, int n) const {
    if (p == PolicyKind::Bp)
        return static_cast<std::size_t>(queue_capacity) * static_cast<std::size_t>(n);
    return static_cast<std::size_t>(queue_capacity);
}

Topology ScenarioConfig::build_topology(int n, std::uint64_t seed) const {
    validate(n);
    if (topology == TopologyKind::Lattice) {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
        return Topology::lattice(side);
    }
    Rng rng(derive_seed(seed, 3));
    return Topology::random_geometric(n, radius, rng);
}

void ScenarioConfig::validate(int n) const {
    if (n < 2) throw std::invalid_argument("scenario: need at least 2 devices");
    if (topology == TopologyKind::Lattice) {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
        if (side < 2 || side * side != n)
            throw std::invalid_argument("scenario: lattice size " + std::to_string(n) +
                                        " is not a perfect square >= 4");
    }
    if (queue_capacity < 1) throw std::invalid_argument("scenario: queue capacity must be >= 1");
    if (ttl < 1) throw std::invalid_argument("scenario: ttl must be >= 1");
    if (gamma < 0.0 || gamma >= 1.0)
        throw std::invalid_argument("scenario: gamma must lie in [0, 1)");
    if (t_round < 1 || t_train % t_round != 0 || t_test % t_round != 0)
        throw std::invalid_argument("scenario: timestep budgets must be multiples of t_round");
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "static-lattice-low",         "static-lattice-high",
        "dynamic-lattice-high",       "delay-tolerant-lattice-high",
        "static-random-high",         "delay-tolerant-random-high",
    };
    return names;
}

bool is_preset(const std::string& name) {
    for (const auto& n : preset_names())
        if (n == name) return true;
    return false;
}

ScenarioConfig preset(const std::string& name) {
    ScenarioConfig c;
    c.name = name;
    if (name == "static-lattice-low") {
        c.topology = TopologyKind::Lattice;
        c.alpha = 1.0;
        c.beta = 0.0;
        c.lambda_p = 0.05;
        c.t_train = 30000;
    } else if (name == "static-lattice-high") {
        c.topology = TopologyKind::Lattice;
        c.alpha = 1.0;
        c.beta = 0.0;
        c.lambda_p = 0.2;
        c.t_train = 30000;
    } else if (name == "dynamic-lattice-high") {
        c.topology = TopologyKind::Lattice;
        c.alpha = 0.8;
        c.beta = 0.2;
        c.lambda_p = 0.2;
        c.t_train = 49000;
    } else if (name == "delay-tolerant-lattice-high") {
        c.topology = TopologyKind::Lattice;
        c.alpha = 0.5;
        c.beta = 0.4;
        c.lambda_p = 0.2;
        c.t_train = 49000;
    } else if (name == "static-random-high") {
        c.topology = TopologyKind::RandomGeometric;
        c.radius = 0.5;
        c.alpha = 1.0;
        c.beta = 0.0;
        c.lambda_p = 0.2;
        c.t_train = 30000;
    } else if (name == "delay-tolerant-random-high") {
        c.topology = TopologyKind::RandomGeometric;
        c.radius = 0.3;
        c.alpha = 0.5;
        c.beta = 0.4;
        c.lambda_p = 0.2;
        c.t_train = 30000;
    } else {
        std::string msg = "unknown scenario '" + name + "'; available presets:";
        for (const auto& n : preset_names()) msg += "\n  " + n;
        throw std::invalid_argument(msg);
    }
    return c;
}

void dump_config(std::ostream& os, const ScenarioConfig& c) {
    os << "name = " << c.name << "\n\n";
    os << "[topology]\n";
    os << "kind = " << (c.topology == TopologyKind::Lattice ? "lattice" : "random-geometric")
       << "\n";
    os << "n = " << c.n_devices << "\n";
    os << "radius = " << fmt_num(c.radius) << "\n\n";
    os << "[links]\n";
    os << "alpha = " << fmt_num(c.alpha) << "\n";
    os << "beta = " << fmt_num(c.beta) << "\n\n";
    os << "[traffic]\n";
    os << "lambda_f = " << c.lambda_f.to_string() << "\n";
    os << "lambda_d = " << fmt_num(c.lambda_d) << "\n";
    os << "lambda_p = " << fmt_num(c.lambda_p) << "\n\n";
    os << "[queue]\n";
    os << "capacity = " << c.queue_capacity << "\n";
    os << "ttl = " << c.ttl << "\n\n";
    os << "[sim]\n";
    os << "t_train = " << c.t_train << "\n";
    os << "t_test = " << c.t_test << "\n";
    os << "t_round = " << c.t_round << "\n";
    os << "seed = " << c.seed << "\n\n";
    os << "[rl]\n";
    os << "gamma = " << fmt_num(c.gamma) << "\n";
    os << "eps_train = " << fmt_num(c.eps_train) << "\n";
    os << "eps_test = " << fmt_num(c.eps_test) << "\n";
    os << "r_transition = " << fmt_num(c.r_transition) << "\n";
    os << "r_delivery = " << fmt_num(c.r_delivery) << "\n";
    os << "k_iterations = " << c.k_iterations << "\n";
    os << "epochs = " << c.epochs << "\n";
    os << "batch_size = " << c.batch_size << "\n";
    os << "learning_rate = " << fmt_num(c.learning_rate) << "\n";
    os << "optimizer = " << c.optimizer << "\n";
}

ScenarioConfig parse_config(std::istream& is, const std::string& origin) {
    ScenarioConfig c;
    c.name = "custom";
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string s = trim(line);
        if (s.empty()) continue;
        if (s.front() == '[' && s.back() == ']') continue;  // cosmetic section
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key == "name") c.name = val;
        else if (key == "kind") {
            if (val == "lattice") c.topology = TopologyKind::Lattice;
            else if (val == "random-geometric") c.topology = TopologyKind::RandomGeometric;
            else throw std::invalid_argument(origin + ": unknown topology kind '" + val + "'");
        }
        else if (key == "n") c.n_devices = static_cast<int>(to_int(val, key));
        else if (key == "radius") c.radius = to_double(val, key);
        else if (key == "alpha") c.alpha = to_double(val, key);
        else if (key == "beta") c.beta = to_double(val, key);
        else if (key == "lambda_f") c.lambda_f = FlowRate::parse(val);
        else if (key == "lambda_d") c.lambda_d = to_double(val, key);
        else if (key == "lambda_p") c.lambda_p = to_double(val, key);
        else if (key == "capacity") c.queue_capacity = static_cast<int>(to_int(val, key));
        else if (key == "ttl") c.ttl = static_cast<int>(to_int(val, key));
        else if (key == "t_train") c.t_train = to_int(val, key);
        else if (key == "t_test") c.t_test = to_int(val, key);
        else if (key == "t_round") c.t_round = to_int(val, key);
        else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(val, key));
        else if (key == "gamma") c.gamma = to_double(val, key);
        else if (key == "eps_train") c.eps_train = to_double(val, key);
        else if (key == "eps_test") c.eps_test = to_double(val, key);
        else if (key == "r_transition") c.r_transition = to_double(val, key);
        else if (key == "r_delivery") c.r_delivery = to_double(val, key);
        else if (key == "k_iterations") c.k_iterations = static_cast<int>(to_int(val, key));
        else if (key == "epochs") c.epochs = static_cast<int>(to_int(val, key));
        else if (key == "batch_size") c.batch_size = static_cast<int>(to_int(val, key));
        else if (key == "learning_rate") c.learning_rate = to_double(val, key);
        else if (key == "optimizer") c.optimizer = val;
        else
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
    }
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file '" + path + "'");
    return parse_config(is, path);
}

ScenarioConfig resolve_scenario(const std::string& name_or_path) {
    if (is_preset(name_or_path)) return preset(name_or_path);
    std::ifstream probe(name_or_path);
    if (probe.good()) return parse_config(probe, name_or_path);
    // Not a file either: report as an unknown preset with the listing.
    preset(name_or_path);
    return {};  // unreachable
}

}  // namespace qroute
