/*
 * qroute_cli.cpp
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

#include <CLI11.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "qroute/runner.hpp"

namespace fs = std::filesystem;
using namespace qroute;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

void write_file_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string());
        os << content;
        if (!os) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

struct CommonArgs {
    std::string scenario;
    int n = 0;  // 0: use the scenario's default
    std::uint64_t seed = 0;
    std::int64_t timesteps = 0;
    std::string out_dir = ".";
};

ScenarioConfig resolved(const CommonArgs& a) {
    ScenarioConfig cfg = resolve_scenario(a.scenario);
    if (a.seed != 0) cfg.seed = a.seed;
    if (a.n != 0) cfg.n_devices = a.n;
    return cfg;
}

int cmd_show_preset(const std::string& scenario) {
    dump_config(std::cout, resolve_scenario(scenario));
    return 0;
}

int cmd_train(const CommonArgs& args, const std::string& experience_dump) {
    ScenarioConfig cfg = resolved(args);
    if (args.timesteps > 0) cfg.t_train = args.timesteps;
    const int n = cfg.n_devices;
    const std::uint64_t seed = cfg.seed;

    std::cerr << "training " << cfg.name << " n=" << n << " seed=" << seed << " ("
              << cfg.t_train / cfg.t_round << " rounds)\n";
    TrainOutput out = run_training(cfg, n, seed);

    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);
    const std::string prov = provenance_line(cfg, "drl", n, seed);

    std::ostringstream metrics;
    write_metrics_csv(metrics, out.rounds, prov);
    write_file_atomic(dir / metrics_filename(cfg.name, "drl-train", n, seed), metrics.str());

    std::ostringstream trace;
    write_trace_csv(trace, out.trace, prov);
    write_file_atomic(dir / metrics_filename(cfg.name, "drl-trace", n, seed), trace.str());

    const fs::path model_path =
        dir / (cfg.name + "_drl_" + std::to_string(n) + "_" + std::to_string(seed) + ".model");
    out.model.save(model_path.string(), prov);

    if (!experience_dump.empty()) {
        std::ostringstream dump;
        out.store.write_csv(dump);
        write_file_atomic(experience_dump, dump.str());
    }

    const MetricsRecord& last = out.rounds.back();
    std::cerr << "done: pct_delivered=" << last.pct_delivered
              << " delay_per_packet=" << last.delay_per_packet << "\nmodel: " << model_path.string()
              << '\n';
    return 0;
}

int cmd_test(const CommonArgs& args, const std::string& policy_str, const std::string& model_path) {
    ScenarioConfig cfg = resolved(args);
    const PolicyKind kind = parse_policy(policy_str);
    std::optional<Mlp> model;
    if (kind == PolicyKind::Drl) {
        if (model_path.empty())
            throw std::invalid_argument("test: --model is required for the drl policy");
        model = Mlp::load(model_path);
    } else if (!model_path.empty()) {
        throw std::invalid_argument("test: --model only applies to the drl policy");
    }

    const int n = cfg.n_devices;
    const std::uint64_t seed = cfg.seed;
    const auto records =
        run_test(cfg, kind, n, seed, model ? &*model : nullptr, args.timesteps);

    fs::create_directories(args.out_dir);
    std::ostringstream os;
    write_metrics_csv(os, records, provenance_line(cfg, policy_str, n, seed));
    const fs::path out = fs::path(args.out_dir) / metrics_filename(cfg.name, policy_str, n, seed);
    write_file_atomic(out, os.str());

    const MetricsRecord& last = records.back();
    std::cerr << "done: pct_delivered=" << last.pct_delivered
              << " delay_per_packet=" << last.delay_per_packet << "\ncsv: " << out.string() << '\n';
    return 0;
}

struct CellResult {
    bool ok = false;
    std::string error;
    MetricsRecord final_record;
};

struct Aggregate {
    std::size_t count = 0;
    double mean = 0.0;
    double ci95 = std::numeric_limits<double>::quiet_NaN();
};

Aggregate aggregate(const std::vector<double>& xs) {
    Aggregate a;
    a.count = xs.size();
    if (xs.empty()) {
        a.mean = std::numeric_limits<double>::quiet_NaN();
        return a;
    }
    double sum = 0.0;
    for (double x : xs) sum += x;
    a.mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) return a;  // CI undefined for a single run
    double ss = 0.0;
    for (double x : xs) ss += (x - a.mean) * (x - a.mean);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    boost::math::students_t dist(static_cast<double>(xs.size() - 1));
    a.ci95 = boost::math::quantile(dist, 0.975) * sd / std::sqrt(static_cast<double>(xs.size()));
    return a;
}

int cmd_sweep(const CommonArgs& args, std::vector<int> n_list, int seeds,
              std::vector<std::string> policy_strs, const std::string& model_path) {
    ScenarioConfig cfg = resolve_scenario(args.scenario);
    if (args.timesteps > 0) cfg.t_test = args.timesteps;
    if (n_list.empty()) n_list.push_back(cfg.n_devices);
    if (policy_strs.empty()) policy_strs = {"sp", "bp"};
    if (seeds < 1) throw std::invalid_argument("sweep: --seeds must be >= 1");
    if (seeds < 2) std::cerr << "warning: one seed per cell, confidence intervals undefined\n";
    const std::uint64_t base_seed = args.seed != 0 ? args.seed : cfg.seed;

    std::vector<PolicyKind> policies;
    for (const auto& s : policy_strs) policies.push_back(parse_policy(s));
    std::optional<Mlp> model;
    for (PolicyKind p : policies)
        if (p == PolicyKind::Drl) {
            if (model_path.empty())
                throw std::invalid_argument("sweep: --model is required when drl is swept");
            model = Mlp::load(model_path);
        }

    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);

    struct Cell {
        int n;
        std::size_t policy;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (int n : n_list)
        for (std::size_t p = 0; p < policies.size(); ++p)
            for (int s = 0; s < seeds; ++s)
                cells.push_back({n, p, base_seed + static_cast<std::uint64_t>(s)});

    std::vector<CellResult> results(cells.size());
    std::atomic<std::size_t> cursor{0};
    std::mutex io_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& c = cells[i];
            const std::string& pname = policy_strs[c.policy];
            try {
                const auto records = run_test(cfg, policies[c.policy], c.n, c.seed,
                                              model ? &*model : nullptr, args.timesteps);
                std::ostringstream os;
                write_metrics_csv(os, records, provenance_line(cfg, pname, c.n, c.seed));
                write_file_atomic(dir / metrics_filename(cfg.name, pname, c.n, c.seed), os.str());
                results[i].ok = true;
                results[i].final_record = records.back();
            } catch (const std::exception& e) {
                results[i].error = e.what();
                std::lock_guard<std::mutex> lock(io_mutex);
                std::cerr << "cell failed: " << pname << " n=" << c.n << " seed=" << c.seed << ": "
                          << e.what() << '\n';
            }
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_threads = std::min<std::size_t>(hw, cells.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t + 1 < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::ostringstream os;
    os << "# " << provenance_line(cfg, "sweep", 0, base_seed) << " seeds=" << seeds << '\n';
    os << "scenario,policy,n,seeds,pct_delivered_mean,pct_delivered_ci95,"
          "delay_mean,delay_ci95,queue_mean,queue_ci95\n";
    char buf[160];
    for (int n : n_list) {
        for (std::size_t p = 0; p < policies.size(); ++p) {
            std::vector<double> pct, delay, queue;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (cells[i].n != n || cells[i].policy != p || !results[i].ok) continue;
                pct.push_back(results[i].final_record.pct_delivered);
                delay.push_back(results[i].final_record.delay_per_packet);
                queue.push_back(results[i].final_record.avg_queue_len);
            }
            const Aggregate ap = aggregate(pct);
            const Aggregate ad = aggregate(delay);
            const Aggregate aq = aggregate(queue);
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g", ap.mean,
                          ap.ci95, ad.mean, ad.ci95, aq.mean, aq.ci95);
            os << cfg.name << ',' << policy_strs[p] << ',' << n << ',' << ap.count << ',' << buf
               << '\n';
        }
    }
    const fs::path summary = dir / ("sweep_" + cfg.name + ".csv");
    write_file_atomic(summary, os.str());
    std::cerr << "sweep summary: " << summary.string() << '\n';

    for (const auto& r : results)
        if (!r.ok) return kExitRuntime;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Packet-level multi-hop wireless routing simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string policy_str;
    std::string model_path;
    std::string experience_dump;
    std::vector<int> n_list;
    std::vector<std::string> policy_list;
    int seeds = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", args.scenario, "preset name or config file")->required();
        sub->add_option("--n", args.n, "number of devices (lattices need a perfect square)");
        sub->add_option("--seed", args.seed, "random seed");
        sub->add_option("--timesteps", args.timesteps, "override the scenario's step budget");
        sub->add_option("--out", args.out_dir, "output directory")->capture_default_str();
    };

    CLI::App* show = app.add_subcommand("show-preset", "print a scenario as a config file");
    show->add_option("--scenario", args.scenario, "preset name or config file")->required();

    CLI::App* train = app.add_subcommand("train", "train a routing agent");
    add_common(train);
    train->add_option("--dump-experience", experience_dump,
                      "also write the collected decision rows as CSV");

    CLI::App* test = app.add_subcommand("test", "run one seeded test simulation");
    add_common(test);
    test->add_option("--policy", policy_str, "sp, bp or drl")->required();
    test->add_option("--model", model_path, "frozen model file (drl)");

    CLI::App* sweep = app.add_subcommand("sweep", "grid of seeded runs with mean and 95% CI");
    sweep->add_option("--scenario", args.scenario, "preset name or config file")->required();
    sweep->add_option("--n", n_list, "device counts, comma separated")->delimiter(',');
    sweep->add_option("--seed", args.seed, "base random seed");
    sweep->add_option("--timesteps", args.timesteps, "override the scenario's step budget");
    sweep->add_option("--out", args.out_dir, "output directory")->capture_default_str();
    sweep->add_option("--seeds", seeds, "seeds per cell (seed, seed+1, ...)")
        ->capture_default_str();
    sweep->add_option("--policy", policy_list, "policies to sweep, comma separated")
        ->delimiter(',');
    sweep->add_option("--model", model_path, "frozen model file (drl)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (show->parsed()) return cmd_show_preset(args.scenario);
        if (train->parsed()) return cmd_train(args, experience_dump);
        if (test->parsed()) return cmd_test(args, policy_str, model_path);
        if (sweep->parsed()) return cmd_sweep(args, n_list, seeds, policy_list, model_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
