/*
 * simcore.cpp
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

#include "qroute/simcore.hpp"

#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace qroute {

Simulation::Simulation(Topology topo, double alpha, double beta, TrafficConfig traffic,
                       SimParams params, std::uint64_t seed)
    : topo_(std::move(topo)),
      rng_(seed),
      links_(topo_, alpha, beta, rng_),
      traffic_(traffic, topo_.device_count()),
      dist_(topo_),
      params_(params) {
    queues_.assign(topo_.device_count(), DeviceQueue(params_.queue_capacity, topo_.device_count()));
    traffic_.init_flows(rng_);
    visit_order_.resize(topo_.device_count());
}

EnqueueOutcome Simulation::enqueue(Packet p, DeviceId v) {
    if (v == p.dst) {
        ++counters_.delivered;
        counters_.total_delay += static_cast<std::uint64_t>(clock_ - p.created_at);
        return EnqueueOutcome::Delivered;
    }
    if (queues_[v].full()) {
        ++counters_.dropped_full;
        return EnqueueOutcome::DroppedQueueFull;
    }
    if (p.ttl <= 0) {
        ++counters_.dropped_ttl;
        return EnqueueOutcome::DroppedTtl;
    }
    p.arrived_at_current = clock_;
    p.eligible_at = clock_ + 1;
    queues_[v].push(p);
    return EnqueueOutcome::Queued;
}

EnqueueOutcome Simulation::inject(DeviceId src, DeviceId dst) {
    ++counters_.generated;
    return enqueue(traffic_.make_packet(src, dst, params_.ttl, clock_), src);
}

StepEvents Simulation::step(RoutingPolicy& policy) {
    const std::int64_t t = clock_;
    StepEvents events;

    // The constructor-built link state and initial flow population are the
    // t = 0 state; transitions start between t = 0 and t = 1.
    if (t > 0) links_.step(rng_);
    if (t > 0) traffic_.step_flows(t, rng_);

    for (Packet& p : traffic_.generate_packets(t, params_.ttl, rng_)) {
        ++counters_.generated;
        enqueue(p, p.src);
    }

    dist_.observe(topo_, links_);

    std::iota(visit_order_.begin(), visit_order_.end(), 0);
    rng_.shuffle(visit_order_);
    for (DeviceId v : visit_order_) {
        const Decision d = policy.decide(context(), v);
        switch (d.kind) {
            case Decision::Kind::None:
                break;
            case Decision::Kind::Stay: {
                events.stays.push_back(v);
                if (d.queue_index == Decision::no_index) break;
                Packet& p = queues_[v].at(d.queue_index);
                if (p.eligible_at > t) throw std::logic_error("step: stay on an ineligible packet");
                // An explicit hold ends the current residence and starts a
                // new one at the same device, keeping episode chaining
                // well-defined. The ttl is untouched: nothing was forwarded.
                p.arrived_at_current = t;
                policy.on_outcome(p, OutcomeClass::Transition);
                break;
            }
            case Decision::Kind::Forward: {
                if (policy.fifo_only() && d.queue_index != 0)
                    throw std::logic_error("step: head-of-queue policy forwarded a non-head packet");
                Packet p = queues_[v].take(d.queue_index);
                if (p.eligible_at > t) throw std::logic_error("step: forwarded an ineligible packet");

                bool link_ok = false;
                for (const auto& [u, e] : topo_.incident(v))
                    if (u == d.next_hop && links_.up(e)) {
                        link_ok = true;
                        break;
                    }
                if (!link_ok) throw std::logic_error("step: forward over a missing or down link");

                p.ttl -= 1;
                const Packet sent = p;  // pre-enqueue copy for callbacks/logs
                const EnqueueOutcome out = enqueue(std::move(p), d.next_hop);
                OutcomeClass cls = OutcomeClass::Transition;
                if (out == EnqueueOutcome::Delivered) cls = OutcomeClass::Delivery;
                if (out == EnqueueOutcome::DroppedQueueFull || out == EnqueueOutcome::DroppedTtl)
                    cls = OutcomeClass::Drop;
                policy.on_outcome(sent, cls);
                events.transmissions.push_back({v, d.next_hop, sent.id, out});
                break;
            }
        }
    }

    clock_ = t + 1;
    if (params_.forbid_queue_overflow && counters_.dropped_full > 0)
        throw std::runtime_error("queue overflow under a policy that must never drop for capacity");
    return events;
}

std::uint64_t Simulation::packets_in_queues() const {
    std::uint64_t total = 0;
    for (const auto& q : queues_) total += q.size();
    return total;
}

void Simulation::check_conservation() const {
    const std::uint64_t accounted = counters_.delivered + counters_.dropped_full +
                                    counters_.dropped_ttl + packets_in_queues();
    if (accounted != counters_.generated)
        throw std::logic_error("packet conservation violated: generated=" +
                               std::to_string(counters_.generated) +
                               " accounted=" + std::to_string(accounted));
}

MetricsRecord Simulation::snapshot(std::int64_t round) const {
    MetricsRecord r;
    r.round = round;
    r.generated = counters_.generated;
    r.delivered = counters_.delivered;
    r.dropped_full = counters_.dropped_full;
    r.dropped_ttl = counters_.dropped_ttl;
    r.pct_delivered = counters_.generated == 0
                          ? 1.0
                          : static_cast<double>(counters_.delivered) /
                                static_cast<double>(counters_.generated);
    r.delay_per_packet = counters_.delivered == 0
                             ? 0.0
                             : static_cast<double>(counters_.total_delay) /
                                   static_cast<double>(counters_.delivered);
    r.avg_queue_len =
        static_cast<double>(packets_in_queues()) / static_cast<double>(topo_.device_count());
    r.alg_connectivity = algebraic_connectivity(topo_, links_);
    return r;
}

std::vector<MetricsRecord> Simulation::run(
    RoutingPolicy& policy, std::int64_t total_steps, std::int64_t round_length,
    const std::function<void(const MetricsRecord&)>& on_round) {
    if (round_length < 1 || total_steps % round_length != 0)
        throw std::invalid_argument("run: total steps must be a multiple of the round length");
    std::vector<MetricsRecord> records;
    records.reserve(static_cast<std::size_t>(total_steps / round_length));
    for (std::int64_t t = 0; t < total_steps; ++t) {
        step(policy);
        if ((t + 1) % round_length == 0) {
            check_conservation();
            records.push_back(snapshot((t + 1) / round_length));
            if (on_round) on_round(records.back());
        }
    }
    return records;
}

void write_metrics_csv(std::ostream& os, const std::vector<MetricsRecord>& records,
                       const std::string& provenance) {
    if (!provenance.empty()) os << "# " << provenance << '\n';
    os << "round,pct_delivered,delay_per_packet,avg_queue_len,alg_connectivity,"
          "generated,delivered,dropped_full,dropped_ttl\n";
    char buf[128];
    for (const MetricsRecord& r : records) {
        std::snprintf(buf, sizeof(buf), "%lld,%.12g,%.12g,%.12g,%.12g,",
                      static_cast<long long>(r.round), r.pct_delivered, r.delay_per_packet,
                      r.avg_queue_len, r.alg_connectivity);
        os << buf << r.generated << ',' << r.delivered << ',' << r.dropped_full << ','
           << r.dropped_ttl << '\n';
    }
}

std::string metrics_filename(const std::string& scenario, const std::string& policy, int n,
                             std::uint64_t seed) {
    return scenario + "_" + policy + "_" + std::to_string(n) + "_" + std::to_string(seed) + ".csv";
}

}  // namespace qroute
