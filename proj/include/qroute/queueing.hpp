/*
 * queueing.hpp
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

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qroute/traffic.hpp"

namespace qroute {

/// Finite FIFO packet buffer with a per-destination occupancy count (the
/// differential-backlog quantity). Order of items is arrival order; index 0
/// is the head.
class DeviceQueue {
public:
    DeviceQueue(std::size_t capacity, std::size_t n_devices)
        : cap_(capacity), per_dest_(n_devices, 0) {}

    std::size_t size() const { return buf_.size(); }
    std::size_t capacity() const { return cap_; }
    bool full() const { return buf_.size() >= cap_; }
    bool empty() const { return buf_.empty(); }

    const Packet& at(std::size_t i) const { return buf_[i]; }
    Packet& at(std::size_t i) { return buf_[i]; }
    const std::vector<Packet>& items() const { return buf_; }

    /// Packets queued for destination d.
    int count_to(DeviceId d) const { return per_dest_[d]; }

    void push(Packet p) {
        if (full()) throw std::logic_error("queue overflow: capacity checked by caller");
        ++per_dest_[p.dst];
        buf_.push_back(p);
    }

    /// Removes and returns the packet at index i, preserving order.
    Packet take(std::size_t i) {
        Packet p = buf_.at(i);
        --per_dest_[p.dst];
        buf_.erase(buf_.begin() + static_cast<std::ptrdiff_t>(i));
        return p;
    }

    /// Recounts the per-destination tallies; used by invariant checks.
    bool counts_consistent() const {
        std::vector<int> fresh(per_dest_.size(), 0);
        for (const Packet& p : buf_) ++fresh[p.dst];
        return fresh == per_dest_;
    }

private:
    std::vector<Packet> buf_;
    std::size_t cap_;
    std::vector<int> per_dest_;
};

}  // namespace qroute
