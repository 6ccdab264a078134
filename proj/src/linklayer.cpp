/*
 *    Copyright 2026 The Awdl Engine Authors. All Rights Reserved.
 *
 *    Licensed under the Apache License, Version 2.0 (the "License");
 *    you may not use this file except in compliance with the License.
 *    You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 *    Unless required by applicable law or agreed to in writing, software
 *    distributed under the License is distributed on an "AS IS" BASIS,
 *    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *    See the License for the specific language governing permissions and
 *    limitations under the License.
 */

#include "awdl/linklayer.hpp"

#include <algorithm>

namespace awdl {

Result<std::optional<LinkFrame>> LoopbackPort::recv() {
    if (closed_) return Err::PortClosed;
    if (queue_.empty()) return std::optional<LinkFrame>{};
    LinkFrame f = std::move(queue_.front());
    queue_.pop_front();
    return std::optional<LinkFrame>(std::move(f));
}

Status LoopbackPort::send(const LinkFrame& f) {
    if (closed_) return Err::PortClosed;
    queue_.push_back(f);
    return ok_status();
}

double sim_uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

SimChannel::SimChannel(SimChannelConfig cfg) : cfg_(cfg), rng_(cfg.rng_seed) {}

SimNodeId SimChannel::register_node() { return node_count_++; }

void SimChannel::set_blocked(SimNodeId a, SimNodeId b, bool blocked) {
    auto key = std::minmax(a, b);
    if (blocked)
        blocked_.insert(key);
    else
        blocked_.erase(key);
}

Status SimChannel::send(SimNodeId from, const LinkFrame& f) {
    if (from >= node_count_) return Err::UnknownNode;
    ++frames_sent_;
    if (on_transmit) on_transmit(f);
    for (SimNodeId node = 0; node < node_count_; ++node) {
        if (node == from) continue;
        if (blocked_.count(std::minmax(from, node))) continue;
        if (sim_uniform01(rng_) < cfg_.loss_probability) continue;
        Pending p;
        p.at = f.timestamp + cfg_.propagation_delay;
        p.node = node;
        p.seq = next_seq_++;
        p.frame = f;
        p.frame.timestamp = p.at;
        pending_.push_back(std::move(p));
    }
    return ok_status();
}

std::vector<SimDelivery> SimChannel::advance(TimeMicros until) {
    std::vector<Pending> due;
    std::vector<Pending> rest;
    for (auto& p : pending_) {
        (p.at <= until ? due : rest).push_back(std::move(p));
    }
    pending_ = std::move(rest);
    std::sort(due.begin(), due.end(), [](const Pending& a, const Pending& b) {
        if (a.at != b.at) return a.at < b.at;
        if (a.node != b.node) return a.node < b.node;
        return a.seq < b.seq;
    });
    std::vector<SimDelivery> out;
    out.reserve(due.size());
    for (auto& p : due) out.push_back(SimDelivery{p.node, std::move(p.frame)});
    return out;
}

std::optional<TimeMicros> SimChannel::next_delivery_time() const {
    std::optional<TimeMicros> t;
    for (const auto& p : pending_)
        if (!t || p.at < *t) t = p.at;
    return t;
}

Result<std::optional<LinkFrame>> SimPort::recv() {
    if (inbox_.empty()) return std::optional<LinkFrame>{};
    LinkFrame f = std::move(inbox_.front());
    inbox_.pop_front();
    return std::optional<LinkFrame>(std::move(f));
}

Status SimPort::send(const LinkFrame& f) { return channel_.send(id_, f); }

}  // namespace awdl
