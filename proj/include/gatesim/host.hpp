// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gatesim/engine.hpp"
#include "gatesim/frame.hpp"
#include "gatesim/link.hpp"
#include "gatesim/random.hpp"
#include "gatesim/trace.hpp"

namespace gatesim {

/// One periodic (optionally jittered) frame generator bound to a host.
struct SourceConfig {
    std::string flow_id;
    std::uint8_t pcp{0};
    std::uint32_t wire_size{64};
    Duration period{};
    Duration jitter_stddev{};  // 0 = strictly periodic, no RNG draws at all
    SimTime start_at{};
    Duration offset{};         // shift of the first send relative to start_at
    MacAddress dst_mac;

    void check_valid() const {
        if (period.ns <= 0) throw ConfigError("traffic source period must be > 0");
        if (start_at.ns < 0) throw ConfigError("traffic source start_at must be >= 0");
        if (jitter_stddev.ns < 0) throw ConfigError("traffic source jitter must be >= 0");
    }
};

/// Stream-reservation talker role: announce the stream, then (separately
/// scheduled as a SourceConfig) send its data frames.
struct TalkerConfig {
    std::string stream_id;
    MacAddress dst_mac;
    std::uint8_t pcp{0};
    std::uint32_t max_frame_size{64};
    Duration interval{};
    SimTime advertise_at{};
};

/// Stream-reservation listener role: answer a talker advertise for one of the
/// subscribed streams with a listener-ready after reply_delay.
struct ListenerConfig {
    std::string stream_id;
    Duration reply_delay{};
};

/// An end station: a FIFO NIC feeding one uplink, traffic sources, optional
/// SRP roles, and (for the sink) the arrival recorder.
class Host {
public:
    Host(SimEngine& engine, std::string id, MacAddress mac, bool is_sink = false)
        : engine_(&engine), id_(std::move(id)), mac_(mac), is_sink_(is_sink) {}

    const std::string& id() const { return id_; }
    MacAddress mac() const { return mac_; }
    bool is_sink() const { return is_sink_; }

    void attach_nic(LinkDirection& uplink) { nic_ = &uplink; }
    void set_trace(TraceRecorder* trace) { trace_ = trace; }

    void add_source(SourceConfig cfg, RngStream rng) {
        cfg.check_valid();
        if (cfg.flow_id.empty()) cfg.flow_id = id_;
        sources_.push_back(Source{std::move(cfg), rng, 0});
    }

    void add_talker(TalkerConfig cfg) { talkers_.push_back(std::move(cfg)); }
    void add_listener(ListenerConfig cfg) {
        listeners_.emplace(cfg.stream_id, cfg);
    }

    /// Schedule every first send. Call once, before the run.
    void start() {
        for (std::size_t i = 0; i < sources_.size(); ++i) {
            schedule_send(i, sources_[i].cfg.start_at + sources_[i].cfg.offset);
        }
        for (const auto& t : talkers_) {
            engine_->schedule(t.advertise_at, [this, t] { send_advertise(t); });
        }
    }

    /// Frame handed up by the attached switch-to-host link direction.
    void deliver(const Frame& frame) {
        if (frame.srp) {
            on_srp(frame);
            return;
        }
        if (is_sink_ && trace_) {
            trace_->record(frame.flow_id, frame.seq, frame.created_at, engine_->now());
            ++recorded_;
        } else {
            ++absorbed_;
        }
    }

    std::uint64_t sent() const { return sent_; }
    std::uint64_t absorbed() const { return absorbed_; }
    std::uint64_t recorded() const { return recorded_; }
    std::size_t tx_backlog() const { return txq_.size(); }

private:
    struct Source {
        SourceConfig cfg;
        RngStream rng;
        std::uint64_t seq;
    };

    void schedule_send(std::size_t idx, SimTime at) {
        engine_->schedule(at, [this, idx, at] {
            Source& s = sources_[idx];
            Frame f;
            f.src_mac = mac_;
            f.dst_mac = s.cfg.dst_mac;
            f.pcp = s.cfg.pcp;
            f.wire_size = s.cfg.wire_size;
            f.flow_id = s.cfg.flow_id;
            f.seq = s.seq++;
            f.created_at = at;
            enqueue_tx(std::move(f));
            const Duration gap = s.cfg.jitter_stddev.ns == 0
                                     ? s.cfg.period
                                     : gaussian(s.rng, s.cfg.period, s.cfg.jitter_stddev);
            schedule_send(idx, at + gap);
        });
    }

    void send_advertise(const TalkerConfig& t) {
        Frame f;
        f.src_mac = mac_;
        f.dst_mac = t.dst_mac;
        f.ethertype = kSrpEthertype;
        f.pcp = t.pcp;
        f.wire_size = Frame::kMinWireSize;
        f.flow_id = id_ + ":srp";
        f.created_at = engine_->now();
        f.srp = SrpMessage{SrpKind::TalkerAdvertise, t.stream_id, t.dst_mac,
                           t.pcp, t.max_frame_size, t.interval};
        enqueue_tx(std::move(f));
    }

    void on_srp(const Frame& frame) {
        ++absorbed_;
        const SrpMessage& msg = *frame.srp;
        if (msg.kind != SrpKind::TalkerAdvertise) return;  // talkers just observe the ready
        auto it = listeners_.find(msg.stream_id);
        if (it == listeners_.end()) return;
        const ListenerConfig cfg = it->second;
        const SrpMessage stream = msg;
        const MacAddress talker_mac = frame.src_mac;
        engine_->schedule_after(cfg.reply_delay, [this, stream, talker_mac] {
            Frame f;
            f.src_mac = mac_;
            f.dst_mac = talker_mac;
            f.ethertype = kSrpEthertype;
            f.pcp = stream.pcp;
            f.wire_size = Frame::kMinWireSize;
            f.flow_id = id_ + ":srp";
            f.created_at = engine_->now();
            f.srp = SrpMessage{SrpKind::ListenerReady, stream.stream_id, stream.dst_mac,
                               stream.pcp, stream.max_frame_size, stream.interval};
            enqueue_tx(std::move(f));
        });
    }

    void enqueue_tx(Frame f) {
        txq_.push_back(std::move(f));
        pump();
    }

    void pump() {
        if (txq_.empty() || !nic_) return;
        const SimTime now = engine_->now();
        if (now < nic_->busy_until()) return;  // completion callback pumps again
        Frame f = std::move(txq_.front());
        txq_.pop_front();
        ++sent_;
        const SimTime done = nic_->transmit(f, now);
        engine_->schedule(done, [this] { pump(); });
    }

    SimEngine* engine_;
    std::string id_;
    MacAddress mac_;
    bool is_sink_;
    LinkDirection* nic_{nullptr};
    TraceRecorder* trace_{nullptr};
    std::vector<Source> sources_;
    std::vector<TalkerConfig> talkers_;
    std::map<std::string, ListenerConfig> listeners_;
    std::deque<Frame> txq_;
    std::uint64_t sent_{0};
    std::uint64_t absorbed_{0};
    std::uint64_t recorded_{0};
};

} // namespace gatesim
