// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "gatesim/engine.hpp"
#include "gatesim/frame.hpp"
#include "gatesim/time.hpp"

namespace gatesim {

/// Time a frame occupies the wire: wire_size * 8 / bitrate, rounded to the
/// nearest nanosecond. Deliberately bare serialization: no preamble, SFD or
/// interframe gap, so 1522 B at 100 Mbit/s is exactly 121.76 us.
inline Duration serialization_time(std::uint32_t wire_size_bytes, std::uint64_t bitrate_bps) {
    if (wire_size_bytes == 0) throw ModelFault("serialization_time: zero wire size");
    if (bitrate_bps == 0) throw ModelFault("serialization_time: zero bitrate");
    const std::uint64_t bits_times_ns = static_cast<std::uint64_t>(wire_size_bytes) * 8ULL * 1000000000ULL;
    return Duration{static_cast<std::int64_t>((bits_times_ns + bitrate_bps / 2) / bitrate_bps)};
}

/// One direction of a full-duplex link. Store-and-forward: the receiver gets
/// the complete frame at start + serialization + propagation. The sender side
/// (host NIC or Qbv port) is responsible for keeping the direction idle;
/// overlapping transmissions are a model fault, not a recoverable error.
class LinkDirection {
public:
    using DeliverFn = std::function<void(const Frame&)>;

    LinkDirection(SimEngine& engine, std::string label, std::uint64_t bitrate_bps,
                  Duration propagation_delay = Duration{0})
        : engine_(&engine), label_(std::move(label)), bitrate_(bitrate_bps),
          propagation_(propagation_delay) {
        if (bitrate_ == 0) throw ModelFault("link " + label_ + ": bitrate must be > 0");
    }

    void connect(DeliverFn deliver) { deliver_ = std::move(deliver); }

    std::uint64_t bitrate() const { return bitrate_; }
    Duration propagation_delay() const { return propagation_; }
    const std::string& label() const { return label_; }

    Duration serialization(const Frame& f) const { return serialization_time(f.wire_size, bitrate_); }

    /// Occupy the wire for [start, start + serialization) and schedule the
    /// full-frame delivery at the far end. Returns the delivery time.
    SimTime transmit(const Frame& frame, SimTime start) {
        if (start < last_end_) {
            throw ModelFault("link " + label_ + ": transmission at " + std::to_string(start.ns) +
                             " ns overlaps previous one ending " + std::to_string(last_end_.ns) + " ns");
        }
        const SimTime end = start + serialization(frame);
        const SimTime delivery = end + propagation_;
        last_end_ = end;
        in_flight_++;
        engine_->schedule(delivery, [this, frame] {
            in_flight_--;
            if (deliver_) deliver_(frame);
        });
        return delivery;
    }

    SimTime busy_until() const { return last_end_; }
    std::uint64_t in_flight() const { return in_flight_; }

private:
    SimEngine* engine_;
    std::string label_;
    std::uint64_t bitrate_;
    Duration propagation_;
    SimTime last_end_{};
    std::uint64_t in_flight_{0};
    DeliverFn deliver_;
};

} // namespace gatesim
