// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "gatesim/time.hpp"

namespace gatesim {

/// One queued action. Total execution order is (fire_at, seq): the insertion
/// counter breaks ties between events scheduled for the same instant, so
/// simultaneous arrivals on different ports replay identically every run.
struct Event {
    SimTime fire_at;
    std::uint64_t seq{0};
    std::function<void()> action;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
        return a.seq > b.seq;
    }
};

/// Single-threaded discrete-event core: virtual clock plus ordered queue.
/// Not shared across threads; parallelism, if any, is whole runs in
/// independent processes.
class SimEngine {
public:
    SimTime now() const { return now_; }

    /// True once any event has executed or run_until() has been called.
    bool started() const { return started_; }

    /// Queue an action at `at`. Scheduling into the past is a hard fault.
    void schedule(SimTime at, std::function<void()> action) {
        if (at < now_) {
            throw ModelFault("schedule: fire_at " + std::to_string(at.ns) +
                             " ns is before current time " + std::to_string(now_.ns) + " ns");
        }
        queue_.push(Event{at, next_seq_++, std::move(action)});
    }

    void schedule_after(Duration delay, std::function<void()> action) {
        schedule(now_ + delay, std::move(action));
    }

    /// Execute every event with fire_at <= t_end in (fire_at, seq) order,
    /// then set the clock to t_end. Calling again with the same bound is a
    /// no-op unless new events were queued in between.
    void run_until(SimTime t_end) {
        started_ = true;
        while (!queue_.empty() && queue_.top().fire_at <= t_end) {
            Event ev = queue_.top();
            queue_.pop();
            now_ = ev.fire_at;
            executed_++;
            ev.action();
        }
        if (t_end > now_) now_ = t_end;
    }

    /// An offset from the epoch names the same instant.
    void run_until(Duration since_epoch) { run_until(SimTime{since_epoch.ns}); }

    std::uint64_t executed_events() const { return executed_; }
    std::size_t pending_events() const { return queue_.size(); }

private:
    SimTime now_{};
    std::uint64_t next_seq_{0};
    std::uint64_t executed_{0};
    bool started_{false};
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
};

} // namespace gatesim
