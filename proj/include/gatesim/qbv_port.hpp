// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "gatesim/engine.hpp"
#include "gatesim/frame.hpp"
#include "gatesim/gcl.hpp"
#include "gatesim/link.hpp"

namespace gatesim {

/// Transmission selection policy of a Qbv port.
///
/// GateOpenAtStart starts a frame whenever its gate is open at the start
/// instant and lets it overrun a closing edge (non-preemptive); the schedule's
/// red guard phases exist to absorb exactly those overruns. LengthAware
/// additionally requires the gate to stay open for the whole serialization
/// time, which is the standard-conformant alternative.
enum class QbvPolicy : std::uint8_t { GateOpenAtStart, LengthAware };

inline std::string to_string(QbvPolicy p) {
    return p == QbvPolicy::GateOpenAtStart ? "gate-open-at-start" : "length-aware";
}

inline QbvPolicy parse_qbv_policy(const std::string& s) {
    if (s == "gate-open-at-start") return QbvPolicy::GateOpenAtStart;
    if (s == "length-aware") return QbvPolicy::LengthAware;
    throw ConfigError("unknown qbv policy '" + s + "'");
}

/// Observed start of one transmission, for invariant checks.
struct TxStart {
    std::string port;
    std::uint8_t pcp;
    SimTime start;
    Duration serialization;
};

/// 802.1Qbv egress stage: eight per-priority FIFO queues in front of one link
/// direction, gated by a cyclic schedule. Strict priority among open gates.
///
/// The port drives itself through engine events: every enqueue, transmission
/// completion, schedule activation and gate-opening wake re-runs the
/// selection. Spurious wakes are harmless; selection is idempotent.
class QbvPort {
public:
    using TxObserver = std::function<void(const TxStart&)>;

    QbvPort(SimEngine& engine, LinkDirection& link, std::string name,
            GateControlList initial, QbvPolicy policy = QbvPolicy::GateOpenAtStart)
        : engine_(&engine), link_(&link), name_(std::move(name)),
          active_(std::move(initial)), policy_(policy) {}

    const std::string& name() const { return name_; }
    QbvPolicy policy() const { return policy_; }
    void set_policy(QbvPolicy p) { policy_ = p; }
    SimTime busy_until() const { return busy_until_; }
    LinkDirection& link() { return *link_; }

    void set_tx_observer(TxObserver obs) { observer_ = std::move(obs); }

    /// Schedule in force at instant t: the pending list once t has reached
    /// its activation boundary, the active one before.
    const GateControlList& effective_gcl(SimTime t) const {
        if (pending_ && t >= pending_->activation) return pending_->list;
        return active_;
    }

    const GateControlList& active_gcl() const { return active_; }
    bool has_pending() const { return pending_.has_value(); }
    std::optional<SimTime> pending_activation() const {
        return pending_ ? std::optional<SimTime>{pending_->activation} : std::nullopt;
    }

    std::uint8_t gate_mask_at(SimTime t) const { return effective_gcl(t).mask_at(t); }

    /// Replace the schedule outright. Launch-time only; runtime changes go
    /// through install() so the boundary-activation rule applies.
    void set_initial(GateControlList gcl) {
        active_ = std::move(gcl);
        pending_.reset();
    }

    /// Swap in a new schedule at the first cycle boundary of the active list
    /// at or after commit_at. Until then the old list governs gating. A second
    /// install before activation replaces the pending list.
    SimTime install(GateControlList next, SimTime commit_at) {
        const SimTime activation = active_.next_cycle_boundary(commit_at);
        next.rebase(activation);
        const std::uint64_t gen = ++pending_gen_;
        pending_ = Pending{std::move(next), activation, gen};
        engine_->schedule(activation, [this, gen] {
            if (pending_ && pending_->gen == gen) {
                active_ = std::move(pending_->list);
                pending_.reset();
            }
            try_select();
        });
        return activation;
    }

    void enqueue(const Frame& frame, SimTime /*now*/) {
        frame.validate();
        queues_[frame.pcp].push_back(frame);
        try_select();
    }

    std::size_t queued_frames() const {
        std::size_t n = 0;
        for (const auto& q : queues_) n += q.size();
        return n;
    }
    std::size_t queue_depth(std::uint8_t pcp) const { return queues_[pcp].size(); }

    /// Selection decision at `now`, assuming the port is idle: either the
    /// priority to transmit next, or the next instant worth re-checking
    /// (nullopt when no queued frame can ever become eligible).
    struct Decision {
        std::optional<std::uint8_t> pcp;
        std::optional<SimTime> retry_at;
    };

    Decision decide(SimTime now) const {
        const GateControlList& gcl = effective_gcl(now);
        const std::uint8_t mask = gcl.mask_at(now);
        for (int p = 7; p >= 0; --p) {
            if (queues_[p].empty()) continue;
            if (!(mask & (1u << p))) continue;
            if (policy_ == QbvPolicy::LengthAware) {
                const Duration need = link_->serialization(queues_[p].front());
                if (!(gcl.always_open(static_cast<std::uint8_t>(p)) ||
                      effective_open_run(static_cast<std::uint8_t>(p), now) >= need)) {
                    continue;
                }
            }
            return Decision{static_cast<std::uint8_t>(p), std::nullopt};
        }
        return Decision{std::nullopt, next_eligible_instant(now)};
    }

private:
    struct Pending {
        GateControlList list;
        SimTime activation;
        std::uint64_t gen;
    };

    /// Continuous open time of gate `pcp` from t, honouring a pending
    /// schedule swap: a run reaching the activation boundary continues only
    /// if the new list keeps the gate open.
    Duration effective_open_run(std::uint8_t pcp, SimTime t) const {
        if (!pending_ || t >= pending_->activation) return effective_gcl(t).open_run(pcp, t);
        const Duration run = active_.open_run(pcp, t);
        if (t + run <= pending_->activation && run < active_.cycle()) return run;
        const Duration until_swap = pending_->activation - t;
        if (run < until_swap) return run;
        return until_swap + pending_->list.open_run(pcp, pending_->activation);
    }

    std::optional<SimTime> next_eligible_instant(SimTime now) const {
        std::optional<SimTime> best;
        const GateControlList& gcl = effective_gcl(now);
        for (int p = 7; p >= 0; --p) {
            if (queues_[p].empty()) continue;
            std::optional<SimTime> cand;
            if (policy_ == QbvPolicy::GateOpenAtStart) {
                cand = gcl.next_open(static_cast<std::uint8_t>(p), now);
            } else {
                cand = la_next_start(gcl, static_cast<std::uint8_t>(p),
                                     link_->serialization(queues_[p].front()), now);
            }
            // A pending swap re-runs selection at activation anyway, so any
            // candidate past the boundary is replaced by the activation wake.
            if (pending_ && now < pending_->activation && (!cand || *cand > pending_->activation)) {
                cand = pending_->activation;
            }
            if (cand && (!best || *cand < *best)) best = cand;
        }
        return best;
    }

    /// Earliest instant >= from where gate `pcp` is open and, counting the
    /// pending swap, stays open for `need` (length-aware start rule).
    std::optional<SimTime> la_next_start(const GateControlList& gcl, std::uint8_t pcp,
                                         Duration need, SimTime from) const {
        SimTime t = from;
        const SimTime horizon = from + gcl.cycle() + gcl.cycle();
        while (t <= horizon) {
            const auto open = gcl.next_open(pcp, t);
            if (!open) return std::nullopt;
            const Duration run = effective_open_run(pcp, *open);
            if (run >= need || gcl.always_open(pcp)) return *open;
            t = *open + run;  // skip to the closing edge, then look again
        }
        return std::nullopt;
    }

    void try_select() {
        const SimTime now = engine_->now();
        if (now < busy_until_) return;  // completion event will re-run this
        const Decision d = decide(now);
        if (d.pcp) {
            start_transmission(*d.pcp, now);
        } else if (d.retry_at) {
            schedule_wake(*d.retry_at);
        }
    }

    void start_transmission(std::uint8_t pcp, SimTime now) {
        Frame frame = std::move(queues_[pcp].front());
        queues_[pcp].pop_front();
        if (!(gate_mask_at(now) & (1u << pcp))) {
            throw ModelFault("port " + name_ + ": transmission start with gate " +
                             std::to_string(pcp) + " closed at " + std::to_string(now.ns) + " ns");
        }
        const Duration ser = link_->serialization(frame);
        if (now < busy_until_) throw ModelFault("port " + name_ + ": busy_until regression");
        busy_until_ = now + ser;
        if (observer_) observer_(TxStart{name_, pcp, now, ser});
        link_->transmit(frame, now);
        engine_->schedule(busy_until_, [this] { try_select(); });
    }

    void schedule_wake(SimTime at) {
        if (wake_at_ && *wake_at_ <= at) return;
        wake_at_ = at;
        engine_->schedule(at, [this, at] {
            if (wake_at_ && *wake_at_ == at) wake_at_.reset();
            try_select();
        });
    }

    SimEngine* engine_;
    LinkDirection* link_;
    std::string name_;
    GateControlList active_;
    std::optional<Pending> pending_;
    std::uint64_t pending_gen_{0};
    QbvPolicy policy_;
    SimTime busy_until_{};
    std::optional<SimTime> wake_at_;
    std::array<std::deque<Frame>, 8> queues_;
    TxObserver observer_;
};

} // namespace gatesim
