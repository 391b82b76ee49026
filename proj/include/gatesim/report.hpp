// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gatesim/time.hpp"
#include "gatesim/trace.hpp"

namespace gatesim {

/// Latency statistics of one flow inside one half-open receive-time interval.
struct IntervalStats {
    SimTime begin{};
    SimTime end{SimTime::max()};
    std::uint64_t count{0};
    Duration min{};
    Duration max{};
    std::int64_t latency_sum_ns{0};

    Duration mean() const {
        if (count == 0) return Duration{0};
        return Duration{(latency_sum_ns + static_cast<std::int64_t>(count) / 2) /
                        static_cast<std::int64_t>(count)};
    }
};

struct FlowReport {
    std::string flow_id;
    std::vector<IntervalStats> intervals;
};

inline std::vector<SimTime> default_cuts() {
    return {SimTime{2'000'000'000}, SimTime{4'000'000'000}, SimTime{6'000'000'000},
            SimTime{8'000'000'000}};
}

/// Partition rows by receive time at `cuts` and aggregate per flow. Rows
/// received within `settle` of an interval's start are excluded from the
/// statistics (reconfiguration instants drain one old-schedule cycle; the
/// settle window keeps steady-state checks honest). settle 0 keeps all rows.
inline std::vector<FlowReport> interval_report(const std::vector<LatencyRecord>& rows,
                                               std::vector<SimTime> cuts,
                                               Duration settle = Duration{0}) {
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<IntervalStats> templ;
    SimTime begin{0};
    for (const SimTime c : cuts) {
        if (c <= begin && !(templ.empty() && c.ns == 0)) continue;
        IntervalStats s;
        s.begin = begin;
        s.end = c;
        templ.push_back(s);
        begin = c;
    }
    IntervalStats last;
    last.begin = begin;
    templ.push_back(last);

    std::map<std::string, std::vector<IntervalStats>> per_flow;
    for (const auto& r : rows) {
        auto [it, fresh] = per_flow.try_emplace(r.flow_id, templ);
        auto& intervals = it->second;
        for (auto& iv : intervals) {
            if (r.recv_time < iv.begin || r.recv_time >= iv.end) continue;
            if (r.recv_time < iv.begin + settle) break;  // inside the settle window
            const Duration lat = r.latency();
            if (iv.count == 0) {
                iv.min = lat;
                iv.max = lat;
            } else {
                if (lat < iv.min) iv.min = lat;
                if (iv.max < lat) iv.max = lat;
            }
            ++iv.count;
            iv.latency_sum_ns += lat.ns;
            break;
        }
    }

    std::vector<FlowReport> out;
    for (auto& [flow, intervals] : per_flow) {
        out.push_back({flow, std::move(intervals)});
    }
    return out;
}

inline const IntervalStats* find_interval(const std::vector<FlowReport>& report,
                                          const std::string& flow, std::size_t index) {
    for (const auto& f : report) {
        if (f.flow_id != flow) continue;
        if (index >= f.intervals.size()) return nullptr;
        return &f.intervals[index];
    }
    return nullptr;
}

inline std::string render_report(const std::vector<FlowReport>& report) {
    std::string out;
    for (const auto& f : report) {
        for (const auto& iv : f.intervals) {
            out += "flow " + f.flow_id + " interval [" + std::to_string(iv.begin.ns) + ",";
            out += iv.end == SimTime::max() ? "inf" : std::to_string(iv.end.ns);
            out += ") count=" + std::to_string(iv.count);
            if (iv.count > 0) {
                out += " min_ns=" + std::to_string(iv.min.ns) +
                       " mean_ns=" + std::to_string(iv.mean().ns) +
                       " max_ns=" + std::to_string(iv.max.ns);
            }
            out += "\n";
        }
    }
    return out;
}

} // namespace gatesim
