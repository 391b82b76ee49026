// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gatesim/time.hpp"

namespace gatesim {

/// One delivered data frame, as the sink saw it.
struct LatencyRecord {
    std::string flow_id;
    std::uint64_t seq{0};
    SimTime send_time{};
    SimTime recv_time{};

    Duration latency() const { return recv_time - send_time; }
};

/// Append-only arrival trace. Rows are appended in delivery order, which on a
/// single sink link is receive order.
class TraceRecorder {
public:
    void record(std::string flow_id, std::uint64_t seq, SimTime send, SimTime recv) {
        if (recv < send) throw ModelFault("trace record with recv_time before send_time");
        rows_.push_back({std::move(flow_id), seq, send, recv});
    }

    const std::vector<LatencyRecord>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    std::string to_csv() const {
        std::string out = "flow_id,seq,send_ns,recv_ns,latency_ns\n";
        for (const auto& r : rows_) {
            out += r.flow_id + "," + std::to_string(r.seq) + "," + std::to_string(r.send_time.ns) +
                   "," + std::to_string(r.recv_time.ns) + "," +
                   std::to_string(r.latency().ns) + "\n";
        }
        return out;
    }

private:
    std::vector<LatencyRecord> rows_;
};

/// Parse a trace CSV produced by TraceRecorder::to_csv (the report tool reads
/// these back).
inline std::vector<LatencyRecord> parse_trace_csv(const std::string& text) {
    std::vector<LatencyRecord> out;
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        const std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line != "flow_id,seq,send_ns,recv_ns,latency_ns") {
                throw ConfigError("unexpected trace CSV header: " + line);
            }
            continue;
        }
        std::vector<std::string> fields;
        std::size_t fpos = 0;
        while (fpos <= line.size()) {
            const auto comma = line.find(',', fpos);
            fields.push_back(line.substr(
                fpos, comma == std::string::npos ? std::string::npos : comma - fpos));
            if (comma == std::string::npos) break;
            fpos = comma + 1;
        }
        if (fields.size() != 5) throw ConfigError("bad trace CSV row: " + line);
        LatencyRecord r;
        r.flow_id = fields[0];
        r.seq = std::stoull(fields[1]);
        r.send_time = SimTime{std::stoll(fields[2])};
        r.recv_time = SimTime{std::stoll(fields[3])};
        if ((r.recv_time - r.send_time).ns != std::stoll(fields[4])) {
            throw ConfigError("trace CSV row latency mismatch: " + line);
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace gatesim
