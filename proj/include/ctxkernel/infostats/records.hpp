#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ctxkernel/errors.hpp"
#include "ctxkernel/infostats/distribution.hpp"
#include "ctxkernel/infostats/entropy.hpp"
#include "ctxkernel/simcore/counts.hpp"

namespace ctxk::infostats {

// One measured shot with its analysis labels. `outcome` follows the owning
// RecordSet's bit_order.
struct ShotRecord {
    std::int32_t lane = 0;
    std::string circuit;
    std::int8_t label = 0; // parity class assignment
    std::string outcome;
};

struct RecordSet {
    std::vector<std::string> bit_order;
    std::vector<ShotRecord> records;

    std::size_t position_of(const std::string& bit_label) const {
        for (std::size_t i = 0; i < bit_order.size(); ++i)
            if (bit_order[i] == bit_label)
                return i;
        throw invalid_query_error("RecordSet: unknown bit label '" + bit_label + "'");
    }

    // CSV columns: lane,circuit,label,outcome
    std::string to_csv() const {
        std::ostringstream out;
        out << "# bit_order=";
        for (std::size_t i = 0; i < bit_order.size(); ++i)
            out << (i ? "," : "") << bit_order[i];
        out << "\nlane,circuit,label,outcome\n";
        for (const ShotRecord& r : records)
            out << r.lane << ',' << r.circuit << ',' << int(r.label) << ',' << r.outcome << '\n';
        return out.str();
    }

    static RecordSet from_csv(const std::string& text) {
        RecordSet rs;
        std::istringstream in(text);
        std::string line;
        bool header_seen = false;
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            if (line.rfind("# bit_order=", 0) == 0) {
                std::istringstream fields(line.substr(12));
                std::string f;
                while (std::getline(fields, f, ','))
                    rs.bit_order.push_back(f);
                continue;
            }
            if (!header_seen) {
                if (line != "lane,circuit,label,outcome")
                    throw invalid_query_error("records CSV: unexpected header '" + line + "'");
                header_seen = true;
                continue;
            }
            std::istringstream fields(line);
            std::string lane, circuit, label, outcome;
            if (!std::getline(fields, lane, ',') || !std::getline(fields, circuit, ',') ||
                !std::getline(fields, label, ',') || !std::getline(fields, outcome, ','))
                throw invalid_query_error("records CSV: malformed row '" + line + "'");
            ShotRecord r;
            r.lane = std::stoi(lane);
            r.circuit = circuit;
            r.label = static_cast<std::int8_t>(std::stoi(label));
            r.outcome = outcome;
            rs.records.push_back(std::move(r));
        }
        return rs;
    }
};

// Joint distribution over the label plus selected outcome bits. The label
// occupies position `y_name` in the resulting variables.
inline JointDist joint_from_records(const RecordSet& rs, const std::string& y_name,
                                    std::span<const std::string> outcome_vars) {
    if (rs.records.empty())
        throw invalid_query_error("joint_from_records: no records");
    std::vector<std::size_t> pos;
    pos.reserve(outcome_vars.size());
    for (const auto& v : outcome_vars)
        pos.push_back(rs.position_of(v));

    JointDist d;
    d.labels.push_back(y_name);
    d.labels.insert(d.labels.end(), outcome_vars.begin(), outcome_vars.end());
    d.n = static_cast<double>(rs.records.size());
    const double w = 1.0 / d.n;
    std::string key(1 + outcome_vars.size(), '0');
    for (const ShotRecord& r : rs.records) {
        key[0] = char('0' + r.label);
        for (std::size_t i = 0; i < pos.size(); ++i)
            key[1 + i] = r.outcome[pos[i]];
        d.mass[key] += w;
    }
    return d;
}

using RecordStatistic = std::function<double(const RecordSet&)>;

namespace detail {

inline double pm(char bit) { return bit == '0' ? 1.0 : -1.0; }

} // namespace detail

// (1/L) sum_lane [ E(even) - E(odd) ] of the mean probe marginal
// 0.5 (<X_A> + <X_B>), computed from the labeled records.
inline double lane_balanced_delta_from_records(const RecordSet& rs, const std::string& a_bit,
                                               const std::string& b_bit) {
    const std::size_t ia = rs.position_of(a_bit);
    const std::size_t ib = rs.position_of(b_bit);
    struct Acc {
        double sum[2] = {0.0, 0.0};
        std::size_t cnt[2] = {0, 0};
    };
    std::map<std::int32_t, Acc> lanes;
    for (const ShotRecord& r : rs.records) {
        Acc& acc = lanes[r.lane];
        int cls = r.label ? 1 : 0;
        acc.sum[cls] += 0.5 * (detail::pm(r.outcome[ia]) + detail::pm(r.outcome[ib]));
        acc.cnt[cls] += 1;
    }
    double total = 0.0;
    std::size_t n_lanes = 0;
    for (const auto& [lane, acc] : lanes) {
        if (acc.cnt[0] == 0 || acc.cnt[1] == 0)
            throw incomplete_design_error("lane " + std::to_string(lane) +
                                          " is missing a parity class");
        total += acc.sum[0] / static_cast<double>(acc.cnt[0]) -
                 acc.sum[1] / static_cast<double>(acc.cnt[1]);
        ++n_lanes;
    }
    return total / static_cast<double>(n_lanes);
}

// Named statistics usable from plans and the CLI.
inline RecordStatistic make_named_statistic(const std::string& name) {
    if (name == "lane_balanced_delta_e")
        return [](const RecordSet& rs) { return lane_balanced_delta_from_records(rs, "A", "B"); };
    if (name == "abs_lane_balanced_delta_e")
        return [](const RecordSet& rs) {
            return std::abs(lane_balanced_delta_from_records(rs, "A", "B"));
        };
    if (name == "mi_label_probe")
        return [](const RecordSet& rs) {
            std::vector<std::string> ab{"A", "B"};
            JointDist d = joint_from_records(rs, "Y", ab);
            std::vector<std::string> y{"Y"};
            return mutual_information(d, y, ab, false).raw_bits;
        };
    throw invalid_query_error("unknown statistic '" + name + "'");
}

} // namespace ctxk::infostats
