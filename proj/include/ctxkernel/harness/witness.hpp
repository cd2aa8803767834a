#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctxkernel/errors.hpp"
#include "ctxkernel/simcore/counts.hpp"

namespace ctxk::harness {

namespace detail {

inline std::size_t bit_position(const std::vector<std::string>& bit_order,
                                const std::string& label) {
    for (std::size_t i = 0; i < bit_order.size(); ++i)
        if (bit_order[i] == label)
            return i;
    throw invalid_observable_error("witness: bit label '" + label + "' not measured");
}

// p(bit = 0) - p(bit = 1) over a weighted outcome map
template <typename Map>
inline double marginal_pm(const Map& weights, std::size_t pos, double total) {
    double acc = 0.0;
    for (const auto& [key, w] : weights)
        acc += (key[pos] == '0') ? static_cast<double>(w) : -static_cast<double>(w);
    return acc / total;
}

} // namespace detail

// E_X,mean = ( <X_A> + <X_B> ) / 2 from X-basis readout marginals, with
// <X> = p(0) - p(1) in the rotated frame.
inline double ex_mean_witness(const simcore::CountsTable& counts, const std::string& a_label,
                              const std::string& b_label) {
    if (counts.total_shots == 0)
        throw undefined_estimate_error("ex_mean_witness: zero shots");
    const double n = static_cast<double>(counts.total_shots);
    std::size_t ia = detail::bit_position(counts.bit_order, a_label);
    std::size_t ib = detail::bit_position(counts.bit_order, b_label);
    return 0.5 * (detail::marginal_pm(counts.counts, ia, n) +
                  detail::marginal_pm(counts.counts, ib, n));
}

inline double ex_mean_witness(const simcore::OutcomeDistribution& dist,
                              const std::string& a_label, const std::string& b_label) {
    double total = 0.0;
    for (const auto& [key, p] : dist.probs)
        total += p;
    if (total <= 0.0)
        throw undefined_estimate_error("ex_mean_witness: empty distribution");
    std::size_t ia = detail::bit_position(dist.bit_order, a_label);
    std::size_t ib = detail::bit_position(dist.bit_order, b_label);
    return 0.5 *
           (detail::marginal_pm(dist.probs, ia, total) + detail::marginal_pm(dist.probs, ib, total));
}

struct WitnessResult {
    double e_even = 0.0;
    double e_odd = 0.0;
    double delta_e = 0.0;
    std::vector<double> per_lane_values;
    double sem = 0.0;
};

// One lane/replicate pair of class-resolved witness means.
struct LaneWitness {
    int lane = 0;
    int replicate = 0;
    double e_even = 0.0;
    double e_odd = 0.0;
};

inline LaneWitness make_lane_witness(int lane, int replicate, std::optional<double> e_even,
                                     std::optional<double> e_odd) {
    if (!e_even || !e_odd)
        throw incomplete_design_error("lane " + std::to_string(lane) + " replicate R" +
                                      std::to_string(replicate) +
                                      " is missing a parity class");
    return {lane, replicate, *e_even, *e_odd};
}

// Lane-balanced estimate: replicates are averaged within a lane, lane deltas
// are averaged across lanes, and the spread across lanes gives the SEM.
inline WitnessResult lane_balanced_delta(std::span<const LaneWitness> observations) {
    if (observations.empty())
        throw incomplete_design_error("lane_balanced_delta: no observations");
    struct Acc {
        double even = 0.0, odd = 0.0;
        int n = 0;
    };
    std::map<int, Acc> lanes;
    for (const LaneWitness& w : observations) {
        Acc& a = lanes[w.lane];
        a.even += w.e_even;
        a.odd += w.e_odd;
        a.n += 1;
    }

    WitnessResult out;
    double even_sum = 0.0, odd_sum = 0.0;
    for (const auto& [lane, acc] : lanes) {
        double even = acc.even / acc.n;
        double odd = acc.odd / acc.n;
        even_sum += even;
        odd_sum += odd;
        out.per_lane_values.push_back(even - odd);
    }
    const double L = static_cast<double>(lanes.size());
    out.e_even = even_sum / L;
    out.e_odd = odd_sum / L;
    out.delta_e = out.e_even - out.e_odd;
    if (lanes.size() > 1) {
        double mean = out.delta_e;
        double ss = 0.0;
        for (double v : out.per_lane_values)
            ss += (v - mean) * (v - mean);
        out.sem = std::sqrt(ss / (L - 1.0)) / std::sqrt(L);
    }
    return out;
}

// fraction of shots whose measured context equals the prepared triple
inline double ctx_ok_fraction(const simcore::CountsTable& counts,
                              const std::string& prepared_triple) {
    if (counts.total_shots == 0)
        throw undefined_estimate_error("ctx_ok_fraction: zero shots");
    auto it = counts.counts.find(prepared_triple);
    std::uint64_t good = it == counts.counts.end() ? 0 : it->second;
    return static_cast<double>(good) / static_cast<double>(counts.total_shots);
}

} // namespace ctxk::harness
