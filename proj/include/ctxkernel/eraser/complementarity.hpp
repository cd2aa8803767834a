#pragma once

#include <cmath>
#include <map>
#include <string>

#include "ctxkernel/errors.hpp"
#include "ctxkernel/simcore/counts.hpp"

namespace ctxk::eraser {

// Total variation distance between the marker readout distributions
// conditioned on the two probe branches. Inputs are outcome -> weight maps;
// each side is normalized internally.
inline double distinguishability(const std::map<std::string, double>& marker_given_a,
                                 const std::map<std::string, double>& marker_given_b) {
    double na = 0.0, nb = 0.0;
    for (const auto& [k, w] : marker_given_a)
        na += w;
    for (const auto& [k, w] : marker_given_b)
        nb += w;
    if (na <= 0.0 || nb <= 0.0)
        throw undefined_distinguishability_error(
            "distinguishability: a probe branch has no marker outcomes");
    double tv = 0.0;
    std::map<std::string, double> keys;
    for (const auto& [k, w] : marker_given_a)
        keys[k] += 0.0;
    for (const auto& [k, w] : marker_given_b)
        keys[k] += 0.0;
    for (const auto& [k, unused] : keys) {
        auto ia = marker_given_a.find(k);
        auto ib = marker_given_b.find(k);
        double pa = ia == marker_given_a.end() ? 0.0 : ia->second / na;
        double pb = ib == marker_given_b.end() ? 0.0 : ib->second / nb;
        tv += std::abs(pa - pb);
    }
    return 0.5 * tv;
}

struct ComplementarityRecord {
    double lambda = 0.0;
    double v = 0.0;
    double d = 0.0;
    double sum_sq = 0.0;
    double tol = 0.0;
    bool bound_ok = false;
};

// V^2 + D^2 <= 1 within the stated tolerance.
inline ComplementarityRecord complementarity_check(double v, double d, double tol,
                                                   double lambda = 0.0) {
    ComplementarityRecord rec;
    rec.lambda = lambda;
    rec.v = v;
    rec.d = d;
    rec.tol = tol;
    rec.sum_sq = v * v + d * d;
    rec.bound_ok = rec.sum_sq <= 1.0 + tol;
    return rec;
}

// <XXX> over the three register bits of an X-basis readout: the mean outcome
// parity in +-1 convention.
template <typename Map>
inline double parity_expectation(const Map& weights, std::size_t i0, std::size_t i1,
                                 std::size_t i2, double total) {
    double acc = 0.0;
    for (const auto& [key, w] : weights) {
        int ones = (key[i0] == '1') + (key[i1] == '1') + (key[i2] == '1');
        acc += (ones & 1) ? -static_cast<double>(w) : static_cast<double>(w);
    }
    return acc / total;
}

inline double tag_observable_c3(const simcore::CountsTable& counts) {
    if (counts.total_shots == 0)
        throw undefined_estimate_error("tag_observable_c3: zero shots");
    if (counts.bit_order.size() < 3)
        throw invalid_observable_error("tag_observable_c3: needs three register bits");
    return parity_expectation(counts.counts, 0, 1, 2,
                              static_cast<double>(counts.total_shots));
}

inline double tag_observable_c3(const simcore::OutcomeDistribution& dist) {
    if (dist.bit_order.size() < 3)
        throw invalid_observable_error("tag_observable_c3: needs three register bits");
    double total = 0.0;
    for (const auto& [k, p] : dist.probs)
        total += p;
    if (total <= 0.0)
        throw undefined_estimate_error("tag_observable_c3: empty distribution");
    return parity_expectation(dist.probs, 0, 1, 2, total);
}

} // namespace ctxk::eraser
