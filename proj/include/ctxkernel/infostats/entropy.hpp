#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ctxkernel/errors.hpp"
#include "ctxkernel/infostats/distribution.hpp"
#include "ctxkernel/rng.hpp"

namespace ctxk::infostats {

inline constexpr double kLn2 = 0.6931471805599453;

inline double entropy_of_masses(const std::map<std::string, double>& mass) {
    double h = 0.0;
    for (const auto& [key, p] : mass)
        if (p > 0.0)
            h -= p * std::log2(p);
    return h;
}

// -sum p log2 p with 0 log 0 = 0
inline double plugin_entropy(const DiscreteDistribution& dist) {
    dist.validate();
    double h = 0.0;
    for (double p : dist.probabilities)
        if (p > 0.0)
            h -= p * std::log2(p);
    return h;
}

inline double plugin_entropy(const JointDist& joint, std::span<const std::string> variables) {
    return entropy_of_masses(joint.marginal(variables));
}

// additive (K_observed - 1) / (2 N ln 2) bias correction
inline double miller_madow_correction(std::size_t k_observed, double n_shots) {
    if (n_shots <= 0.0 || k_observed < 1)
        return 0.0;
    return (static_cast<double>(k_observed) - 1.0) / (2.0 * n_shots * kLn2);
}

inline double entropy_bits(const JointDist& joint, std::span<const std::string> variables,
                           bool corrected) {
    auto marg = joint.marginal(variables);
    double h = entropy_of_masses(marg);
    if (corrected && !joint.exact()) {
        std::size_t k = 0;
        for (const auto& [key, p] : marg)
            if (p > 0.0)
                ++k;
        h += miller_madow_correction(k, joint.n);
    }
    return h;
}

struct EntropyEstimate {
    double plugin_bits = 0.0;
    double miller_madow_bits = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t n_samples = 0;
};

struct EntropyCiOptions {
    int resamples = 500;
    double confidence = 0.95;
    std::uint64_t seed = 1;
};

// Entropy of the chosen marginal with the Miller-Madow correction and a
// multinomial-bootstrap percentile interval on the corrected value.
inline EntropyEstimate miller_madow_entropy(const simcore::CountsTable& counts,
                                            std::span<const std::string> variables,
                                            const EntropyCiOptions& opts = {}) {
    if (counts.total_shots < 1)
        throw invalid_query_error("miller_madow_entropy: needs at least one shot");
    JointDist joint = JointDist::from_counts(counts);

    auto marg = joint.marginal(variables);
    EntropyEstimate est;
    est.n_samples = counts.total_shots;
    est.plugin_bits = entropy_of_masses(marg);
    std::size_t k = marg.size();
    est.miller_madow_bits = est.plugin_bits + miller_madow_correction(k, joint.n);

    // bootstrap over the marginal cell counts
    std::vector<double> cum;
    std::vector<double> probs;
    cum.reserve(marg.size());
    double acc = 0.0;
    for (const auto& [key, p] : marg) {
        acc += p;
        cum.push_back(acc);
        probs.push_back(p);
    }
    const std::uint64_t n = counts.total_shots;
    std::vector<double> values;
    values.reserve(opts.resamples);
    std::vector<std::uint64_t> cell(marg.size());
    for (int r = 0; r < opts.resamples; ++r) {
        CounterRng rng(opts.seed, fnv1a64("miller_madow_entropy"),
                       static_cast<std::uint64_t>(r));
        std::fill(cell.begin(), cell.end(), 0);
        for (std::uint64_t s = 0; s < n; ++s) {
            double u = rng.next_double();
            std::size_t idx = static_cast<std::size_t>(
                std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
            if (idx >= cell.size())
                idx = cell.size() - 1;
            ++cell[idx];
        }
        double h = 0.0;
        std::size_t kk = 0;
        for (std::uint64_t c : cell) {
            if (c == 0)
                continue;
            double p = static_cast<double>(c) / static_cast<double>(n);
            h -= p * std::log2(p);
            ++kk;
        }
        values.push_back(h + miller_madow_correction(kk, static_cast<double>(n)));
    }
    std::sort(values.begin(), values.end());
    double alpha = (1.0 - opts.confidence) / 2.0;
    auto pick = [&](double q) {
        double x = q * (static_cast<double>(values.size()) - 1.0);
        std::size_t lo = static_cast<std::size_t>(x);
        std::size_t hi = std::min(lo + 1, values.size() - 1);
        double w = x - static_cast<double>(lo);
        return (1.0 - w) * values[lo] + w * values[hi];
    };
    est.ci_low = std::min(pick(alpha), est.miller_madow_bits);
    est.ci_high = std::max(pick(1.0 - alpha), est.miller_madow_bits);
    return est;
}

struct MiEstimate {
    double raw_bits = 0.0;
    double clipped_bits = 0.0;
    bool corrected = false;
};

// I(A;B) = H(A) + H(B) - H(AB), each entropy plug-in or Miller-Madow.
// The clipped value is max(raw, 0); the raw value is retained.
inline MiEstimate mutual_information(const JointDist& joint,
                                     std::span<const std::string> variables_a,
                                     std::span<const std::string> variables_b, bool corrected) {
    if (variables_a.empty() || variables_b.empty())
        throw invalid_query_error("mutual_information: empty variable set");
    for (const auto& a : variables_a)
        for (const auto& b : variables_b)
            if (a == b)
                throw invalid_query_error("mutual_information: variable sets overlap on '" + a +
                                          "'");
    std::vector<std::string> joint_vars(variables_a.begin(), variables_a.end());
    joint_vars.insert(joint_vars.end(), variables_b.begin(), variables_b.end());

    MiEstimate est;
    est.corrected = corrected && !joint.exact();
    est.raw_bits = entropy_bits(joint, variables_a, est.corrected) +
                   entropy_bits(joint, variables_b, est.corrected) -
                   entropy_bits(joint, joint_vars, est.corrected);
    est.clipped_bits = std::max(est.raw_bits, 0.0);
    return est;
}

inline MiEstimate mutual_information(const simcore::CountsTable& counts,
                                     std::span<const std::string> variables_a,
                                     std::span<const std::string> variables_b, bool corrected) {
    return mutual_information(JointDist::from_counts(counts), variables_a, variables_b,
                              corrected);
}

} // namespace ctxk::infostats
