#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ctxkernel/errors.hpp"
#include "ctxkernel/simcore/counts.hpp"

namespace ctxk::infostats {

// Generic discrete distribution over outcome tuples (string keys).
struct DiscreteDistribution {
    std::vector<std::string> support;
    std::vector<double> probabilities;

    void validate() const {
        if (support.size() != probabilities.size())
            throw invalid_query_error("distribution: support/probability size mismatch");
        double sum = 0.0;
        for (double p : probabilities) {
            if (p < 0.0)
                throw invalid_query_error("distribution: negative probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw invalid_query_error("distribution: probabilities sum to " + std::to_string(sum));
        for (std::size_t i = 0; i < support.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (support[i] == support[j])
                    throw invalid_query_error("distribution: duplicate support entry '" +
                                              support[i] + "'");
    }
};

// Joint mass over named positions. One character of the key per variable.
// `n` is the shot count behind the masses (0 for exact distributions); bias
// corrections apply only when n > 0.
struct JointDist {
    std::vector<std::string> labels;
    std::map<std::string, double> mass; // normalized to 1
    double n = 0.0;

    bool exact() const { return n == 0.0; }

    static JointDist from_counts(const simcore::CountsTable& counts) {
        counts.validate();
        if (counts.total_shots == 0)
            throw invalid_query_error("JointDist: empty counts");
        JointDist d;
        d.labels = counts.bit_order;
        d.n = static_cast<double>(counts.total_shots);
        for (const auto& [key, c] : counts.counts)
            if (c > 0)
                d.mass[key] = static_cast<double>(c) / d.n;
        return d;
    }

    static JointDist from_probs(const simcore::OutcomeDistribution& dist) {
        JointDist d;
        d.labels = dist.bit_order;
        d.n = 0.0;
        double sum = 0.0;
        for (const auto& [key, p] : dist.probs) {
            if (p < 0.0)
                throw invalid_query_error("JointDist: negative probability");
            if (p > 0.0)
                d.mass[key] = p;
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw invalid_query_error("JointDist: probabilities sum to " + std::to_string(sum));
        return d;
    }

    static JointDist from_distribution(const DiscreteDistribution& dist,
                                       std::vector<std::string> labels) {
        dist.validate();
        JointDist d;
        d.labels = std::move(labels);
        for (std::size_t i = 0; i < dist.support.size(); ++i)
            if (dist.probabilities[i] > 0.0)
                d.mass[dist.support[i]] += dist.probabilities[i];
        return d;
    }

    std::vector<std::size_t> positions_of(std::span<const std::string> wanted) const {
        std::vector<std::size_t> pos;
        pos.reserve(wanted.size());
        for (const auto& w : wanted) {
            auto it = std::find(labels.begin(), labels.end(), w);
            if (it == labels.end())
                throw invalid_query_error("JointDist: unknown variable '" + w + "'");
            pos.push_back(static_cast<std::size_t>(it - labels.begin()));
        }
        return pos;
    }

    // marginal mass over a subset of variables, in the order given
    std::map<std::string, double> marginal(std::span<const std::string> keep) const {
        auto pos = positions_of(keep);
        std::map<std::string, double> out;
        for (const auto& [key, p] : mass) {
            std::string sub(pos.size(), ' ');
            for (std::size_t i = 0; i < pos.size(); ++i)
                sub[i] = key[pos[i]];
            out[sub] += p;
        }
        return out;
    }
};

} // namespace ctxk::infostats
