#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ctxkernel/errors.hpp"
#include "ctxkernel/infostats/records.hpp"
#include "ctxkernel/rng.hpp"

namespace ctxk::infostats {

struct PermutationTestResult {
    double observed_statistic = 0.0;
    double p_value = 1.0;
    int n_shuffles = 0;
    std::vector<double> null_samples;
};

// Nonparametric label-permutation test. Labels are relabeled uniformly at
// random within each lane stratum; p = (1 + #{null >= observed}) / (1 + K).
inline PermutationTestResult permutation_test(const RecordSet& records,
                                              const RecordStatistic& statistic, int n_shuffles,
                                              std::uint64_t seed) {
    if (n_shuffles < 1)
        throw invalid_query_error("permutation_test: n_shuffles must be >= 1");
    if (records.records.empty())
        throw undefined_test_error("permutation_test: no records");
    bool mixed = false;
    for (const ShotRecord& r : records.records)
        if (r.label != records.records.front().label) {
            mixed = true;
            break;
        }
    if (!mixed)
        throw undefined_test_error("permutation_test: all labels identical");

    PermutationTestResult result;
    result.n_shuffles = n_shuffles;
    result.observed_statistic = statistic(records);

    std::map<std::int32_t, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < records.records.size(); ++i)
        strata[records.records[i].lane].push_back(i);

    RecordSet work = records;
    int exceed = 0;
    for (int k = 0; k < n_shuffles; ++k) {
        // each shuffle permutes the original labels, keyed only by its index
        for (std::size_t i = 0; i < records.records.size(); ++i)
            work.records[i].label = records.records[i].label;
        CounterRng rng(seed, fnv1a64("permutation_test"), static_cast<std::uint64_t>(k));
        for (auto& [lane, idx] : strata) {
            // Fisher-Yates over the labels of this stratum
            for (std::size_t i = idx.size(); i > 1; --i) {
                std::size_t j = rng.next_below(i);
                std::swap(work.records[idx[i - 1]].label, work.records[idx[j]].label);
            }
        }
        double value = statistic(work);
        result.null_samples.push_back(value);
        if (value >= result.observed_statistic)
            ++exceed;
    }
    result.p_value = (1.0 + exceed) / (1.0 + n_shuffles);
    return result;
}

namespace detail {

inline std::pair<double, double> percentile_interval(std::vector<double>& values,
                                                     double confidence) {
    std::sort(values.begin(), values.end());
    double alpha = (1.0 - confidence) / 2.0;
    auto pick = [&](double q) {
        double x = q * (static_cast<double>(values.size()) - 1.0);
        std::size_t lo = static_cast<std::size_t>(x);
        std::size_t hi = std::min(lo + 1, values.size() - 1);
        double w = x - static_cast<double>(lo);
        return (1.0 - w) * values[lo] + w * values[hi];
    };
    return {pick(alpha), pick(1.0 - alpha)};
}

} // namespace detail

// Percentile bootstrap over shot records, resampling with replacement within
// each (lane, circuit) stratum.
inline std::pair<double, double> bootstrap_ci(const RecordSet& records,
                                              const RecordStatistic& statistic, int n_resamples,
                                              double confidence, std::uint64_t seed) {
    if (n_resamples < 100)
        throw invalid_query_error("bootstrap_ci: n_resamples must be >= 100");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw invalid_query_error("bootstrap_ci: confidence must be in (0,1)");
    std::map<std::pair<std::int32_t, std::string>, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < records.records.size(); ++i)
        strata[{records.records[i].lane, records.records[i].circuit}].push_back(i);
    for (const auto& [key, idx] : strata)
        if (idx.size() < 2)
            throw degenerate_stratum_error("bootstrap_ci: stratum lane=" +
                                           std::to_string(key.first) + " circuit='" + key.second +
                                           "' has fewer than 2 records");

    RecordSet work;
    work.bit_order = records.bit_order;
    work.records.resize(records.records.size());
    std::vector<double> values;
    values.reserve(n_resamples);
    for (int r = 0; r < n_resamples; ++r) {
        CounterRng rng(seed, fnv1a64("bootstrap_ci"), static_cast<std::uint64_t>(r));
        std::size_t w = 0;
        for (const auto& [key, idx] : strata)
            for (std::size_t k = 0; k < idx.size(); ++k)
                work.records[w++] = records.records[idx[rng.next_below(idx.size())]];
        values.push_back(statistic(work));
    }
    return detail::percentile_interval(values, confidence);
}

// Plain-sample variant used when the data are already scalar values.
inline std::pair<double, double>
bootstrap_ci_values(std::span<const double> sample,
                    const std::function<double(std::span<const double>)>& statistic,
                    int n_resamples, double confidence, std::uint64_t seed) {
    if (n_resamples < 100)
        throw invalid_query_error("bootstrap_ci: n_resamples must be >= 100");
    if (sample.size() < 2)
        throw degenerate_stratum_error("bootstrap_ci: fewer than 2 values");
    std::vector<double> work(sample.size());
    std::vector<double> values;
    values.reserve(n_resamples);
    for (int r = 0; r < n_resamples; ++r) {
        CounterRng rng(seed, fnv1a64("bootstrap_ci_values"), static_cast<std::uint64_t>(r));
        for (std::size_t k = 0; k < sample.size(); ++k)
            work[k] = sample[rng.next_below(sample.size())];
        values.push_back(statistic(work));
    }
    return detail::percentile_interval(values, confidence);
}

} // namespace ctxk::infostats
