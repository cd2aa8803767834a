#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ctxkernel/errors.hpp"
#include "ctxkernel/infostats/mobius.hpp"
#include "ctxkernel/infostats/resample.hpp"

namespace ctxk::kernelfit {

// Additive backaction decomposition in nats, with the matching per-class
// suppression factors D = exp(-(gamma_loc + gamma_proxy + gamma_rel)).
struct KernelEstimate {
    double gamma_loc = 0.0;
    double gamma_proxy = 0.0;
    std::map<std::string, double> gamma_rel_by_class; // "even" / "odd"
    std::map<std::string, double> suppression_d;      // per class
    std::map<std::string, double> record_weights_r;
    std::map<std::string, double> overlaps_omega; // "event|subset|observable"
    std::vector<std::string> saturation_flags;
};

struct IdealWitness {
    // interaction-off reference per parity class
    double even = 1.0;
    double odd = 1.0;
};

namespace detail {

// ratio clamped into (eps, cap]; fired clamps are reported, not fatal
inline double clamped_ratio(double num, double den, double eps, double cap,
                            const std::string& what, std::vector<std::string>& flags) {
    if (std::abs(den) < eps) {
        flags.push_back(what + ": denominator saturated");
        den = den < 0.0 ? -eps : eps;
    }
    double r = num / den;
    if (r < eps) {
        flags.push_back(what + ": ratio clamped at floor");
        r = eps;
    }
    if (r > cap) {
        flags.push_back(what + ": ratio clamped at cap");
        r = cap;
    }
    return r;
}

} // namespace detail

// Ratio-of-witnesses convention:
//   D_loc       = E_passive1 / E_ideal_off
//   e^-G_proxy  = E_passive2 / E_passive1
//   e^-G_rel[c] = E_active[c] / (E_ideal_off[c] * D_loc * e^-G_proxy)
// so every term vanishes in the noiseless interaction-off world and the
// product reproduces the measured witness ratios wherever no clamp fired.
inline KernelEstimate decompose_gamma(double active_even, double active_odd,
                                      double passive1_mean, double passive2_mean,
                                      const IdealWitness& ideal, double theta,
                                      double eps = 1e-6) {
    KernelEstimate est;
    auto& flags = est.saturation_flags;

    double d_loc = detail::clamped_ratio(passive1_mean, ideal.even, eps, 1.0, "gamma_loc", flags);
    est.gamma_loc = -std::log(d_loc);

    double d_proxy =
        detail::clamped_ratio(passive2_mean, passive1_mean, eps, 1.0, "gamma_proxy", flags);
    est.gamma_proxy = -std::log(d_proxy);

    const double kNoCap = 1e12;
    double denom_even = ideal.even * d_loc * d_proxy;
    double denom_odd = ideal.odd * d_loc * d_proxy;
    double r_even =
        detail::clamped_ratio(active_even, denom_even, eps, kNoCap, "gamma_rel[even]", flags);
    double r_odd =
        detail::clamped_ratio(active_odd, denom_odd, eps, kNoCap, "gamma_rel[odd]", flags);
    est.gamma_rel_by_class["even"] = -std::log(r_even);
    est.gamma_rel_by_class["odd"] = -std::log(r_odd);

    for (const auto& [cls, g] : est.gamma_rel_by_class)
        est.suppression_d[cls] = std::exp(-(est.gamma_loc + est.gamma_proxy + g));

    est.record_weights_r["context"] = 1.0;
    est.overlaps_omega["context|C0C1C2|E_X_mean"] = 1.0 - std::cos(theta);
    return est;
}

// Leading-order residual-kernel prediction: only the full-triple subset
// couples, with overlap 1 - cos theta.
inline double gamma_rel_predict(const infostats::MobiusAtoms& atoms, double theta,
                                double coupling_scale) {
    double triple_weight = 0.0;
    auto it = atoms.normalized_positive.find(atoms.triple_name);
    if (it != atoms.normalized_positive.end())
        triple_weight = it->second;
    return coupling_scale * triple_weight * (1.0 - std::cos(theta));
}

struct DcScreen {
    std::string subset;
    double mi_raw = 0.0;
    double mi_corrected = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool pass = false;
};

struct DcVerdict {
    bool holds = false;
    std::vector<DcScreen> screens;
    double permutation_p = 1.0;
    bool p_pass = false;
    double mi_threshold = 0.0;
    double p_threshold = 0.0;
};

struct DcOptions {
    int resamples = 500;
    double confidence = 0.95;
    std::uint64_t seed = 1;
};

// Operational low-order invisibility check: every single- and pair-context
// mutual information with the label must sit below the threshold with a CI
// containing zero, while the witness permutation test rejects the null.
inline DcVerdict dc_condition_check(const infostats::JointDist& joint, const std::string& y_var,
                                    std::span<const std::string> context_vars, double mi_threshold,
                                    double p_threshold,
                                    const infostats::PermutationTestResult& permutation,
                                    const DcOptions& opts = {}) {
    if (!(mi_threshold > 0.0) || !(p_threshold > 0.0))
        throw invalid_query_error("dc_condition_check: thresholds must be positive");

    DcVerdict verdict;
    verdict.mi_threshold = mi_threshold;
    verdict.p_threshold = p_threshold;

    std::vector<std::vector<std::string>> subsets;
    for (std::size_t i = 0; i < context_vars.size(); ++i)
        subsets.push_back({context_vars[i]});
    for (std::size_t i = 0; i < context_vars.size(); ++i)
        for (std::size_t j = i + 1; j < context_vars.size(); ++j)
            subsets.push_back({context_vars[i], context_vars[j]});

    std::vector<std::string> y{y_var};
    bool all_pass = true;
    for (const auto& subset : subsets) {
        DcScreen screen;
        for (const auto& v : subset)
            screen.subset += v;
        screen.mi_raw = infostats::mutual_information(joint, y, subset, false).raw_bits;
        screen.mi_corrected = infostats::mutual_information(joint, y, subset, true).raw_bits;

        if (joint.exact()) {
            screen.ci_low = screen.ci_high = screen.mi_corrected;
        } else {
            // multinomial bootstrap over the joint cells
            std::vector<std::string> keys;
            std::vector<double> cum;
            double acc = 0.0;
            for (const auto& [key, p] : joint.mass) {
                acc += p;
                keys.push_back(key);
                cum.push_back(acc);
            }
            const std::uint64_t n = static_cast<std::uint64_t>(joint.n);
            std::vector<double> values;
            values.reserve(opts.resamples);
            for (int r = 0; r < opts.resamples; ++r) {
                CounterRng rng(opts.seed, fnv1a64("dc_condition_check:" + screen.subset),
                               static_cast<std::uint64_t>(r));
                std::map<std::string, double> resampled;
                for (std::uint64_t s = 0; s < n; ++s) {
                    double u = rng.next_double();
                    std::size_t idx = static_cast<std::size_t>(
                        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
                    if (idx >= keys.size())
                        idx = keys.size() - 1;
                    resampled[keys[idx]] += 1.0;
                }
                infostats::JointDist boot;
                boot.labels = joint.labels;
                boot.n = static_cast<double>(n);
                for (auto& [key, c] : resampled)
                    boot.mass[key] = c / boot.n;
                values.push_back(
                    infostats::mutual_information(boot, y, subset, true).raw_bits);
            }
            auto [lo, hi] = infostats::detail::percentile_interval(values, opts.confidence);
            screen.ci_low = lo;
            screen.ci_high = hi;
        }
        screen.pass = std::abs(screen.mi_corrected) < mi_threshold && screen.ci_low <= 0.0 &&
                      screen.ci_high >= 0.0;
        all_pass = all_pass && screen.pass;
        verdict.screens.push_back(std::move(screen));
    }

    verdict.permutation_p = permutation.p_value;
    verdict.p_pass = permutation.p_value < p_threshold;
    verdict.holds = all_pass && verdict.p_pass;
    return verdict;
}

} // namespace ctxk::kernelfit
