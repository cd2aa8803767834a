#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ctxkernel/harness/circuits.hpp"
#include "ctxkernel/harness/context.hpp"
#include "ctxkernel/harness/witness.hpp"
#include "ctxkernel/infostats/mobius.hpp"
#include "ctxkernel/infostats/records.hpp"
#include "ctxkernel/infostats/resample.hpp"
#include "ctxkernel/kernelfit/fit.hpp"
#include "ctxkernel/kernelfit/gamma.hpp"
#include "ctxkernel/runner/artifacts.hpp"
#include "ctxkernel/runner/plan.hpp"
#include "ctxkernel/simcore/sampler.hpp"

namespace ctxk::runner {

struct RunOptions {
    int jobs = 1; // worker threads for circuit simulation
};

struct A6CircuitMeta {
    std::string id;
    int lane = 0;
    int replicate = 0;
    std::string family;
    double theta = 0.0;
    std::string triple;
    int label = 0;
    std::string basis;

    json to_json() const {
        json j;
        j["id"] = id;
        j["lane"] = lane;
        j["replicate"] = replicate;
        j["family"] = family;
        if (family == "ACTIVE")
            j["theta"] = theta;
        j["triple"] = triple;
        j["label"] = label;
        j["basis"] = basis;
        return j;
    }

    static A6CircuitMeta from_json(const json& j) {
        A6CircuitMeta m;
        m.id = j.at("id").get<std::string>();
        m.lane = j.at("lane").get<int>();
        m.replicate = j.at("replicate").get<int>();
        m.family = j.at("family").get<std::string>();
        m.theta = j.value("theta", 0.0);
        m.triple = j.at("triple").get<std::string>();
        m.label = j.at("label").get<int>();
        m.basis = j.value("basis", "XX");
        return m;
    }
};

struct A6CircuitData {
    A6CircuitMeta meta;
    std::optional<simcore::CountsTable> counts;
    std::optional<simcore::OutcomeDistribution> dist;
};

namespace detail {

inline std::string theta_tag(std::size_t idx) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "t%02zu", idx);
    return buf;
}

// circuits for one (lane, replicate) pair, in plan order
inline std::vector<std::pair<A6CircuitMeta, simcore::Circuit>>
enumerate_lane_circuits(const A6Plan& plan, int lane, int replicate) {
    using namespace harness;
    std::vector<std::pair<A6CircuitMeta, simcore::Circuit>> out;
    const ContextEnsemble ensemble = ContextEnsemble::parity();
    const ProbeBasis basis = probe_basis_from_name(plan.basis);
    const bool fire_on_even = replicate == 1;

    auto meta_for = [&](const std::string& family, double theta, const BitTriple& t,
                        const std::string& id) {
        A6CircuitMeta m;
        m.id = id;
        m.lane = lane;
        m.replicate = replicate;
        m.family = family;
        m.theta = theta;
        m.triple = triple_string(t);
        // R1 swaps the class assignment; the interaction-on class is always
        // labeled odd
        m.label = triple_parity(t) ^ replicate;
        m.basis = plan.basis;
        return m;
    };

    std::string prefix = "L" + std::to_string(lane) + "_R" + std::to_string(replicate) + "_";
    for (const std::string& family : plan.families) {
        if (family == "ACTIVE") {
            for (std::size_t ti = 0; ti < plan.thetas.size(); ++ti) {
                for (const BitTriple& t : ensemble.all_triples()) {
                    std::string id =
                        prefix + "ACTIVE_" + theta_tag(ti) + "_x" + triple_string(t);
                    out.emplace_back(meta_for("ACTIVE", plan.thetas[ti], t, id),
                                     build_active_circuit(plan.thetas[ti], t, basis,
                                                          fire_on_even, id));
                }
            }
        } else if (family == "PASSIVE1" || family == "PASSIVE2") {
            PassiveVariant variant =
                family == "PASSIVE1" ? PassiveVariant::PASSIVE1 : PassiveVariant::PASSIVE2;
            for (const BitTriple& t : ensemble.all_triples()) {
                std::string id = prefix + family + "_x" + triple_string(t);
                out.emplace_back(meta_for(family, 0.0, t, id),
                                 build_passive_circuit(variant, t, basis, id));
            }
        } else if (family == "CTXONLY") {
            for (const BitTriple& t : ensemble.all_triples()) {
                std::string id = prefix + "CTXONLY_x" + triple_string(t);
                out.emplace_back(meta_for("CTXONLY", 0.0, t, id), build_ctxonly_circuit(t, id));
            }
        }
    }
    return out;
}

inline std::uint64_t shots_for_triple(std::uint64_t total, const std::string& triple) {
    // total split evenly over the 8 triples; any remainder goes to the
    // lexicographically first triples
    std::uint64_t base = total / 8;
    std::uint64_t rem = total % 8;
    std::uint64_t index = static_cast<std::uint64_t>((triple[0] - '0') | ((triple[1] - '0') << 1) |
                                                     ((triple[2] - '0') << 2));
    return base + (index < rem ? 1 : 0);
}

template <typename Job>
inline void run_jobs(std::vector<Job>& jobs, int n_workers) {
    if (n_workers <= 1) {
        for (Job& j : jobs)
            j();
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size())
                return;
            jobs[i]();
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
}

// witness mean per (lane, replicate, family, theta) class, pooled by shots
struct ClassAccumulator {
    double weighted_sum[2] = {0.0, 0.0};
    double weight[2] = {0.0, 0.0};

    void add(int label, double value, double w) {
        weighted_sum[label] += value * w;
        weight[label] += w;
    }

    std::optional<double> mean(int label) const {
        if (weight[label] <= 0.0)
            return std::nullopt;
        return weighted_sum[label] / weight[label];
    }
};

inline double witness_of(const A6CircuitData& c) {
    if (c.counts)
        return harness::ex_mean_witness(*c.counts, "A", "B");
    return harness::ex_mean_witness(*c.dist, "A", "B");
}

inline double weight_of(const A6CircuitData& c) {
    return c.counts ? static_cast<double>(c.counts->total_shots) : 1.0;
}

} // namespace detail

// ---------------------------------------------------------------------------
// simulation

inline std::vector<A6CircuitData> simulate_a6(const A6Plan& plan, const RunOptions& opts = {}) {
    std::vector<std::pair<A6CircuitMeta, simcore::Circuit>> circuits;
    for (int lane = 0; lane < plan.lanes; ++lane)
        for (int replicate = 0; replicate < 2; ++replicate) {
            auto lane_circuits = detail::enumerate_lane_circuits(plan, lane, replicate);
            for (auto& c : lane_circuits)
                circuits.push_back(std::move(c));
        }

    std::vector<A6CircuitData> results(circuits.size());
    std::vector<std::function<void()>> jobs;
    jobs.reserve(circuits.size());
    for (std::size_t i = 0; i < circuits.size(); ++i) {
        jobs.push_back([&, i] {
            const auto& [meta, circuit] = circuits[i];
            A6CircuitData data;
            data.meta = meta;
            try {
                if (plan.exact) {
                    data.dist = simcore::exact_outcome_distribution(circuit);
                } else {
                    NoiseProfile profile;
                    if (plan.noise_table)
                        profile = plan.noise_table->for_lane(meta.lane);
                    simcore::NoiseModel nm = profile.to_model(circuit.n_qubits);
                    std::uint64_t shots = detail::shots_for_triple(plan.shots, meta.triple);
                    data.counts = simcore::sample_counts(circuit, shots, nm, plan.seed);
                }
            } catch (const error& e) {
                throw simulation_error("circuit '" + meta.id + "': " + e.what());
            }
            results[i] = std::move(data);
        });
    }
    detail::run_jobs(jobs, opts.jobs);
    return results;
}

// ---------------------------------------------------------------------------
// analysis

struct A6Analysis {
    json witness;
    json info;
    json kernel_report;
    std::string witness_active_csv;
    std::string witness_passive_csv;
    std::optional<infostats::RecordSet> records; // sampled mode only
};

namespace detail {

inline infostats::RecordSet build_records(const std::vector<A6CircuitData>& data,
                                          const std::string& family,
                                          std::optional<double> theta) {
    infostats::RecordSet rs;
    rs.bit_order = {"A", "B", "C0", "C1", "C2"};
    for (const A6CircuitData& c : data) {
        if (c.meta.family != family || !c.counts)
            continue;
        if (theta && std::abs(c.meta.theta - *theta) > 1e-12)
            continue;
        for (const auto& [outcome, n] : c.counts->counts)
            for (std::uint64_t k = 0; k < n; ++k) {
                infostats::ShotRecord r;
                r.lane = c.meta.lane;
                r.circuit = c.meta.id;
                r.label = static_cast<std::int8_t>(c.meta.label);
                r.outcome = outcome;
                rs.records.push_back(std::move(r));
            }
    }
    return rs;
}

// ensemble joint over (Y, A, B, C0, C1, C2) for one family/theta cell
inline infostats::JointDist build_joint(const std::vector<A6CircuitData>& data,
                                        const std::string& family, std::optional<double> theta) {
    infostats::JointDist d;
    d.labels = {"Y", "A", "B", "C0", "C1", "C2"};
    double total_weight = 0.0;
    bool exact = true;
    for (const A6CircuitData& c : data) {
        if (c.meta.family != family)
            continue;
        if (theta && std::abs(c.meta.theta - *theta) > 1e-12)
            continue;
        if (c.counts) {
            exact = false;
            for (const auto& [outcome, n] : c.counts->counts) {
                d.mass[char('0' + c.meta.label) + outcome] += static_cast<double>(n);
                total_weight += static_cast<double>(n);
            }
        } else if (c.dist) {
            for (const auto& [outcome, p] : c.dist->probs) {
                d.mass[char('0' + c.meta.label) + outcome] += p;
                total_weight += p;
            }
        }
    }
    if (total_weight <= 0.0)
        throw analysis_error("no data for family " + family);
    for (auto& [key, v] : d.mass)
        v /= total_weight;
    d.n = exact ? 0.0 : total_weight;
    return d;
}

struct FamilyWitness {
    harness::WitnessResult result;
    std::vector<harness::LaneWitness> lanes;
};

inline FamilyWitness family_witness(const std::vector<A6CircuitData>& data,
                                    const std::string& family, std::optional<double> theta) {
    std::map<std::pair<int, int>, ClassAccumulator> cells;
    for (const A6CircuitData& c : data) {
        if (c.meta.family != family)
            continue;
        if (theta && std::abs(c.meta.theta - *theta) > 1e-12)
            continue;
        cells[{c.meta.lane, c.meta.replicate}].add(c.meta.label, witness_of(c), weight_of(c));
    }
    if (cells.empty())
        throw analysis_error("no data for family " + family);
    FamilyWitness out;
    for (const auto& [key, acc] : cells)
        out.lanes.push_back(
            harness::make_lane_witness(key.first, key.second, acc.mean(0), acc.mean(1)));
    out.result = harness::lane_balanced_delta(out.lanes);
    return out;
}

inline json witness_to_json(const harness::WitnessResult& w) {
    json j;
    j["e_even"] = w.e_even;
    j["e_odd"] = w.e_odd;
    j["delta_e"] = w.delta_e;
    j["sem"] = w.sem;
    j["per_lane"] = w.per_lane_values;
    return j;
}

inline json screens_to_json(const kernelfit::DcVerdict& verdict) {
    json screens = json::array();
    for (const auto& s : verdict.screens) {
        json e;
        e["subset"] = s.subset;
        e["mi_raw_bits"] = s.mi_raw;
        e["mi_corrected_bits"] = s.mi_corrected;
        e["ci_low"] = s.ci_low;
        e["ci_high"] = s.ci_high;
        e["pass"] = s.pass;
        screens.push_back(e);
    }
    return screens;
}

} // namespace detail

// Reference angle for the headline statistics: pi/2 when present, otherwise
// the theta with the largest |delta E|.
inline double reference_theta(const A6Plan& plan, const std::map<double, double>& delta_by_theta) {
    for (double t : plan.thetas)
        if (std::abs(t - harness::kPi / 2.0) < 1e-9)
            return t;
    double best = plan.thetas.front(), best_mag = -1.0;
    for (const auto& [t, d] : delta_by_theta)
        if (std::abs(d) > best_mag) {
            best_mag = std::abs(d);
            best = t;
        }
    return best;
}

inline A6Analysis analyze_a6(const A6Plan& plan, const std::vector<A6CircuitData>& data) {
    A6Analysis out;
    const bool sampled = !plan.exact;
    const bool has_active =
        std::find(plan.families.begin(), plan.families.end(), "ACTIVE") != plan.families.end();
    const bool has_p1 =
        std::find(plan.families.begin(), plan.families.end(), "PASSIVE1") != plan.families.end();
    const bool has_p2 =
        std::find(plan.families.begin(), plan.families.end(), "PASSIVE2") != plan.families.end();
    const bool has_ctx =
        std::find(plan.families.begin(), plan.families.end(), "CTXONLY") != plan.families.end();

    // ---- witness tables ----
    json witness;
    witness["schema"] = kAnalysisSchema;
    witness["experiment"] = "A6";
    witness["mode"] = plan.exact ? "exact" : "sampled";
    witness["basis"] = plan.basis;

    std::map<double, detail::FamilyWitness> active_by_theta;
    std::map<double, double> delta_by_theta;
    json active_rows = json::array();
    std::string active_csv = "theta,e_even,e_odd,delta_e,sem\n";
    if (has_active) {
        for (double theta : plan.thetas) {
            auto fw = detail::family_witness(data, "ACTIVE", theta);
            json row = detail::witness_to_json(fw.result);
            row["theta"] = theta;
            active_rows.push_back(row);
            char line[160];
            std::snprintf(line, sizeof(line), "%.10g,%.10g,%.10g,%.10g,%.10g\n", theta,
                          fw.result.e_even, fw.result.e_odd, fw.result.delta_e, fw.result.sem);
            active_csv += line;
            delta_by_theta[theta] = fw.result.delta_e;
            active_by_theta.emplace(theta, std::move(fw));
        }
    }
    witness["active"] = active_rows;

    std::map<std::string, detail::FamilyWitness> passive;
    json passive_rows = json::array();
    std::string passive_csv = "family,e_even,e_odd,delta_e,sem\n";
    for (const char* family : {"PASSIVE1", "PASSIVE2"}) {
        if (std::find(plan.families.begin(), plan.families.end(), family) == plan.families.end())
            continue;
        auto fw = detail::family_witness(data, family, std::nullopt);
        json row = detail::witness_to_json(fw.result);
        row["family"] = family;
        passive_rows.push_back(row);
        char line[160];
        std::snprintf(line, sizeof(line), "%s,%.10g,%.10g,%.10g,%.10g\n", family,
                      fw.result.e_even, fw.result.e_odd, fw.result.delta_e, fw.result.sem);
        passive_csv += line;
        passive.emplace(family, std::move(fw));
    }
    witness["passive"] = passive_rows;

    // ---- context quality (CTXONLY) ----
    if (has_ctx) {
        struct CtxAcc {
            double good = 0.0, total = 0.0;
        };
        std::map<std::pair<int, int>, CtxAcc> cells;
        for (const A6CircuitData& c : data) {
            if (c.meta.family != "CTXONLY")
                continue;
            CtxAcc& acc = cells[{c.meta.lane, c.meta.replicate}];
            if (c.counts) {
                acc.good += static_cast<double>(
                    c.counts->counts.count(c.meta.triple) ? c.counts->counts.at(c.meta.triple)
                                                          : 0);
                acc.total += static_cast<double>(c.counts->total_shots);
            } else if (c.dist) {
                auto it = c.dist->probs.find(c.meta.triple);
                acc.good += it == c.dist->probs.end() ? 0.0 : it->second;
                acc.total += 1.0;
            }
        }
        json per_lane = json::object();
        double worst = 1.0;
        for (int lane = 0; lane < plan.lanes; ++lane) {
            double r0 = cells.count({lane, 0}) ? cells[{lane, 0}].good / cells[{lane, 0}].total
                                               : 0.0;
            double r1 = cells.count({lane, 1}) ? cells[{lane, 1}].good / cells[{lane, 1}].total
                                               : 0.0;
            double lane_min = std::min(r0, r1);
            per_lane[std::to_string(lane)] = {{"ctx_ok_r0", r0},
                                              {"ctx_ok_r1", r1},
                                              {"min", lane_min}};
            worst = std::min(worst, lane_min);
        }
        witness["context_quality"] = {{"per_lane", per_lane}, {"worst_lane", worst}};
    }

    // ---- information screens per theta ----
    json info;
    info["schema"] = kAnalysisSchema;
    info["experiment"] = "A6";
    info["mode"] = plan.exact ? "exact" : "sampled";

    const std::vector<std::string> y{"Y"};
    const std::vector<std::string> ab{"A", "B"};
    const std::vector<std::string> ctx{"C0", "C1", "C2"};
    double ref_theta = has_active ? reference_theta(plan, delta_by_theta) : 0.0;
    info["reference_theta"] = ref_theta;

    std::map<double, infostats::MobiusAtoms> atoms_by_theta;
    std::optional<infostats::PermutationTestResult> permutation;
    std::optional<kernelfit::DcVerdict> dc;
    if (has_active) {
        json per_theta = json::array();
        for (double theta : plan.thetas) {
            infostats::JointDist joint = detail::build_joint(data, "ACTIVE", theta);
            json entry;
            entry["theta"] = theta;
            entry["i_y_ab_bits"] = {
                {"raw", infostats::mutual_information(joint, y, ab, sampled).raw_bits},
                {"corrected", sampled}};
            entry["i_y_ctx_full_bits"] = {
                {"raw", infostats::mutual_information(joint, y, ctx, sampled).raw_bits},
                {"corrected", sampled}};
            auto atoms = infostats::mobius_triplet_atom(joint, "Y", ctx, sampled);
            json mob;
            mob["subset_values_bits"] = atoms.subset_values;
            mob["triple_atom_bits"] = atoms.triple_atom;
            mob["triple_atom_entropy_form_bits"] = atoms.triple_atom_entropy_form;
            mob["normalized_positive"] = atoms.normalized_positive;
            mob["warnings"] = atoms.warnings;
            entry["mobius"] = mob;
            atoms_by_theta.emplace(theta, std::move(atoms));
            per_theta.push_back(entry);
        }
        info["per_theta"] = per_theta;

        // permutation test and DC verdict at the reference theta
        infostats::JointDist ref_joint = detail::build_joint(data, "ACTIVE", ref_theta);
        if (sampled) {
            infostats::RecordSet records = detail::build_records(data, "ACTIVE", ref_theta);
            permutation = infostats::permutation_test(
                records, infostats::make_named_statistic("abs_lane_balanced_delta_e"),
                plan.shuffles, plan.seed);
            json perm;
            perm["theta"] = ref_theta;
            perm["statistic"] = "abs_lane_balanced_delta_e";
            perm["observed"] = permutation->observed_statistic;
            perm["p_value"] = permutation->p_value;
            perm["n_shuffles"] = permutation->n_shuffles;
            info["permutation"] = perm;
        } else {
            info["permutation"] = {{"skipped", "exact mode has no shot records"}};
        }

        kernelfit::DcOptions dc_opts;
        dc_opts.resamples = plan.resamples;
        dc_opts.seed = plan.seed;
        kernelfit::DcVerdict verdict;
        if (permutation) {
            verdict = kernelfit::dc_condition_check(ref_joint, "Y", ctx, 0.01, 0.01,
                                                    *permutation, dc_opts);
        } else {
            infostats::PermutationTestResult none;
            none.p_value = 0.0;
            none.n_shuffles = 0;
            verdict =
                kernelfit::dc_condition_check(ref_joint, "Y", ctx, 0.01, 0.01, none, dc_opts);
        }
        dc = verdict;
    }

    // ---- bootstrap CIs on delta E ----
    if (sampled) {
        json boots = json::array();
        auto ci_for = [&](const std::string& family, std::optional<double> theta) {
            infostats::RecordSet records = detail::build_records(data, family, theta);
            auto [lo, hi] = infostats::bootstrap_ci(
                records, infostats::make_named_statistic("lane_balanced_delta_e"),
                plan.resamples, 0.95, plan.seed);
            json j;
            j["family"] = family;
            if (theta)
                j["theta"] = *theta;
            j["statistic"] = "lane_balanced_delta_e";
            j["confidence"] = 0.95;
            j["ci_low"] = lo;
            j["ci_high"] = hi;
            return j;
        };
        if (has_active)
            for (double theta : plan.thetas)
                boots.push_back(ci_for("ACTIVE", theta));
        if (has_p1)
            boots.push_back(ci_for("PASSIVE1", std::nullopt));
        if (has_p2)
            boots.push_back(ci_for("PASSIVE2", std::nullopt));
        info["bootstrap"] = boots;
    } else {
        info["bootstrap"] = {{"skipped", "exact mode has no shot records"}};
    }

    // ---- kernel report ----
    json kernel;
    kernel["schema"] = kAnalysisSchema;
    kernel["experiment"] = "A6";
    kernel["mode"] = plan.exact ? "exact" : "sampled";
    if (has_active) {
        kernel["reference_theta"] = ref_theta;
        json per_theta = json::array();
        std::vector<kernelfit::FitPoint> fit_points;
        for (double theta : plan.thetas) {
            const auto& fw = active_by_theta.at(theta);
            fit_points.push_back({theta, fw.result.delta_e, fw.result.sem});
            if (has_p1 && has_p2) {
                const auto& p1 = passive.at("PASSIVE1").result;
                const auto& p2 = passive.at("PASSIVE2").result;
                double p1_mean = 0.5 * (p1.e_even + p1.e_odd);
                double p2_mean = 0.5 * (p2.e_even + p2.e_odd);
                auto est = kernelfit::decompose_gamma(fw.result.e_even, fw.result.e_odd, p1_mean,
                                                      p2_mean, {}, theta);
                json g;
                g["theta"] = theta;
                g["gamma_loc_nats"] = est.gamma_loc;
                g["gamma_proxy_nats"] = est.gamma_proxy;
                g["gamma_rel_by_class_nats"] = est.gamma_rel_by_class;
                g["suppression_d"] = est.suppression_d;
                g["record_weights_r"] = est.record_weights_r;
                g["overlaps_omega"] = est.overlaps_omega;
                g["saturation_flags"] = est.saturation_flags;
                g["gamma_rel_predicted_bits_scale_1"] =
                    kernelfit::gamma_rel_predict(atoms_by_theta.at(theta), theta, 1.0);
                per_theta.push_back(g);
            }
        }
        kernel["per_theta"] = per_theta;
        if (fit_points.size() >= 3) {
            auto fit = kernelfit::fit_delta_curve(fit_points);
            kernel["fit"] = {{"model", "delta_e = a*(1-cos(theta)) + b"},
                             {"a", fit.a},
                             {"b", fit.b},
                             {"r_squared", fit.r_squared},
                             {"reduced_chi_squared", fit.reduced_chi_squared},
                             {"weighted", fit.weighted}};
        } else {
            kernel["fit"] = {{"skipped", "need at least 3 theta points"}};
        }
        if (dc) {
            json v;
            v["holds"] = dc->holds;
            v["mi_threshold_bits"] = dc->mi_threshold;
            v["p_threshold"] = dc->p_threshold;
            v["screens"] = detail::screens_to_json(*dc);
            if (permutation)
                v["permutation_p"] = dc->permutation_p;
            else
                v["permutation_p"] = nullptr; // exact mode: screens only
            kernel["dc_verdict"] = v;
        }
    }

    out.witness = std::move(witness);
    out.info = std::move(info);
    out.kernel_report = std::move(kernel);
    out.witness_active_csv = std::move(active_csv);
    out.witness_passive_csv = std::move(passive_csv);
    if (sampled && has_active)
        out.records = detail::build_records(data, "ACTIVE", std::nullopt);
    return out;
}

} // namespace ctxk::runner
