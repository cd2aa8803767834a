#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctxkernel/errors.hpp"
#include "ctxkernel/harness/a62.hpp"
#include "ctxkernel/harness/circuits.hpp"
#include "ctxkernel/rng.hpp"
#include "ctxkernel/simcore/noise.hpp"
#include "ctxkernel/version.hpp"

namespace ctxk::runner {

using nlohmann::json;

// Scalar noise profile used by plans; expanded to a per-circuit NoiseModel
// once the qubit count is known.
struct NoiseProfile {
    double single_qubit_depolarizing = 0.0;
    double two_qubit_depolarizing = 0.0;
    double idle_dephasing = 0.0;
    double readout_flip = 0.0;

    bool is_trivial() const {
        return single_qubit_depolarizing == 0.0 && two_qubit_depolarizing == 0.0 &&
               idle_dephasing == 0.0 && readout_flip == 0.0;
    }

    simcore::NoiseModel to_model(int n_qubits) const {
        simcore::NoiseModel nm;
        nm.single_qubit_depolarizing = single_qubit_depolarizing;
        nm.two_qubit_depolarizing = two_qubit_depolarizing;
        nm.idle_dephasing = idle_dephasing;
        if (readout_flip > 0.0)
            nm.readout_confusion.assign(n_qubits,
                                        simcore::ReadoutConfusion::symmetric_flip(readout_flip));
        return nm;
    }

    json to_json() const {
        return json{{"single_qubit_depolarizing", single_qubit_depolarizing},
                    {"two_qubit_depolarizing", two_qubit_depolarizing},
                    {"idle_dephasing", idle_dephasing},
                    {"readout_flip", readout_flip}};
    }
};

// Per-lane noise assignment with a shared default.
struct NoiseTable {
    NoiseProfile default_profile;
    std::map<int, NoiseProfile> lane_profiles;

    bool is_trivial() const {
        if (!default_profile.is_trivial())
            return false;
        for (const auto& [lane, p] : lane_profiles)
            if (!p.is_trivial())
                return false;
        return true;
    }

    const NoiseProfile& for_lane(int lane) const {
        auto it = lane_profiles.find(lane);
        return it == lane_profiles.end() ? default_profile : it->second;
    }

    json to_json() const {
        json lanes = json::object();
        for (const auto& [lane, p] : lane_profiles)
            lanes[std::to_string(lane)] = p.to_json();
        return json{{"default", default_profile.to_json()}, {"lanes", lanes}};
    }
};

namespace detail {

[[noreturn]] inline void plan_fail(const std::string& path, const std::string& message) {
    throw invalid_plan_error("plan" + path + ": " + message);
}

inline double get_number(const json& j, const std::string& path, const std::string& key,
                         std::optional<double> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback)
            return *fallback;
        plan_fail(path + "/" + key, "missing required number");
    }
    if (!j.at(key).is_number())
        plan_fail(path + "/" + key, "expected a number");
    return j.at(key).get<double>();
}

inline NoiseProfile parse_profile(const json& j, const std::string& path) {
    if (!j.is_object())
        plan_fail(path, "expected a noise profile object");
    for (const auto& [key, val] : j.items())
        if (key != "single_qubit_depolarizing" && key != "two_qubit_depolarizing" &&
            key != "idle_dephasing" && key != "readout_flip")
            plan_fail(path + "/" + key, "unknown noise profile field");
    NoiseProfile p;
    p.single_qubit_depolarizing = get_number(j, path, "single_qubit_depolarizing", 0.0);
    p.two_qubit_depolarizing = get_number(j, path, "two_qubit_depolarizing", 0.0);
    p.idle_dephasing = get_number(j, path, "idle_dephasing", 0.0);
    p.readout_flip = get_number(j, path, "readout_flip", 0.0);
    auto check01 = [&](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0))
            plan_fail(path + "/" + name, "must lie in [0,1]");
    };
    check01(p.single_qubit_depolarizing, "single_qubit_depolarizing");
    check01(p.two_qubit_depolarizing, "two_qubit_depolarizing");
    check01(p.idle_dephasing, "idle_dephasing");
    check01(p.readout_flip, "readout_flip");
    return p;
}

inline NoiseTable parse_noise_table(const json& j, const std::string& path) {
    NoiseTable table;
    if (!j.is_object())
        plan_fail(path, "expected a noise table object");
    for (const auto& [key, val] : j.items())
        if (key != "default" && key != "lanes")
            plan_fail(path + "/" + key, "unknown noise table field");
    if (j.contains("default"))
        table.default_profile = parse_profile(j.at("default"), path + "/default");
    if (j.contains("lanes")) {
        if (!j.at("lanes").is_object())
            plan_fail(path + "/lanes", "expected an object keyed by lane id");
        for (const auto& [key, val] : j.at("lanes").items()) {
            int lane = -1;
            try {
                lane = std::stoi(key);
            } catch (...) {
                plan_fail(path + "/lanes/" + key, "lane key must be an integer");
            }
            table.lane_profiles[lane] = parse_profile(val, path + "/lanes/" + key);
        }
    }
    return table;
}

} // namespace detail

struct A6Plan {
    int lanes = 8;
    std::uint64_t shots = 768;
    std::vector<double> thetas{0.0, harness::kPi / 4.0, harness::kPi / 2.0, harness::kPi};
    std::vector<std::string> families{"ACTIVE", "PASSIVE1", "PASSIVE2", "CTXONLY"};
    std::string basis = "XX";
    std::uint64_t seed = 1;
    int shuffles = 500;
    int resamples = 500;
    bool exact = false;
    std::optional<NoiseTable> noise_table;

    json to_json() const {
        json j;
        j["schema"] = kPlanSchema;
        j["experiment"] = "A6";
        j["lanes"] = lanes;
        j["shots"] = shots;
        j["thetas"] = thetas;
        j["families"] = families;
        j["basis"] = basis;
        j["seed"] = seed;
        j["shuffles"] = shuffles;
        j["resamples"] = resamples;
        j["exact"] = exact;
        if (noise_table)
            j["noise_table"] = noise_table->to_json();
        return j;
    }
};

struct A62Plan {
    std::vector<double> lambdas; // default: 9 points on [0, pi]
    std::vector<std::string> branches{"MARK", "ERASE", "LOCAL", "WHICH_Z", "ERASE_X"};
    std::vector<double> phase_scan; // default: phase_points on [0, 2 pi)
    int phase_points = 12;
    std::uint64_t shots = 384;
    std::uint64_t seed = 1;
    int resamples = 500;
    bool exact = false;
    double bound_tolerance = 0.02; // 1e-9 is used automatically in exact mode
    std::optional<NoiseProfile> noise;

    A62Plan() {
        for (int i = 0; i < 9; ++i)
            lambdas.push_back(harness::kPi * i / 8.0);
        resolve_phases();
    }

    void resolve_phases() {
        if (phase_scan.empty())
            for (int i = 0; i < phase_points; ++i)
                phase_scan.push_back(2.0 * harness::kPi * i / phase_points);
    }

    double effective_bound_tolerance() const { return exact ? 1e-9 : bound_tolerance; }

    json to_json() const {
        json j;
        j["schema"] = kPlanSchema;
        j["experiment"] = "A6.2";
        j["lambdas"] = lambdas;
        j["branches"] = branches;
        j["phase_scan"] = phase_scan;
        j["shots"] = shots;
        j["seed"] = seed;
        j["resamples"] = resamples;
        j["exact"] = exact;
        j["bound_tolerance"] = bound_tolerance;
        if (noise)
            j["noise"] = noise->to_json();
        return j;
    }
};

inline std::string plan_experiment(const json& j) {
    if (!j.is_object())
        detail::plan_fail("", "plan must be a JSON object");
    if (j.contains("schema") && j.at("schema").get<std::string>() != kPlanSchema)
        detail::plan_fail("/schema", "unsupported schema (expected " + std::string(kPlanSchema) +
                                         ")");
    if (!j.contains("experiment"))
        detail::plan_fail("/experiment", "missing required field");
    std::string exp = j.at("experiment").is_string() ? j.at("experiment").get<std::string>() : "";
    if (exp != "A6" && exp != "A6.2")
        detail::plan_fail("/experiment", "must be \"A6\" or \"A6.2\"");
    return exp;
}

inline A6Plan parse_a6_plan(const json& j) {
    static const std::vector<std::string> known{"schema",    "experiment", "lanes",
                                                "shots",     "thetas",     "families",
                                                "basis",     "seed",       "shuffles",
                                                "resamples", "exact",      "noise_table"};
    for (const auto& [key, val] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            detail::plan_fail("/" + key, "unknown field");

    A6Plan plan;
    plan.lanes = static_cast<int>(detail::get_number(j, "", "lanes", plan.lanes));
    if (plan.lanes < 1 || plan.lanes > 64)
        detail::plan_fail("/lanes", "must lie in [1, 64]");
    plan.shots = static_cast<std::uint64_t>(detail::get_number(
        j, "", "shots", static_cast<double>(plan.shots)));
    if (plan.shots < 8)
        detail::plan_fail("/shots", "must be >= 8 (one shot per context triple)");
    if (j.contains("thetas")) {
        if (!j.at("thetas").is_array() || j.at("thetas").empty())
            detail::plan_fail("/thetas", "expected a nonempty array of angles");
        plan.thetas.clear();
        for (std::size_t i = 0; i < j.at("thetas").size(); ++i) {
            const auto& v = j.at("thetas")[i];
            if (!v.is_number())
                detail::plan_fail("/thetas[" + std::to_string(i) + "]", "expected a number");
            plan.thetas.push_back(v.get<double>());
        }
    }
    if (j.contains("families")) {
        if (!j.at("families").is_array() || j.at("families").empty())
            detail::plan_fail("/families", "expected a nonempty array");
        plan.families.clear();
        for (std::size_t i = 0; i < j.at("families").size(); ++i) {
            const auto& v = j.at("families")[i];
            if (!v.is_string())
                detail::plan_fail("/families[" + std::to_string(i) + "]", "expected a string");
            harness::family_from_name(v.get<std::string>()); // validates
            plan.families.push_back(v.get<std::string>());
        }
    }
    if (j.contains("basis")) {
        if (!j.at("basis").is_string())
            detail::plan_fail("/basis", "expected a string");
        plan.basis = j.at("basis").get<std::string>();
        harness::probe_basis_from_name(plan.basis);
    }
    plan.seed = static_cast<std::uint64_t>(
        detail::get_number(j, "", "seed", static_cast<double>(plan.seed)));
    plan.shuffles = static_cast<int>(detail::get_number(j, "", "shuffles", plan.shuffles));
    if (plan.shuffles < 1)
        detail::plan_fail("/shuffles", "must be >= 1");
    plan.resamples = static_cast<int>(detail::get_number(j, "", "resamples", plan.resamples));
    if (plan.resamples < 100)
        detail::plan_fail("/resamples", "must be >= 100");
    if (j.contains("exact")) {
        if (!j.at("exact").is_boolean())
            detail::plan_fail("/exact", "expected a boolean");
        plan.exact = j.at("exact").get<bool>();
    }
    if (j.contains("noise_table"))
        plan.noise_table = detail::parse_noise_table(j.at("noise_table"), "/noise_table");
    if (plan.exact && plan.noise_table && !plan.noise_table->is_trivial())
        detail::plan_fail("/exact", "expectation mode cannot be combined with a noise table");
    return plan;
}

inline A62Plan parse_a62_plan(const json& j) {
    static const std::vector<std::string> known{
        "schema", "experiment", "lambdas",   "branches", "phase_scan",      "phase_points",
        "shots",  "seed",       "resamples", "exact",    "bound_tolerance", "noise"};
    for (const auto& [key, val] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            detail::plan_fail("/" + key, "unknown field");

    A62Plan plan;
    if (j.contains("lambdas")) {
        if (!j.at("lambdas").is_array() || j.at("lambdas").empty())
            detail::plan_fail("/lambdas", "expected a nonempty array");
        plan.lambdas.clear();
        for (std::size_t i = 0; i < j.at("lambdas").size(); ++i) {
            const auto& v = j.at("lambdas")[i];
            if (!v.is_number())
                detail::plan_fail("/lambdas[" + std::to_string(i) + "]", "expected a number");
            double lam = v.get<double>();
            if (lam < 0.0 || lam > harness::kPi + 1e-12)
                detail::plan_fail("/lambdas[" + std::to_string(i) + "]", "must lie in [0, pi]");
            plan.lambdas.push_back(lam);
        }
    }
    if (j.contains("branches")) {
        if (!j.at("branches").is_array() || j.at("branches").empty())
            detail::plan_fail("/branches", "expected a nonempty array");
        plan.branches.clear();
        for (std::size_t i = 0; i < j.at("branches").size(); ++i) {
            const auto& v = j.at("branches")[i];
            if (!v.is_string())
                detail::plan_fail("/branches[" + std::to_string(i) + "]", "expected a string");
            harness::a62_branch_from_name(v.get<std::string>());
            plan.branches.push_back(v.get<std::string>());
        }
    }
    if (j.contains("phase_points")) {
        plan.phase_points = static_cast<int>(detail::get_number(j, "", "phase_points", 12.0));
        if (plan.phase_points < 4)
            detail::plan_fail("/phase_points", "must be >= 4");
        plan.phase_scan.clear();
    }
    if (j.contains("phase_scan")) {
        if (!j.at("phase_scan").is_array())
            detail::plan_fail("/phase_scan", "expected an array");
        plan.phase_scan.clear();
        for (std::size_t i = 0; i < j.at("phase_scan").size(); ++i) {
            const auto& v = j.at("phase_scan")[i];
            if (!v.is_number())
                detail::plan_fail("/phase_scan[" + std::to_string(i) + "]", "expected a number");
            plan.phase_scan.push_back(v.get<double>());
        }
    }
    plan.resolve_phases();
    if (plan.phase_scan.size() < 4)
        detail::plan_fail("/phase_scan", "need at least 4 phase points");
    {
        // must cover one full period of the register fringe (period 2 pi / 3)
        double lo = plan.phase_scan.front(), hi = plan.phase_scan.front();
        for (double p : plan.phase_scan) {
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        double span = hi - lo;
        double step = span / static_cast<double>(plan.phase_scan.size() - 1);
        if (span + step < 2.0 * harness::kPi / 3.0 - 1e-9)
            detail::plan_fail("/phase_scan", "must cover at least one fringe period");
    }
    plan.shots = static_cast<std::uint64_t>(
        detail::get_number(j, "", "shots", static_cast<double>(plan.shots)));
    if (plan.shots < 1)
        detail::plan_fail("/shots", "must be >= 1");
    plan.seed = static_cast<std::uint64_t>(
        detail::get_number(j, "", "seed", static_cast<double>(plan.seed)));
    plan.resamples = static_cast<int>(detail::get_number(j, "", "resamples", plan.resamples));
    if (j.contains("exact")) {
        if (!j.at("exact").is_boolean())
            detail::plan_fail("/exact", "expected a boolean");
        plan.exact = j.at("exact").get<bool>();
    }
    plan.bound_tolerance = detail::get_number(j, "", "bound_tolerance", plan.bound_tolerance);
    if (!(plan.bound_tolerance > 0.0))
        detail::plan_fail("/bound_tolerance", "must be positive");
    if (j.contains("noise"))
        plan.noise = detail::parse_profile(j.at("noise"), "/noise");
    if (plan.exact && plan.noise && !plan.noise->is_trivial())
        detail::plan_fail("/exact", "expectation mode cannot be combined with noise");
    return plan;
}

// FNV-1a over the canonicalized (sorted-key) JSON dump.
inline std::string plan_hash(const json& resolved) {
    std::uint64_t h = fnv1a64(resolved.dump());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace ctxk::runner
