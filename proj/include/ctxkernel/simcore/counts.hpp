#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctxkernel/errors.hpp"

namespace ctxk::simcore {

// Aggregated shot outcomes. Key character i is the readout bit of
// bit_order[i], so "01" with bit_order ["A","B"] means A=0, B=1.
struct CountsTable {
    std::vector<std::string> bit_order;
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t total_shots = 0;

    void add(const std::string& outcome, std::uint64_t n = 1) {
        counts[outcome] += n;
        total_shots += n;
    }

    void validate() const {
        std::uint64_t sum = 0;
        for (const auto& [key, n] : counts) {
            if (key.size() != bit_order.size())
                throw invalid_circuit_error("counts key '" + key + "' length != bit_order size");
            for (char c : key)
                if (c != '0' && c != '1')
                    throw invalid_circuit_error("counts key '" + key + "' has non-bit character");
            sum += n;
        }
        if (sum != total_shots)
            throw invalid_circuit_error("counts sum != total_shots");
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["bit_order"] = bit_order;
        nlohmann::json c = nlohmann::json::object();
        for (const auto& [key, n] : counts)
            c[key] = n;
        j["counts"] = c;
        j["total_shots"] = total_shots;
        return j;
    }

    static CountsTable from_json(const nlohmann::json& j) {
        CountsTable t;
        t.bit_order = j.at("bit_order").get<std::vector<std::string>>();
        for (const auto& [key, val] : j.at("counts").items())
            t.counts[key] = val.get<std::uint64_t>();
        t.total_shots = j.at("total_shots").get<std::uint64_t>();
        t.validate();
        return t;
    }

    std::string to_csv() const {
        std::ostringstream out;
        out << "# bit_order=";
        for (std::size_t i = 0; i < bit_order.size(); ++i)
            out << (i ? "," : "") << bit_order[i];
        out << "\noutcome,count\n";
        for (const auto& [key, n] : counts)
            out << key << ',' << n << '\n';
        return out.str();
    }

    static CountsTable from_csv(const std::string& text) {
        CountsTable t;
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
                    t.bit_order.push_back(f);
                continue;
            }
            if (!header_seen) {
                if (line != "outcome,count")
                    throw invalid_circuit_error("counts CSV: expected 'outcome,count' header");
                header_seen = true;
                continue;
            }
            auto comma = line.find(',');
            if (comma == std::string::npos)
                throw invalid_circuit_error("counts CSV: malformed row '" + line + "'");
            t.add(line.substr(0, comma), std::stoull(line.substr(comma + 1)));
        }
        t.validate();
        return t;
    }
};

// Exact outcome probabilities over the same key convention; the infinite-shot
// counterpart of CountsTable used by expectation-mode runs.
struct OutcomeDistribution {
    std::vector<std::string> bit_order;
    std::map<std::string, double> probs;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["bit_order"] = bit_order;
        nlohmann::json p = nlohmann::json::object();
        for (const auto& [key, v] : probs)
            p[key] = v;
        j["probabilities"] = p;
        return j;
    }

    static OutcomeDistribution from_json(const nlohmann::json& j) {
        OutcomeDistribution d;
        d.bit_order = j.at("bit_order").get<std::vector<std::string>>();
        for (const auto& [key, val] : j.at("probabilities").items())
            d.probs[key] = val.get<double>();
        return d;
    }
};

} // namespace ctxk::simcore
