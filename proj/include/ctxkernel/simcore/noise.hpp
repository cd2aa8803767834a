#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ctxkernel/errors.hpp"

namespace ctxk::simcore {

// Row-stochastic 2x2 assignment matrix, m[true_bit][read_bit].
struct ReadoutConfusion {
    std::array<std::array<double, 2>, 2> m{{{1.0, 0.0}, {0.0, 1.0}}};

    static ReadoutConfusion symmetric_flip(double p) {
        ReadoutConfusion c;
        c.m[0] = {1.0 - p, p};
        c.m[1] = {p, 1.0 - p};
        return c;
    }

    bool is_identity() const {
        return m[0][0] == 1.0 && m[0][1] == 0.0 && m[1][0] == 0.0 && m[1][1] == 1.0;
    }

    void validate() const {
        for (int b = 0; b < 2; ++b) {
            for (int r = 0; r < 2; ++r)
                if (m[b][r] < 0.0 || m[b][r] > 1.0)
                    throw invalid_circuit_error("readout confusion entry out of [0,1]");
            if (std::abs(m[b][0] + m[b][1] - 1.0) > 1e-12)
                throw invalid_circuit_error("readout confusion row does not sum to 1");
        }
    }
};

// Pauli-channel noise realized as stochastic trajectories on pure states:
//  - after each 1q (2q) gate, each gate qubit suffers a uniform non-identity
//    Pauli with the listed probability;
//  - after each gate, every qubit not touched by it suffers Z with the
//    idle_dephasing probability (one gate = one layer);
//  - readout confusion acts classically on the sampled bits.
struct NoiseModel {
    double single_qubit_depolarizing = 0.0;
    double two_qubit_depolarizing = 0.0;
    double idle_dephasing = 0.0;
    std::vector<ReadoutConfusion> readout_confusion; // empty or one per qubit

    static NoiseModel ideal() { return {}; }

    static NoiseModel uniform_readout_flip(int n_qubits, double p) {
        NoiseModel nm;
        nm.readout_confusion.assign(n_qubits, ReadoutConfusion::symmetric_flip(p));
        return nm;
    }

    bool has_gate_noise() const {
        return single_qubit_depolarizing > 0.0 || two_qubit_depolarizing > 0.0 ||
               idle_dephasing > 0.0;
    }

    bool has_readout_noise() const {
        for (const auto& c : readout_confusion)
            if (!c.is_identity())
                return true;
        return false;
    }

    bool is_trivial() const { return !has_gate_noise() && !has_readout_noise(); }

    void validate(int n_qubits) const {
        auto check01 = [](double p, const char* name) {
            if (!(p >= 0.0 && p <= 1.0))
                throw invalid_circuit_error(std::string(name) + " out of [0,1]");
        };
        check01(single_qubit_depolarizing, "single_qubit_depolarizing");
        check01(two_qubit_depolarizing, "two_qubit_depolarizing");
        check01(idle_dephasing, "idle_dephasing");
        if (!readout_confusion.empty() &&
            static_cast<int>(readout_confusion.size()) != n_qubits)
            throw invalid_circuit_error("readout_confusion must have one matrix per qubit");
        for (const auto& c : readout_confusion)
            c.validate();
    }
};

} // namespace ctxk::simcore
