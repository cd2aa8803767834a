#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ctxkernel/errors.hpp"
#include "ctxkernel/rng.hpp"
#include "ctxkernel/simcore/circuit.hpp"
#include "ctxkernel/simcore/counts.hpp"
#include "ctxkernel/simcore/noise.hpp"

namespace ctxk::simcore {

namespace detail {

inline std::string extract_outcome(std::size_t basis_index, const Circuit& c) {
    std::string s(c.measured_qubits.size(), '0');
    for (std::size_t i = 0; i < c.measured_qubits.size(); ++i)
        if (basis_index & (std::size_t{1} << c.measured_qubits[i]))
            s[i] = '1';
    return s;
}

inline std::size_t sample_basis_index(const QuantumState& state, CounterRng& rng) {
    double u = rng.next_double();
    double acc = 0.0;
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        acc += std::norm(amps[i]);
        if (u < acc)
            return i;
    }
    return amps.size() - 1;
}

inline void apply_readout_confusion(std::string& outcome, const Circuit& c,
                                    const NoiseModel& noise, CounterRng& rng) {
    if (noise.readout_confusion.empty())
        return;
    for (std::size_t i = 0; i < c.measured_qubits.size(); ++i) {
        const auto& conf = noise.readout_confusion[c.measured_qubits[i]];
        int b = outcome[i] - '0';
        if (rng.next_double() < conf.m[b][1 - b])
            outcome[i] = char('0' + (1 - b));
    }
}

// one full noisy trajectory: gate, stochastic Pauli insertion, idle dephasing
inline void evolve_noisy(QuantumState& state, const Circuit& c, const NoiseModel& noise,
                         CounterRng& rng) {
    const int n = c.n_qubits;
    for (const GateOp& g : c.ops) {
        state.apply_in_place(g);
        const double p = g.is_two_qubit_entangler() ? noise.two_qubit_depolarizing
                                                    : noise.single_qubit_depolarizing;
        if (p > 0.0) {
            for (int q : g.targets) {
                if (rng.next_double() < p) {
                    switch (rng.next_below(3)) {
                    case 0: state.apply_in_place(GateOp::x(q)); break;
                    case 1: state.apply_pauli_y(q); break;
                    default: state.apply_in_place(GateOp::z(q)); break;
                    }
                }
            }
        }
        if (noise.idle_dephasing > 0.0) {
            for (int q = 0; q < n; ++q) {
                bool touched = false;
                for (int t : g.targets)
                    if (t == q)
                        touched = true;
                if (!touched && rng.next_double() < noise.idle_dephasing)
                    state.apply_in_place(GateOp::z(q));
            }
        }
    }
    for (int q = 0; q < n; ++q)
        if (c.basis_rotations[q] == Basis::X)
            state.apply_in_place(GateOp::h(q));
}

} // namespace detail

// Seeded shot sampling. The per-shot random stream is keyed by
// (seed, circuit id, shot index), so results do not depend on how shots or
// circuits are scheduled.
inline CountsTable sample_counts(const Circuit& circuit, std::uint64_t shots,
                                 const NoiseModel& noise, std::uint64_t seed) {
    circuit.validate();
    noise.validate(circuit.n_qubits);
    if (shots < 1)
        throw invalid_circuit_error("sample_counts: shots must be >= 1");

    CountsTable table;
    table.bit_order = circuit.measured_labels();
    const std::uint64_t stream = fnv1a64(circuit.id);

    if (!noise.has_gate_noise()) {
        // single exact evolution; shots draw from the final distribution
        QuantumState state = run_circuit(circuit);
        for (std::uint64_t s = 0; s < shots; ++s) {
            CounterRng rng(seed, stream, s);
            std::size_t idx = detail::sample_basis_index(state, rng);
            std::string outcome = detail::extract_outcome(idx, circuit);
            detail::apply_readout_confusion(outcome, circuit, noise, rng);
            table.add(outcome);
        }
        return table;
    }

    for (std::uint64_t s = 0; s < shots; ++s) {
        CounterRng rng(seed, stream, s);
        QuantumState state(circuit.n_qubits);
        detail::evolve_noisy(state, circuit, noise, rng);
        std::size_t idx = detail::sample_basis_index(state, rng);
        std::string outcome = detail::extract_outcome(idx, circuit);
        detail::apply_readout_confusion(outcome, circuit, noise, rng);
        table.add(outcome);
    }
    return table;
}

// Classical mixture of circuits sharing one measurement layout; the component
// is drawn per shot. Used for stochastic reference branches.
inline CountsTable sample_counts_mixture(std::span<const Circuit> circuits,
                                         std::span<const double> weights, std::uint64_t shots,
                                         const NoiseModel& noise, std::uint64_t seed,
                                         const std::string& mixture_id) {
    if (circuits.empty() || circuits.size() != weights.size())
        throw invalid_circuit_error("sample_counts_mixture: bad component list");
    double wsum = 0.0;
    for (double w : weights) {
        if (w < 0.0)
            throw invalid_circuit_error("sample_counts_mixture: negative weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-9)
        throw invalid_circuit_error("sample_counts_mixture: weights must sum to 1");
    for (const Circuit& c : circuits) {
        c.validate();
        noise.validate(c.n_qubits);
    }

    CountsTable table;
    table.bit_order = circuits[0].measured_labels();
    const std::uint64_t stream = fnv1a64(mixture_id);

    std::vector<QuantumState> pure;
    if (!noise.has_gate_noise())
        for (const Circuit& c : circuits)
            pure.push_back(run_circuit(c));

    for (std::uint64_t s = 0; s < shots; ++s) {
        CounterRng rng(seed, stream, s);
        double u = rng.next_double();
        std::size_t pick = 0;
        double acc = 0.0;
        for (std::size_t k = 0; k < circuits.size(); ++k) {
            acc += weights[k];
            if (u < acc) {
                pick = k;
                break;
            }
            pick = k;
        }
        const Circuit& c = circuits[pick];
        std::size_t idx;
        if (!noise.has_gate_noise()) {
            idx = detail::sample_basis_index(pure[pick], rng);
        } else {
            QuantumState state(c.n_qubits);
            detail::evolve_noisy(state, c, noise, rng);
            idx = detail::sample_basis_index(state, rng);
        }
        std::string outcome = detail::extract_outcome(idx, c);
        detail::apply_readout_confusion(outcome, c, noise, rng);
        table.add(outcome);
    }
    return table;
}

// Noiseless outcome probabilities over the measured qubits.
inline OutcomeDistribution exact_outcome_distribution(const Circuit& circuit) {
    QuantumState state = run_circuit(circuit);
    OutcomeDistribution dist;
    dist.bit_order = circuit.measured_labels();
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        double p = std::norm(amps[i]);
        if (p <= 0.0)
            continue;
        dist.probs[detail::extract_outcome(i, circuit)] += p;
    }
    return dist;
}

inline OutcomeDistribution mix_distributions(std::span<const OutcomeDistribution> parts,
                                             std::span<const double> weights) {
    if (parts.empty() || parts.size() != weights.size())
        throw invalid_circuit_error("mix_distributions: bad component list");
    OutcomeDistribution out;
    out.bit_order = parts[0].bit_order;
    for (std::size_t k = 0; k < parts.size(); ++k)
        for (const auto& [key, p] : parts[k].probs)
            out.probs[key] += weights[k] * p;
    return out;
}

} // namespace ctxk::simcore
