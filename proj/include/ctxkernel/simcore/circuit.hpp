#pragma once

#include <string>
#include <vector>

#include "ctxkernel/errors.hpp"
#include "ctxkernel/simcore/gates.hpp"
#include "ctxkernel/simcore/state.hpp"

namespace ctxk::simcore {

enum class Basis { Z, X };

// Ordered gate program plus terminal readout description. A qubit whose
// basis is X gets a terminal H before the Z-basis readout.
struct Circuit {
    std::string id;
    int n_qubits = 0;
    std::vector<GateOp> ops;
    std::vector<int> measured_qubits;
    std::vector<Basis> basis_rotations; // one per qubit
    std::vector<std::string> qubit_labels;

    void validate() const {
        if (n_qubits < 1 || n_qubits > kMaxQubits)
            throw invalid_circuit_error("circuit '" + id + "': n_qubits out of range");
        if (static_cast<int>(basis_rotations.size()) != n_qubits)
            throw invalid_circuit_error("circuit '" + id + "': basis_rotations size mismatch");
        if (static_cast<int>(qubit_labels.size()) != n_qubits)
            throw invalid_circuit_error("circuit '" + id + "': qubit_labels size mismatch");
        if (measured_qubits.empty())
            throw invalid_circuit_error("circuit '" + id + "': nothing measured");
        std::vector<bool> seen(n_qubits, false);
        for (int q : measured_qubits) {
            if (q < 0 || q >= n_qubits)
                throw invalid_circuit_error("circuit '" + id + "': measured qubit out of range");
            if (seen[q])
                throw invalid_circuit_error("circuit '" + id + "': duplicate measured qubit");
            seen[q] = true;
        }
        for (const GateOp& g : ops)
            for (int q : g.targets)
                if (q < 0 || q >= n_qubits)
                    throw invalid_circuit_error("circuit '" + id + "': gate qubit out of range");
    }

    std::vector<std::string> measured_labels() const {
        std::vector<std::string> out;
        out.reserve(measured_qubits.size());
        for (int q : measured_qubits)
            out.push_back(qubit_labels[q]);
        return out;
    }
};

// Evolves |0...0> through the circuit. Terminal basis rotations are applied
// when include_basis_rotations is set, so the returned state is read out in
// the computational basis.
inline QuantumState run_circuit(const Circuit& c, bool include_basis_rotations = true) {
    c.validate();
    QuantumState state(c.n_qubits);
    for (const GateOp& g : c.ops)
        state.apply_in_place(g);
    if (include_basis_rotations)
        for (int q = 0; q < c.n_qubits; ++q)
            if (c.basis_rotations[q] == Basis::X)
                state.apply_in_place(GateOp::h(q));
    return state;
}

} // namespace ctxk::simcore
