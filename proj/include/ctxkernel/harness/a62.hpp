#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ctxkernel/errors.hpp"
#include "ctxkernel/harness/circuits.hpp"
#include "ctxkernel/simcore/circuit.hpp"

namespace ctxk::harness {

// A6.2 marker-strength sweep. The register is the GHZ-like triple
// (Q1, Q2, Q3); M is the marker ancilla. The marker states are aligned
// symmetrically about the eraser axis: a base RY(pi/2 - lambda/2) followed by
// CRY(lambda) from Q1 places them at Bloch angles pi/2 -+ lambda/2, so
//   - their overlap is eta(lambda) = cos(lambda/2),
//   - the Z readout of M is the optimal which-path measurement
//     (total variation distance sin(lambda/2)),
//   - the X readout of M (H then measure) is an eraser basis that is
//     unbiased between the two marker states at every lambda, which makes
//     both conditioned fringes full-visibility with opposite phase.
enum class A62Branch { MARK, ERASE, LOCAL, WHICH_Z, ERASE_X };

inline const char* a62_branch_name(A62Branch b) {
    switch (b) {
    case A62Branch::MARK: return "MARK";
    case A62Branch::ERASE: return "ERASE";
    case A62Branch::LOCAL: return "LOCAL";
    case A62Branch::WHICH_Z: return "WHICH_Z";
    case A62Branch::ERASE_X: return "ERASE_X";
    }
    return "?";
}

inline A62Branch a62_branch_from_name(const std::string& name) {
    if (name == "MARK")
        return A62Branch::MARK;
    if (name == "ERASE")
        return A62Branch::ERASE;
    if (name == "LOCAL")
        return A62Branch::LOCAL;
    if (name == "WHICH_Z")
        return A62Branch::WHICH_Z;
    if (name == "ERASE_X")
        return A62Branch::ERASE_X;
    throw invalid_plan_error("unknown A6.2 branch '" + name + "'");
}

// marker-state overlap under the MARK coupling
inline double marker_overlap(double lambda) { return std::cos(lambda / 2.0); }

// Z-flip probability for the dephasing-matched LOCAL reference
inline double local_flip_probability(double lambda) {
    return (1.0 - std::cos(lambda / 2.0)) / 2.0;
}

inline constexpr int kRegisterFringeHarmonic = 3; // phase enters on each register qubit
inline constexpr int kCompactFringeHarmonic = 1;

namespace detail {

inline simcore::Circuit ghz_register(const std::string& id, bool with_marker) {
    simcore::Circuit c;
    c.id = id;
    c.n_qubits = with_marker ? 4 : 3;
    c.qubit_labels = {"Q1", "Q2", "Q3"};
    if (with_marker)
        c.qubit_labels.push_back("M");
    c.basis_rotations.assign(c.n_qubits, Basis::X);
    c.measured_qubits.clear();
    for (int q = 0; q < c.n_qubits; ++q)
        c.measured_qubits.push_back(q);
    c.ops.push_back(GateOp::h(0));
    c.ops.push_back(GateOp::cx(0, 1));
    c.ops.push_back(GateOp::cx(1, 2));
    return c;
}

inline void mark_coupling(simcore::Circuit& c, double lambda, int control, int marker) {
    c.ops.push_back(GateOp::ry(kPi / 2.0 - lambda / 2.0, marker));
    c.ops.push_back(GateOp::cry(lambda, control, marker));
}

inline void register_phase(simcore::Circuit& c, double phi) {
    for (int q = 0; q < 3; ++q)
        c.ops.push_back(GateOp::rz(phi, q));
}

inline simcore::Circuit compact_base(const std::string& id, double lambda, double phi) {
    simcore::Circuit c;
    c.id = id;
    c.n_qubits = 2;
    c.qubit_labels = {"P", "M"};
    c.basis_rotations = {Basis::X, Basis::Z};
    c.measured_qubits = {0, 1};
    c.ops.push_back(GateOp::h(0));
    mark_coupling(c, lambda, 0, 1);
    c.ops.push_back(GateOp::rz(phi, 0));
    return c;
}

} // namespace detail

// Phase-scan circuit for one (branch, lambda, phi) point. For LOCAL this is
// the flip-free component; the stochastic reference is the two-component
// mixture below.
inline simcore::Circuit build_a62_circuit(A62Branch branch, double lambda, double phi,
                                          const std::string& id = "") {
    std::string cid = id.empty() ? std::string("A62_") + a62_branch_name(branch) : id;
    switch (branch) {
    case A62Branch::MARK: {
        simcore::Circuit c = detail::ghz_register(cid, true);
        detail::mark_coupling(c, lambda, 0, 3);
        detail::register_phase(c, phi);
        c.basis_rotations[3] = Basis::Z;
        return c;
    }
    case A62Branch::ERASE: {
        simcore::Circuit c = detail::ghz_register(cid, true);
        detail::mark_coupling(c, lambda, 0, 3);
        detail::register_phase(c, phi);
        c.basis_rotations[3] = Basis::X;
        return c;
    }
    case A62Branch::LOCAL: {
        simcore::Circuit c = detail::ghz_register(cid, false);
        detail::register_phase(c, phi);
        return c;
    }
    case A62Branch::WHICH_Z: {
        simcore::Circuit c = detail::compact_base(cid, lambda, phi);
        c.basis_rotations[1] = Basis::Z;
        return c;
    }
    case A62Branch::ERASE_X: {
        simcore::Circuit c = detail::compact_base(cid, lambda, phi);
        c.basis_rotations[1] = Basis::X;
        return c;
    }
    }
    throw invalid_plan_error("build_a62_circuit: unknown branch");
}

struct LocalMixture {
    std::vector<simcore::Circuit> circuits; // {no flip, Z flip on Q1}
    std::vector<double> weights;
};

// LOCAL reference: a per-shot Z flip on Q1 with probability
// (1 - cos(lambda/2)) / 2, matching the unconditional dephasing the MARK
// coupling induces on the register.
inline LocalMixture build_a62_local_mixture(double lambda, double phi,
                                            const std::string& id = "") {
    LocalMixture mix;
    std::string base = id.empty() ? "A62_LOCAL" : id;
    simcore::Circuit plain = build_a62_circuit(A62Branch::LOCAL, lambda, phi, base + "_id");
    simcore::Circuit flipped = build_a62_circuit(A62Branch::LOCAL, lambda, phi, base + "_zflip");
    // the flip precedes the analysis phase; Z commutes with RZ so placement
    // within the phase layer is immaterial
    flipped.ops.insert(flipped.ops.end() - 3, GateOp::z(0));
    double p = local_flip_probability(lambda);
    mix.circuits = {std::move(plain), std::move(flipped)};
    mix.weights = {1.0 - p, p};
    return mix;
}

// Which-path reference for the distinguishability estimate: register read in
// Z (branch labels), marker read in Z (its optimal discrimination basis).
inline simcore::Circuit build_a62_whichpath_circuit(double lambda, const std::string& id = "") {
    simcore::Circuit c = detail::ghz_register(id.empty() ? "A62_WHICHPATH" : id, true);
    detail::mark_coupling(c, lambda, 0, 3);
    c.basis_rotations.assign(4, Basis::Z);
    return c;
}

} // namespace ctxk::harness
