#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ctxkernel/errors.hpp"
#include "ctxkernel/harness/context.hpp"
#include "ctxkernel/simcore/circuit.hpp"

namespace ctxk::harness {

using simcore::Basis;
using simcore::Circuit;
using simcore::GateOp;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// A6 motif layout: probe pair (A, B) plus context register (C0, C1, C2).
inline constexpr int kQubitA = 0;
inline constexpr int kQubitB = 1;
inline constexpr int kQubitC0 = 2;
inline constexpr int kQubitC1 = 3;
inline constexpr int kQubitC2 = 4;

enum class Family { ACTIVE, PASSIVE1, PASSIVE2, CTXONLY };

inline const char* family_name(Family f) {
    switch (f) {
    case Family::ACTIVE: return "ACTIVE";
    case Family::PASSIVE1: return "PASSIVE1";
    case Family::PASSIVE2: return "PASSIVE2";
    case Family::CTXONLY: return "CTXONLY";
    }
    return "?";
}

inline Family family_from_name(const std::string& name) {
    if (name == "ACTIVE")
        return Family::ACTIVE;
    if (name == "PASSIVE1")
        return Family::PASSIVE1;
    if (name == "PASSIVE2")
        return Family::PASSIVE2;
    if (name == "CTXONLY")
        return Family::CTXONLY;
    throw invalid_plan_error("unknown circuit family '" + name + "'");
}

enum class ProbeBasis { XX, ZZ };

inline const char* probe_basis_name(ProbeBasis b) { return b == ProbeBasis::XX ? "XX" : "ZZ"; }

inline ProbeBasis probe_basis_from_name(const std::string& name) {
    if (name == "XX")
        return ProbeBasis::XX;
    if (name == "ZZ")
        return ProbeBasis::ZZ;
    throw invalid_plan_error("unknown probe basis '" + name + "'");
}

namespace detail {

inline Circuit motif_base(const std::string& id, ProbeBasis basis) {
    Circuit c;
    c.id = id;
    c.n_qubits = 5;
    c.qubit_labels = {"A", "B", "C0", "C1", "C2"};
    c.basis_rotations.assign(5, Basis::Z);
    if (basis == ProbeBasis::XX) {
        c.basis_rotations[kQubitA] = Basis::X;
        c.basis_rotations[kQubitB] = Basis::X;
    }
    c.measured_qubits = {kQubitA, kQubitB, kQubitC0, kQubitC1, kQubitC2};
    c.ops.push_back(GateOp::h(kQubitA));
    c.ops.push_back(GateOp::h(kQubitB));
    return c;
}

inline void prepare_context(Circuit& c, const BitTriple& triple) {
    const int ctx[3] = {kQubitC0, kQubitC1, kQubitC2};
    for (int i = 0; i < 3; ++i)
        if (triple[i])
            c.ops.push_back(GateOp::x(ctx[i]));
}

} // namespace detail

// ACTIVE: fold the context parity into C2 with two CX, fire a conditional
// ZZ(theta) on the probe pair from C2, uncompute, measure everything.
// `fire_on_even` inverts the control (the R1 replicate), so the
// interaction-on class swaps while the prepared triples stay the same.
inline Circuit build_active_circuit(double theta, const BitTriple& triple, ProbeBasis basis,
                                    bool fire_on_even = false, const std::string& id = "") {
    Circuit c = detail::motif_base(id.empty() ? "ACTIVE_" + triple_string(triple) : id, basis);
    detail::prepare_context(c, triple);
    c.ops.push_back(GateOp::cx(kQubitC0, kQubitC2));
    c.ops.push_back(GateOp::cx(kQubitC1, kQubitC2));
    if (fire_on_even)
        c.ops.push_back(GateOp::x(kQubitC2));
    c.ops.push_back(GateOp::crzz(theta, kQubitC2, kQubitA, kQubitB));
    if (fire_on_even)
        c.ops.push_back(GateOp::x(kQubitC2));
    c.ops.push_back(GateOp::cx(kQubitC1, kQubitC2));
    c.ops.push_back(GateOp::cx(kQubitC0, kQubitC2));
    return c;
}

enum class PassiveVariant { PASSIVE1, PASSIVE2 };

// PASSIVE1 drops the parity logic and the conditional gate; PASSIVE2 keeps
// the compute/uncompute scaffold but never fires an interaction.
inline Circuit build_passive_circuit(PassiveVariant variant, const BitTriple& triple,
                                     ProbeBasis basis, const std::string& id = "") {
    const char* tag = variant == PassiveVariant::PASSIVE1 ? "PASSIVE1_" : "PASSIVE2_";
    Circuit c = detail::motif_base(id.empty() ? tag + triple_string(triple) : id, basis);
    detail::prepare_context(c, triple);
    if (variant == PassiveVariant::PASSIVE2) {
        c.ops.push_back(GateOp::cx(kQubitC0, kQubitC2));
        c.ops.push_back(GateOp::cx(kQubitC1, kQubitC2));
        c.ops.push_back(GateOp::cx(kQubitC1, kQubitC2));
        c.ops.push_back(GateOp::cx(kQubitC0, kQubitC2));
    }
    return c;
}

// Context register alone, Z readout; the SPAM/quality screen.
inline Circuit build_ctxonly_circuit(const BitTriple& triple, const std::string& id = "") {
    Circuit c;
    c.id = id.empty() ? "CTXONLY_" + triple_string(triple) : id;
    c.n_qubits = 3;
    c.qubit_labels = {"C0", "C1", "C2"};
    c.basis_rotations.assign(3, Basis::Z);
    c.measured_qubits = {0, 1, 2};
    for (int i = 0; i < 3; ++i)
        if (triple[i])
            c.ops.push_back(GateOp::x(i));
    return c;
}

} // namespace ctxk::harness
