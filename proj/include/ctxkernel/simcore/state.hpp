#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxkernel/errors.hpp"
#include "ctxkernel/simcore/gates.hpp"

namespace ctxk::simcore {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 8;

// Exact statevector over n qubits. Qubit 0 is the least significant bit of
// the basis-state index; CountsTable carries an explicit bit order so nothing
// downstream depends on this convention.
class QuantumState {
  public:
    explicit QuantumState(int n_qubits) : n_(n_qubits) {
        if (n_qubits < 1 || n_qubits > kMaxQubits)
            throw invalid_circuit_error("QuantumState: n_qubits must be in [1, 8], got " +
                                        std::to_string(n_qubits));
        amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
        amps_[0] = 1.0;
    }

    static QuantumState from_amplitudes(int n_qubits, std::vector<cplx> amps) {
        QuantumState s(n_qubits);
        if (amps.size() != s.dim())
            throw invalid_circuit_error("QuantumState: amplitude vector has wrong length");
        s.amps_ = std::move(amps);
        return s;
    }

    int n_qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    cplx amplitude(std::size_t basis_index) const { return amps_[basis_index]; }

    double norm_sq() const {
        double s = 0.0;
        for (const cplx& a : amps_)
            s += std::norm(a);
        return s;
    }

    void apply_in_place(const GateOp& g) {
        check_targets(g);
        switch (g.kind) {
        case GateKind::H: apply_h(g.targets[0]); break;
        case GateKind::X: apply_x(g.targets[0]); break;
        case GateKind::Z: apply_z(g.targets[0]); break;
        case GateKind::RY: apply_ry(g.angle, g.targets[0]); break;
        case GateKind::RZ: apply_rz(g.angle, g.targets[0]); break;
        case GateKind::CX: apply_cx(g.targets[0], g.targets[1]); break;
        case GateKind::CZ: apply_cz(g.targets[0], g.targets[1]); break;
        case GateKind::CRY: apply_cry(g.angle, g.targets[0], g.targets[1]); break;
        case GateKind::RZZ: apply_rzz(g.angle, g.targets[0], g.targets[1]); break;
        case GateKind::CRZZ: apply_crzz(g.angle, g.targets[0], g.targets[1], g.targets[2]); break;
        }
    }

    // internal Pauli application used by the stochastic noise channels
    void apply_pauli_y(int q) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (i & bit)
                continue;
            // Y = [[0,-i],[i,0]]
            cplx a0 = amps_[i], a1 = amps_[i | bit];
            amps_[i] = cplx{0.0, -1.0} * a1;
            amps_[i | bit] = cplx{0.0, 1.0} * a0;
        }
    }

  private:
    void check_targets(const GateOp& g) const {
        std::size_t expected = 1;
        if (g.kind == GateKind::CX || g.kind == GateKind::CZ || g.kind == GateKind::CRY ||
            g.kind == GateKind::RZZ)
            expected = 2;
        if (g.kind == GateKind::CRZZ)
            expected = 3;
        if (g.targets.size() != expected)
            throw invalid_circuit_error(std::string("gate ") + gate_name(g.kind) +
                                        ": wrong target count");
        for (std::size_t i = 0; i < g.targets.size(); ++i) {
            int q = g.targets[i];
            if (q < 0 || q >= n_)
                throw invalid_circuit_error(std::string("gate ") + gate_name(g.kind) +
                                            ": qubit index " + std::to_string(q) + " out of range");
            for (std::size_t j = 0; j < i; ++j)
                if (g.targets[j] == q)
                    throw invalid_circuit_error(std::string("gate ") + gate_name(g.kind) +
                                                ": duplicate qubit index " + std::to_string(q));
        }
    }

    void apply_single(int q, cplx u00, cplx u01, cplx u10, cplx u11) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (i & bit)
                continue;
            cplx a0 = amps_[i], a1 = amps_[i | bit];
            amps_[i] = u00 * a0 + u01 * a1;
            amps_[i | bit] = u10 * a0 + u11 * a1;
        }
    }

    void apply_h(int q) {
        const double s = 1.0 / std::sqrt(2.0);
        apply_single(q, s, s, s, -s);
    }

    void apply_x(int q) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if (!(i & bit))
                std::swap(amps_[i], amps_[i | bit]);
    }

    void apply_z(int q) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if (i & bit)
                amps_[i] = -amps_[i];
    }

    void apply_ry(double theta, int q) {
        const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
        apply_single(q, c, -s, s, c);
    }

    void apply_rz(double phi, int q) {
        const cplx e0 = std::polar(1.0, -phi / 2.0), e1 = std::polar(1.0, phi / 2.0);
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t i = 0; i < amps_.size(); ++i)
            amps_[i] *= (i & bit) ? e1 : e0;
    }

    void apply_cx(int control, int target) {
        const std::size_t cbit = std::size_t{1} << control;
        const std::size_t tbit = std::size_t{1} << target;
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if ((i & cbit) && !(i & tbit))
                std::swap(amps_[i], amps_[i | tbit]);
    }

    void apply_cz(int a, int b) {
        const std::size_t abit = std::size_t{1} << a, bbit = std::size_t{1} << b;
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if ((i & abit) && (i & bbit))
                amps_[i] = -amps_[i];
    }

    void apply_cry(double theta, int control, int target) {
        const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
        const std::size_t cbit = std::size_t{1} << control;
        const std::size_t tbit = std::size_t{1} << target;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (!(i & cbit) || (i & tbit))
                continue;
            cplx a0 = amps_[i], a1 = amps_[i | tbit];
            amps_[i] = c * a0 - s * a1;
            amps_[i | tbit] = s * a0 + c * a1;
        }
    }

    // exp(-i theta (Z (x) Z) / 2): diagonal phase by the parity of the two bits
    void apply_rzz(double theta, int a, int b) {
        const cplx even = std::polar(1.0, -theta / 2.0), odd = std::polar(1.0, theta / 2.0);
        const std::size_t abit = std::size_t{1} << a, bbit = std::size_t{1} << b;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            bool parity = (bool(i & abit)) != (bool(i & bbit));
            amps_[i] *= parity ? odd : even;
        }
    }

    void apply_crzz(double theta, int control, int a, int b) {
        const cplx even = std::polar(1.0, -theta / 2.0), odd = std::polar(1.0, theta / 2.0);
        const std::size_t cbit = std::size_t{1} << control;
        const std::size_t abit = std::size_t{1} << a, bbit = std::size_t{1} << b;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (!(i & cbit))
                continue;
            bool parity = (bool(i & abit)) != (bool(i & bbit));
            amps_[i] *= parity ? odd : even;
        }
    }

    int n_;
    std::vector<cplx> amps_;
};

inline QuantumState apply_gate(const QuantumState& state, const GateOp& gate) {
    QuantumState out = state;
    out.apply_in_place(gate);
    return out;
}

// Exact <P> for a Pauli string with one letter per qubit, pauli[q] acting on
// qubit q. Letters in {I, X, Y, Z}.
inline double expectation(const QuantumState& state, std::string_view pauli) {
    if (static_cast<int>(pauli.size()) != state.n_qubits())
        throw invalid_observable_error("expectation: Pauli string length " +
                                       std::to_string(pauli.size()) + " != n_qubits " +
                                       std::to_string(state.n_qubits()));
    std::size_t flip_mask = 0;
    std::size_t z_mask = 0;
    std::size_t y_mask = 0;
    for (int q = 0; q < state.n_qubits(); ++q) {
        switch (pauli[q]) {
        case 'I': break;
        case 'X': flip_mask |= std::size_t{1} << q; break;
        case 'Y':
            flip_mask |= std::size_t{1} << q;
            y_mask |= std::size_t{1} << q;
            break;
        case 'Z': z_mask |= std::size_t{1} << q; break;
        default:
            throw invalid_observable_error(std::string("expectation: bad Pauli letter '") +
                                           pauli[q] + "'");
        }
    }
    // P|i> = phase(i) |i ^ flip_mask>, with phase from Y and Z factors:
    //   Z on bit b contributes (-1)^b, Y on bit b contributes i(-1)^b.
    const int n_y = std::popcount(y_mask);
    cplx acc = 0.0;
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (amps[i] == cplx{0.0, 0.0})
            continue;
        int sign_bits = std::popcount(i & z_mask) + std::popcount(i & y_mask);
        cplx phase = (sign_bits & 1) ? cplx{-1.0, 0.0} : cplx{1.0, 0.0};
        switch (n_y & 3) {
        case 1: phase *= cplx{0.0, 1.0}; break;
        case 2: phase *= cplx{-1.0, 0.0}; break;
        case 3: phase *= cplx{0.0, -1.0}; break;
        default: break;
        }
        acc += std::conj(amps[i ^ flip_mask]) * phase * amps[i];
    }
    return acc.real();
}

} // namespace ctxk::simcore
