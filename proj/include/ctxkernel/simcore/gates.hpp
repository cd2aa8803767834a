#pragma once

#include <string>
#include <vector>

namespace ctxk::simcore {

enum class GateKind { H, X, Z, RY, RZ, CX, CZ, CRY, RZZ, CRZZ };

// One gate instance. `targets` lists qubit indices in role order:
//   1q gates:   {target}
//   CX, CZ:     {control, target}
//   CRY:        {control, target}
//   RZZ:        {a, b}
//   CRZZ:       {control, a, b}
struct GateOp {
    GateKind kind;
    std::vector<int> targets;
    double angle = 0.0;

    static GateOp h(int q) { return {GateKind::H, {q}}; }
    static GateOp x(int q) { return {GateKind::X, {q}}; }
    static GateOp z(int q) { return {GateKind::Z, {q}}; }
    static GateOp ry(double theta, int q) { return {GateKind::RY, {q}, theta}; }
    static GateOp rz(double phi, int q) { return {GateKind::RZ, {q}, phi}; }
    static GateOp cx(int control, int target) { return {GateKind::CX, {control, target}}; }
    static GateOp cz(int a, int b) { return {GateKind::CZ, {a, b}}; }
    static GateOp cry(double theta, int control, int target) { return {GateKind::CRY, {control, target}, theta}; }
    static GateOp rzz(double theta, int a, int b) { return {GateKind::RZZ, {a, b}, theta}; }
    static GateOp crzz(double theta, int control, int a, int b) { return {GateKind::CRZZ, {control, a, b}, theta}; }

    bool is_two_qubit_entangler() const {
        return kind == GateKind::CX || kind == GateKind::CZ || kind == GateKind::CRY ||
               kind == GateKind::RZZ || kind == GateKind::CRZZ;
    }
};

inline const char* gate_name(GateKind k) {
    switch (k) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CX: return "CX";
    case GateKind::CZ: return "CZ";
    case GateKind::CRY: return "CRY";
    case GateKind::RZZ: return "RZZ";
    case GateKind::CRZZ: return "CRZZ";
    }
    return "?";
}

} // namespace ctxk::simcore
