// Quantum logic network IR: gate list over n wires, plus the JSON circuit
// file format (version 1).
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbqc/errors.hpp"

namespace mbqc {

enum class GateKind { Cnot, H, S, Rot, Wire };

inline const char* gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::Cnot: return "CNOT";
        case GateKind::H: return "H";
        case GateKind::S: return "S";
        case GateKind::Rot: return "ROT";
        case GateKind::Wire: return "WIRE";
    }
    return "?";
}

struct GateSpec {
    GateKind kind = GateKind::H;
    int q0 = 0;      // target wire; CNOT control
    int q1 = -1;     // CNOT target
    double xi = 0.0, eta = 0.0, zeta = 0.0;

    static GateSpec cnot(int control, int target) {
        GateSpec g;
        g.kind = GateKind::Cnot;
        g.q0 = control;
        g.q1 = target;
        return g;
    }
    static GateSpec h(int q) { return {GateKind::H, q}; }
    static GateSpec s(int q) { return {GateKind::S, q}; }
    static GateSpec rot(int q, double xi, double eta, double zeta) {
        GateSpec g;
        g.kind = GateKind::Rot;
        g.q0 = q;
        g.xi = xi;
        g.eta = eta;
        g.zeta = zeta;
        return g;
    }
    static GateSpec wire(int q) { return {GateKind::Wire, q}; }

    bool two_wire() const { return kind == GateKind::Cnot; }

    std::string describe() const {
        if (kind == GateKind::Cnot)
            return "CNOT(" + std::to_string(q0) + "," + std::to_string(q1) + ")";
        std::string s = gate_kind_name(kind);
        s += "(" + std::to_string(q0) + ")";
        return s;
    }
};

struct Circuit {
    int n = 0;
    std::vector<GateSpec> gates;
};

namespace detail {

inline void require_finite(double v, const std::string& what) {
    if (!std::isfinite(v)) throw parse_error("circuit: non-finite " + what);
}

} // namespace detail

// Validates everything the file format promises; gate placement rules
// (CNOT adjacency) are checked later by the compiler.
inline Circuit circuit_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw parse_error("circuit: top level must be an object");
    if (!j.contains("version") || !j["version"].is_number_integer() || j["version"] != 1)
        throw parse_error("circuit: missing or unsupported version (want 1)");
    if (!j.contains("qubits") || !j["qubits"].is_number_integer())
        throw parse_error("circuit: missing qubit count");
    Circuit c;
    c.n = j["qubits"].get<int>();
    if (c.n < 1 || c.n > 64) throw parse_error("circuit: qubit count out of range");
    if (!j.contains("gates") || !j["gates"].is_array())
        throw parse_error("circuit: missing gate list");
    for (const auto& gj : j["gates"]) {
        if (!gj.is_object() || !gj.contains("type"))
            throw parse_error("circuit: gate entries need a type");
        const std::string type = gj["type"].get<std::string>();
        auto wire_field = [&](const char* name) {
            if (!gj.contains(name) || !gj[name].is_number_integer())
                throw parse_error(std::string("circuit: gate missing field ") + name);
            const int q = gj[name].get<int>();
            if (q < 0 || q >= c.n)
                throw parse_error(std::string("circuit: index out of range in field ") + name);
            return q;
        };
        if (type == "CNOT") {
            c.gates.push_back(GateSpec::cnot(wire_field("control"), wire_field("target")));
            if (c.gates.back().q0 == c.gates.back().q1)
                throw parse_error("circuit: CNOT with identical control and target");
        } else if (type == "H") {
            c.gates.push_back(GateSpec::h(wire_field("qubit")));
        } else if (type == "S") {
            c.gates.push_back(GateSpec::s(wire_field("qubit")));
        } else if (type == "ROT") {
            const int q = wire_field("qubit");
            auto angle = [&](const char* name) {
                if (!gj.contains(name) || !gj[name].is_number())
                    throw parse_error(std::string("circuit: ROT missing angle ") + name);
                const double v = gj[name].get<double>();
                detail::require_finite(v, name);
                return v;
            };
            c.gates.push_back(GateSpec::rot(q, angle("xi"), angle("eta"), angle("zeta")));
        } else {
            throw parse_error("circuit: unknown gate type '" + type + "'");
        }
    }
    return c;
}

inline nlohmann::json circuit_to_json(const Circuit& c) {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto& g : c.gates) {
        nlohmann::json gj;
        gj["type"] = gate_kind_name(g.kind);
        if (g.kind == GateKind::Cnot) {
            gj["control"] = g.q0;
            gj["target"] = g.q1;
        } else {
            gj["qubit"] = g.q0;
        }
        if (g.kind == GateKind::Rot) {
            gj["xi"] = g.xi;
            gj["eta"] = g.eta;
            gj["zeta"] = g.zeta;
        }
        gates.push_back(gj);
    }
    return nlohmann::json{{"version", 1}, {"qubits", c.n}, {"gates", gates}};
}

} // namespace mbqc
