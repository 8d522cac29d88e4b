// JSON serialization of compiled patterns. GF(2) vectors are hex strings,
// little-endian by logical wire index (bit i = wire i); angles are radians
// rounded to 15 significant digits.
#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "mbqc/compiler.hpp"

namespace mbqc {

namespace detail {

inline double round15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return std::strtod(buf, nullptr);
}

inline nlohmann::json hex_u64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "0x%llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

inline std::uint64_t parse_hex(const nlohmann::json& j, const char* what) {
    if (!j.is_string()) throw parse_error(std::string("pattern: ") + what + " must be a hex string");
    const std::string s = j.get<std::string>();
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(s, &pos, 16);
        if (pos != s.size()) throw parse_error("");
        return v;
    } catch (...) {
        throw parse_error(std::string("pattern: bad hex value for ") + what);
    }
}

inline nlohmann::json image_to_json(const PauliImage& img) {
    return nlohmann::json{{"x", hex_u64(img.x)}, {"z", hex_u64(img.z)}};
}

inline PauliImage image_from_json(const nlohmann::json& j, int n) {
    if (!j.is_object()) throw parse_error("pattern: image must be an object");
    return {n, parse_hex(j.at("x"), "image x"), parse_hex(j.at("z"), "image z")};
}

inline const char* role_name(SiteRole r) {
    switch (r) {
        case SiteRole::Input: return "input";
        case SiteRole::Interior: return "interior";
        case SiteRole::Output: return "output";
        case SiteRole::Filler: return "filler";
    }
    return "?";
}

inline SiteRole role_from(const std::string& s) {
    if (s == "input") return SiteRole::Input;
    if (s == "interior") return SiteRole::Interior;
    if (s == "output") return SiteRole::Output;
    if (s == "filler") return SiteRole::Filler;
    throw parse_error("pattern: unknown site role '" + s + "'");
}

inline GateKind kind_from(const std::string& s) {
    if (s == "CNOT") return GateKind::Cnot;
    if (s == "H") return GateKind::H;
    if (s == "S") return GateKind::S;
    if (s == "ROT") return GateKind::Rot;
    if (s == "WIRE") return GateKind::Wire;
    throw parse_error("pattern: unknown gate kind '" + s + "'");
}

} // namespace detail

inline nlohmann::json pattern_to_json(const CompiledPattern& p) {
    using detail::image_to_json;
    nlohmann::json j;
    j["version"] = 1;
    j["qubits"] = p.n;
    j["circuit"] = circuit_to_json(p.circuit);
    j["clifford_tol"] = p.clifford_tol;
    j["f_init"] = image_to_json(p.f_init);
    j["inputs"] = p.inputs;
    j["outputs"] = p.outputs;

    nlohmann::json sites = nlohmann::json::array();
    for (const auto& [id, s] : p.sites) {
        nlohmann::json sj;
        sj["id"] = id;
        sj["row"] = s.row;
        sj["col"] = s.col;
        sj["wire"] = s.wire;
        sj["role"] = detail::role_name(s.role);
        if (s.basis.is_z())
            sj["basis"] = {{"type", "Z"}};
        else
            sj["basis"] = {{"type", "planar"}, {"angle", detail::round15(s.basis.angle)}};
        sj["adaptive"] = s.adaptive;
        if (p.f.count(id)) sj["f"] = image_to_json(p.f.at(id));
        sites.push_back(sj);
    }
    j["sites"] = sites;

    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : p.graph.edges) edges.push_back({a, b});
    j["edges"] = edges;

    nlohmann::json gates = nlohmann::json::array();
    for (const auto& g : p.gates) {
        nlohmann::json gj;
        gj["kind"] = gate_kind_name(g.kind);
        gj["wires"] = g.wires[1] < 0 ? nlohmann::json::array({g.wires[0]})
                                     : nlohmann::json::array({g.wires[0], g.wires[1]});
        if (g.kind == GateKind::Rot)
            gj["angles"] = {detail::round15(g.spec.xi), detail::round15(g.spec.eta),
                            detail::round15(g.spec.zeta)};
        gj["interior"] = g.interior;
        gj["outputs"] = g.outputs;
        nlohmann::json ge = nlohmann::json::array();
        for (const auto& [a, b] : g.edges) ge.push_back({a, b});
        gj["edges"] = ge;
        gj["constant"] = image_to_json(g.constant);
        nlohmann::json imgs = nlohmann::json::array();
        for (const auto& img : g.images) imgs.push_back(image_to_json(img));
        gj["images"] = imgs;
        nlohmann::json intra = nlohmann::json::array();
        for (const auto& [a, b] : g.intra) intra.push_back({a, b});
        gj["intra"] = intra;
        gj["slot_sites"] = {g.slot_sites[0], g.slot_sites[1], g.slot_sites[2]};
        gates.push_back(gj);
    }
    j["gates"] = gates;
    return j;
}

inline CompiledPattern pattern_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("version") || j["version"] != 1)
        throw parse_error("pattern: missing or unsupported version");
    CompiledPattern p;
    p.n = j.at("qubits").get<int>();
    if (p.n < 1 || p.n > 48) throw parse_error("pattern: qubit count out of range");
    p.circuit = circuit_from_json(j.at("circuit"));
    p.clifford_tol = j.value("clifford_tol", kCliffordAngleTol);
    p.f_init = detail::image_from_json(j.at("f_init"), p.n);
    p.inputs = j.at("inputs").get<std::vector<int>>();
    p.outputs = j.at("outputs").get<std::vector<int>>();

    for (const auto& sj : j.at("sites")) {
        PatternSite s;
        s.id = sj.at("id").get<int>();
        s.row = sj.at("row").get<int>();
        s.col = sj.at("col").get<int>();
        s.wire = sj.at("wire").get<int>();
        s.role = detail::role_from(sj.at("role").get<std::string>());
        const auto& bj = sj.at("basis");
        if (bj.at("type") == "Z")
            s.basis = BasisSpec::z();
        else if (bj.at("type") == "planar")
            s.basis = BasisSpec::planar(bj.at("angle").get<double>());
        else
            throw parse_error("pattern: unknown basis type");
        s.adaptive = sj.at("adaptive").get<bool>();
        p.graph.add_site(s.id, {s.row, s.col});
        if (sj.contains("f")) p.f.emplace(s.id, detail::image_from_json(sj["f"], p.n));
        p.sites[s.id] = s;
    }
    for (const auto& ej : j.at("edges")) {
        if (!ej.is_array() || ej.size() != 2) throw parse_error("pattern: bad edge entry");
        p.graph.add_edge(ej[0].get<int>(), ej[1].get<int>());
    }
    for (const auto& gj : j.at("gates")) {
        PlacedGate g;
        g.kind = detail::kind_from(gj.at("kind").get<std::string>());
        const auto wires = gj.at("wires").get<std::vector<int>>();
        if (wires.empty() || wires.size() > 2) throw parse_error("pattern: bad gate wires");
        g.wires = {wires[0], wires.size() == 2 ? wires[1] : -1};
        switch (g.kind) {
            case GateKind::Cnot:
                g.spec = GateSpec::cnot(g.wires[0], g.wires[1]);
                break;
            case GateKind::Rot: {
                const auto a = gj.at("angles").get<std::vector<double>>();
                if (a.size() != 3) throw parse_error("pattern: ROT needs three angles");
                g.spec = GateSpec::rot(g.wires[0], a[0], a[1], a[2]);
                break;
            }
            case GateKind::H: g.spec = GateSpec::h(g.wires[0]); break;
            case GateKind::S: g.spec = GateSpec::s(g.wires[0]); break;
            case GateKind::Wire: g.spec = GateSpec::wire(g.wires[0]); break;
        }
        g.interior = gj.at("interior").get<std::vector<int>>();
        g.outputs = gj.at("outputs").get<std::vector<int>>();
        for (const auto& ej : gj.at("edges")) g.edges.emplace_back(ej[0].get<int>(), ej[1].get<int>());
        g.constant = detail::image_from_json(gj.at("constant"), p.n);
        for (const auto& ij : gj.at("images")) g.images.push_back(detail::image_from_json(ij, p.n));
        if (g.images.size() != g.interior.size())
            throw parse_error("pattern: image list does not match interior sites");
        for (const auto& ij : gj.at("intra")) g.intra.emplace_back(ij[0].get<int>(), ij[1].get<int>());
        const auto ss = gj.at("slot_sites").get<std::vector<int>>();
        if (ss.size() != 3) throw parse_error("pattern: slot_sites needs three entries");
        g.slot_sites = {ss[0], ss[1], ss[2]};
        p.gates.push_back(std::move(g));
    }
    for (const auto& g : p.gates)
        for (int site : g.interior)
            if (!p.sites.count(site)) throw parse_error("pattern: gate references unknown site");
    for (int o : p.outputs)
        if (!p.sites.count(o)) throw parse_error("pattern: unknown output site");
    return p;
}

} // namespace mbqc
