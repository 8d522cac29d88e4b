// Forward/backward cones, the strict partial order they generate, and the
// maximally parallel round partition.
#pragma once

#include <map>
#include <queue>
#include <set>
#include <vector>

#include <json.hpp>

#include "mbqc/compiler.hpp"

namespace mbqc {

// fc(k): adaptive sites whose measurement angle flips when k's byproduct is
// pushed forward to the network output. bc(k): same under backward
// propagation to the input side.
struct ConeSets {
    std::map<int, std::set<int>> fc, bc;

    const std::set<int>& fc_of(int k) const {
        static const std::set<int> empty;
        auto it = fc.find(k);
        return it == fc.end() ? empty : it->second;
    }
    const std::set<int>& bc_of(int k) const {
        static const std::set<int> empty;
        auto it = bc.find(k);
        return it == bc.end() ? empty : it->second;
    }
};

struct Schedule {
    std::vector<std::vector<int>> rounds; // ascending site ids per round
    int t_max() const { return static_cast<int>(rounds.size()) - 1; }

    int round_of(int site) const {
        for (std::size_t t = 0; t < rounds.size(); ++t)
            for (int s : rounds[t])
                if (s == site) return static_cast<int>(t);
        throw error("schedule: site " + std::to_string(site) + " not scheduled");
    }
};

inline ConeSets compute_cones(const CompiledPattern& p) {
    ConeSets cones;
    const auto suffixes = forward_suffixes(p);
    const auto bprefixes = backward_prefixes(p);
    auto adaptive = [&](int site) { return p.sites.at(site).adaptive; };

    auto collect = [&](const PropagationMap& pm, const PauliImage& img,
                       std::set<int>& out) {
        const std::uint64_t v = img.packed();
        for (const auto& fl : pm.flips)
            if (parity64(fl.row & v) && adaptive(fl.key)) out.insert(fl.key);
    };

    for (std::size_t gi = 0; gi < p.gates.size(); ++gi) {
        const auto& g = p.gates[gi];
        for (std::size_t i = 0; i < g.interior.size(); ++i) {
            const int k = g.interior[i];
            auto& fc = cones.fc[k];
            auto& bc = cones.bc[k];
            collect(suffixes[gi + 1], g.images[i], fc);
            collect(bprefixes[gi], g.images[i], bc);
            for (const auto& [src, dst] : g.intra)
                if (src == k && adaptive(dst)) fc.insert(dst);
        }
    }
    // Readout byproducts x_w originate at the network output.
    const PropagationMap whole_back =
        p.gates.empty() ? compose(p.n, {}) : bprefixes[p.gates.size() - 1];
    for (int o : p.outputs) {
        cones.fc[o];
        collect(whole_back, p.f_of(o), cones.bc[o]);
    }
    return cones;
}

// Symplectic cone test: applicable when j carries an adaptive basis.
inline int cone_test(const CompiledPattern& p, int j, int k) {
    return symplectic_product(p.f_of(j), p.f_of(k));
}

// Round recursion over the transitive order generated by j in fc(k) => k < j.
// Filler sites are consumed by the Z-removal preprocessing step and are not
// part of the round structure.
inline Schedule build_schedule(const CompiledPattern& p, const ConeSets& cones) {
    std::map<int, std::set<int>> preds; // site -> sites it must wait for
    std::vector<int> measured;
    for (const auto& [id, s] : p.sites) {
        if (s.role == SiteRole::Filler) continue;
        measured.push_back(id);
        preds[id];
    }
    for (const auto& [k, js] : cones.fc)
        for (int j : js) preds[j].insert(k);

    // Longest-path levels; a leftover node inside a cycle never clears.
    std::map<int, int> level;
    std::map<int, int> remaining;
    std::queue<int> ready;
    std::map<int, std::set<int>> succ;
    for (const auto& [j, ps] : preds) {
        remaining[j] = static_cast<int>(ps.size());
        for (int k : ps) succ[k].insert(j);
        if (ps.empty()) {
            level[j] = 0;
            ready.push(j);
        }
    }
    while (!ready.empty()) {
        const int k = ready.front();
        ready.pop();
        for (int j : succ[k]) {
            level[j] = std::max(level.count(j) ? level[j] : 0, level[k] + 1);
            if (--remaining[j] == 0) ready.push(j);
        }
    }
    if (level.size() != preds.size())
        throw cycle_error("build_schedule: adaptivity dependencies contain a cycle");

    Schedule sched;
    for (int site : measured) {
        const int t = level[site];
        if (static_cast<int>(sched.rounds.size()) <= t) sched.rounds.resize(t + 1);
        sched.rounds[t].push_back(site); // measured iterates ascending
    }
    return sched;
}

inline nlohmann::json schedule_to_json(const Schedule& s) {
    nlohmann::json rounds = nlohmann::json::array();
    for (const auto& r : s.rounds) rounds.push_back(r);
    return nlohmann::json{{"version", 1}, {"t_max", s.t_max()}, {"rounds", rounds}};
}

inline Schedule schedule_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("rounds") || !j["rounds"].is_array())
        throw parse_error("schedule: missing rounds");
    Schedule s;
    for (const auto& r : j["rounds"]) s.rounds.push_back(r.get<std::vector<int>>());
    return s;
}

} // namespace mbqc
