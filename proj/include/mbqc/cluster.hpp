// Cluster-graph model, cluster-state preparation, verification of the
// defining eigenvalue equations, and Z-removal of redundant sites.
#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mbqc/dense.hpp"
#include "mbqc/qsim.hpp"

namespace mbqc {

// Sites carry integer (row, col) coordinates as layout metadata; the edge
// set alone determines the physics. All eigenvalue signs kappa are fixed 0.
struct ClusterGraph {
    struct Coord {
        int row = 0;
        int col = 0;
    };

    std::map<int, Coord> sites;
    std::set<std::pair<int, int>> edges; // normalized a < b

    static constexpr int kappa(int) { return 0; }

    void add_site(int id) { add_site(id, Coord{0, 0}); }

    void add_site(int id, Coord c) {
        if (!sites.emplace(id, c).second)
            throw error("ClusterGraph: duplicate site " + std::to_string(id));
    }

    void add_edge(int a, int b) {
        if (a == b) throw error("ClusterGraph: self-loop at " + std::to_string(a));
        if (!sites.count(a) || !sites.count(b))
            throw error("ClusterGraph: edge endpoint not a site");
        edges.emplace(std::min(a, b), std::max(a, b));
    }

    bool has_site(int id) const { return sites.count(id) != 0; }
    std::size_t size() const { return sites.size(); }

    std::vector<int> neighbors(int site) const {
        std::vector<int> out;
        for (const auto& [a, b] : edges) {
            if (a == site) out.push_back(b);
            else if (b == site) out.push_back(a);
        }
        return out;
    }

    std::vector<int> site_list() const {
        std::vector<int> out;
        out.reserve(sites.size());
        for (const auto& [id, c] : sites) out.push_back(id);
        return out;
    }

    // Copy with one site (and its incident edges) deleted.
    ClusterGraph erased(int site) const {
        if (!sites.count(site)) throw error("ClusterGraph: unknown site");
        ClusterGraph g;
        g.sites = sites;
        g.sites.erase(site);
        for (const auto& e : edges)
            if (e.first != site && e.second != site) g.edges.insert(e);
        return g;
    }
};

// S |+...+>: every site in |+>, then CZ across every edge.
inline QuantumState make_cluster_state(const ClusterGraph& g,
                                       int max_qubits = kDefaultMaxQubits) {
    QuantumState st = init_plus(g.site_list(), max_qubits);
    for (const auto& [a, b] : g.edges) apply_cz(st, a, b);
    return st;
}

// True iff for every site a the correlation operator
// sigma_x^(a) prod_{a' in ngbh(a)} sigma_z^(a') fixes psi with eigenvalue +1.
// Checks fidelity and the overlap phase, so -1 eigenstates are rejected.
inline bool check_stabilizers(const ClusterGraph& g, const QuantumState& psi) {
    if (psi.registry.size() != g.sites.size())
        throw error("check_stabilizers: registry does not match graph");
    for (const auto& [id, c] : g.sites)
        if (!psi.has_site(id))
            throw error("check_stabilizers: registry does not match graph");
    for (const auto& [a, coord] : g.sites) {
        QuantumState k = psi;
        apply_unitary1(k, a, mat_x());
        for (int nb : g.neighbors(a)) apply_unitary1(k, nb, mat_z());
        const cplx ov = inner_product(psi, k);
        if (std::norm(ov) < 1.0 - kStabFidTol) return false;
        if (std::abs(std::arg(ov)) > kStabPhaseTol) return false;
    }
    return true;
}

struct RemoveZResult {
    int outcome = 0;
    ClusterGraph reduced;
    std::map<int, int> z_flips; // former neighbor -> sigma_z power owed
};

// Z-measures one site, deleting it from graph and state. The returned
// corrections (sigma_z^outcome on each former neighbor) restore the residual
// to the cluster state of the reduced graph.
inline RemoveZResult remove_z(const ClusterGraph& g, QuantumState& psi, int site,
                              double draw) {
    if (!g.has_site(site)) throw error("remove_z: unknown site " + std::to_string(site));
    RemoveZResult r;
    r.outcome = measure(psi, site, BasisSpec::z(), draw);
    r.reduced = g.erased(site);
    for (int nb : g.neighbors(site)) r.z_flips[nb] = r.outcome;
    return r;
}

} // namespace mbqc
