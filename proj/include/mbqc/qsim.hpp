// Dense statevector engine: |+> preparation, CZ entangling, one-qubit
// projective measurements in Z or planar bases, and fidelity checks.
// Doubles as the brute-force oracle substrate.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "mbqc/common.hpp"
#include "mbqc/errors.hpp"

namespace mbqc {

using Mat2 = std::array<cplx, 4>; // row-major 2x2

// Measurement basis: Z, or the planar family B(phi) with states
// (|0> +- e^{i phi}|1>)/sqrt(2). B(0) is the X eigenbasis, B(+-pi/2) the Y one.
struct BasisSpec {
    enum class Kind { Z, Planar };
    Kind kind = Kind::Planar;
    double angle = 0.0;

    static BasisSpec z() { return {Kind::Z, 0.0}; }
    static BasisSpec planar(double phi) { return {Kind::Planar, phi}; }
    static BasisSpec x() { return planar(0.0); }
    static BasisSpec y() { return planar(std::acos(-1.0) / 2.0); }
    bool is_z() const { return kind == Kind::Z; }
};

// Dense state over the currently live cluster sites. The registry maps
// site-id -> qubit index; amplitude index bit q is qubit q's value.
struct QuantumState {
    std::vector<cplx> amps;
    std::map<int, int> registry;

    int qubit_count() const { return static_cast<int>(registry.size()); }
    std::size_t dim() const { return amps.size(); }

    bool has_site(int site) const { return registry.count(site) != 0; }

    int index_of(int site) const {
        auto it = registry.find(site);
        if (it == registry.end())
            throw error("unknown site " + std::to_string(site));
        return it->second;
    }

    double norm2() const {
        double s = 0.0;
        for (const auto& a : amps) s += std::norm(a);
        return s;
    }
};

namespace detail {

inline std::size_t insert_zero_bit(std::size_t packed, int q) {
    const std::size_t low = packed & ((std::size_t{1} << q) - 1);
    return ((packed >> q) << (q + 1)) | low;
}

inline void check_site_budget(std::size_t count, int max_qubits) {
    if (static_cast<int>(count) > max_qubits)
        throw size_error("state of " + std::to_string(count) +
                         " qubits exceeds the limit of " + std::to_string(max_qubits));
}

} // namespace detail

// Uniform product state over the given sites, each in |+>.
inline QuantumState init_plus(const std::vector<int>& sites,
                              int max_qubits = kDefaultMaxQubits) {
    if (sites.empty()) throw error("init_plus: empty site list");
    detail::check_site_budget(sites.size(), max_qubits);
    QuantumState st;
    for (int s : sites) {
        auto [it, fresh] = st.registry.emplace(s, 0);
        if (!fresh) throw error("init_plus: duplicate site " + std::to_string(s));
    }
    int idx = 0;
    for (auto& [site, q] : st.registry) q = idx++;
    const int m = static_cast<int>(sites.size());
    const double a0 = 1.0 / std::sqrt(static_cast<double>(std::size_t{1} << m));
    st.amps.assign(std::size_t{1} << m, cplx{a0, 0.0});
    return st;
}

// Product state with an explicit single-qubit ket per site (oracle plumbing).
inline QuantumState init_product(const std::vector<std::pair<int, std::array<cplx, 2>>>& kets,
                                 int max_qubits = kDefaultMaxQubits) {
    if (kets.empty()) throw error("init_product: empty site list");
    detail::check_site_budget(kets.size(), max_qubits);
    QuantumState st;
    for (const auto& [site, ket] : kets) {
        auto [it, fresh] = st.registry.emplace(site, 0);
        if (!fresh) throw error("init_product: duplicate site " + std::to_string(site));
    }
    int idx = 0;
    for (auto& [site, q] : st.registry) q = idx++;
    const int m = static_cast<int>(kets.size());
    st.amps.assign(std::size_t{1} << m, cplx{1.0, 0.0});
    for (const auto& [site, ket] : kets) {
        const int q = st.registry[site];
        const std::size_t step = std::size_t{1} << q;
        for (std::size_t i = 0; i < st.amps.size(); ++i)
            st.amps[i] *= ket[(i & step) ? 1 : 0];
    }
    return st;
}

// Tensors a fresh |+> qubit into the state (used by streamed execution).
inline void add_plus_site(QuantumState& st, int site,
                          int max_qubits = kDefaultMaxQubits) {
    if (st.has_site(site)) throw error("add_plus_site: duplicate site");
    detail::check_site_budget(st.registry.size() + 1, max_qubits);
    const int q = st.qubit_count();
    const double r = std::sqrt(0.5);
    std::vector<cplx> next(st.amps.size() * 2);
    for (std::size_t i = 0; i < st.amps.size(); ++i) {
        next[i] = st.amps[i] * r;
        next[i | (std::size_t{1} << q)] = st.amps[i] * r;
    }
    st.amps = std::move(next);
    st.registry[site] = q;
}

// Controlled-phase on the pair (a, b): negates every |..1..1..> amplitude.
inline void apply_cz(QuantumState& st, int a, int b) {
    if (a == b) throw error("apply_cz: identical sites");
    const std::size_t ma = std::size_t{1} << st.index_of(a);
    const std::size_t mb = std::size_t{1} << st.index_of(b);
    for (std::size_t i = 0; i < st.amps.size(); ++i)
        if ((i & ma) && (i & mb)) st.amps[i] = -st.amps[i];
}

inline bool is_unitary2(const Mat2& u, double tol = kNormTol) {
    // U^dag U == I entrywise.
    const cplx c00 = std::conj(u[0]) * u[0] + std::conj(u[2]) * u[2];
    const cplx c01 = std::conj(u[0]) * u[1] + std::conj(u[2]) * u[3];
    const cplx c10 = std::conj(u[1]) * u[0] + std::conj(u[3]) * u[2];
    const cplx c11 = std::conj(u[1]) * u[1] + std::conj(u[3]) * u[3];
    return std::abs(c00 - 1.0) <= tol && std::abs(c11 - 1.0) <= tol &&
           std::abs(c01) <= tol && std::abs(c10) <= tol;
}

inline void apply_unitary1(QuantumState& st, int site, const Mat2& u) {
    if (!is_unitary2(u)) throw error("apply_unitary1: matrix is not unitary");
    const int q = st.index_of(site);
    const std::size_t step = std::size_t{1} << q;
    const std::size_t block = step << 1;
    for (std::size_t base = 0; base < st.amps.size(); base += block)
        for (std::size_t off = 0; off < step; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + step;
            const cplx a = st.amps[i0], b = st.amps[i1];
            st.amps[i0] = u[0] * a + u[1] * b;
            st.amps[i1] = u[2] * a + u[3] * b;
        }
}

// Born probability of outcome 0 for the given site and basis.
inline double outcome0_probability(const QuantumState& st, int site,
                                   const BasisSpec& basis) {
    const int q = st.index_of(site);
    const std::size_t step = std::size_t{1} << q;
    double p = 0.0;
    if (basis.is_z()) {
        for (std::size_t i = 0; i < st.amps.size(); ++i)
            if (!(i & step)) p += std::norm(st.amps[i]);
    } else {
        const cplx ph = std::exp(cplx{0.0, -basis.angle});
        const std::size_t half = st.amps.size() >> 1;
        for (std::size_t r = 0; r < half; ++r) {
            const std::size_t i0 = detail::insert_zero_bit(r, q);
            p += 0.5 * std::norm(st.amps[i0] + ph * st.amps[i0 + step]);
        }
    }
    return p;
}

// Projects onto the chosen outcome and renormalizes; the qubit stays live.
// Returns the pre-projection probability of that outcome.
inline double project(QuantumState& st, int site, const BasisSpec& basis, int outcome) {
    const int q = st.index_of(site);
    const std::size_t step = std::size_t{1} << q;
    const double sign = outcome ? -1.0 : 1.0;
    double p = 0.0;
    if (basis.is_z()) {
        for (std::size_t i = 0; i < st.amps.size(); ++i)
            if (((i & step) != 0) != (outcome != 0))
                st.amps[i] = cplx{0.0, 0.0};
            else
                p += std::norm(st.amps[i]);
    } else {
        const cplx ph = std::exp(cplx{0.0, basis.angle});
        const cplx phc = std::conj(ph);
        const double r = std::sqrt(0.5);
        const std::size_t half = st.amps.size() >> 1;
        for (std::size_t m = 0; m < half; ++m) {
            const std::size_t i0 = detail::insert_zero_bit(m, q);
            const std::size_t i1 = i0 + step;
            const cplx c = (st.amps[i0] + sign * phc * st.amps[i1]) * r;
            p += std::norm(c);
            st.amps[i0] = c * r;
            st.amps[i1] = c * sign * ph * r;
        }
    }
    if (p < kDegenerateProb)
        throw error("degenerate projection: outcome probability " + std::to_string(p));
    const double inv = 1.0 / std::sqrt(p);
    for (auto& a : st.amps) a *= inv;
    return p;
}

namespace detail {

// Contracts the measured qubit out of the state given the outcome; the
// remaining amplitudes are renormalized and the registry reindexed.
inline double collapse_remove(QuantumState& st, int site, const BasisSpec& basis,
                              int outcome) {
    const int q = st.index_of(site);
    const std::size_t step = std::size_t{1} << q;
    const std::size_t half = st.amps.size() >> 1;
    std::vector<cplx> next(half);
    double p = 0.0;
    if (basis.is_z()) {
        for (std::size_t m = 0; m < half; ++m) {
            const std::size_t i0 = insert_zero_bit(m, q);
            const cplx c = st.amps[outcome ? i0 + step : i0];
            next[m] = c;
            p += std::norm(c);
        }
    } else {
        const cplx phc = std::exp(cplx{0.0, -basis.angle});
        const double sign = outcome ? -1.0 : 1.0;
        const double r = std::sqrt(0.5);
        for (std::size_t m = 0; m < half; ++m) {
            const std::size_t i0 = insert_zero_bit(m, q);
            const cplx c = (st.amps[i0] + sign * phc * st.amps[i0 + step]) * r;
            next[m] = c;
            p += std::norm(c);
        }
    }
    if (p < kDegenerateProb)
        throw error("degenerate projection: outcome probability " + std::to_string(p));
    const double inv = 1.0 / std::sqrt(p);
    for (auto& a : next) a *= inv;
    st.amps = std::move(next);
    st.registry.erase(site);
    for (auto& [s, idx] : st.registry)
        if (idx > q) --idx;
    return p;
}

} // namespace detail

// Projective measurement driven by a uniform draw in [0,1). The outcome is
// forced when one branch is deterministic (probability under kDegenerateProb).
// The measured qubit is removed; the state dimension halves.
inline int measure(QuantumState& st, int site, const BasisSpec& basis, double draw) {
    const double p0 = outcome0_probability(st, site, basis);
    int outcome;
    if (p0 < kDegenerateProb)
        outcome = 1;
    else if (1.0 - p0 < kDegenerateProb)
        outcome = 0;
    else
        outcome = draw < p0 ? 0 : 1;
    detail::collapse_remove(st, site, basis, outcome);
    return outcome;
}

// Forces a known outcome (replay / byproduct derivation). Returns its
// pre-collapse probability.
inline double force_measure(QuantumState& st, int site, const BasisSpec& basis,
                            int outcome) {
    return detail::collapse_remove(st, site, basis, outcome);
}

// <a|b> with the registries aligned site-wise; both states must be defined
// on exactly the same sites.
inline cplx inner_product(const QuantumState& a, const QuantumState& b) {
    if (a.registry.size() != b.registry.size())
        throw error("inner_product: mismatched registries");
    bool same_layout = true;
    for (const auto& [site, qa] : a.registry) {
        auto it = b.registry.find(site);
        if (it == b.registry.end()) throw error("inner_product: mismatched registries");
        if (it->second != qa) same_layout = false;
    }
    cplx acc{0.0, 0.0};
    if (same_layout) {
        for (std::size_t i = 0; i < a.amps.size(); ++i)
            acc += std::conj(a.amps[i]) * b.amps[i];
        return acc;
    }
    // Transport b's indices into a's layout bit by bit.
    std::vector<std::pair<int, int>> qmap; // (q_b, q_a)
    for (const auto& [site, qa] : a.registry)
        qmap.emplace_back(b.registry.at(site), qa);
    for (std::size_t ib = 0; ib < b.amps.size(); ++ib) {
        std::size_t ia = 0;
        for (const auto& [qb, qa] : qmap)
            if (ib & (std::size_t{1} << qb)) ia |= std::size_t{1} << qa;
        acc += std::conj(a.amps[ia]) * b.amps[ib];
    }
    return acc;
}

// |<a|b>|^2, insensitive to global phase.
inline double fidelity(const QuantumState& a, const QuantumState& b) {
    return std::norm(inner_product(a, b));
}

} // namespace mbqc
