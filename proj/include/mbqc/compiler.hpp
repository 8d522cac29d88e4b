// Lowers a quantum logic network onto a cluster-state measurement pattern.
// Gate templates are statevector-derived: for every template the full
// outcome -> byproduct affine map is solved by brute force, so the site
// geometry and adaptivity rules are self-validating.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mbqc/circuit.hpp"
#include "mbqc/cluster.hpp"
#include "mbqc/dense.hpp"
#include "mbqc/pauli.hpp"
#include "mbqc/qsim.hpp"

namespace mbqc {

struct CompileOptions {
    bool embed_rect = false;          // fill the bounding box with Z-measured sites
    double clifford_tol = kCliffordAngleTol;
    double fit_tol = kSignFitTol;
};

// One measured template site: its static angle, and which earlier interior
// outcomes flip that angle at run time (empty for non-adaptive sites).
struct TemplateSiteSpec {
    double base_angle = 0.0;
    std::vector<int> rule; // interior positions, in raw-outcome terms
    bool adaptive = false;
    int slot = -1;         // Euler slot for rotation chains
};

struct GateTemplate {
    GateKind kind = GateKind::Wire;
    GateSpec spec;
    int wires = 1;
    int local_count = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> input_local;   // one per wire
    std::vector<int> output_local;  // one per wire
    std::vector<int> interior;      // local ids in measurement order
    std::vector<TemplateSiteSpec> interior_spec;
    CMat target;                    // unitary realized on the template wires
    // Derived byproduct map: P(s) = constant ^ xor_k s_k byproduct[k].
    PauliImage constant = PauliImage::zero(1);
    std::vector<PauliImage> byproduct;
};

struct AffineByproductMap {
    PauliImage constant = PauliImage::zero(1);
    std::vector<PauliImage> linear;
};

namespace detail {

// Amplitude vector over the given live sites with bit w = ordered_sites[w].
inline std::vector<cplx> extract_wire_vector(const QuantumState& st,
                                             const std::vector<int>& ordered_sites) {
    if (st.registry.size() != ordered_sites.size())
        throw error("extract_wire_vector: stray live sites");
    std::vector<int> qbit(ordered_sites.size());
    for (std::size_t w = 0; w < ordered_sites.size(); ++w)
        qbit[w] = st.index_of(ordered_sites[w]);
    std::vector<cplx> v(st.amps.size(), cplx{0, 0});
    for (std::size_t i = 0; i < st.amps.size(); ++i) {
        std::size_t idx = 0;
        for (std::size_t w = 0; w < qbit.size(); ++w)
            if (i & (std::size_t{1} << qbit[w])) idx |= std::size_t{1} << w;
        v[idx] = st.amps[i];
    }
    return v;
}

// Rewrites the adaptivity rules of a chain for its statically measured sites.
// A site at +-pi/2 measured statically reports the opposite label exactly when
// its dropped flip fires, so that indicator is substituted into later rules.
inline void rewrite_static_rules(std::vector<TemplateSiteSpec>& specs, double tol) {
    const std::size_t k = specs.size();
    std::vector<std::set<int>> delta(k); // raw-outcome relabel indicator per position
    for (std::size_t j = 0; j < k; ++j) {
        std::set<int> raw_rule;
        for (int src : specs[j].rule) {
            auto toggle = [&](int p) {
                if (!raw_rule.erase(p)) raw_rule.insert(p);
            };
            toggle(src);
            for (int p : delta[src]) toggle(p);
        }
        switch (classify_angle(specs[j].base_angle, tol)) {
            case AngleClass::Generic:
                specs[j].adaptive = true;
                specs[j].rule.assign(raw_rule.begin(), raw_rule.end());
                break;
            case AngleClass::CliffordHalf:
                specs[j].adaptive = false;
                specs[j].rule.clear();
                delta[j] = std::move(raw_rule);
                break;
            case AngleClass::Zero:
                specs[j].adaptive = false;
                specs[j].rule.clear();
                break;
        }
    }
}

inline GateTemplate make_chain(GateKind kind, GateSpec spec,
                               std::vector<double> base_angles,
                               std::vector<std::vector<int>> rules, CMat target,
                               double tol) {
    GateTemplate t;
    t.kind = kind;
    t.spec = spec;
    t.wires = 1;
    t.local_count = static_cast<int>(base_angles.size()) + 1;
    for (int i = 0; i + 1 < t.local_count; ++i) t.edges.emplace_back(i, i + 1);
    t.input_local = {0};
    t.output_local = {t.local_count - 1};
    for (int i = 0; i + 1 < t.local_count; ++i) t.interior.push_back(i);
    t.interior_spec.resize(base_angles.size());
    for (std::size_t i = 0; i < base_angles.size(); ++i) {
        t.interior_spec[i].base_angle = base_angles[i];
        t.interior_spec[i].rule = rules[i];
        t.interior_spec[i].slot = i == 0 ? -1 : static_cast<int>(i) - 1;
    }
    rewrite_static_rules(t.interior_spec, tol);
    t.target = std::move(target);
    return t;
}

} // namespace detail

// Solves the outcome -> sign-free-Pauli map of a template against its target
// unitary by forcing every interior outcome assignment in a statevector run.
// Hard-fails if any outcome cannot be fit or the map is not affine.
inline AffineByproductMap derive_byproducts(const GateTemplate& t, const CMat& u_target,
                                            double fit_tol = kSignFitTol) {
    const int w = t.wires;
    const int k = static_cast<int>(t.interior.size());
    if (k > 6) throw error("derive_byproducts: too many interior sites");
    if (w > 2) throw error("derive_byproducts: too many wires");
    const std::size_t dim = std::size_t{1} << w;
    if (u_target.dim != dim) throw error("derive_byproducts: target dimension mismatch");

    auto fit_for_outcomes = [&](std::uint64_t s) -> PauliImage {
        CMat v(dim);
        for (std::size_t b = 0; b < dim; ++b) {
            std::vector<std::pair<int, std::array<cplx, 2>>> kets;
            const double r = std::sqrt(0.5);
            for (int local = 0; local < t.local_count; ++local) {
                std::array<cplx, 2> ket = {cplx{r, 0}, cplx{r, 0}};
                for (int wi = 0; wi < w; ++wi)
                    if (t.input_local[wi] == local) {
                        const int bit = int((b >> wi) & 1);
                        ket = {cplx{bit == 0 ? 1.0 : 0.0, 0}, cplx{bit == 1 ? 1.0 : 0.0, 0}};
                    }
                kets.emplace_back(local, ket);
            }
            QuantumState st = init_product(kets);
            for (const auto& [a, bb] : t.edges) apply_cz(st, a, bb);
            for (int idx = 0; idx < k; ++idx) {
                const auto& spec = t.interior_spec[idx];
                double phi = spec.base_angle;
                if (spec.adaptive) {
                    int flip = 0;
                    for (int src : spec.rule) flip ^= int((s >> src) & 1);
                    if (flip) phi = -phi;
                }
                const int outcome = int((s >> idx) & 1);
                const double p =
                    force_measure(st, t.interior[idx], BasisSpec::planar(phi), outcome);
                if (std::abs(p - 0.5) > 1e-9)
                    throw error("derive_byproducts: unbalanced forced branch");
            }
            auto col = detail::extract_wire_vector(st, t.output_local);
            for (std::size_t rr = 0; rr < dim; ++rr) v.at(rr, b) = col[rr];
        }
        const CMat wmat = v * u_target.dagger();
        int matches = 0;
        PauliImage found = PauliImage::zero(w);
        for (std::uint64_t px = 0; px < dim; ++px)
            for (std::uint64_t pz = 0; pz < dim; ++pz) {
                const PauliImage cand{w, px, pz};
                const CMat p = to_pauli(cand);
                cplx c{0, 0};
                for (std::size_t i = 0; i < dim; ++i)
                    for (std::size_t j = 0; j < dim; ++j)
                        c += std::conj(p.at(i, j)) * wmat.at(i, j);
                c /= double(dim);
                if (std::abs(std::abs(c) - 1.0) > 1e-6) continue;
                double dev = 0.0;
                for (std::size_t i = 0; i < p.a.size(); ++i)
                    dev = std::max(dev, std::abs(wmat.a[i] - c * p.a[i]));
                if (dev <= fit_tol) {
                    ++matches;
                    found = cand;
                }
            }
        if (matches != 1)
            throw error("derive_byproducts: no sign-free Pauli fits outcome " +
                        std::to_string(s) + " (template or adaptivity rule wrong)");
        return found;
    };

    AffineByproductMap map;
    map.constant = fit_for_outcomes(0);
    map.linear.resize(k, PauliImage::zero(w));
    for (int i = 0; i < k; ++i)
        map.linear[i] = fit_for_outcomes(std::uint64_t{1} << i) ^ map.constant;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << k); ++s) {
        PauliImage expect = map.constant;
        for (int i = 0; i < k; ++i)
            if ((s >> i) & 1) expect ^= map.linear[i];
        if (!(fit_for_outcomes(s) == expect))
            throw error("derive_byproducts: byproduct map is not affine over GF(2)");
    }
    return map;
}

namespace detail {

inline void attach_derived(GateTemplate& t, double fit_tol) {
    auto map = derive_byproducts(t, t.target, fit_tol);
    t.constant = map.constant;
    t.byproduct = std::move(map.linear);
}

} // namespace detail

// 5-site chain realizing U_x(zeta) U_z(eta) U_x(xi): site 1 measured in B(0),
// sites 2..4 at base angles -xi, -eta, -zeta with flips s1 -> 2, s2 -> 3,
// s1+s3 -> 4 (rewritten where angles are Clifford).
inline GateTemplate rotation_template(double xi, double eta, double zeta,
                                      double tol = kCliffordAngleTol,
                                      double fit_tol = kSignFitTol) {
    auto t = detail::make_chain(GateKind::Rot, GateSpec::rot(0, xi, eta, zeta),
                                {0.0, -xi, -eta, -zeta}, {{}, {0}, {1}, {0, 2}},
                                cmat_from_mat2(mat_rot(xi, eta, zeta)), tol);
    detail::attach_derived(t, fit_tol);
    return t;
}

// H and the pi/2 phase gate as fixed-angle chain instances. Both come out
// fully static (X/Y measurements only); S is declared against U_z(+pi/2),
// which the derivation resolves with a constant sigma_z byproduct.
inline GateTemplate clifford_template(GateKind kind, double tol = kCliffordAngleTol,
                                      double fit_tol = kSignFitTol) {
    const double pi_2 = std::acos(-1.0) / 2.0;
    GateTemplate t;
    if (kind == GateKind::H) {
        t = detail::make_chain(GateKind::H, GateSpec::h(0), {0.0, -pi_2, -pi_2, -pi_2},
                               {{}, {0}, {1}, {0, 2}}, cmat_from_mat2(mat_h()), tol);
    } else if (kind == GateKind::S) {
        t = detail::make_chain(GateKind::S, GateSpec::s(0), {0.0, 0.0, pi_2, 0.0},
                               {{}, {0}, {1}, {0, 2}}, cmat_from_mat2(mat_uz(pi_2)), tol);
    } else {
        throw error("clifford_template: kind must be H or S");
    }
    detail::attach_derived(t, fit_tol);
    return t;
}

// 3-site identity chain used to pad wires.
inline GateTemplate wire_template(double tol = kCliffordAngleTol,
                                  double fit_tol = kSignFitTol) {
    auto t = detail::make_chain(GateKind::Wire, GateSpec::wire(0), {0.0, 0.0}, {{}, {}},
                                cmat_from_mat2(mat_id()), tol);
    detail::attach_derived(t, fit_tol);
    return t;
}

// Minimal 4-site CNOT: target chain t_in - m - t_out with the control joined
// to m; the control site is both gate input and output. t_in and m are
// measured in X.
inline GateTemplate cnot_template(double fit_tol = kSignFitTol) {
    GateTemplate t;
    t.kind = GateKind::Cnot;
    t.spec = GateSpec::cnot(0, 1);
    t.wires = 2;
    t.local_count = 4; // 0 = control, 1 = t_in, 2 = m, 3 = t_out
    t.edges = {{1, 2}, {2, 3}, {0, 2}};
    t.input_local = {0, 1};
    t.output_local = {0, 3};
    t.interior = {1, 2};
    t.interior_spec.resize(2);
    t.target = cmat_cnot();
    detail::attach_derived(t, fit_tol);
    return t;
}

// --- compiled patterns ------------------------------------------------------

enum class SiteRole { Input, Interior, Output, Filler };

struct PatternSite {
    int id = 0;
    int row = 0, col = 0;
    int wire = -1; // -1 for fillers
    SiteRole role = SiteRole::Interior;
    BasisSpec basis = BasisSpec::x();
    bool adaptive = false;
};

struct PlacedGate {
    GateKind kind = GateKind::Wire;
    GateSpec spec;                        // wires rebound to circuit wires
    std::array<int, 2> wires{-1, -1};
    std::vector<int> interior;            // site ids in measurement order
    std::vector<int> outputs;             // site ids per template wire
    std::vector<std::pair<int, int>> edges; // this template's cluster edges
    PauliImage constant = PauliImage::zero(1);   // n-wire, at gate output
    std::vector<PauliImage> images;              // n-wire, per interior site
    std::vector<std::pair<int, int>> intra;      // (src site, flipped site)
    std::array<int, 3> slot_sites{-1, -1, -1};   // xi/eta/zeta chain sites
};

struct CompiledPattern {
    int n = 0;
    Circuit circuit;
    ClusterGraph graph;
    std::map<int, PatternSite> sites;
    std::vector<PlacedGate> gates;
    std::map<int, PauliImage> f; // byproduct image at the network output
    PauliImage f_init = PauliImage::zero(1);
    std::vector<int> inputs, outputs;
    double clifford_tol = kCliffordAngleTol;

    bool is_measured(int site) const { return f.count(site) != 0; }
    const PauliImage& f_of(int site) const {
        auto it = f.find(site);
        if (it == f.end()) throw error("no byproduct image for site " + std::to_string(site));
        return it->second;
    }
};

// Forward conjugation map of one placed gate, flips keyed by chain site id.
inline PropagationMap placed_forward_map(const PlacedGate& g, int n, double tol) {
    auto pm = gate_propagation_map(g.spec, n, tol);
    for (auto& fl : pm.flips) fl.key = g.slot_sites[fl.key];
    return pm;
}

inline PropagationMap placed_backward_map(const PlacedGate& g, int n, double tol) {
    auto pm = backward_gate_map(g.spec, n, tol);
    for (auto& fl : pm.flips) fl.key = g.slot_sites[fl.key];
    return pm;
}

// suffix[i] pushes an image from the output of gate i-1 to the network
// output; size gates+1, suffix[G] is the identity.
inline std::vector<PropagationMap> forward_suffixes(const CompiledPattern& p) {
    const int G = static_cast<int>(p.gates.size());
    std::vector<PropagationMap> suf(G + 1);
    suf[G] = compose(p.n, {});
    for (int i = G - 1; i >= 0; --i)
        suf[i] = compose(p.n, {placed_forward_map(p.gates[i], p.n, p.clifford_tol), suf[i + 1]});
    return suf;
}

// bprefix[i] pushes an image from the output of gate i backward through
// gates i, i-1, ..., 0 to the network input.
inline std::vector<PropagationMap> backward_prefixes(const CompiledPattern& p) {
    const int G = static_cast<int>(p.gates.size());
    std::vector<PropagationMap> pre(G);
    PropagationMap tail = compose(p.n, {});
    for (int i = 0; i < G; ++i) {
        pre[i] = compose(p.n, {placed_backward_map(p.gates[i], p.n, p.clifford_tol), tail});
        tail = pre[i];
    }
    return pre;
}

inline CompiledPattern compile(const Circuit& c, const CompileOptions& opt = {}) {
    if (c.n < 1) throw compile_error("compile: circuit has no wires");
    CompiledPattern p;
    p.n = c.n;
    p.circuit = c;
    p.clifford_tol = opt.clifford_tol;
    p.f_init = PauliImage::zero(c.n);

    std::vector<int> frontier(c.n), col(c.n, 0);
    int next_id = c.n;
    for (int w = 0; w < c.n; ++w) {
        frontier[w] = w;
        p.graph.add_site(w, {2 * w, 0});
        PatternSite s;
        s.id = w;
        s.row = 2 * w;
        s.col = 0;
        s.wire = w;
        s.role = SiteRole::Output; // provisional; consumed sites become inputs
        s.basis = BasisSpec::z();
        p.sites[w] = s;
    }

    // Templates are angle-dependent only for rotations; cache the rest.
    const GateTemplate tmpl_h = clifford_template(GateKind::H, opt.clifford_tol, opt.fit_tol);
    const GateTemplate tmpl_s = clifford_template(GateKind::S, opt.clifford_tol, opt.fit_tol);
    const GateTemplate tmpl_wire = wire_template(opt.clifford_tol, opt.fit_tol);
    const GateTemplate tmpl_cnot = cnot_template(opt.fit_tol);

    auto embed_image = [&](const PauliImage& img, const std::array<int, 2>& wires) {
        PauliImage out = PauliImage::zero(c.n);
        for (int tw = 0; tw < img.n; ++tw) {
            if (img.x_bit(tw)) out.x |= std::uint64_t{1} << wires[tw];
            if (img.z_bit(tw)) out.z |= std::uint64_t{1} << wires[tw];
        }
        return out;
    };

    auto place_chain = [&](const GateTemplate& t, int wire, GateSpec spec) {
        spec.q0 = wire;
        PlacedGate g;
        g.kind = t.kind;
        g.spec = spec;
        g.wires = {wire, -1};
        std::vector<int> local2site(t.local_count);
        local2site[0] = frontier[wire];
        for (int l = 1; l < t.local_count; ++l) {
            const int id = next_id++;
            local2site[l] = id;
            p.graph.add_site(id, {2 * wire, col[wire] + l});
            PatternSite s;
            s.id = id;
            s.row = 2 * wire;
            s.col = col[wire] + l;
            s.wire = wire;
            s.role = SiteRole::Output;
            s.basis = BasisSpec::z();
            p.sites[id] = s;
        }
        for (const auto& [a, b] : t.edges) {
            p.graph.add_edge(local2site[a], local2site[b]);
            g.edges.emplace_back(local2site[a], local2site[b]);
        }
        for (std::size_t i = 0; i < t.interior.size(); ++i) {
            const int id = local2site[t.interior[i]];
            g.interior.push_back(id);
            g.images.push_back(embed_image(t.byproduct[i], {wire, -1}));
            auto& site = p.sites[id];
            site.role = site.id < c.n ? SiteRole::Input : SiteRole::Interior;
            site.basis = BasisSpec::planar(t.interior_spec[i].base_angle);
            site.adaptive = t.interior_spec[i].adaptive;
            if (t.interior_spec[i].slot >= 0)
                g.slot_sites[t.interior_spec[i].slot] = id;
            for (int src : t.interior_spec[i].rule)
                g.intra.emplace_back(local2site[t.interior[src]], id);
        }
        g.outputs = {local2site[t.output_local[0]]};
        g.constant = embed_image(t.constant, {wire, -1});
        p.gates.push_back(std::move(g));
        frontier[wire] = local2site[t.local_count - 1];
        col[wire] += t.local_count - 1;
    };

    for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
        const GateSpec& gs = c.gates[gi];
        switch (gs.kind) {
            case GateKind::Rot:
                place_chain(rotation_template(gs.xi, gs.eta, gs.zeta, opt.clifford_tol,
                                              opt.fit_tol),
                            gs.q0, gs);
                break;
            case GateKind::H:
                place_chain(tmpl_h, gs.q0, gs);
                break;
            case GateKind::S:
                place_chain(tmpl_s, gs.q0, gs);
                break;
            case GateKind::Wire:
                place_chain(tmpl_wire, gs.q0, gs);
                break;
            case GateKind::Cnot: {
                const int cw = gs.q0, tw = gs.q1;
                if (cw < 0 || cw >= c.n || tw < 0 || tw >= c.n)
                    throw compile_error("compile: CNOT wire out of range in gate " +
                                        std::to_string(gi));
                if (std::abs(cw - tw) != 1)
                    throw compile_error("compile: non-nearest-neighbor " + gs.describe() +
                                        " at gate " + std::to_string(gi));
                while (col[cw] < col[tw]) place_chain(tmpl_wire, cw, GateSpec::wire(cw));
                while (col[tw] < col[cw]) place_chain(tmpl_wire, tw, GateSpec::wire(tw));

                PlacedGate g;
                g.kind = GateKind::Cnot;
                g.spec = GateSpec::cnot(cw, tw);
                g.wires = {cw, tw};
                std::vector<int> local2site(4);
                local2site[0] = frontier[cw];
                local2site[1] = frontier[tw];
                for (int l = 2; l < 4; ++l) {
                    const int id = next_id++;
                    local2site[l] = id;
                    const int cc = col[tw] + (l - 1);
                    p.graph.add_site(id, {2 * tw, cc});
                    PatternSite s;
                    s.id = id;
                    s.row = 2 * tw;
                    s.col = cc;
                    s.wire = tw;
                    s.role = SiteRole::Output;
                    s.basis = BasisSpec::z();
                    p.sites[id] = s;
                }
                for (const auto& [a, b] : tmpl_cnot.edges) {
                    p.graph.add_edge(local2site[a], local2site[b]);
                    g.edges.emplace_back(local2site[a], local2site[b]);
                }
                for (std::size_t i = 0; i < tmpl_cnot.interior.size(); ++i) {
                    const int id = local2site[tmpl_cnot.interior[i]];
                    g.interior.push_back(id);
                    g.images.push_back(embed_image(tmpl_cnot.byproduct[i], {cw, tw}));
                    auto& site = p.sites[id];
                    site.role = site.id < c.n ? SiteRole::Input : SiteRole::Interior;
                    site.basis = BasisSpec::planar(tmpl_cnot.interior_spec[i].base_angle);
                    site.adaptive = false;
                }
                g.outputs = {local2site[0], local2site[3]};
                g.constant = embed_image(tmpl_cnot.constant, {cw, tw});
                p.gates.push_back(std::move(g));
                frontier[tw] = local2site[3];
                col[tw] += 2;
                break;
            }
        }
    }

    // Byproduct images at the network output, and constant-induced angle flips.
    const auto suffixes = forward_suffixes(p);
    std::map<int, int> const_flip;
    for (std::size_t gi = 0; gi < p.gates.size(); ++gi) {
        const auto& suf = suffixes[gi + 1];
        auto& g = p.gates[gi];
        for (std::size_t i = 0; i < g.interior.size(); ++i)
            p.f.emplace(g.interior[i], suf.apply(g.images[i]));
        if (!g.constant.is_zero()) {
            p.f_init ^= suf.apply(g.constant);
            for (const auto& fl : suf.flips)
                if (parity64(fl.row & g.constant.packed())) const_flip[fl.key] ^= 1;
        }
    }
    for (int w = 0; w < c.n; ++w) {
        const int o = frontier[w];
        p.outputs.push_back(o);
        p.sites[o].role = SiteRole::Output;
        p.sites[o].basis = BasisSpec::z();
        p.f.emplace(o, PauliImage::x_on(c.n, w));
    }
    for (int w = 0; w < c.n; ++w)
        if (p.sites[w].role == SiteRole::Input) p.inputs.push_back(w);
    for (auto& [site, flip] : const_flip)
        if (flip) p.sites[site].basis.angle = -p.sites[site].basis.angle;

    if (opt.embed_rect) {
        int max_col = 0, max_row = 0;
        std::map<std::pair<int, int>, int> at;
        for (const auto& [id, s] : p.sites) {
            max_col = std::max(max_col, s.col);
            max_row = std::max(max_row, s.row);
            at[{s.row, s.col}] = id;
        }
        for (int r = 0; r <= max_row; ++r)
            for (int cc = 0; cc <= max_col; ++cc)
                if (!at.count({r, cc})) {
                    const int id = next_id++;
                    at[{r, cc}] = id;
                    p.graph.add_site(id, {r, cc});
                    PatternSite s;
                    s.id = id;
                    s.row = r;
                    s.col = cc;
                    s.wire = -1;
                    s.role = SiteRole::Filler;
                    s.basis = BasisSpec::z();
                    p.sites[id] = s;
                }
        for (const auto& [rc, id] : at) {
            auto [r, cc] = rc;
            auto maybe_edge = [&](int r2, int c2) {
                auto it = at.find({r2, c2});
                if (it == at.end()) return;
                const bool filler = p.sites[id].role == SiteRole::Filler ||
                                    p.sites[it->second].role == SiteRole::Filler;
                if (filler) p.graph.add_edge(id, it->second);
            };
            maybe_edge(r + 1, cc);
            maybe_edge(r, cc + 1);
        }
    }
    return p;
}

} // namespace mbqc
