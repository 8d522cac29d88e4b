// Shot execution in two equivalent pictures: full-cluster (entangle all,
// measure round by round) and streamed (attach/entangle/measure gate by
// gate on a bounded frontier), plus the direct-circuit oracle.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "mbqc/controller.hpp"
#include "mbqc/rng.hpp"
#include "mbqc/stats.hpp"

namespace mbqc {

enum class RunMode { Full, Streamed };

inline const char* run_mode_name(RunMode m) {
    return m == RunMode::Full ? "full" : "streamed";
}

struct RunOptions {
    int max_qubits = kDefaultMaxQubits;
};

struct ShotRecord {
    std::uint64_t seed = 0;
    std::uint64_t shot_index = 0;
    std::map<int, int> outcomes;      // model-level outcome per measured site
    std::vector<int> result;          // x-part of I(t_max), one bit per wire
    double final_fidelity = -1.0;     // full-cluster mode only
    int rounds_executed = 0;
    // physical projection log (site, basis, raw outcome) in execution order;
    // drives the deterministic replay behind the fidelity check.
    std::vector<std::tuple<int, BasisSpec, int>> projections;
    // per-round trace lines (t, sites, outcomes, I) when tracing is on
    std::vector<nlohmann::json> trace;
};

// |psi_out> = U_circuit |+...+>, amplitude index bit w = wire w.
inline std::vector<cplx> oracle_state(const Circuit& c) {
    if (c.n > kOracleMaxQubits)
        throw oracle_limit_error("oracle: circuit too wide for the dense oracle");
    const std::size_t d = std::size_t{1} << c.n;
    std::vector<cplx> v(d, cplx{1.0 / std::sqrt(double(d)), 0.0});
    for (const auto& g : c.gates) {
        switch (g.kind) {
            case GateKind::H: vec_apply1(v, g.q0, mat_h()); break;
            case GateKind::S: vec_apply1(v, g.q0, mat_uz(std::acos(-1.0) / 2)); break;
            case GateKind::Rot: vec_apply1(v, g.q0, mat_rot(g.xi, g.eta, g.zeta)); break;
            case GateKind::Cnot: vec_apply_cnot(v, g.q0, g.q1); break;
            case GateKind::Wire: break;
        }
    }
    return v;
}

// Exact Z-readout distribution of the network model.
inline std::map<std::uint64_t, double> oracle_distribution(const Circuit& c) {
    auto v = oracle_state(c);
    std::map<std::uint64_t, double> dist;
    for (std::size_t b = 0; b < v.size(); ++b) {
        const double p = std::norm(v[b]);
        if (p > 1e-15) dist[b] = p;
    }
    return dist;
}

namespace detail {

inline nlohmann::json image_json(const PauliImage& img);

inline nlohmann::json trace_line(std::uint64_t shot, int t, const std::map<int, int>& outs,
                                 const PauliImage& I) {
    nlohmann::json sites = nlohmann::json::array(), bits = nlohmann::json::array();
    for (const auto& [site, s] : outs) {
        sites.push_back(site);
        bits.push_back(s);
    }
    std::ostringstream hex_x, hex_z;
    hex_x << "0x" << std::hex << I.x;
    hex_z << "0x" << std::hex << I.z;
    return nlohmann::json{{"shot", shot}, {"t", t},       {"sites", sites},
                          {"outcomes", bits}, {"I", {{"x", hex_x.str()}, {"z", hex_z.str()}}}};
}

} // namespace detail

// Interprets a shot's physical readout through the accumulated byproduct
// image, independently of the controller's own bookkeeping.
inline std::vector<int> corrected_readout(const CompiledPattern& p, const ShotRecord& rec) {
    PauliImage acc = p.f_init;
    for (const auto& [site, s] : rec.outcomes) {
        const auto& ps = p.sites.at(site);
        if (ps.role == SiteRole::Output || ps.role == SiteRole::Filler) continue;
        if (s) acc ^= p.f_of(site);
    }
    std::vector<int> bits(p.n);
    for (int w = 0; w < p.n; ++w) bits[w] = rec.outcomes.at(p.outputs[w]) ^ acc.x_bit(w);
    return bits;
}

// Re-applies the shot's physical projections to a fresh cluster state and
// returns the residual on the output register: the pre-readout state of the
// sequential picture, equivalent to the executed all-at-once order.
inline QuantumState replay_residual(const RunContext& ctx, const ShotRecord& rec,
                                    const RunOptions& opts = {}) {
    QuantumState st = make_cluster_state(ctx.pattern.graph, opts.max_qubits);
    for (const auto& [site, basis, raw] : rec.projections)
        force_measure(st, site, basis, raw);
    return st;
}

// Full-cluster execution: build the cluster state, Z-remove fillers, then
// measure the scheduled rounds with controller-adapted bases. Readout sites
// sit in round 0, so the per-shot fidelity is computed against a replayed
// all-but-readout projection of the same outcomes.
inline ShotRecord run_shot_full(const RunContext& ctx, std::uint64_t seed,
                                std::uint64_t shot_index,
                                const std::vector<cplx>& oracle_vec,
                                const RunOptions& opts = {}, bool want_trace = false) {
    const CompiledPattern& p = ctx.pattern;
    ShotRecord rec;
    rec.seed = seed;
    rec.shot_index = shot_index;
    CounterRng rng(seed, shot_index);

    QuantumState st = make_cluster_state(p.graph, opts.max_qubits);

    // Z-removal of filler sites; corrections are folded classically as
    // pending z flips (outcome relabel on planar sites, image on outputs).
    std::map<int, int> pending;
    ClusterGraph working = p.graph;
    for (const auto& [id, site] : p.sites) {
        if (site.role != SiteRole::Filler) continue;
        auto res = remove_z(working, st, id, rng.next_unit());
        working = res.reduced;
        rec.outcomes[id] = res.outcome;
        rec.projections.emplace_back(id, BasisSpec::z(), res.outcome);
        for (const auto& [nb, flip] : res.z_flips) pending[nb] ^= flip;
    }

    FlowState flow = init_flow(p);
    for (int t = 0; t <= ctx.schedule.t_max(); ++t) {
        std::map<int, int> outs;
        for (int site : ctx.schedule.rounds[t]) {
            BasisSpec basis = p.sites.at(site).basis;
            if (t > 0) basis = BasisSpec::planar(adapt_angle(flow, site, ctx));
            const int raw = measure(st, site, basis, rng.next_unit());
            rec.projections.emplace_back(site, basis, raw);
            int eff = raw;
            if (!basis.is_z() && pending.count(site)) eff ^= pending[site];
            outs[site] = eff;
            rec.outcomes[site] = eff;
        }
        if (t == 0)
            finish_round0(flow, outs, ctx);
        else
            update(flow, outs, ctx);
        if (want_trace) rec.trace.push_back(detail::trace_line(shot_index, t, outs, flow.I));
    }
    rec.result = result(flow, ctx);
    rec.rounds_executed = ctx.schedule.t_max() + 1;

    // Physical byproduct accumulated before readout, plus any sigma_z still
    // owed to the output register from filler removal.
    PauliImage acc = p.f_init;
    for (const auto& [site, s] : rec.outcomes) {
        const auto& ps = p.sites.at(site);
        if (ps.role == SiteRole::Filler || ps.role == SiteRole::Output) continue;
        if (s) acc ^= p.f_of(site);
    }
    for (int w = 0; w < p.n; ++w)
        if (pending.count(p.outputs[w]) && (pending[p.outputs[w]] & 1))
            acc ^= PauliImage::z_on(p.n, w);

    std::vector<cplx> target = oracle_vec;
    for (int w = 0; w < p.n; ++w)
        if (acc.z_bit(w)) vec_apply1(target, w, mat_z());
    for (int w = 0; w < p.n; ++w)
        if (acc.x_bit(w)) vec_apply1(target, w, mat_x());
    QuantumState target_state;
    target_state.amps = std::move(target);
    for (int w = 0; w < p.n; ++w) target_state.registry[p.outputs[w]] = w;

    ShotRecord partial = rec;
    partial.projections.clear();
    for (const auto& pr : rec.projections)
        if (p.sites.at(std::get<0>(pr)).role != SiteRole::Output)
            partial.projections.push_back(pr);
    QuantumState residual = replay_residual(ctx, partial, opts);
    rec.final_fidelity = fidelity(residual, target_state);
    return rec;
}

// Streamed execution: keeps only the live frontier (at most n + 4 qubits).
// Gates attach their template sites, entangle, and measure in network order,
// which is a linear extension of the adaptivity order, so the naive
// forward-cone angle rule always has its inputs ready.
inline ShotRecord run_shot_streamed(const RunContext& ctx, std::uint64_t seed,
                                    std::uint64_t shot_index, bool want_trace = false) {
    const CompiledPattern& p = ctx.pattern;
    for (const auto& [id, site] : p.sites)
        if (site.role == SiteRole::Filler)
            throw error("streamed mode does not execute rect-embedded patterns");
    ShotRecord rec;
    rec.seed = seed;
    rec.shot_index = shot_index;
    CounterRng rng(seed, shot_index);

    std::vector<int> wire_starts(p.n);
    for (int w = 0; w < p.n; ++w) wire_starts[w] = w;
    QuantumState st = init_plus(wire_starts, p.n + 4);

    // reverse cone lookup: which earlier outcomes flip a given site's angle
    std::map<int, std::vector<int>> flipped_by;
    for (const auto& [k, js] : ctx.cones.fc)
        for (int j : js) flipped_by[j].push_back(k);

    PauliImage acc = p.f_init;
    auto measure_site = [&](int site) {
        const auto& ps = p.sites.at(site);
        BasisSpec basis = ps.basis;
        if (ps.adaptive) {
            int flip = 0;
            for (int k : flipped_by[site]) flip ^= rec.outcomes.at(k);
            if (flip) basis = BasisSpec::planar(-basis.angle);
        }
        const int s = measure(st, site, basis, rng.next_unit());
        rec.projections.emplace_back(site, basis, s);
        rec.outcomes[site] = s;
        if (s) acc ^= p.f_of(site);
    };

    int gate_index = 0;
    for (const auto& g : p.gates) {
        for (int site : g.interior)
            if (!st.has_site(site)) add_plus_site(st, site, p.n + 4);
        for (int site : g.outputs)
            if (!st.has_site(site)) add_plus_site(st, site, p.n + 4);
        if (st.qubit_count() > p.n + 4)
            throw error("streamed frontier exceeded its bound");
        for (const auto& [a, b] : g.edges) apply_cz(st, a, b);
        std::map<int, int> gate_outs;
        for (int site : g.interior) {
            measure_site(site);
            gate_outs[site] = rec.outcomes[site];
        }
        if (want_trace)
            rec.trace.push_back(detail::trace_line(shot_index, gate_index, gate_outs, acc));
        ++gate_index;
    }
    std::map<int, int> readout;
    for (int o : p.outputs) {
        measure_site(o);
        readout[o] = rec.outcomes[o];
    }
    if (want_trace)
        rec.trace.push_back(detail::trace_line(shot_index, gate_index, readout, acc));

    rec.result.resize(p.n);
    for (int w = 0; w < p.n; ++w) rec.result[w] = acc.x_bit(w);
    rec.rounds_executed = static_cast<int>(p.gates.size()) + 1;
    return rec;
}

struct ExperimentOptions {
    int threads = 1;
    RunOptions run;
    bool trace = false;
};

struct Summary {
    long shots = 0;
    std::uint64_t seed = 0;
    RunMode mode = RunMode::Streamed;
    int n = 0;
    int t_max = 0;
    std::vector<int> round_sizes;
    std::map<std::string, long> counts;
    bool has_oracle = false;
    std::map<std::string, double> oracle;
    double tv_distance_to_oracle = 0.0;
    double tv_bound = 0.0;
    double chi2_pvalue = 1.0;
    bool has_fidelity = false;
    double mean_final_fidelity = 0.0;
    double min_final_fidelity = 1.0;
    std::vector<nlohmann::json> trace;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["shots"] = shots;
        j["seed"] = seed;
        j["mode"] = run_mode_name(mode);
        j["qubits"] = n;
        j["t_max"] = t_max;
        j["rounds"] = round_sizes;
        nlohmann::json emp = nlohmann::json::object();
        for (const auto& [k, c] : counts) emp[k] = double(c) / double(shots);
        j["empirical"] = emp;
        nlohmann::json cnt = nlohmann::json::object();
        for (const auto& [k, c] : counts) cnt[k] = c;
        j["counts"] = cnt;
        if (has_oracle) {
            nlohmann::json oj = nlohmann::json::object();
            for (const auto& [k, p] : oracle) oj[k] = p;
            j["oracle"] = oj;
            j["tv_distance"] = tv_distance_to_oracle;
            j["tv_bound"] = tv_bound;
            j["chi2_pvalue"] = chi2_pvalue;
        }
        if (has_fidelity) {
            j["mean_final_fidelity"] = mean_final_fidelity;
            j["min_final_fidelity"] = min_final_fidelity;
        }
        return j;
    }
};

inline std::string bits_key(const std::vector<int>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (int b : bits) s.push_back(b ? '1' : '0');
    return s;
}

inline std::string bits_key(std::uint64_t packed, int n) {
    std::string s;
    s.reserve(n);
    for (int w = 0; w < n; ++w) s.push_back((packed >> w) & 1 ? '1' : '0');
    return s;
}

inline std::uint64_t pack_bits(const std::vector<int>& bits) {
    std::uint64_t v = 0;
    for (std::size_t w = 0; w < bits.size(); ++w)
        if (bits[w]) v |= std::uint64_t{1} << w;
    return v;
}

// Runs `shots` independent shots of a compiled context and aggregates
// deterministically by shot index (thread count never changes the output).
inline Summary run_context_experiment(const RunContext& ctx, long shots,
                                      std::uint64_t seed, RunMode mode,
                                      const ExperimentOptions& opts = {}) {
    const CompiledPattern& p = ctx.pattern;
    if (mode == RunMode::Full &&
        static_cast<int>(p.graph.size()) > opts.run.max_qubits)
        throw size_error("full-cluster mode needs " + std::to_string(p.graph.size()) +
                         " qubits, limit is " + std::to_string(opts.run.max_qubits));

    std::vector<cplx> oracle_vec;
    const bool oracle_ok = p.n <= kOracleMaxQubits;
    if (mode == RunMode::Full) oracle_vec = oracle_state(p.circuit);

    std::vector<std::vector<int>> results(shots);
    std::vector<double> fidelities(mode == RunMode::Full ? shots : 0);
    std::vector<std::vector<nlohmann::json>> traces(opts.trace ? shots : 0);

    const int threads = std::max(1, opts.threads);
    auto worker = [&](long begin, long end) {
        for (long i = begin; i < end; ++i) {
            if (mode == RunMode::Full) {
                auto rec = run_shot_full(ctx, seed, std::uint64_t(i), oracle_vec, opts.run,
                                         opts.trace);
                results[i] = rec.result;
                fidelities[i] = rec.final_fidelity;
                if (opts.trace) traces[i] = std::move(rec.trace);
            } else {
                auto rec = run_shot_streamed(ctx, seed, std::uint64_t(i), opts.trace);
                results[i] = rec.result;
                if (opts.trace) traces[i] = std::move(rec.trace);
            }
        }
    };
    if (threads == 1) {
        worker(0, shots);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (shots + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const long b = t * chunk, e = std::min<long>(shots, (t + 1) * chunk);
            if (b < e) pool.emplace_back(worker, b, e);
        }
        for (auto& th : pool) th.join();
    }

    Summary sum;
    sum.shots = shots;
    sum.seed = seed;
    sum.mode = mode;
    sum.n = p.n;
    sum.t_max = ctx.schedule.t_max();
    for (const auto& r : ctx.schedule.rounds) sum.round_sizes.push_back(int(r.size()));

    std::map<std::uint64_t, long> counts;
    for (long i = 0; i < shots; ++i) ++counts[pack_bits(results[i])];
    for (const auto& [k, c] : counts) sum.counts[bits_key(k, p.n)] = c;

    if (oracle_ok) {
        sum.has_oracle = true;
        auto dist = oracle_distribution(p.circuit);
        for (const auto& [k, pr] : dist) sum.oracle[bits_key(k, p.n)] = pr;
        sum.tv_distance_to_oracle = tv_distance(counts, shots, dist);
        sum.tv_bound = 3.0 * std::sqrt(double(dist.size()) / double(shots));
        sum.chi2_pvalue = chi2_gof_pvalue(counts, shots, dist);
    }
    if (mode == RunMode::Full) {
        sum.has_fidelity = true;
        double acc = 0.0, mn = 1.0;
        for (long i = 0; i < shots; ++i) {
            acc += fidelities[i];
            mn = std::min(mn, fidelities[i]);
        }
        sum.mean_final_fidelity = shots ? acc / double(shots) : 0.0;
        sum.min_final_fidelity = shots ? mn : 1.0;
    }
    if (opts.trace)
        for (long i = 0; i < shots; ++i)
            for (auto& line : traces[i]) sum.trace.push_back(std::move(line));
    return sum;
}

// Convenience entry point: compile, schedule, and run a circuit.
inline Summary run_experiment(const Circuit& c, long shots, std::uint64_t seed,
                              RunMode mode, const ExperimentOptions& opts = {},
                              const CompileOptions& copts = {}) {
    CompiledPattern p = compile(c, copts);
    ConeSets cones = compute_cones(p);
    Schedule sched = build_schedule(p, cones);
    RunContext ctx{p, cones, sched};
    return run_context_experiment(ctx, shots, seed, mode, opts);
}

} // namespace mbqc
