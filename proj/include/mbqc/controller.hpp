// Classical side-processing: the 2n-bit information flow vector, round-0
// angle absorption, per-round adaptive angles, and result extraction.
#pragma once

#include <map>
#include <vector>

#include "mbqc/compiler.hpp"
#include "mbqc/scheduler.hpp"

namespace mbqc {

struct RunContext {
    const CompiledPattern& pattern;
    const ConeSets& cones;
    const Schedule& schedule;
};

// I(t) = I_init + sum_{k measured so far} s_k F_k, plus the adapted algorithm
// angles fixed once round 0 is absorbed. t is the last completed round.
struct FlowState {
    PauliImage I = PauliImage::zero(1);
    int t = -1;
    std::map<int, double> phi_algo; // adaptive site -> phi'_algo
};

inline FlowState init_flow(const CompiledPattern& p) {
    FlowState f;
    f.I = p.f_init;
    f.t = -1;
    return f;
}

namespace detail {

inline void check_round_coverage(const std::map<int, int>& outcomes,
                                 const std::vector<int>& round) {
    if (outcomes.size() != round.size())
        throw error("controller: outcomes do not cover the round exactly");
    for (int site : round)
        if (!outcomes.count(site))
            throw error("controller: missing outcome for site " + std::to_string(site));
}

} // namespace detail

// Absorbs the non-adaptive round: updates I(0), applies the round-0 sign
// flips to the initial algorithm angles, and fixes phi'_algo. The raw round-0
// outcomes are not needed afterwards.
inline void finish_round0(FlowState& f, const std::map<int, int>& outcomes,
                          const RunContext& ctx) {
    if (f.t != -1) throw error("finish_round0: round 0 already absorbed");
    detail::check_round_coverage(outcomes, ctx.schedule.rounds.at(0));
    for (const auto& [site, s] : outcomes)
        if (s) f.I ^= ctx.pattern.f_of(site);
    for (const auto& [site, ps] : ctx.pattern.sites) {
        if (!ps.adaptive) continue;
        int eta = 0;
        for (const auto& [k, s] : outcomes)
            if (s && ctx.cones.fc_of(k).count(site)) eta ^= 1;
        double phi0 = eta ? -ps.basis.angle : ps.basis.angle;
        if (symplectic_product(f.I, ctx.pattern.f_of(site))) phi0 = -phi0;
        f.phi_algo[site] = phi0;
    }
    f.t = 0;
}

// Measurement angle for an adaptive site scheduled in the round now being
// measured: phi'_algo * (-1)^{(I(t-1), F_j)_S}.
inline double adapt_angle(const FlowState& f, int j, const RunContext& ctx) {
    if (f.t < 0) throw error("adapt_angle: round 0 not absorbed yet");
    auto it = f.phi_algo.find(j);
    if (it == f.phi_algo.end())
        throw error("adapt_angle: site " + std::to_string(j) + " is not adaptive");
    const double phi = it->second;
    return symplectic_product(f.I, ctx.pattern.f_of(j)) ? -phi : phi;
}

// XOR-accumulates one adaptive round; outcomes must cover Q_{t+1} exactly.
inline void update(FlowState& f, const std::map<int, int>& outcomes,
                   const RunContext& ctx) {
    if (f.t < 0) throw error("update: round 0 not absorbed yet");
    const int t = f.t + 1;
    if (t > ctx.schedule.t_max()) throw error("update: all rounds already consumed");
    detail::check_round_coverage(outcomes, ctx.schedule.rounds.at(t));
    for (const auto& [site, s] : outcomes)
        if (s) f.I ^= ctx.pattern.f_of(site);
    f.t = t;
}

// The computation's result: the x-part of I(t_max), one bit per wire.
inline std::vector<int> result(const FlowState& f, const RunContext& ctx) {
    if (f.t != ctx.schedule.t_max())
        throw error("result: measurement rounds still outstanding");
    std::vector<int> bits(ctx.pattern.n);
    for (int w = 0; w < ctx.pattern.n; ++w) bits[w] = f.I.x_bit(w);
    return bits;
}

} // namespace mbqc
