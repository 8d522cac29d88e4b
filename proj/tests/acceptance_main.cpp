// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line with its measured detail and elapsed time; the binary exits nonzero
// if any criterion fails or overruns its budget.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mbqc/pattern_io.hpp"
#include "mbqc/runtime.hpp"

using namespace mbqc;

namespace {

const double kPi = std::acos(-1.0);

double generic_angle(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(0.25, 1.25);
    return (rng() & 1 ? 1.0 : -1.0) * mag(rng);
}

// Random circuit with generic rotation angles; full-cluster footprint capped
// so the dense engine stays fast.
Circuit random_circuit(std::mt19937_64& rng, int max_wires, int max_gates,
                       bool clifford_only, std::size_t max_sites) {
    for (;;) {
        Circuit c;
        c.n = 1 + int(rng() % max_wires);
        const int gates = 1 + int(rng() % max_gates);
        for (int i = 0; i < gates; ++i) {
            const int pick = int(rng() % (clifford_only ? 3 : 4));
            if (pick == 3) {
                c.gates.push_back(GateSpec::rot(int(rng() % c.n), generic_angle(rng),
                                                generic_angle(rng), generic_angle(rng)));
            } else if (pick == 2 && c.n >= 2) {
                const int a = int(rng() % (c.n - 1));
                c.gates.push_back(rng() & 1 ? GateSpec::cnot(a, a + 1)
                                            : GateSpec::cnot(a + 1, a));
            } else if (pick == 1) {
                c.gates.push_back(GateSpec::s(int(rng() % c.n)));
            } else {
                c.gates.push_back(GateSpec::h(int(rng() % c.n)));
            }
        }
        if (compile(c).graph.size() <= max_sites) return c;
    }
}

struct Outcome {
    bool ok = true;
    std::string detail;
};

using CriterionFn = std::function<Outcome()>;

// ---- criterion 1: stabilizer suite ----------------------------------------

Outcome criterion_stabilizers() {
    std::mt19937_64 rng(1001);
    int passed = 0;
    for (int t = 0; t < 50; ++t) {
        const int m = 1 + int(rng() % 12);
        ClusterGraph g;
        for (int i = 0; i < m; ++i) g.add_site(i);
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b)
                if (rng() % 100 < 35) g.add_edge(a, b);
        if (check_stabilizers(g, make_cluster_state(g))) ++passed;
    }
    std::ostringstream d;
    d << passed << "/50 random graphs satisfy the eigenvalue equations";
    return {passed == 50, d.str()};
}

// ---- criterion 2: rotation byproduct map ----------------------------------

Outcome criterion_rotation_byproducts() {
    std::mt19937_64 rng(1002);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    const std::array<cplx, 2> inputs[4] = {
        {cplx{1, 0}, cplx{0, 0}},
        {cplx{0, 0}, cplx{1, 0}},
        {cplx{std::sqrt(0.5), 0}, cplx{std::sqrt(0.5), 0}},
        {cplx{std::sqrt(0.5), 0}, cplx{0, std::sqrt(0.5)}},
    };
    int cases = 0;
    double worst = 1.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double xi = ang(rng), eta = ang(rng), zeta = ang(rng);
        GateTemplate t = rotation_template(xi, eta, zeta);
        const bool map_ok = t.constant == PauliImage::zero(1) &&
                            t.byproduct[0] == PauliImage::z_on(1, 0) &&
                            t.byproduct[1] == PauliImage::x_on(1, 0) &&
                            t.byproduct[2] == PauliImage::z_on(1, 0) &&
                            t.byproduct[3] == PauliImage::x_on(1, 0);
        if (!map_ok) return {false, "derived affine map differs from x^{s2+s4} z^{s1+s3}"};
        for (std::uint64_t s = 0; s < 16; ++s) {
            PauliImage img = t.constant;
            for (int i = 0; i < 4; ++i)
                if ((s >> i) & 1) img ^= t.byproduct[i];
            const CMat corr = to_pauli(img);
            for (const auto& in : inputs) {
                std::vector<std::pair<int, std::array<cplx, 2>>> kets;
                const double r = std::sqrt(0.5);
                for (int local = 0; local < 5; ++local)
                    kets.emplace_back(local, local == 0
                                                 ? in
                                                 : std::array<cplx, 2>{cplx{r, 0}, cplx{r, 0}});
                QuantumState st = init_product(kets);
                for (const auto& [a, b] : t.edges) apply_cz(st, a, b);
                for (int i = 0; i < 4; ++i) {
                    const auto& spec = t.interior_spec[i];
                    double phi = spec.base_angle;
                    int flip = 0;
                    for (int src : spec.rule) flip ^= int((s >> src) & 1);
                    if (spec.adaptive && flip) phi = -phi;
                    force_measure(st, i, BasisSpec::planar(phi), int((s >> i) & 1));
                }
                auto out = detail::extract_wire_vector(st, {4});
                auto expect = corr.apply(t.target.apply({in[0], in[1]}));
                cplx ov{0, 0};
                for (int i = 0; i < 2; ++i) ov += std::conj(out[i]) * expect[i];
                worst = std::min(worst, std::norm(ov));
                ++cases;
            }
        }
    }
    std::ostringstream d;
    d << cases << " cases, worst fidelity 1 - " << 1.0 - worst;
    return {worst >= 1.0 - 1e-10, d.str()};
}

// ---- criterion 3: Clifford byproduct maps ----------------------------------

Outcome criterion_clifford_byproducts() {
    GateTemplate h = clifford_template(GateKind::H);
    GateTemplate s = clifford_template(GateKind::S);
    const bool h_ok = h.constant == PauliImage::zero(1) &&
                      h.byproduct[0] == PauliImage::x_on(1, 0) &&
                      h.byproduct[1] == PauliImage::z_on(1, 0) &&
                      h.byproduct[2] == PauliImage::y_on(1, 0) &&
                      h.byproduct[3] == PauliImage::x_on(1, 0);
    const bool s_ok = s.constant == PauliImage::z_on(1, 0) &&
                      s.byproduct[0] == PauliImage::z_on(1, 0) &&
                      s.byproduct[1] == PauliImage::y_on(1, 0) &&
                      s.byproduct[2] == PauliImage::z_on(1, 0) &&
                      s.byproduct[3] == PauliImage::x_on(1, 0);
    if (!h_ok) return {false, "H map differs from x^{s1+s3+s4} z^{s2+s3}"};
    if (!s_ok) return {false, "S map differs from x^{s2+s4} z^{s1+s2+s3+1}"};
    return {true, "H and S maps match, including the S constant z term"};
}

// ---- criterion 4: propagation relations ------------------------------------

Outcome criterion_propagation_relations() {
    std::mt19937_64 rng(1004);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    double worst = 0.0;
    auto pw = [&](const Mat2& m, int p) { return p ? m : mat_id(); };
    for (int t = 0; t < 100; ++t) {
        const int s = int(rng() & 1), sp = int(rng() & 1);
        // rotation relation: exact identity
        const double xi = ang(rng), eta = ang(rng), zeta = ang(rng);
        Mat2 pauli = mat_mul(pw(mat_z(), s), pw(mat_x(), sp));
        Mat2 lhs = mat_mul(mat_rot(xi, eta, zeta), pauli);
        Mat2 rhs = mat_mul(pauli, mat_rot(s ? -xi : xi, sp ? -eta : eta, s ? -zeta : zeta));
        for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));

        // CNOT relation: exact identity on 4x4 matrices
        const int st = int(rng() & 1), sc = int(rng() & 1);
        auto pfour = [&](int zt, int zc, int xt, int xc) {
            CMat m = CMat::identity(4);
            if (zt) m = m * embed1(mat_z(), 1, 2);
            if (zc) m = m * embed1(mat_z(), 0, 2);
            if (xt) m = m * embed1(mat_x(), 1, 2);
            if (xc) m = m * embed1(mat_x(), 0, 2);
            return m;
        };
        CMat l4 = cmat_cnot() * pfour(st, sc, sp, s);
        CMat r4 = pfour(st, (sc + st) % 2, (s + sp) % 2, s) * cmat_cnot();
        worst = std::max(worst, max_abs_diff(l4, r4));

        // H and S relations: identities of sign-free byproducts, so compared
        // up to a global phase
        Mat2 lh = mat_mul(mat_h(), mat_mul(pw(mat_x(), s), pw(mat_z(), sp)));
        Mat2 rh = mat_mul(mat_mul(pw(mat_x(), sp), pw(mat_z(), s)), mat_h());
        worst = std::max(worst,
                         phase_aligned_distance(cmat_from_mat2(lh), cmat_from_mat2(rh)));
        const Mat2 sgate = mat_uz(kPi / 2);
        Mat2 ls = mat_mul(sgate, mat_mul(pw(mat_x(), s), pw(mat_z(), sp)));
        Mat2 rsm = mat_mul(mat_mul(pw(mat_x(), s), pw(mat_z(), (s + sp) % 2)), sgate);
        worst = std::max(worst,
                         phase_aligned_distance(cmat_from_mat2(ls), cmat_from_mat2(rsm)));
    }
    std::ostringstream d;
    d << "100 samples; max deviation " << worst
      << " (rotation/CNOT exact, H and S up to global phase)";
    return {worst <= 1e-12, d.str()};
}

// ---- criterion 5: symplectic invariance and cone test ----------------------

Outcome criterion_symplectic_cones() {
    for (int n = 1; n <= 4; ++n) {
        std::vector<GateSpec> gs;
        for (int q = 0; q < n; ++q) {
            gs.push_back(GateSpec::h(q));
            gs.push_back(GateSpec::s(q));
        }
        for (int q = 0; q + 1 < n; ++q) {
            gs.push_back(GateSpec::cnot(q, q + 1));
            gs.push_back(GateSpec::cnot(q + 1, q));
        }
        for (const auto& g : gs)
            if (!is_symplectic(gate_propagation_map(g, n).m, n))
                return {false, "a Clifford map violates symplectic invariance"};
    }
    std::mt19937_64 rng(1005);
    long pairs = 0;
    for (int t = 0; t < 20; ++t) {
        Circuit c = random_circuit(rng, 3, 5, false, 40);
        CompiledPattern p = compile(c);
        ConeSets cones = compute_cones(p);
        for (const auto& [j, sj] : p.sites) {
            if (!sj.adaptive) continue;
            for (const auto& [k, fk] : p.f) {
                const int member = cones.fc_of(k).count(j) || cones.bc_of(k).count(j);
                if (cone_test(p, j, k) != member)
                    return {false, "cone test disagrees with direct membership"};
                ++pairs;
            }
        }
    }
    std::ostringstream d;
    d << "invariance exhaustive for n <= 4; cone test matched on " << pairs << " pairs";
    return {true, d.str()};
}

// ---- criterion 6: Clifford unit depth ---------------------------------------

Outcome criterion_clifford_depth() {
    std::mt19937_64 rng(1006);
    for (int t = 0; t < 30; ++t) {
        Circuit c = random_circuit(rng, 4, 10, true, 80);
        CompiledPattern p = compile(c);
        Schedule s = build_schedule(p, compute_cones(p));
        if (s.t_max() != 0) return {false, "a Clifford circuit needed more than one round"};
    }
    return {true, "30/30 random Clifford circuits schedule with t_max = 0"};
}

// ---- criteria 7-9: end-to-end execution -------------------------------------

std::vector<Circuit> e2e_corpus() {
    std::mt19937_64 rng(1007);
    std::vector<Circuit> corpus;
    for (int t = 0; t < 20; ++t) corpus.push_back(random_circuit(rng, 3, 4, false, 17));
    return corpus;
}

Outcome criterion_full_mode_correctness() {
    double worst = 1.0;
    long shots_checked = 0;
    for (const auto& c : e2e_corpus()) {
        CompiledPattern p = compile(c);
        ConeSets cones = compute_cones(p);
        Schedule sched = build_schedule(p, cones);
        RunContext ctx{p, cones, sched};
        auto oracle = oracle_state(c);
        for (long i = 0; i < 50; ++i) {
            auto rec = run_shot_full(ctx, 20250101, std::uint64_t(i), oracle);
            worst = std::min(worst, rec.final_fidelity);
            if (rec.result != corrected_readout(p, rec))
                return {false, "result differs from the oracle-corrected readout"};
            ++shots_checked;
        }
    }
    std::ostringstream d;
    d << shots_checked << " shots; worst final fidelity 1 - " << 1.0 - worst;
    return {worst >= 1.0 - 1e-9, d.str()};
}

Outcome criterion_streamed_distribution() {
    const long shots = 10000;
    const double tv_threshold = 3.0 * std::sqrt(16.0 / double(shots));
    double worst_tv = 0.0, worst_p = 1.0;
    for (const auto& c : e2e_corpus()) {
        ExperimentOptions opts;
        opts.threads = 4;
        Summary sum = run_experiment(c, shots, 777, RunMode::Streamed, opts);
        worst_tv = std::max(worst_tv, sum.tv_distance_to_oracle);
        worst_p = std::min(worst_p, sum.chi2_pvalue);
    }
    std::ostringstream d;
    d << "20 circuits x 10^4 shots; worst tv " << worst_tv << " (<= " << tv_threshold
      << "), worst chi2 p " << worst_p;
    return {worst_tv <= tv_threshold && worst_p > 0.001, d.str()};
}

Outcome criterion_deterministic_control() {
    Circuit c{3, {GateSpec::h(0), GateSpec::h(1), GateSpec::h(2)}};
    CompiledPattern p = compile(c);
    ConeSets cones = compute_cones(p);
    Schedule sched = build_schedule(p, cones);
    RunContext ctx{p, cones, sched};
    for (long i = 0; i < 10000; ++i) {
        auto rec = run_shot_streamed(ctx, 31337, std::uint64_t(i));
        if (rec.result != std::vector<int>{0, 0, 0})
            return {false, "all-H circuit produced a nonzero readout"};
    }
    return {true, "10^4/10^4 shots returned 000"};
}

// ---- criterion 10: CLI determinism ------------------------------------------

Outcome criterion_cli_determinism() {
#ifndef MBQC_CLI_PATH
    return {false, "CLI path not configured"};
#else
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "mbqc_acceptance";
    fs::create_directories(dir);
    const fs::path circ = dir / "circ.json";
    {
        std::ofstream f(circ);
        f << R"({"version":1,"qubits":2,"gates":[
                 {"type":"ROT","qubit":0,"xi":0.8,"eta":1.1,"zeta":-0.5},
                 {"type":"CNOT","control":0,"target":1}]})";
    }
    const fs::path pat = dir / "pattern.json";
    auto sh = [&](const std::string& cmd) { return std::system(cmd.c_str()); };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string bin = MBQC_CLI_PATH;
    if (sh(bin + " compile " + circ.string() + " -o " + pat.string() + " 2>/dev/null"))
        return {false, "compile step failed"};
    const std::string base = bin + " run " + pat.string() + " --shots 2000 --seed 99 ";
    if (sh(base + "--threads 1 -o " + (dir / "a.json").string() + " 2>/dev/null"))
        return {false, "run step failed"};
    sh(base + "--threads 1 -o " + (dir / "b.json").string() + " 2>/dev/null");
    sh(base + "--threads 8 -o " + (dir / "c.json").string() + " 2>/dev/null");
    const std::string a = slurp(dir / "a.json"), b = slurp(dir / "b.json"),
                      c = slurp(dir / "c.json");
    if (a.empty() || a != b) return {false, "repeat invocation differed"};
    if (a != c) return {false, "thread count changed the summary"};
    return {true, "byte-identical summaries across reruns and thread counts 1/8"};
#endif
}

} // namespace

int main() {
    struct Row {
        int id;
        const char* name;
        CriterionFn fn;
        double budget_s;
    };
    const std::vector<Row> rows = {
        {1, "stabilizer suite", criterion_stabilizers, 10.0},
        {2, "rotation byproduct reproduction", criterion_rotation_byproducts, 30.0},
        {3, "Clifford byproduct reproduction", criterion_clifford_byproducts, 30.0},
        {4, "propagation relations", criterion_propagation_relations, 30.0},
        {5, "symplectic invariance and cone test", criterion_symplectic_cones, 60.0},
        {6, "Clifford unit depth", criterion_clifford_depth, 5.0},
        {7, "full-mode state correctness", criterion_full_mode_correctness, 120.0},
        {8, "streamed distribution match", criterion_streamed_distribution, 120.0},
        {9, "deterministic all-H control", criterion_deterministic_control, 60.0},
        {10, "CLI determinism", criterion_cli_determinism, 120.0},
    };
    bool all_ok = true;
    for (const auto& row : rows) {
        const auto start = std::chrono::steady_clock::now();
        Outcome oc;
        try {
            oc = row.fn();
        } catch (const std::exception& e) {
            oc = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = elapsed < row.budget_s;
        const bool ok = oc.ok && in_budget;
        all_ok = all_ok && ok;
        std::printf("%s criterion %d: %s — %s [%.2f s%s]\n", ok ? "PASS" : "FAIL", row.id,
                    row.name, oc.detail.c_str(), elapsed,
                    in_budget ? "" : ", over budget");
        std::fflush(stdout);
    }
    return all_ok ? 0 : 1;
}
