#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "mbqc/compiler.hpp"

using namespace mbqc;

namespace {

const double kPi = std::acos(-1.0);

const std::array<cplx, 2> kKet0 = {cplx{1, 0}, cplx{0, 0}};
const std::array<cplx, 2> kKet1 = {cplx{0, 0}, cplx{1, 0}};
const std::array<cplx, 2> kKetP = {cplx{std::sqrt(0.5), 0}, cplx{std::sqrt(0.5), 0}};
const std::array<cplx, 2> kKetPI = {cplx{std::sqrt(0.5), 0}, cplx{0, std::sqrt(0.5)}};

// Independent template executor: prepares inputs, entangles, forces the
// outcome word honoring the template's adaptivity rules, and returns the
// output wire-vector. Uses only qsim primitives.
std::vector<cplx> run_template(const GateTemplate& t, std::uint64_t s,
                               const std::vector<std::array<cplx, 2>>& inputs) {
    std::vector<std::pair<int, std::array<cplx, 2>>> kets;
    for (int local = 0; local < t.local_count; ++local) {
        std::array<cplx, 2> ket = kKetP;
        for (int w = 0; w < t.wires; ++w)
            if (t.input_local[w] == local) ket = inputs[w];
        kets.emplace_back(local, ket);
    }
    QuantumState st = init_product(kets);
    for (const auto& [a, b] : t.edges) apply_cz(st, a, b);
    for (std::size_t i = 0; i < t.interior.size(); ++i) {
        const auto& spec = t.interior_spec[i];
        double phi = spec.base_angle;
        if (spec.adaptive) {
            int flip = 0;
            for (int src : spec.rule) flip ^= int((s >> src) & 1);
            if (flip) phi = -phi;
        }
        force_measure(st, t.interior[i], BasisSpec::planar(phi), int((s >> i) & 1));
    }
    return detail::extract_wire_vector(st, t.output_local);
}

double vec_fidelity(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx ov{0, 0};
    for (std::size_t i = 0; i < a.size(); ++i) ov += std::conj(a[i]) * b[i];
    return std::norm(ov);
}

std::vector<cplx> kron_inputs(const std::vector<std::array<cplx, 2>>& inputs) {
    std::vector<cplx> v(std::size_t{1} << inputs.size());
    for (std::size_t idx = 0; idx < v.size(); ++idx) {
        cplx c{1, 0};
        for (std::size_t w = 0; w < inputs.size(); ++w) c *= inputs[w][(idx >> w) & 1];
        v[idx] = c;
    }
    return v;
}

// Exhaustive soundness sweep: every outcome word, tomographically complete
// inputs per wire, fidelity against to_pauli(map(s)) * U * input.
void check_template_soundness(const GateTemplate& t) {
    const std::vector<std::array<cplx, 2>> basis = {kKet0, kKet1, kKetP, kKetPI};
    const int k = static_cast<int>(t.interior.size());
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << k); ++s) {
        PauliImage img = t.constant;
        for (int i = 0; i < k; ++i)
            if ((s >> i) & 1) img ^= t.byproduct[i];
        const CMat corr = to_pauli(img);
        const std::size_t combos = t.wires == 1 ? 4 : 16;
        for (std::size_t ci = 0; ci < combos; ++ci) {
            std::vector<std::array<cplx, 2>> inputs;
            inputs.push_back(basis[ci % 4]);
            if (t.wires == 2) inputs.push_back(basis[ci / 4]);
            auto out = run_template(t, s, inputs);
            auto expect = corr.apply(t.target.apply(kron_inputs(inputs)));
            REQUIRE(vec_fidelity(out, expect) > 1.0 - 1e-10);
        }
    }
}

} // namespace

TEST_CASE("rotation template reproduces the x^{s2+s4} z^{s1+s3} byproduct map") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    for (int trial = 0; trial < 6; ++trial) {
        auto t = rotation_template(ang(rng), ang(rng), ang(rng));
        CHECK(t.constant == PauliImage::zero(1));
        REQUIRE(t.byproduct.size() == 4);
        CHECK(t.byproduct[0] == PauliImage::z_on(1, 0));
        CHECK(t.byproduct[1] == PauliImage::x_on(1, 0));
        CHECK(t.byproduct[2] == PauliImage::z_on(1, 0));
        CHECK(t.byproduct[3] == PauliImage::x_on(1, 0));
    }
}

TEST_CASE("rotation template special angles") {
    SECTION("(0,0,0) teleports the input exactly on all-zero outcomes") {
        auto t = rotation_template(0, 0, 0);
        for (const auto& in : {kKet0, kKet1, kKetP, kKetPI}) {
            auto out = run_template(t, 0, {in});
            CHECK(vec_fidelity(out, {in[0], in[1]}) > 1.0 - 1e-12);
        }
    }
    SECTION("(pi/2, pi/2, pi/2) needs no adaptivity: all bases X or Y") {
        auto t = rotation_template(kPi / 2, kPi / 2, kPi / 2);
        for (const auto& spec : t.interior_spec) {
            CHECK_FALSE(spec.adaptive);
            const double a = std::abs(spec.base_angle);
            CHECK((a < 1e-12 || std::abs(a - kPi / 2) < 1e-12));
        }
    }
    SECTION("soundness for generic and mixed Clifford/generic angles") {
        check_template_soundness(rotation_template(0.9, -2.2, 0.4));
        check_template_soundness(rotation_template(0.7, kPi / 2, 0.3));
        check_template_soundness(rotation_template(-kPi / 2, 1.3, 0.0));
    }
}

TEST_CASE("Hadamard template matches U_x^{s1+s3+s4} U_z^{s2+s3} with zero constant") {
    auto t = clifford_template(GateKind::H);
    CHECK(t.constant == PauliImage::zero(1));
    REQUIRE(t.byproduct.size() == 4);
    CHECK(t.byproduct[0] == PauliImage::x_on(1, 0));
    CHECK(t.byproduct[1] == PauliImage::z_on(1, 0));
    CHECK(t.byproduct[2] == PauliImage::y_on(1, 0));
    CHECK(t.byproduct[3] == PauliImage::x_on(1, 0));
    SECTION("every site is measured statically") {
        for (const auto& spec : t.interior_spec) CHECK_FALSE(spec.adaptive);
    }
    SECTION("all-zero outcomes send |0> to H|0> exactly (constant is identity)") {
        auto out = run_template(t, 0, {kKet0});
        const double r = std::sqrt(0.5);
        CHECK(vec_fidelity(out, {cplx{r, 0}, cplx{r, 0}}) > 1.0 - 1e-10);
    }
    SECTION("full soundness sweep") { check_template_soundness(t); }
}

TEST_CASE("phase-gate template matches x^{s2+s4} z^{s1+s2+s3+1}") {
    auto t = clifford_template(GateKind::S);
    SECTION("constant term is sigma_z on the wire") {
        CHECK(t.constant == PauliImage::z_on(1, 0));
    }
    REQUIRE(t.byproduct.size() == 4);
    CHECK(t.byproduct[0] == PauliImage::z_on(1, 0));
    CHECK(t.byproduct[1] == PauliImage::y_on(1, 0));
    CHECK(t.byproduct[2] == PauliImage::z_on(1, 0));
    CHECK(t.byproduct[3] == PauliImage::x_on(1, 0));
    SECTION("static X/Y pattern") {
        for (const auto& spec : t.interior_spec) CHECK_FALSE(spec.adaptive);
    }
    SECTION("full soundness sweep") { check_template_soundness(t); }
}

TEST_CASE("wire template teleports the identity with map x^{s2} z^{s1}") {
    auto t = wire_template();
    CHECK(t.constant == PauliImage::zero(1));
    REQUIRE(t.byproduct.size() == 2);
    CHECK(t.byproduct[0] == PauliImage::z_on(1, 0));
    CHECK(t.byproduct[1] == PauliImage::x_on(1, 0));
    SECTION("all-zero outcomes are an exact identity teleport") {
        for (const auto& in : {kKetP, kKetPI}) {
            auto out = run_template(t, 0, {in});
            CHECK(vec_fidelity(out, {in[0], in[1]}) > 1.0 - 1e-12);
        }
    }
    SECTION("full soundness sweep") { check_template_soundness(t); }
    SECTION("two wire templates act like one identity rotation chain") {
        // Chain two 3-site wires by feeding the first output into the second.
        auto rot_id = rotation_template(0, 0, 0);
        for (const auto& in : {kKet0, kKetP, kKetPI}) {
            auto mid = run_template(t, 0, {in});
            auto out = run_template(t, 0, {{mid[0], mid[1]}});
            auto ref = run_template(rot_id, 0, {in});
            CHECK(vec_fidelity(out, ref) > 1.0 - 1e-10);
        }
    }
}

TEST_CASE("CNOT template") {
    auto t = cnot_template();
    SECTION("derived map is affine with zero constant") {
        CHECK(t.constant == PauliImage::zero(2));
        REQUIRE(t.byproduct.size() == 2);
    }
    SECTION("s_tin owes z on both wires, s_m owes x on the target") {
        CHECK(t.byproduct[0] == (PauliImage::z_on(2, 0) ^ PauliImage::z_on(2, 1)));
        CHECK(t.byproduct[1] == PauliImage::x_on(2, 1));
    }
    SECTION("all-zero outcomes realize CNOT exactly") {
        auto out00 = run_template(t, 0, {kKet0, kKet0});
        CHECK(vec_fidelity(out00, kron_inputs({kKet0, kKet0})) > 1.0 - 1e-10);
        auto out10 = run_template(t, 0, {kKet1, kKet0}); // control set
        CHECK(vec_fidelity(out10, kron_inputs({kKet1, kKet1})) > 1.0 - 1e-10);
    }
    SECTION("full soundness sweep") { check_template_soundness(t); }
}

TEST_CASE("derive_byproducts direct calls") {
    SECTION("identity template with no interior sites is the constant identity") {
        GateTemplate t;
        t.kind = GateKind::Wire;
        t.wires = 1;
        t.local_count = 1;
        t.input_local = {0};
        t.output_local = {0};
        t.target = CMat::identity(2);
        auto map = derive_byproducts(t, t.target);
        CHECK(map.constant == PauliImage::zero(1));
        CHECK(map.linear.empty());
    }
    SECTION("wrong target is a hard failure") {
        auto t = wire_template();
        CHECK_THROWS_AS(derive_byproducts(t, cmat_from_mat2(mat_rot(0.4, 0.9, 0.1))), error);
    }
}

TEST_CASE("compile: single-gate examples") {
    SECTION("H on one wire gives 5 sites, 4 static X/Y plus one output") {
        auto p = compile(Circuit{1, {GateSpec::h(0)}});
        CHECK(p.sites.size() == 5);
        CHECK(p.outputs == std::vector<int>{4});
        int xy = 0;
        for (const auto& [id, s] : p.sites)
            if (s.role != SiteRole::Output) {
                CHECK_FALSE(s.basis.is_z());
                CHECK_FALSE(s.adaptive);
                ++xy;
            }
        CHECK(xy == 4);
        CHECK(p.f_init == PauliImage::zero(1)); // H has no constant byproduct
    }
    SECTION("generic rotation stores algorithm angles (-xi, -eta, -zeta)") {
        const double xi = 0.8, eta = 1.9, zeta = -0.6;
        auto p = compile(Circuit{1, {GateSpec::rot(0, xi, eta, zeta)}});
        REQUIRE(p.gates.size() == 1);
        const auto& g = p.gates[0];
        CHECK(p.sites.at(g.slot_sites[0]).basis.angle == Catch::Approx(-xi));
        CHECK(p.sites.at(g.slot_sites[1]).basis.angle == Catch::Approx(-eta));
        CHECK(p.sites.at(g.slot_sites[2]).basis.angle == Catch::Approx(-zeta));
        CHECK(p.sites.at(g.slot_sites[0]).adaptive);
    }
    SECTION("CNOT compiles to the aligned 4-site block") {
        auto p = compile(Circuit{2, {GateSpec::cnot(0, 1)}});
        CHECK(p.sites.size() == 4);
        REQUIRE(p.gates.size() == 1);
        const auto& g = p.gates[0];
        // last gate: images propagate through nothing
        CHECK(p.f_of(g.interior[0]) == (PauliImage::z_on(2, 0) ^ PauliImage::z_on(2, 1)));
        CHECK(p.f_of(g.interior[1]) == PauliImage::x_on(2, 1));
        CHECK(p.outputs.size() == 2);
    }
    SECTION("non-adjacent CNOT is a compile error naming the gate") {
        try {
            compile(Circuit{3, {GateSpec::cnot(0, 2)}});
            FAIL("expected compile_error");
        } catch (const compile_error& e) {
            CHECK(std::string(e.what()).find("CNOT(0,2)") != std::string::npos);
        }
    }
    SECTION("empty circuit compiles to a bare readout pattern") {
        auto p = compile(Circuit{2, {}});
        CHECK(p.sites.size() == 2);
        CHECK(p.gates.empty());
        CHECK(p.outputs == std::vector<int>{0, 1});
        CHECK(p.inputs.empty());
        for (const auto& [id, s] : p.sites) CHECK(s.basis.is_z());
    }
}

TEST_CASE("compile: constants propagate into f_init and downstream angles") {
    SECTION("a single S contributes its constant z image") {
        auto p = compile(Circuit{1, {GateSpec::s(0)}});
        CHECK(p.f_init == PauliImage::z_on(1, 0));
    }
    SECTION("two S gates cancel (z commutes through the S map)") {
        auto p = compile(Circuit{1, {GateSpec::s(0), GateSpec::s(0)}});
        CHECK(p.f_init == PauliImage::zero(1));
    }
    SECTION("S constant flips xi and zeta of a following rotation") {
        const double xi = 0.8, eta = 1.1, zeta = 0.5;
        auto p = compile(Circuit{1, {GateSpec::s(0), GateSpec::rot(0, xi, eta, zeta)}});
        const auto& rot = p.gates[1];
        CHECK(p.sites.at(rot.slot_sites[0]).basis.angle == Catch::Approx(xi));
        CHECK(p.sites.at(rot.slot_sites[1]).basis.angle == Catch::Approx(-eta));
        CHECK(p.sites.at(rot.slot_sites[2]).basis.angle == Catch::Approx(zeta));
    }
    SECTION("S constant seen through an H becomes an x image") {
        auto p = compile(Circuit{1, {GateSpec::s(0), GateSpec::h(0)}});
        CHECK(p.f_init == PauliImage::x_on(1, 0));
    }
}

TEST_CASE("compile: wire padding aligns CNOT columns") {
    // Rotation on wire 0 desyncs the columns; the target wire is padded.
    auto p = compile(Circuit{2, {GateSpec::rot(0, 0.3, 0.4, 0.5), GateSpec::cnot(0, 1)}});
    int pads = 0;
    for (const auto& g : p.gates)
        if (g.kind == GateKind::Wire) ++pads;
    CHECK(pads == 2); // two 2-column wire templates close a 4-column gap
    const auto& cn = p.gates.back();
    REQUIRE(cn.kind == GateKind::Cnot);
    CHECK(p.sites.at(cn.interior[0]).col == p.sites.at(cn.outputs[0]).col);
}

TEST_CASE("compile is deterministic") {
    Circuit c{2, {GateSpec::h(0), GateSpec::rot(1, 0.2, 0.9, -1.4), GateSpec::cnot(0, 1)}};
    auto a = compile(c);
    auto b = compile(c);
    REQUIRE(a.sites.size() == b.sites.size());
    CHECK(a.graph.edges == b.graph.edges);
    CHECK(a.f_init == b.f_init);
    for (const auto& [id, fa] : a.f) CHECK(fa == b.f.at(id));
    for (const auto& [id, sa] : a.sites) {
        CHECK(sa.basis.angle == b.sites.at(id).basis.angle);
        CHECK(sa.adaptive == b.sites.at(id).adaptive);
    }
}

TEST_CASE("rect embedding fills the bounding box with Z fillers") {
    CompileOptions opt;
    opt.embed_rect = true;
    auto p = compile(Circuit{2, {GateSpec::cnot(0, 1)}}, opt);
    // rows 0..2, cols 0..2, 4 pattern sites -> 5 fillers
    int fillers = 0;
    for (const auto& [id, s] : p.sites)
        if (s.role == SiteRole::Filler) {
            CHECK(s.basis.is_z());
            ++fillers;
        }
    CHECK(fillers == 5);
    CHECK(p.sites.size() == 9);
}
