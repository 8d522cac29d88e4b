// Sign-free Pauli algebra over GF(2)^{2n}: byproduct images, the symplectic
// scalar product, and per-gate propagation maps with angle-flip metadata.
//
// Packing convention: a 2n-bit vector stores the x-block in bits [0, n) and
// the z-block in bits [n, 2n); bit i of each block is logical wire i.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mbqc/circuit.hpp"
#include "mbqc/common.hpp"
#include "mbqc/dense.hpp"
#include "mbqc/errors.hpp"

namespace mbqc {

struct PauliImage {
    int n = 0;
    std::uint64_t x = 0;
    std::uint64_t z = 0;

    static PauliImage zero(int n) { return {n, 0, 0}; }
    static PauliImage x_on(int n, int q) { return {n, std::uint64_t{1} << q, 0}; }
    static PauliImage z_on(int n, int q) { return {n, 0, std::uint64_t{1} << q}; }
    static PauliImage y_on(int n, int q) {
        return {n, std::uint64_t{1} << q, std::uint64_t{1} << q};
    }

    bool is_zero() const { return x == 0 && z == 0; }
    int x_bit(int q) const { return int((x >> q) & 1); }
    int z_bit(int q) const { return int((z >> q) & 1); }

    PauliImage& operator^=(const PauliImage& o) {
        if (n != o.n) throw error("PauliImage: length mismatch");
        x ^= o.x;
        z ^= o.z;
        return *this;
    }
    friend PauliImage operator^(PauliImage a, const PauliImage& b) { return a ^= b; }
    friend bool operator==(const PauliImage& a, const PauliImage& b) {
        return a.n == b.n && a.x == b.x && a.z == b.z;
    }

    std::uint64_t packed() const { return x | (z << n); }
    static PauliImage unpack(int n, std::uint64_t v) {
        const std::uint64_t mask = (n >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
        return {n, v & mask, (v >> n) & mask};
    }
};

// (a, b)_S = a_x . b_z + a_z . b_x mod 2; value 1 marks anticommuting
// sign-free representatives.
inline int symplectic_product(const PauliImage& a, const PauliImage& b) {
    if (a.n != b.n) throw error("symplectic_product: length mismatch");
    return parity64(a.x & b.z) ^ parity64(a.z & b.x);
}

// Square bit matrix over GF(2); row r is a column mask, (M v)_r = <rows[r], v>.
struct GF2Matrix {
    int dim = 0;
    std::vector<std::uint64_t> rows;

    static GF2Matrix identity(int dim) {
        GF2Matrix m;
        m.dim = dim;
        m.rows.resize(dim);
        for (int r = 0; r < dim; ++r) m.rows[r] = std::uint64_t{1} << r;
        return m;
    }

    std::uint64_t apply(std::uint64_t v) const {
        std::uint64_t out = 0;
        for (int r = 0; r < dim; ++r)
            if (parity64(rows[r] & v)) out |= std::uint64_t{1} << r;
        return out;
    }

    GF2Matrix operator*(const GF2Matrix& o) const {
        if (dim != o.dim) throw error("GF2Matrix: dimension mismatch");
        GF2Matrix c;
        c.dim = dim;
        c.rows.assign(dim, 0);
        for (int r = 0; r < dim; ++r) {
            std::uint64_t acc = 0;
            std::uint64_t sel = rows[r];
            while (sel) {
                const int k = std::countr_zero(sel);
                sel &= sel - 1;
                acc ^= o.rows[k];
            }
            c.rows[r] = acc;
        }
        return c;
    }

    friend bool operator==(const GF2Matrix& a, const GF2Matrix& b) {
        return a.dim == b.dim && a.rows == b.rows;
    }
};

// row . M for a row vector given as a column-index mask.
inline std::uint64_t row_times_matrix(std::uint64_t row, const GF2Matrix& m) {
    std::uint64_t acc = 0;
    std::uint64_t sel = row;
    while (sel) {
        const int r = std::countr_zero(sel);
        sel &= sel - 1;
        acc ^= m.rows[r];
    }
    return acc;
}

inline int symplectic_product_packed(int n, std::uint64_t u, std::uint64_t v) {
    const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
    return parity64((u & mask) & (v >> n)) ^ parity64((u >> n) & (v & mask));
}

// M preserves the symplectic form on all basis pairs.
inline bool is_symplectic(const GF2Matrix& m, int n) {
    if (m.dim != 2 * n) throw error("is_symplectic: dimension mismatch");
    for (int i = 0; i < 2 * n; ++i)
        for (int j = i + 1; j < 2 * n; ++j) {
            const std::uint64_t ei = std::uint64_t{1} << i;
            const std::uint64_t ej = std::uint64_t{1} << j;
            if (symplectic_product_packed(n, m.apply(ei), m.apply(ej)) !=
                symplectic_product_packed(n, ei, ej))
                return false;
        }
    return true;
}

// Conjugation push of a byproduct image through one gate. Clifford content
// acts on the image; each generic Euler factor instead flips the measurement
// angle of one chain site, selected by the trigger row.
struct PropagationMap {
    int n = 0;
    GF2Matrix m;
    struct Flip {
        int key = 0;            // rotation slot (0=xi, 1=eta, 2=zeta) or a site id
        std::uint64_t row = 0;  // functional on the image at this map's input
    };
    std::vector<Flip> flips;

    PauliImage apply(const PauliImage& img) const {
        if (img.n != n) throw error("PropagationMap: image length mismatch");
        return PauliImage::unpack(n, m.apply(img.packed()));
    }
};

namespace detail {

struct GateFactor {
    enum class Type { Matrix, Flip };
    Type type = Type::Matrix;
    GF2Matrix m;            // Matrix factors; involutions for the gate set here
    int slot = -1;          // Flip factors: which Euler angle
    std::uint64_t row = 0;  // Flip factors: trigger on the local image
};

inline GF2Matrix gf2_x_hits_z(int n, int q) { // conj by U_x(+-pi/2): x_q ^= z_q
    GF2Matrix m = GF2Matrix::identity(2 * n);
    m.rows[q] |= std::uint64_t{1} << (n + q);
    return m;
}

inline GF2Matrix gf2_z_hits_x(int n, int q) { // conj by U_z(+-pi/2): z_q ^= x_q
    GF2Matrix m = GF2Matrix::identity(2 * n);
    m.rows[n + q] |= std::uint64_t{1} << q;
    return m;
}

inline GF2Matrix gf2_swap_xz(int n, int q) { // conj by H
    GF2Matrix m = GF2Matrix::identity(2 * n);
    m.rows[q] = std::uint64_t{1} << (n + q);
    m.rows[n + q] = std::uint64_t{1} << q;
    return m;
}

inline GF2Matrix gf2_cnot(int n, int c, int t) { // x_t ^= x_c, z_c ^= z_t
    GF2Matrix m = GF2Matrix::identity(2 * n);
    m.rows[t] |= std::uint64_t{1} << c;
    m.rows[n + c] |= std::uint64_t{1} << (n + t);
    return m;
}

enum class AngleClass { Zero, CliffordHalf, Generic };

inline AngleClass classify_angle(double a, double tol) {
    const double pi_2 = std::acos(-1.0) / 2.0;
    if (std::abs(a) <= tol) return AngleClass::Zero;
    if (std::abs(std::abs(a) - pi_2) <= tol) return AngleClass::CliffordHalf;
    return AngleClass::Generic;
}

// Euler factors of one gate in network order. An x-axis factor at a Clifford
// angle conjugates (x_q ^= z_q); at a generic angle it flips under z_q.
inline std::vector<GateFactor> gate_factors(const GateSpec& g, int n,
                                            double tol = kCliffordAngleTol) {
    std::vector<GateFactor> fs;
    auto push_matrix = [&](GF2Matrix m) {
        GateFactor f;
        f.type = GateFactor::Type::Matrix;
        f.m = std::move(m);
        fs.push_back(std::move(f));
    };
    auto push_flip = [&](int slot, std::uint64_t row) {
        GateFactor f;
        f.type = GateFactor::Type::Flip;
        f.slot = slot;
        f.row = row;
        fs.push_back(std::move(f));
    };
    const int q = g.q0;
    switch (g.kind) {
        case GateKind::Rot: {
            const std::uint64_t xrow = std::uint64_t{1} << q;          // x_q component
            const std::uint64_t zrow = std::uint64_t{1} << (n + q);    // z_q component
            const double angles[3] = {g.xi, g.eta, g.zeta};
            for (int slot = 0; slot < 3; ++slot) {
                const bool x_axis = (slot != 1);
                switch (classify_angle(angles[slot], tol)) {
                    case AngleClass::Zero:
                        break;
                    case AngleClass::CliffordHalf:
                        push_matrix(x_axis ? gf2_x_hits_z(n, q) : gf2_z_hits_x(n, q));
                        break;
                    case AngleClass::Generic:
                        push_flip(slot, x_axis ? zrow : xrow);
                        break;
                }
            }
            break;
        }
        case GateKind::H:
            push_matrix(gf2_swap_xz(n, q));
            break;
        case GateKind::S:
            push_matrix(gf2_z_hits_x(n, q));
            break;
        case GateKind::Cnot:
            push_matrix(gf2_cnot(n, g.q0, g.q1));
            break;
        case GateKind::Wire:
            break;
    }
    return fs;
}

inline PropagationMap fold_factors(const std::vector<GateFactor>& fs, int n) {
    PropagationMap pm;
    pm.n = n;
    pm.m = GF2Matrix::identity(2 * n);
    for (const auto& f : fs) {
        if (f.type == GateFactor::Type::Matrix) {
            pm.m = f.m * pm.m;
        } else {
            pm.flips.push_back({f.slot, row_times_matrix(f.row, pm.m)});
        }
    }
    return pm;
}

} // namespace detail

// Forward conjugation map of one gate on n wires. For a generic rotation the
// matrix is the identity and the flip rows carry the adaptivity couplings:
// a z component at the wire flips xi and zeta, an x component flips eta.
inline PropagationMap gate_propagation_map(const GateSpec& g, int n,
                                           double tol = kCliffordAngleTol) {
    if (g.q0 < 0 || g.q0 >= n || (g.two_wire() && (g.q1 < 0 || g.q1 >= n)))
        throw error("gate_propagation_map: wire index out of range");
    return detail::fold_factors(detail::gate_factors(g, n, tol), n);
}

// Same gate traversed toward the input side. Every matrix factor here is a
// GF(2) involution, so the reversed factor list is the exact inverse.
inline PropagationMap backward_gate_map(const GateSpec& g, int n,
                                        double tol = kCliffordAngleTol) {
    auto fs = detail::gate_factors(g, n, tol);
    std::reverse(fs.begin(), fs.end());
    return detail::fold_factors(fs, n);
}

// Whole-network composition in network order; flip rows are re-expressed
// against the composite's input through the prefix products.
inline PropagationMap compose(int n, const std::vector<PropagationMap>& maps) {
    PropagationMap out;
    out.n = n;
    out.m = GF2Matrix::identity(2 * n);
    for (const auto& pm : maps) {
        if (pm.n != n) throw error("compose: dimension mismatch");
        for (const auto& fl : pm.flips)
            out.flips.push_back({fl.key, row_times_matrix(fl.row, out.m)});
        out.m = pm.m * out.m;
    }
    return out;
}

// Sign-free dense representative prod_i sigma_x^{x_i} sigma_z^{z_i}
// (x factors left of z factors). Oracle use only.
inline CMat to_pauli(const PauliImage& img) {
    if (img.n > kOracleMaxQubits)
        throw oracle_limit_error("to_pauli: image too wide for the dense oracle");
    const std::size_t d = std::size_t{1} << img.n;
    CMat m(d);
    for (std::size_t b = 0; b < d; ++b) {
        const double sign = parity64(img.z & b) ? -1.0 : 1.0;
        m.at(b ^ img.x, b) = sign;
    }
    return m;
}

// Applies the image to live sites, wire q acting on wire_sites[q].
// Z factors first, then X, matching the to_pauli ordering.
inline void apply_pauli_image(QuantumState& st, const PauliImage& img,
                              const std::vector<int>& wire_sites) {
    if (static_cast<int>(wire_sites.size()) != img.n)
        throw error("apply_pauli_image: wire map size mismatch");
    for (int q = 0; q < img.n; ++q)
        if (img.z_bit(q)) apply_unitary1(st, wire_sites[q], mat_z());
    for (int q = 0; q < img.n; ++q)
        if (img.x_bit(q)) apply_unitary1(st, wire_sites[q], mat_x());
}

} // namespace mbqc
