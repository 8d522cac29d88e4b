// Small dense complex matrices for oracle-side checks: gate unitaries,
// conjugation tests, and sign-free Pauli representatives.
#pragma once

#include <cmath>
#include <vector>

#include "mbqc/common.hpp"
#include "mbqc/errors.hpp"
#include "mbqc/qsim.hpp"

namespace mbqc {

struct CMat {
    std::size_t dim = 0;
    std::vector<cplx> a; // row-major

    CMat() = default;
    explicit CMat(std::size_t d) : dim(d), a(d * d, cplx{0.0, 0.0}) {}

    cplx& at(std::size_t r, std::size_t c) { return a[r * dim + c]; }
    const cplx& at(std::size_t r, std::size_t c) const { return a[r * dim + c]; }

    static CMat identity(std::size_t d) {
        CMat m(d);
        for (std::size_t i = 0; i < d; ++i) m.at(i, i) = 1.0;
        return m;
    }

    CMat operator*(const CMat& o) const {
        if (dim != o.dim) throw error("CMat: dimension mismatch");
        CMat r(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t k = 0; k < dim; ++k) {
                const cplx v = at(i, k);
                if (v == cplx{0.0, 0.0}) continue;
                for (std::size_t j = 0; j < dim; ++j) r.at(i, j) += v * o.at(k, j);
            }
        return r;
    }

    CMat dagger() const {
        CMat r(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) r.at(i, j) = std::conj(at(j, i));
        return r;
    }

    std::vector<cplx> apply(const std::vector<cplx>& v) const {
        if (v.size() != dim) throw error("CMat: vector dimension mismatch");
        std::vector<cplx> r(dim, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) r[i] += at(i, j) * v[j];
        return r;
    }
};

// Largest entrywise deviation between a and c*b over the best unit phase c.
// Both inputs are expected to be of comparable scale.
inline double phase_aligned_distance(const CMat& a, const CMat& b) {
    if (a.dim != b.dim) throw error("phase_aligned_distance: dimension mismatch");
    std::size_t ref = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < b.a.size(); ++i)
        if (std::abs(b.a[i]) > best) {
            best = std::abs(b.a[i]);
            ref = i;
        }
    if (best == 0.0) throw error("phase_aligned_distance: zero reference matrix");
    cplx c = a.a[ref] / b.a[ref];
    const double mag = std::abs(c);
    if (mag > 0.0) c /= mag; // keep |c| = 1; magnitude error shows up entrywise
    double dev = 0.0;
    for (std::size_t i = 0; i < a.a.size(); ++i)
        dev = std::max(dev, std::abs(a.a[i] - c * b.a[i]));
    return dev;
}

inline double max_abs_diff(const CMat& a, const CMat& b) {
    if (a.dim != b.dim) throw error("max_abs_diff: dimension mismatch");
    double dev = 0.0;
    for (std::size_t i = 0; i < a.a.size(); ++i)
        dev = std::max(dev, std::abs(a.a[i] - b.a[i]));
    return dev;
}

// --- one- and two-qubit gate matrices -------------------------------------

inline Mat2 mat_id() { return {cplx{1, 0}, {0, 0}, {0, 0}, {1, 0}}; }
inline Mat2 mat_x() { return {cplx{0, 0}, {1, 0}, {1, 0}, {0, 0}}; }
inline Mat2 mat_y() { return {cplx{0, 0}, {0, -1}, {0, 1}, {0, 0}}; }
inline Mat2 mat_z() { return {cplx{1, 0}, {0, 0}, {0, 0}, {-1, 0}}; }

inline Mat2 mat_h() {
    const double r = std::sqrt(0.5);
    return {cplx{r, 0}, {r, 0}, {r, 0}, {-r, 0}};
}

// exp(-i alpha sigma_x / 2)
inline Mat2 mat_ux(double alpha) {
    const double c = std::cos(alpha / 2), s = std::sin(alpha / 2);
    return {cplx{c, 0}, {0, -s}, {0, -s}, {c, 0}};
}

// exp(-i alpha sigma_z / 2)
inline Mat2 mat_uz(double alpha) {
    return {std::exp(cplx{0, -alpha / 2}), {0, 0}, {0, 0}, std::exp(cplx{0, alpha / 2})};
}

inline Mat2 mat_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

// Euler-decomposed rotation U_x(zeta) U_z(eta) U_x(xi).
inline Mat2 mat_rot(double xi, double eta, double zeta) {
    return mat_mul(mat_ux(zeta), mat_mul(mat_uz(eta), mat_ux(xi)));
}

inline CMat cmat_from_mat2(const Mat2& u) {
    CMat m(2);
    m.at(0, 0) = u[0];
    m.at(0, 1) = u[1];
    m.at(1, 0) = u[2];
    m.at(1, 1) = u[3];
    return m;
}

// CNOT on two qubits with basis index bit0 = control, bit1 = target.
inline CMat cmat_cnot() {
    CMat m(4);
    m.at(0b00, 0b00) = 1.0;
    m.at(0b01, 0b11) = 1.0; // control 1, target 0 <- control 1, target 1
    m.at(0b10, 0b10) = 1.0;
    m.at(0b11, 0b01) = 1.0;
    return m;
}

// Embeds a 2x2 gate on the given qubit of a dim-2^m operator space.
inline CMat embed1(const Mat2& u, int q, int m) {
    const std::size_t d = std::size_t{1} << m;
    const std::size_t step = std::size_t{1} << q;
    CMat r(d);
    for (std::size_t c = 0; c < d; ++c) {
        const bool hi = (c & step) != 0;
        r.at(c & ~step, c) += hi ? u[1] : u[0];
        r.at(c | step, c) += hi ? u[3] : u[2];
    }
    return r;
}

// --- in-place appliers on raw amplitude vectors (bit q = qubit q) ----------

inline void vec_apply1(std::vector<cplx>& v, int q, const Mat2& u) {
    const std::size_t step = std::size_t{1} << q;
    const std::size_t block = step << 1;
    for (std::size_t base = 0; base < v.size(); base += block)
        for (std::size_t off = 0; off < step; ++off) {
            const std::size_t i0 = base + off, i1 = i0 + step;
            const cplx a = v[i0], b = v[i1];
            v[i0] = u[0] * a + u[1] * b;
            v[i1] = u[2] * a + u[3] * b;
        }
}

inline void vec_apply_cnot(std::vector<cplx>& v, int control, int target) {
    const std::size_t mc = std::size_t{1} << control;
    const std::size_t mt = std::size_t{1} << target;
    for (std::size_t i = 0; i < v.size(); ++i)
        if ((i & mc) && !(i & mt)) std::swap(v[i], v[i | mt]);
}

} // namespace mbqc
