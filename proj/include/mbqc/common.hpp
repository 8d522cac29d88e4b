#pragma once

#include <bit>
#include <complex>
#include <cstdint>

namespace mbqc {

using cplx = std::complex<double>;

// Normalization drift allowed on any state operation.
inline constexpr double kNormTol = 1e-12;

// Below this outcome probability a projection counts as deterministic;
// sampling the opposite branch signals an internal inconsistency.
inline constexpr double kDegenerateProb = 1e-14;

// Angles within this distance of {0, +-pi/2} are measured statically.
inline constexpr double kCliffordAngleTol = 1e-12;

// Per-amplitude tolerance when fitting byproduct Paulis to statevector runs.
inline constexpr double kSignFitTol = 1e-10;

// Stabilizer eigenvalue check: fidelity floor and phase window.
inline constexpr double kStabFidTol = 1e-10;
inline constexpr double kStabPhaseTol = 1e-6;

inline constexpr int kDefaultMaxQubits = 24;
inline constexpr int kOracleMaxQubits = 10;

inline int parity64(std::uint64_t v) { return std::popcount(v) & 1; }

} // namespace mbqc
