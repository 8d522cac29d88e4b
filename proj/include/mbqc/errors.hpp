// Exception taxonomy; the CLI maps these onto its exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace mbqc {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or invalid input file (circuit/pattern/schedule JSON).
struct parse_error : error {
    using error::error;
};

// Circuit cannot be lowered (e.g. non-nearest-neighbor CNOT).
struct compile_error : error {
    using error::error;
};

// The adaptivity relation contains a cycle; scheduling is impossible.
struct cycle_error : error {
    using error::error;
};

// A dense statevector would exceed the configured qubit limit.
struct size_error : error {
    using error::error;
};

// Request exceeds the brute-force oracle's qubit limit.
struct oracle_limit_error : error {
    using error::error;
};

} // namespace mbqc
