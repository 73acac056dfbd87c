#pragma once

#include <stdexcept>
#include <string>

namespace dyadweight {

// Thrown when children() is asked for below the finest configured level.
struct depth_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Leaf-array length does not match 2^depth (or two arrays disagree).
struct size_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A weight value is zero, negative, or non-finite.
struct positivity_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Kernel mass drifted away from 1 beyond tolerance.
struct quadrature_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Finite-difference cross-check failed; grid cannot resolve the data.
struct grid_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fit rejected: too few usable records.
struct insufficient_data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fit rejected: a record's norm is below 1 beyond tolerance, which no
// martingale multiplier with a unit sigma entry can produce.
struct impossible_norm_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace dyadweight
