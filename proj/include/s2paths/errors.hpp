#pragma once

#include <stdexcept>
#include <string>

namespace s2paths {

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : NumericalError {
    using NumericalError::NumericalError;
};

struct NonFiniteError : NumericalError {
    using NumericalError::NumericalError;
};

struct DivergenceError : NumericalError {
    using NumericalError::NumericalError;
};

struct ConvergenceError : NumericalError {
    using NumericalError::NumericalError;
};

struct DegenerateError : NumericalError {
    using NumericalError::NumericalError;
};

// Raised for inconsistent elastica parameters (bad input, not bad numerics).
struct ConsistencyError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace s2paths
