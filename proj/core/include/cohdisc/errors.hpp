#pragma once

#include <stdexcept>
#include <string>

namespace cohdisc {

/// Bad argument values (out-of-range parameters, dimension mismatches, non-finite inputs).
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure (eigensolver breakdown, singular matrix, out-of-tolerance state).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Truncation left too much probability mass outside the retained space.
struct TruncationError : NumericalError {
    double deficit;
    TruncationError(const std::string& what, double deficit_)
        : NumericalError(what), deficit(deficit_) {}
};

/// A perturbative expansion hit a (near-)degenerate unperturbed pair it cannot handle.
struct DegeneracyError : NumericalError {
    int index_a;
    int index_b;
    DegeneracyError(const std::string& what, int a, int b)
        : NumericalError(what), index_a(a), index_b(b) {}
};

}  // namespace cohdisc
