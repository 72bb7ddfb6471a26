#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prpca {

/// Bad arguments: out-of-range parameters, shape mismatches, malformed input files.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure: non-finite values, solver divergence, failed 1-D searches.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Solver divergence, carrying the iteration at which the residual became non-finite.
class SolverDivergence : public NumericError {
public:
    SolverDivergence(const std::string& what, std::size_t iteration)
        : NumericError(what), iteration_(iteration) {}

    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

/// A particle whose patch footprint lies entirely outside the frame.
class InvalidParticle : public InputError {
public:
    using InputError::InputError;
};

/// Every particle received zero posterior weight.
class FilterDegeneracy : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace prpca
