// types.hpp — Shared numeric aliases and error types

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nhtop {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

// Invalid model description or mismatched input (CLI exit code 2).
class SpecificationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure (CLI exit code 3).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameters sit on a topological phase boundary; the invariant is undefined.
class PhaseBoundaryError : public NumericError {
public:
    using NumericError::NumericError;
};

// The Bloch Hamiltonian has a dark state at some momentum.
class GapClosureError : public NumericError {
public:
    using NumericError::NumericError;
};

// Phase unwrapping did not resolve within the k-point budget.
class ResolutionError : public NumericError {
public:
    using NumericError::NumericError;
};

class RootFindingError : public NumericError {
public:
    using NumericError::NumericError;
};

} // namespace nhtop
