#pragma once

#include <stdexcept>
#include <string>

namespace wavesys {

// Invalid configuration: malformed spec files, bad mollifier setup,
// inconsistent sweep ranges.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation requested outside the padded domain of a raw coefficient
// (the convolution stencil would leave the region where data is defined).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Incompatible value shapes in net arithmetic or matrix kernels.
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A matrix expected to be symmetric positive definite has an eigenvalue
// at or below the positivity floor.
struct NotSpdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A first-order system does not have the sparsity pattern of a rewritten
// wave equation.
struct StructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Time step violates the CFL bound for the sampled coefficients.
struct CflError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite values or runaway growth detected while time stepping.
struct BlowUpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Spec-file syntax or semantic error with source location.
struct ParseError : ConfigError {
  ParseError(int line, int col, const std::string& what)
      : ConfigError("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + what),
        line(line),
        col(col) {}
  int line = 0;
  int col = 0;
};

}  // namespace wavesys
