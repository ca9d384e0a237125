#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace shiftorth {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

/// Base for every library error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A multi-index component is outside its axis range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Two objects that must share a lattice domain do not.
class DomainMismatch : public Error {
 public:
  using Error::Error;
};

/// An input violates a documented precondition (odd L, bad config, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// No shift-orthogonal vector can satisfy the requested constraints.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace shiftorth
