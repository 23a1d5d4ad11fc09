#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace bifcc {

using cplx = std::complex<double>;

/// A point (c, v) of parameter space, identified with the cubic
/// f(z) = (z - c)^2 (z + 2c) + v whose critical points are +c and -c.
struct CubicParam {
  cplx c{};
  cplx v{};

  friend bool operator==(const CubicParam&, const CubicParam&) = default;
};

inline double distance(const CubicParam& a, const CubicParam& b) {
  return std::hypot(std::abs(a.c - b.c), std::abs(a.v - b.v));
}

// Error hierarchy. Boundedness, ambiguity and absence of a cycle are valid
// results and are never reported through these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class BranchError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace bifcc
