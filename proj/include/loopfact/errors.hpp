#pragma once

#include <stdexcept>
#include <string>

namespace loopfact {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroConstantTerm : public Error {
 public:
  ZeroConstantTerm() : Error("series has a zero constant term") {}
};

class NonzeroConstant : public Error {
 public:
  NonzeroConstant() : Error("exp argument must have a zero constant term") {}
};

class GridTooSmall : public Error {
 public:
  GridTooSmall(int grid, int needed)
      : Error("grid of " + std::to_string(grid) + " points cannot resolve " +
              std::to_string(needed) + " coefficients") {}
};

class NonInvertibleCorner : public Error {
 public:
  NonInvertibleCorner() : Error("corner entry of the factor has a zero constant term") {}
};

/// The block Toeplitz section is singular or too badly conditioned.
class NotTopStratum : public Error {
 public:
  explicit NotTopStratum(double condition)
      : Error("loop is not in the top stratum (condition estimate " +
              std::to_string(condition) + ")"),
        condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

class NoTriangularFactorization : public Error {
 public:
  NoTriangularFactorization() : Error("constant factor has a vanishing (1,1) entry") {}
};

class NotUnitary : public Error {
 public:
  explicit NotUnitary(double discrepancy)
      : Error("the two Re(chi_+) formulas disagree by " + std::to_string(discrepancy)),
        discrepancy_(discrepancy) {}
  double discrepancy() const { return discrepancy_; }

 private:
  double discrepancy_;
};

class IrrationalNormalizer : public Error {
 public:
  IrrationalNormalizer() : Error("1+|w|^2 is not the square of a rational") {}
};

/// An exact oracle comparison failed at order n.
class MismatchAt : public Error {
 public:
  MismatchAt(int n, const std::string& lhs, const std::string& rhs)
      : Error("oracle mismatch at n = " + std::to_string(n) + ": " + lhs + " != " + rhs), n_(n) {}
  int n() const { return n_; }

 private:
  int n_;
};

/// Malformed input data (JSON files, coordinate vectors, configuration).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace loopfact
