// Exact integer and rational arithmetic shared by every module.
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtoric {

using Integer = mpz_class;
using Rational = mpq_class;

std::string to_string(const Integer& x);
std::string to_string(const Rational& x);

/// Exact x / y; throws std::domain_error when y does not divide x.
Integer exact_div(const Integer& x, const Integer& y);

/// Floor division (rounds toward negative infinity).
Integer floor_div(const Integer& x, const Integer& y);

Rational make_rational(const Integer& num, const Integer& den = 1);

// Error classes. The CLI maps these onto exit codes.

/// A caller-side precondition was violated. `certificate` carries the
/// evidence (a normality witness, a line in a cone, a rank) as key/value text.
class PreconditionError : public std::runtime_error {
 public:
  using Certificate = std::vector<std::pair<std::string, std::string>>;
  explicit PreconditionError(const std::string& what, Certificate cert = {})
      : std::runtime_error(what), certificate_(std::move(cert)) {}
  const Certificate& certificate() const { return certificate_; }

 private:
  Certificate certificate_;
};

/// A declared size limit was exceeded.
class LimitError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// An internal self-check failed. Always indicates a bug.
class VerificationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Integer vector in Z^d, ordered lexicographically.
class IntVector {
 public:
  IntVector() = default;
  explicit IntVector(std::size_t dim) : entries_(dim) {}
  IntVector(std::initializer_list<long> xs);
  explicit IntVector(std::vector<Integer> xs) : entries_(std::move(xs)) {}

  static IntVector unit(std::size_t dim, std::size_t i);

  std::size_t dim() const { return entries_.size(); }
  const Integer& operator[](std::size_t i) const { return entries_[i]; }
  Integer& operator[](std::size_t i) { return entries_[i]; }
  const std::vector<Integer>& entries() const { return entries_; }

  bool is_zero() const;
  /// Sum of the coordinates (total degree).
  Integer sum() const;
  Integer l1_norm() const;
  /// True when every coordinate is >= 0.
  bool is_nonnegative() const;

  IntVector& operator+=(const IntVector& o);
  IntVector& operator-=(const IntVector& o);
  IntVector operator-() const;
  friend IntVector operator+(IntVector a, const IntVector& b) { return a += b; }
  friend IntVector operator-(IntVector a, const IntVector& b) { return a -= b; }
  friend IntVector operator*(const Integer& k, const IntVector& v);

  friend bool operator==(const IntVector& a, const IntVector& b) {
    return a.entries_ == b.entries_;
  }
  friend bool operator!=(const IntVector& a, const IntVector& b) { return !(a == b); }
  friend bool operator<(const IntVector& a, const IntVector& b) {
    return a.entries_ < b.entries_;
  }

  std::string to_string() const;

 private:
  std::vector<Integer> entries_;
};

Integer dot(const IntVector& a, const IntVector& b);
Integer gcd_of(const IntVector& v);
/// Divides by the gcd of the entries. The zero vector is returned unchanged.
IntVector primitive(const IntVector& v);

using IntMatrix = std::vector<IntVector>;  // row-major
using RatVector = std::vector<Rational>;
using RatMatrix = std::vector<RatVector>;

Integer determinant(const IntMatrix& square);
std::string to_string(const IntMatrix& m);
std::string to_string(const RatMatrix& m);
RatMatrix to_rational(const IntMatrix& m);
RatMatrix zero_rat_matrix(std::size_t n);

/// Throws std::invalid_argument unless all vectors have dimension `dim`.
void require_dim(const std::vector<IntVector>& vs, std::size_t dim, const char* what);

}  // namespace qtoric
