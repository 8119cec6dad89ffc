#include "qtoric/arith.hpp"

#include <sstream>

namespace qtoric {

std::string to_string(const Integer& x) { return x.get_str(); }

std::string to_string(const Rational& x) { return x.get_str(); }

Integer exact_div(const Integer& x, const Integer& y) {
  if (y == 0) throw std::domain_error("division by zero");
  if (!mpz_divisible_p(x.get_mpz_t(), y.get_mpz_t()))
    throw std::domain_error("inexact division " + x.get_str() + " / " + y.get_str());
  Integer q;
  mpz_divexact(q.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return q;
}

Integer floor_div(const Integer& x, const Integer& y) {
  if (y == 0) throw std::domain_error("division by zero");
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return q;
}

Rational make_rational(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

IntVector::IntVector(std::initializer_list<long> xs) {
  entries_.reserve(xs.size());
  for (long x : xs) entries_.emplace_back(x);
}

IntVector IntVector::unit(std::size_t dim, std::size_t i) {
  IntVector e(dim);
  e[i] = 1;
  return e;
}

bool IntVector::is_zero() const {
  for (const auto& x : entries_)
    if (x != 0) return false;
  return true;
}

Integer IntVector::sum() const {
  Integer s = 0;
  for (const auto& x : entries_) s += x;
  return s;
}

Integer IntVector::l1_norm() const {
  Integer s = 0;
  for (const auto& x : entries_) s += abs(x);
  return s;
}

bool IntVector::is_nonnegative() const {
  for (const auto& x : entries_)
    if (x < 0) return false;
  return true;
}

IntVector& IntVector::operator+=(const IntVector& o) {
  if (o.dim() != dim()) throw std::invalid_argument("dimension mismatch in vector sum");
  for (std::size_t i = 0; i < dim(); ++i) entries_[i] += o.entries_[i];
  return *this;
}

IntVector& IntVector::operator-=(const IntVector& o) {
  if (o.dim() != dim()) throw std::invalid_argument("dimension mismatch in vector difference");
  for (std::size_t i = 0; i < dim(); ++i) entries_[i] -= o.entries_[i];
  return *this;
}

IntVector IntVector::operator-() const {
  IntVector r(*this);
  for (auto& x : r.entries_) x = -x;
  return r;
}

IntVector operator*(const Integer& k, const IntVector& v) {
  IntVector r(v);
  for (auto& x : r.entries_) x *= k;
  return r;
}

std::string IntVector::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < dim(); ++i) {
    if (i) s += ',';
    s += entries_[i].get_str();
  }
  return s + ")";
}

Integer dot(const IntVector& a, const IntVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch in dot product");
  Integer s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

Integer gcd_of(const IntVector& v) {
  Integer g = 0;
  for (std::size_t i = 0; i < v.dim(); ++i) g = gcd(g, v[i]);
  return g;
}

IntVector primitive(const IntVector& v) {
  Integer g = gcd_of(v);
  if (g == 0 || g == 1) return v;
  IntVector r(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) r[i] = exact_div(v[i], g);
  return r;
}

Integer determinant(const IntMatrix& square) {
  // Fraction-free Bareiss elimination.
  const std::size_t n = square.size();
  if (n == 0) return 1;
  std::vector<std::vector<Integer>> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (square[i].dim() != n) throw std::invalid_argument("determinant of non-square matrix");
    a[i] = square[i].entries();
  }
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::string to_string(const IntMatrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ',';
    s += '[';
    for (std::size_t j = 0; j < m[i].dim(); ++j) {
      if (j) s += ',';
      s += m[i][j].get_str();
    }
    s += ']';
  }
  return s + "]";
}

std::string to_string(const RatMatrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ',';
    s += '[';
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (j) s += ',';
      s += m[i][j].get_str();
    }
    s += ']';
  }
  return s + "]";
}

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].dim(); ++j) r[i].push_back(Rational(m[i][j]));
  return r;
}

RatMatrix zero_rat_matrix(std::size_t n) { return RatMatrix(n, RatVector(n, Rational(0))); }

void require_dim(const std::vector<IntVector>& vs, std::size_t dim, const char* what) {
  for (const auto& v : vs)
    if (v.dim() != dim)
      throw std::invalid_argument(std::string(what) + ": vector " + v.to_string() +
                                  " is not in dimension " + std::to_string(dim));
}

}  // namespace qtoric
