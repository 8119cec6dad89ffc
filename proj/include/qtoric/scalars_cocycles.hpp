// The coefficient group k* of formal monomials, the coefficient field
// elements built from them, and closed-form normalized 2-cocycles on Z^d.
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtoric/arith.hpp"

namespace qtoric {

/// Formal parameter exponents; zero exponents are never stored.
using Exponents = std::map<std::string, Rational>;

/// c · ∏ p^{e_p} with c a nonzero rational and rational exponents e_p.
class ScalarMonomial {
 public:
  ScalarMonomial() : coeff_(1) {}
  explicit ScalarMonomial(Rational coeff, Exponents exponents = {});
  static ScalarMonomial param(const std::string& name, const Rational& exponent = 1);

  const Rational& coeff() const { return coeff_; }
  const Exponents& exponents() const { return exponents_; }
  bool is_one() const { return coeff_ == 1 && exponents_.empty(); }

  ScalarMonomial inverse() const;
  ScalarMonomial pow(long k) const;

  friend ScalarMonomial operator*(const ScalarMonomial& a, const ScalarMonomial& b);
  friend ScalarMonomial operator/(const ScalarMonomial& a, const ScalarMonomial& b) {
    return a * b.inverse();
  }
  ScalarMonomial& operator*=(const ScalarMonomial& b) { return *this = *this * b; }
  friend bool operator==(const ScalarMonomial& a, const ScalarMonomial& b) {
    return a.coeff_ == b.coeff_ && a.exponents_ == b.exponents_;
  }
  friend bool operator!=(const ScalarMonomial& a, const ScalarMonomial& b) { return !(a == b); }

  /// e.g. "1", "6*q", "-1*q^-2", "q^(1/2)*r".
  std::string to_string() const;

 private:
  Rational coeff_;
  Exponents exponents_;
};

/// Finite Q-linear combination of formal monomials: an element of the
/// coefficient field k. Terms with zero coefficient are never stored.
class Coefficient {
 public:
  Coefficient() = default;
  Coefficient(const ScalarMonomial& m);  // NOLINT(google-explicit-constructor)
  Coefficient(long c) : Coefficient(ScalarMonomial(Rational(c))) {}  // NOLINT

  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// The single monomial, when there is exactly one term.
  std::optional<ScalarMonomial> as_monomial() const;

  Coefficient& operator+=(const Coefficient& o);
  Coefficient& operator-=(const Coefficient& o);
  friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
  friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
  friend Coefficient operator*(const Coefficient& a, const Coefficient& b);
  friend bool operator==(const Coefficient& a, const Coefficient& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Coefficient& a, const Coefficient& b) { return !(a == b); }

  std::string to_string() const;

 private:
  std::map<Exponents, Rational> terms_;
};

/// f(s) = ∏_k c_k^{sᵀQ_k s + L_kᵀ s}. Vanishes at s = 0, so ∂f is normalized.
class Coboundary {
 public:
  Coboundary(std::size_t dim, std::vector<std::string> params, std::vector<RatMatrix> quad,
             std::vector<RatVector> linear);

  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& params() const { return params_; }
  const std::vector<RatMatrix>& quad() const { return quad_; }
  const std::vector<RatVector>& linear() const { return linear_; }

  ScalarMonomial f(const IntVector& s) const;
  /// ∂f(s,t) = f(s) f(t) / f(s+t).
  ScalarMonomial differential(const IntVector& s, const IntVector& t) const;
  /// Exponent of parameter k in f as a polynomial in s0..s_{d-1}, e.g. "-s0*s1".
  std::string exponent_polynomial(std::size_t k) const;
  /// e.g. "q^(-s0*s1)"; "1" when f is identically 1.
  std::string describe() const;

 private:
  std::size_t dim_;
  std::vector<std::string> params_;
  std::vector<RatMatrix> quad_;
  std::vector<RatVector> linear_;
};

/// α(s,t) = ∏_k c_k^{sᵀB_k t} · ∂f(s,t) with integer bicharacter matrices B_k
/// and an optional coboundary part f.
class Cocycle {
 public:
  Cocycle(std::size_t dim, std::vector<std::string> params, std::vector<IntMatrix> bichar,
          std::optional<Coboundary> coboundary = std::nullopt);

  static Cocycle trivial(std::size_t dim);
  /// The cocycle α(s,t) = ∏_{i>j} q_ij^{s_i t_j} of a quantum torus whose
  /// skew-symmetric commutation matrix is q_ij = ∏_k c_k^{E_k[i][j]}.
  static Cocycle from_q_exponents(std::size_t dim, std::vector<std::string> params,
                                  const std::vector<IntMatrix>& skew_exponents);

  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& params() const { return params_; }
  const std::vector<IntMatrix>& bichar() const { return bichar_; }
  const std::optional<Coboundary>& coboundary() const { return coboundary_; }

  ScalarMonomial operator()(const IntVector& s, const IntVector& t) const;
  /// Rational matrix M_k with α(s,t) = ∏_k c_k^{sᵀM_k t}.
  RatMatrix exponent_form(std::size_t k) const;

 private:
  std::size_t dim_;
  std::vector<std::string> params_;
  std::vector<IntMatrix> bichar_;
  std::optional<Coboundary> coboundary_;
};

ScalarMonomial cocycle_eval(const Cocycle& alpha, const IntVector& s, const IntVector& t);

using CocycleFn = std::function<ScalarMonomial(const IntVector&, const IntVector&)>;
using Triple = std::array<IntVector, 3>;

struct CocycleCheck {
  bool ok = true;
  std::optional<Triple> counterexample;
  std::size_t triples_checked = 0;
};

/// Checks α(s,t)α(s+t,u) = α(t,u)α(s,t+u) on every supplied triple.
CocycleCheck validate_cocycle(const CocycleFn& alpha, const std::vector<Triple>& triples);
CocycleCheck validate_cocycle(const Cocycle& alpha, const std::vector<Triple>& triples);

/// All triples with coordinates in [lo, hi].
std::vector<Triple> exhaustive_triples(std::size_t dim, long lo, long hi);
/// Deterministic pseudo-random triples with coordinates in [-range, range].
std::vector<Triple> random_triples(std::size_t dim, std::size_t count, long range,
                                   unsigned long seed);

using ScalarMatrix = std::vector<std::vector<ScalarMonomial>>;

/// q_ij = α(s_i, s_j) / α(s_j, s_i).
ScalarMatrix commutation_matrix(const Cocycle& alpha, const std::vector<IntVector>& generators);

/// q_ii == 1 and q_ij q_ji == 1 for all i, j.
bool is_multiplicatively_skew(const ScalarMatrix& q);

std::string to_string(const ScalarMatrix& q);

struct CohomologyResult {
  bool cohomologous = false;
  /// f with α = ∂f · β on the group spanned by the basis.
  std::optional<Coboundary> witness;
  std::optional<std::pair<IntVector, IntVector>> distinguishing_pair;
  std::size_t verified_pairs = 0;
};

/// Compares the skew forms α(u,v)/α(v,u) and β(u,v)/β(v,u) on all pairs from
/// `group_basis`. On agreement an explicit coboundary witness is built and
/// checked on every basis pair plus a deterministic random sample.
CohomologyResult are_cohomologous(const Cocycle& alpha, const Cocycle& beta,
                                  const std::vector<IntVector>& group_basis);

}  // namespace qtoric
