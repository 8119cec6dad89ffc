// Twisted semigroup algebras k^α[S] inside the quantum torus, with the
// normal-ordered monomial basis X^s = X_0^{s_0} ··· X_n^{s_n}.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtoric/scalars_cocycles.hpp"
#include "qtoric/semigroups.hpp"

namespace qtoric {

/// Finite sum Σ c_s X^s; exponents may be negative (torus elements).
class TwistedElement {
 public:
  TwistedElement() = default;
  static TwistedElement monomial(const IntVector& s, const Coefficient& c = 1);

  const std::map<IntVector, Coefficient>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(const IntVector& s, const Coefficient& c);

  /// (c, s) when the element is a single term with monomial coefficient.
  std::optional<std::pair<ScalarMonomial, IntVector>> as_monomial() const;

  TwistedElement& operator+=(const TwistedElement& o);
  TwistedElement& operator-=(const TwistedElement& o);
  friend TwistedElement operator+(TwistedElement a, const TwistedElement& b) { return a += b; }
  friend TwistedElement operator-(TwistedElement a, const TwistedElement& b) { return a -= b; }
  friend TwistedElement operator*(const Coefficient& c, const TwistedElement& x);
  friend bool operator==(const TwistedElement& a, const TwistedElement& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const TwistedElement& a, const TwistedElement& b) { return !(a == b); }

  /// Terms in decreasing lex order, e.g. "q^-1*X^(1,1) + X^(0,1)".
  std::string to_string() const;

 private:
  std::map<IntVector, Coefficient> terms_;
};

/// k^α[D] for a monomial domain D: all of Z^d (the quantum torus), an affine
/// semigroup S, or a half-space {x : <n, x> >= 0} (a facet semigroup S_τ).
class TwistedAlgebra {
 public:
  enum class Domain { torus, semigroup, half_space };

  TwistedAlgebra(AffineSemigroup s, Cocycle alpha);
  static TwistedAlgebra torus(Cocycle alpha);
  static TwistedAlgebra half_space(IntVector inner_normal, Cocycle alpha);

  Domain domain() const { return domain_; }
  std::size_t dim() const { return alpha_.dim(); }
  const Cocycle& cocycle() const { return alpha_; }
  /// Requires Domain::semigroup.
  const AffineSemigroup& semigroup() const;
  const IntVector& half_space_normal() const { return normal_; }

  bool in_domain(const IntVector& x) const;
  /// X^s; throws PreconditionError when s is outside the domain.
  TwistedElement monomial(const IntVector& s) const;

 private:
  TwistedAlgebra(Domain domain, std::optional<AffineSemigroup> s, IntVector normal, Cocycle alpha);

  Domain domain_;
  std::optional<AffineSemigroup> semigroup_;
  IntVector normal_;
  Cocycle alpha_;
};

/// Bilinear extension of X^s · X^t = α(s,t) X^{s+t}.
TwistedElement product(const TwistedAlgebra& a, const TwistedElement& x, const TwistedElement& y);

/// Product in the quantum torus of α, with no domain check.
TwistedElement torus_product(const Cocycle& alpha, const TwistedElement& x, const TwistedElement& y);

/// (X^t)^{-1} = α(t,-t)^{-1} X^{-t} in the quantum torus of α.
TwistedElement torus_inverse(const Cocycle& alpha, const IntVector& t);

/// k-th power of a monomial in the quantum torus; negative k uses the inverse.
TwistedElement torus_power(const Cocycle& alpha, const TwistedElement& x, long k);

struct LeadingTerm {
  Coefficient coeff;
  IntVector exponent;
};

/// The lex-maximal term. Throws PreconditionError on zero.
LeadingTerm leading_term(const TwistedElement& x);

/// Every exponent in the support lies in the algebra's domain.
bool subalgebra_membership(const TwistedAlgebra& a, const TwistedElement& x);

/// Realization of k^α[S] for full S inside the quantum torus on
/// Y_i = X^{s_i} (X^{t_i})^{-1} with s_i - t_i = e_i.
struct TorusEmbedding {
  std::size_t rank = 0;
  std::vector<std::pair<IntVector, IntVector>> differences;  // (s_i, t_i)
  std::vector<bool> found_by_search;       // false when built from an integer combination
  std::vector<ScalarMonomial> y_scalars;   // Y_i = λ_i X^{e_i}
  ScalarMatrix q_prime;                    // Y_i Y_j = q'_ij Y_j Y_i
  std::vector<ScalarMonomial> generator_scalars;  // X^g = μ_g Y^g
  std::size_t search_bound = 0;
};

/// Breadth-first search over sums of at most `search_bound` generators for
/// t with t + e_i ∈ S; falls back to the integer-combination split of e_i.
TorusEmbedding quantum_torus_embedding(const TwistedAlgebra& a, std::size_t search_bound = 6);

/// τ_t(X^s) = α(s,t) X^s.
class TwistingSystem {
 public:
  explicit TwistingSystem(Cocycle alpha) : alpha_(std::move(alpha)) {}
  const Cocycle& cocycle() const { return alpha_; }

  TwistedElement apply(const IntVector& t, const TwistedElement& a) const;
  /// a ∘ a' = Σ τ_{deg a'_j}(a) a'_j with the commutative product of k[D].
  TwistedElement twisted_product(const TwistedElement& a, const TwistedElement& b) const;

 private:
  Cocycle alpha_;
};

struct TwistCheck {
  TwistingSystem system;
  std::size_t grid_bound = 0;
  std::size_t grid_points = 0;
  std::size_t axiom_instances = 0;
  std::size_t product_degree = 0;
  std::size_t product_pairs = 0;
};

/// Builds τ and verifies the left twisting axiom on all degree triples from
/// domain points in [0, grid_bound]^d, plus τ-twisted commutative product ==
/// α-product on all monomial pairs each of total degree <= product_degree.
/// Throws VerificationError on any mismatch.
TwistCheck twisting_system(const TwistedAlgebra& a, std::size_t grid_bound = 3,
                           std::size_t product_degree = 5);

struct FacetLocalization {
  FacetSemigroup facet_semigroup;
  TwistedAlgebra algebra;      // over S_τ
  IntMatrix standard_images;   // images of the standard basis of Z^{d-1} ⊕ N
  ScalarMatrix q_tau;          // commutation matrix of those images
  IntVector inverted;          // sum of the facet generators; X^inverted is made invertible
  std::size_t verified_degree = 0;
  std::size_t points_checked = 0;
};

/// k^α[S_τ] with its q_τ matrix; checks that every x ∈ S_τ with |x|₁ <= degree
/// satisfies x + m·inverted ∈ S for some m >= 0.
FacetLocalization localize_at_facet(const TwistedAlgebra& a, const Facet& tau,
                                    std::size_t verify_degree = 6);

/// Number of distinct exponents of coordinate sum k reached by twisted
/// products of generator monomials, for k = 0..degree. Requires a positive
/// semigroup domain.
std::vector<std::size_t> component_dimensions(const TwistedAlgebra& a, std::size_t degree);

}  // namespace qtoric
