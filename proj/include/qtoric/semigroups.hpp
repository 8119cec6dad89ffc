// Affine semigroups S ⊆ Z^{n+1} and their combinatorial regularity data.
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "qtoric/lattice_geometry.hpp"

namespace qtoric {

/// Outcome of a membership query. On success `witness` lists generator
/// indices (with repetition) whose sum is the queried vector; on failure the
/// search space was exhausted.
struct MembershipResult {
  bool member = false;
  std::vector<std::size_t> witness;
  bool bounded = false;           // true when an explicit search bound was used
  std::size_t states_explored = 0;
};

/// Finitely generated subsemigroup of Z^d. Zero and duplicate generators are
/// dropped at construction. Group, cone and grading data are computed eagerly;
/// membership answers are memoized behind a mutex.
class AffineSemigroup {
 public:
  AffineSemigroup(std::vector<IntVector> generators, std::size_t ambient_dim);
  static AffineSemigroup trivial(std::size_t ambient_dim) { return {{}, ambient_dim}; }

  const IntMatrix& generators() const { return generators_; }
  std::size_t ambient_dim() const { return ambient_dim_; }
  bool is_trivial() const { return generators_.empty(); }

  /// Group of fractions G as a sublattice of Z^d.
  const Sublattice& group() const { return group_; }
  std::size_t rank() const { return group_.rank(); }
  /// G == Z^d.
  bool is_full() const { return group_.is_full(); }
  /// All generators lie in N^d.
  bool is_positive() const { return positive_; }
  /// R₊S contains no line.
  bool is_pointed() const { return pointed_; }

  /// Generators in coordinates of the group basis (a full embedding in Z^rank).
  const IntMatrix& embedded_generators() const { return embedded_generators_; }
  /// Facets of R₊S inside Z^rank (group coordinates).
  const std::vector<Facet>& embedded_facets() const { return embedded_facets_; }
  /// Integral functional on Z^rank, strictly positive on every generator when pointed.
  const IntVector& grading() const { return grading_; }

  Cone cone() const { return Cone{generators_, ambient_dim_}; }
  /// Facets of R₊S in ambient coordinates. Requires a full semigroup.
  const std::vector<Facet>& facets() const;

  /// Decides x ∈ S. Without a bound, S must be pointed (termination follows
  /// from the strictly increasing grading); with a bound, at most `bound`
  /// generators are summed.
  MembershipResult membership(const IntVector& x,
                              std::optional<std::size_t> bound = std::nullopt) const;
  bool contains(const IntVector& x) const { return membership(x).member; }

 private:
  struct Cache;

  IntMatrix generators_;
  std::size_t ambient_dim_ = 0;
  Sublattice group_;
  bool positive_ = true;
  bool pointed_ = true;
  IntMatrix embedded_generators_;
  std::vector<Facet> embedded_facets_;
  IntVector grading_;
  std::shared_ptr<Cache> cache_;
};

/// Re-coordinatization of S in its group of fractions.
struct FullEmbedding {
  std::size_t rank = 0;
  AffineSemigroup embedded;
  Sublattice group;  // maps Z^rank coordinates back to the original ambient space
};

FullEmbedding full_embedding(const AffineSemigroup& s);

struct NormalityResult {
  bool normal = true;
  std::vector<IntVector> hilbert_basis;  // of R₊S ∩ G, ambient coordinates
  std::optional<IntVector> witness;      // g ∈ G \ S
  Integer witness_multiple = 0;          // p with p·g ∈ S
};

NormalityResult is_normal(const AffineSemigroup& s);

/// S_τ = D_τ ∩ Z^d for a facet τ of a full normal semigroup, presented as
/// Z·unit_basis + N·positive_generators, with the isomorphism Z^{d-1} ⊕ N → S_τ
/// sending e_i to unit_basis[i] (i < d-1) and e_{d-1} to `complement`.
struct FacetSemigroup {
  Facet facet;
  IntMatrix unit_basis;           // lattice basis of H_τ ∩ Z^d
  IntVector complement;           // <inner_normal, complement> == 1
  IntMatrix incident_generators;  // generators of S on H_τ
  IntMatrix positive_generators;  // generators with positive pairing
  /// Whether the incident generators already generate H_τ ∩ Z^d as a group.
  /// When false, unit_basis contains vectors not reachable from S's generators
  /// by integer combinations of the facet generators alone.
  bool incident_generators_span_units = false;
  Integer iso_determinant = 0;    // ±1 for a valid witness
  std::size_t verified_degree = 0;

  bool contains(const IntVector& x) const { return dot(facet.inner_normal, x) >= 0; }
  /// x ∈ Z·unit_basis + N·positive_generators, decided from the presentation.
  bool in_presentation(const IntVector& x) const;
  /// Z^{d-1} ⊕ N coordinates of x; the last entry is <inner_normal, x>.
  IntVector to_standard(const IntVector& x) const;
  IntVector from_standard(const IntVector& y) const;
};

FacetSemigroup facet_subsemigroup(const AffineSemigroup& s, const Facet& tau,
                                  std::size_t verify_degree = 6);

struct Decomposition {
  std::vector<FacetSemigroup> facets;
  std::size_t verified_degree = 0;
  std::size_t points_checked = 0;
  bool verified = false;
};

/// S = ⋂ S_τ for normal, full, pointed S, checked on every x with |x|₁ <= degree.
Decomposition decompose(const AffineSemigroup& s, std::size_t verify_degree = 6);

enum class TriState { yes, no, inapplicable };
const char* to_string(TriState t);

struct RegularityReport {
  bool normal = false;
  TriState cohen_macaulay = TriState::inapplicable;
  TriState gorenstein = TriState::inapplicable;
  std::optional<IntVector> gorenstein_witness;           // ambient coordinates
  std::optional<IntVector> gorenstein_witness_embedded;  // group coordinates
  bool regular = false;
  bool maximal_order = false;
  bool balanced_dualizing_complex = true;
  std::size_t verification_bound = 0;
  std::size_t rank = 0;
  std::vector<IntVector> hilbert_basis;
  IntMatrix facet_normals;  // group coordinates
  std::optional<IntVector> normality_witness;
  Integer normality_witness_multiple = 0;
};

RegularityReport regularity_report(const AffineSemigroup& s, std::size_t verification_bound = 6);

/// Number of elements of S with coordinate sum k, for k = 0..degree.
std::vector<std::size_t> hilbert_function(const AffineSemigroup& s, std::size_t degree);

/// Elements of a positive S with coordinate sum at most `degree`, sorted.
std::vector<IntVector> elements_up_to_degree(const AffineSemigroup& s, std::size_t degree);

/// Visits every x ∈ Z^d with |x|₁ <= radius.
void for_each_l1_point(std::size_t dim, std::size_t radius,
                       const std::function<void(const IntVector&)>& visit);

/// Visits every x ∈ N^d with coordinate sum exactly `total`.
void for_each_composition(std::size_t dim, std::size_t total,
                          const std::function<void(const IntVector&)>& visit);

}  // namespace qtoric
