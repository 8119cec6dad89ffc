// Integer lattices and rational polyhedral cones.
//
// Everything here is exact: Hermite reduction over Z for sublattices and
// integer linear systems, beneath-beyond facet enumeration for cones, and
// fundamental parallelepipeds of a triangulation for Hilbert bases.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qtoric/arith.hpp"

namespace qtoric {

/// Declared limits for cone computations.
inline constexpr std::size_t kMaxConeGenerators = 64;
inline constexpr std::size_t kMaxAmbientDim = 6;
/// Hard cap on the number of parallelepiped points visited by one Hilbert basis run.
inline constexpr std::size_t kDefaultMaxEnumeratedPoints = 4'000'000;

/// Row-style Hermite reduction: transform * input = echelon, transform
/// unimodular, first `rank` rows of echelon nonzero with strictly increasing
/// positive pivots and reduced entries above each pivot.
struct HermiteForm {
  IntMatrix echelon;
  IntMatrix transform;
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
};

HermiteForm row_hermite(const IntMatrix& rows, std::size_t dim);

/// Rank over Q of a list of vectors.
std::size_t rank_of(const std::vector<IntVector>& rows, std::size_t dim);

/// The subgroup of Z^d generated by a list of vectors.
class Sublattice {
 public:
  Sublattice() = default;
  Sublattice(std::size_t ambient_dim, IntMatrix basis, std::vector<std::size_t> pivots,
             IntMatrix input_transform);

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t rank() const { return basis_.size(); }
  /// Hermite basis; rows are linearly independent.
  const IntMatrix& basis() const { return basis_; }
  /// Unimodular matrix U with U * inputs = [basis; 0].
  const IntMatrix& input_transform() const { return input_transform_; }

  /// Coordinates of x in the basis, if x is a lattice point.
  std::optional<IntVector> coordinates(const IntVector& x) const;
  /// Coordinates over Q, if x lies in the linear span.
  std::optional<RatVector> rational_coordinates(const IntVector& x) const;
  IntVector from_coordinates(const IntVector& y) const;
  bool contains(const IntVector& x) const { return coordinates(x).has_value(); }

  /// True when the lattice is all of Z^d.
  bool is_full() const;
  /// Index in its saturation's ambient: |det| of the basis when rank == ambient_dim.
  Integer full_rank_index() const;

 private:
  std::size_t ambient_dim_ = 0;
  IntMatrix basis_;
  std::vector<std::size_t> pivots_;
  IntMatrix input_transform_;
};

Sublattice lattice_of(const std::vector<IntVector>& vectors, std::size_t ambient_dim);

/// A basis of {x in Z^d : A x = 0}. The basis spans a saturated lattice.
IntMatrix integer_kernel(const IntMatrix& rows, std::size_t dim);

/// An integral solution of A c = b, if one exists.
std::optional<IntVector> solve_integer_system(const IntMatrix& rows, const IntVector& rhs,
                                              std::size_t dim);

struct Cone {
  IntMatrix generators;
  std::size_t dim_ambient = 0;
};

struct Facet {
  IntVector inner_normal;                 // primitive
  std::vector<std::size_t> incident;      // generator indices on the facet
};

/// All facets of a full-dimensional cone, sorted by inner normal.
std::vector<Facet> cone_facets(const Cone& cone);

/// Inner normals only; convenience over cone_facets.
IntMatrix facet_normals(const std::vector<Facet>& facets);

/// True when every inequality <n, x> >= 0 holds.
bool satisfies_all(const IntMatrix& normals, const IntVector& x);

struct HilbertBasisOptions {
  std::size_t max_points = kDefaultMaxEnumeratedPoints;
};

/// Minimal generating set of the semigroup cone ∩ lattice. The cone must be
/// pointed and full-dimensional in the lattice's span.
std::vector<IntVector> hilbert_basis(const Cone& cone, const Sublattice& lattice,
                                     const HilbertBasisOptions& opts = {});

}  // namespace qtoric
