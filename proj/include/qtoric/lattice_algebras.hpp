// Finite distributive lattices, Birkhoff representation, and the
// straightening semigroup str(Π) ⊆ Z^{n+1}.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtoric/semigroups.hpp"
#include "qtoric/twisted_algebra.hpp"

namespace qtoric {

/// Finite distributive lattice given by a Hasse diagram. Order, meet and join
/// tables are computed at construction, which rejects cycles, non-lattices
/// and non-distributive input with PreconditionError.
class DistLattice {
 public:
  /// `covers` holds (lower, upper) index pairs; any generating relation works.
  DistLattice(std::vector<std::string> names,
              const std::vector<std::pair<std::size_t, std::size_t>>& covers);
  static DistLattice from_names(std::vector<std::string> names,
                                const std::vector<std::pair<std::string, std::string>>& covers);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index(const std::string& name) const;

  bool leq(std::size_t a, std::size_t b) const { return leq_[a][b]; }
  std::size_t meet(std::size_t a, std::size_t b) const { return meet_[a][b]; }
  std::size_t join(std::size_t a, std::size_t b) const { return join_[a][b]; }
  std::size_t bottom() const { return bottom_; }
  std::size_t top() const { return top_; }
  const std::vector<std::size_t>& lower_covers(std::size_t a) const { return lower_covers_[a]; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<std::size_t>> meet_;
  std::vector<std::vector<std::size_t>> join_;
  std::vector<std::vector<std::size_t>> lower_covers_;
  std::size_t bottom_ = 0;
  std::size_t top_ = 0;
};

/// Finite poset on {0, ..., size-1}; `less` lists pairs (a, b) with a < b.
struct Poset {
  std::size_t size = 0;
  std::vector<std::pair<std::size_t, std::size_t>> less;
};

/// Lattice of down-sets of a poset, ordered by inclusion. Element names list
/// the members, e.g. "{}", "{0,2}".
DistLattice ideal_lattice(const Poset& p);

/// Π₀ with a chosen linear extension p_1 <_tot ... <_tot p_n and the
/// isomorphism φ onto its ideal lattice.
struct BirkhoffData {
  std::vector<std::size_t> irreducibles;                 // lattice ids, in total order
  std::vector<std::vector<std::size_t>> phi;             // per element: sorted positions in `irreducibles`
  std::map<std::vector<std::size_t>, std::size_t> phi_inv;
  std::vector<std::pair<std::size_t, std::size_t>> covers;  // positions (i, j): p_i ⋖ p_j in Π₀
};

/// Join-irreducibles (exactly one lower cover). `order`, when given, lists
/// them in a linear extension; otherwise a topological sort with ties broken
/// by smallest id is used. φ is verified to be an order isomorphism onto the
/// ideals of Π₀.
BirkhoffData birkhoff(const DistLattice& lattice,
                      const std::optional<std::vector<std::size_t>>& order = std::nullopt);

/// Weakly increasing chain π_1 <= ... <= π_t of lattice ids; empty is the unit.
using StandardWord = std::vector<std::size_t>;

struct StrSemigroup {
  DistLattice lattice;
  BirkhoffData data;
  std::size_t dim = 0;  // n + 1
  IntMatrix i_map;      // i(π) = e_0 + Σ_{p_i <= π} e_i, indexed by lattice id
  AffineSemigroup semigroup;
  std::size_t verified_s0 = 0;
  std::size_t points_checked = 0;

  /// s ∈ T ∩ ⋂ S_ij: s_0 >= s_k >= 0 and s_i >= s_j whenever p_i ⋖ p_j.
  bool in_region(const IntVector& s) const;
};

/// Builds i and S; verifies i(α)+i(β) = i(α∧β)+i(α∨β), injectivity, that the
/// image lies in T ∩ ⋂ S_ij, and that every region point with s_0 <= bound is
/// i of a standard word.
StrSemigroup str_embedding(const DistLattice& lattice,
                           const std::optional<std::vector<std::size_t>>& order = std::nullopt,
                           std::size_t verify_bound = 4);

/// The standard word with Σ i(π_k) = s. Throws PreconditionError when s is not
/// in the region.
StandardWord psi(const StrSemigroup& sg, const IntVector& s);

/// Σ i(π_k) over a word.
IntVector word_exponent(const StrSemigroup& sg, const std::vector<std::size_t>& word);

struct Straightened {
  ScalarMonomial scalar;  // X^{i(π_1)} ··· X^{i(π_t)} = scalar · (standard monomial)
  StandardWord word;
  IntVector exponent;
};

/// Left-to-right product of the word's monomials in `a`, rewritten against the
/// product of the standard word with the same exponent.
Straightened straighten(const TwistedAlgebra& a, const StrSemigroup& sg,
                        const std::vector<std::size_t>& word);

struct LatticeAlgebraReport {
  StrSemigroup str;
  RegularityReport regularity;
};

/// str(Π) with the regularity report of S. Throws VerificationError if S is
/// not normal and PreconditionError on a cocycle dimension mismatch.
LatticeAlgebraReport lattice_algebra_report(const DistLattice& lattice, const Cocycle& alpha,
                                            std::size_t verification_bound = 6);

}  // namespace qtoric
