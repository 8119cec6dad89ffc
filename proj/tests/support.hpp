// Fixtures and brute-force oracles shared by the unit tests and the
// acceptance runner. Nothing here calls the algorithm under test to decide
// the answer it is checking.
#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qtoric/lattice_algebras.hpp"
#include "qtoric/scalars_cocycles.hpp"
#include "qtoric/semigroups.hpp"
#include "qtoric/twisted_algebra.hpp"

namespace qtoric::testing {

struct NamedSemigroup {
  std::string name;
  AffineSemigroup s;
  bool normal;
};

inline AffineSemigroup make_semigroup(std::vector<IntVector> gens, std::size_t dim) {
  return AffineSemigroup(std::move(gens), dim);
}

inline AffineSemigroup n2() { return make_semigroup({{1, 0}, {0, 1}}, 2); }
inline AffineSemigroup a1() { return make_semigroup({{1, 0}, {1, 1}, {1, 2}}, 2); }
/// Saturation of the cone on the rays (1,0), (1,3).
inline AffineSemigroup r13() { return make_semigroup({{1, 0}, {1, 1}, {1, 2}, {1, 3}}, 2); }
inline AffineSemigroup n23() { return make_semigroup({{2}, {3}}, 1); }
/// str of the diamond lattice: i(bot), i(a), i(b), i(top).
inline AffineSemigroup diamond_str() {
  return make_semigroup({{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}}, 3);
}

/// The semigroup fixtures named in the acceptance criteria.
inline std::vector<NamedSemigroup> core_fixtures() {
  return {{"N2", n2(), true},
          {"A1", a1(), true},
          {"N23", n23(), false},
          {"DiamondStr", diamond_str(), true}};
}

inline std::vector<NamedSemigroup> all_fixtures() {
  auto v = core_fixtures();
  v.push_back({"R13", r13(), true});
  v.push_back({"Q201", make_semigroup({{2, 0}, {0, 1}, {1, 1}}, 2), false});
  return v;
}

struct NamedCocycle {
  std::string name;
  Cocycle alpha;
};

/// Skew exponent matrix with E[i][j] = j - i.
inline IntMatrix staircase_skew(std::size_t d) {
  IntMatrix e(d, IntVector(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) e[i][j] = long(j) - long(i);
  return e;
}

inline Cocycle quantum(std::size_t d) {
  if (d == 1) return Cocycle(1, {"q"}, {IntMatrix{IntVector{1}}});
  return Cocycle::from_q_exponents(d, {"q"}, {staircase_skew(d)});
}

inline Cocycle shifted(std::size_t d) {
  const Cocycle base = quantum(d);
  RatMatrix quad = zero_rat_matrix(d);
  RatVector linear(d);
  for (std::size_t i = 0; i < d; ++i) {
    linear[i] = (i % 2 == 0) ? 1 : -2;
    for (std::size_t j = 0; j < d; ++j)
      quad[i][j] = i == j ? Rational(1, 2) : (i < j ? Rational(1) : Rational(-1, 3));
  }
  return Cocycle(d, base.params(), base.bichar(), Coboundary(d, {"q"}, {quad}, {linear}));
}

/// Trivial, quantum, and coboundary-shifted quantum cocycles on Z^d.
inline std::vector<NamedCocycle> fixture_cocycles(std::size_t d) {
  return {{"trivial", Cocycle(d, {"q"}, {})}, {"quantum", quantum(d)}, {"shifted", shifted(d)}};
}

/// Every x ∈ N^d with coordinate sum at most `degree`.
inline std::vector<IntVector> monomials_up_to(std::size_t d, std::size_t degree) {
  std::vector<IntVector> out;
  for (std::size_t k = 0; k <= degree; ++k)
    for_each_composition(d, k, [&](const IntVector& x) { out.push_back(x); });
  return out;
}

/// Membership by dynamic programming over N-combinations of the generators,
/// independent of AffineSemigroup::membership. Requires positive generators.
class BruteMembership {
 public:
  explicit BruteMembership(const AffineSemigroup& s) : gens_(s.generators()) {}
  bool operator()(const IntVector& x) {
    if (!x.is_nonnegative()) return false;
    if (x.is_zero()) return true;
    if (auto it = memo_.find(x); it != memo_.end()) return it->second;
    bool found = false;
    for (const auto& g : gens_)
      if ((*this)(x - g)) {
        found = true;
        break;
      }
    return memo_[x] = found;
  }

 private:
  IntMatrix gens_;
  std::map<IntVector, bool> memo_;
};

inline bool brute_member(const AffineSemigroup& s, const IntVector& x) {
  return BruteMembership(s)(x);
}

/// Normality by definition: for g in G with |g_i| <= b and 1 <= p <= pmax,
/// p·g ∈ S implies g ∈ S. Returns a violating (g, p) if one exists.
inline std::optional<std::pair<IntVector, long>> brute_normality_violation(
    const AffineSemigroup& s, long b, long pmax) {
  const std::size_t d = s.ambient_dim();
  BruteMembership member(s);
  IntVector g(d);
  for (std::size_t k = 0; k < d; ++k) g[k] = -b;
  while (true) {
    if (s.group().contains(g) && !member(g))
      for (long p = 2; p <= pmax; ++p)
        if (member(Integer(p) * g)) return std::make_pair(g, p);
    std::size_t k = 0;
    while (k < d && g[k] == b) g[k++] = -b;
    if (k == d) break;
    g[k] += 1;
  }
  return std::nullopt;
}

/// Facets of a full-dimensional cone by trying every (d-1)-subset of
/// generators: a hyperplane through a rank d-1 subset is a facet when all
/// generators lie weakly on one side.
inline std::set<IntVector> brute_facet_normals(const IntMatrix& gens, std::size_t d) {
  std::set<IntVector> out;
  const std::size_t n = gens.size();
  std::vector<std::size_t> pick(d - 1);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t from) {
    if (pos + 1 == d) {
      IntMatrix rows;
      for (auto i : pick) rows.push_back(gens[i]);
      const IntMatrix ker = integer_kernel(rows, d);
      if (ker.size() != 1) return;
      IntVector nrm = primitive(ker[0]);
      bool pos_side = true, neg_side = true;
      for (const auto& g : gens) {
        const Integer v = dot(nrm, g);
        if (v < 0) pos_side = false;
        if (v > 0) neg_side = false;
      }
      if (pos_side) out.insert(nrm);
      if (neg_side) out.insert(-nrm);
      return;
    }
    for (std::size_t i = from; i < n; ++i) {
      pick[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
  return out;
}

/// Gorenstein test by comparing interior lattice points with c + S on all
/// points of l1 norm at most `bound`. Returns c, or nullopt when no interior
/// point generates the interior. Requires a full, normal, positive S.
inline std::optional<IntVector> brute_gorenstein_point(const AffineSemigroup& s,
                                                       std::size_t bound) {
  const std::set<IntVector> normals = brute_facet_normals(s.generators(), s.ambient_dim());
  auto interior = [&](const IntVector& x) {
    for (const auto& n : normals)
      if (dot(n, x) < 1) return false;
    return true;
  };
  BruteMembership member(s);
  std::vector<IntVector> pts;
  for_each_l1_point(s.ambient_dim(), bound, [&](const IntVector& x) {
    if (interior(x)) pts.push_back(x);
  });
  for (const auto& c : pts) {
    bool generates = true;
    for (const auto& y : pts)
      if (!member(y - c)) {
        generates = false;
        break;
      }
    if (!generates) continue;
    // Conversely c + S must stay interior.
    for (const auto& y : pts)
      for (const auto& g : s.generators())
        if ((y + g).l1_norm() <= Integer(long(bound)) && !interior(y + g)) return std::nullopt;
    return c;
  }
  return std::nullopt;
}

/// Unlabeled posets with exactly n elements, one representative per
/// isomorphism class. Naturally labeled relations (a < b only when a < b as
/// integers) cover every class; classes are merged by a canonical relation
/// bitmask minimized over all relabelings.
inline std::vector<Poset> unlabeled_posets(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) slots.emplace_back(a, b);
  std::vector<std::size_t> perm(n);
  std::set<unsigned long> seen;
  std::vector<Poset> out;
  for (unsigned long mask = 0; mask < (1UL << slots.size()); ++mask) {
    std::vector<std::vector<bool>> lt(n, std::vector<bool>(n, false));
    for (std::size_t k = 0; k < slots.size(); ++k)
      if (mask >> k & 1) lt[slots[k].first][slots[k].second] = true;
    bool transitive = true;
    for (std::size_t a = 0; a < n && transitive; ++a)
      for (std::size_t b = 0; b < n && transitive; ++b)
        for (std::size_t c = 0; c < n && transitive; ++c)
          if (lt[a][b] && lt[b][c] && !lt[a][c]) transitive = false;
    if (!transitive) continue;
    std::iota(perm.begin(), perm.end(), 0);
    unsigned long canon = ~0UL;
    do {
      unsigned long code = 0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (lt[a][b]) code |= 1UL << (perm[a] * n + perm[b]);
      canon = std::min(canon, code);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!seen.insert(canon).second) continue;
    Poset p;
    p.size = n;
    for (std::size_t k = 0; k < slots.size(); ++k)
      if (mask >> k & 1) p.less.push_back(slots[k]);
    out.push_back(std::move(p));
  }
  return out;
}

/// All weakly increasing chains of lattice elements of length `len`.
inline std::vector<std::vector<std::size_t>> standard_words(const DistLattice& l, std::size_t len) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> w;
  std::function<void()> rec = [&] {
    if (w.size() == len) {
      out.push_back(w);
      return;
    }
    for (std::size_t x = 0; x < l.size(); ++x)
      if (w.empty() || l.leq(w.back(), x)) {
        w.push_back(x);
        rec();
        w.pop_back();
      }
  };
  rec();
  return out;
}

/// Left-to-right torus product of X^{e_1} ··· X^{e_k}: returns the scalar κ
/// with the product equal to κ X^{Σ e}.
inline ScalarMonomial monomial_product_scalar(const Cocycle& alpha,
                                              const std::vector<IntVector>& exps) {
  TwistedElement acc = TwistedElement::monomial(IntVector(alpha.dim()));
  for (const auto& e : exps) acc = torus_product(alpha, acc, TwistedElement::monomial(e));
  return acc.as_monomial().value().first;
}

}  // namespace qtoric::testing
