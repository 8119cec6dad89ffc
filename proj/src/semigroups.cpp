#include "qtoric/semigroups.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <tuple>

namespace qtoric {

namespace {

constexpr long kNotMember = -1;
constexpr long kIsZero = -2;

PreconditionError not_normal_error(const NormalityResult& nr) {
  return PreconditionError("semigroup is not normal",
                           {{"g", nr.witness->to_string()}, {"p", nr.witness_multiple.get_str()}});
}

void require_full(const AffineSemigroup& s) {
  if (!s.is_full())
    throw PreconditionError("semigroup does not generate Z^d as a group",
                            {{"rank", std::to_string(s.rank())},
                             {"dim", std::to_string(s.ambient_dim())},
                             {"index", s.group().full_rank_index().get_str()}});
}

void require_pointed(const AffineSemigroup& s) {
  if (s.is_pointed()) return;
  const IntMatrix normals = facet_normals(s.embedded_facets());
  IntMatrix kernel = normals.empty() ? IntMatrix{IntVector::unit(s.rank(), 0)}
                                     : integer_kernel(normals, s.rank());
  throw PreconditionError("semigroup cone contains a line",
                          {{"line", s.group().from_coordinates(kernel.front()).to_string()}});
}

void l1_recurse(IntVector& x, std::size_t i, long budget,
                const std::function<void(const IntVector&)>& visit) {
  if (i == x.dim()) {
    visit(x);
    return;
  }
  for (long v = -budget; v <= budget; ++v) {
    x[i] = v;
    l1_recurse(x, i + 1, budget - (v < 0 ? -v : v), visit);
  }
  x[i] = 0;
}

void composition_recurse(IntVector& x, std::size_t i, long remaining,
                         const std::function<void(const IntVector&)>& visit) {
  if (i + 1 == x.dim()) {
    x[i] = remaining;
    visit(x);
    x[i] = 0;
    return;
  }
  for (long v = remaining; v >= 0; --v) {
    x[i] = v;
    composition_recurse(x, i + 1, remaining - v, visit);
  }
  x[i] = 0;
}

}  // namespace

struct AffineSemigroup::Cache {
  std::mutex mutex;
  std::map<IntVector, long> positive_memo;  // ambient coordinates
  std::map<IntVector, long> pointed_memo;   // group coordinates
};

AffineSemigroup::AffineSemigroup(std::vector<IntVector> generators, std::size_t ambient_dim)
    : ambient_dim_(ambient_dim), cache_(std::make_shared<Cache>()) {
  require_dim(generators, ambient_dim, "AffineSemigroup");
  std::set<IntVector> seen;
  for (auto& g : generators) {
    if (g.is_zero() || !seen.insert(g).second) continue;
    generators_.push_back(std::move(g));
  }
  for (const auto& g : generators_) positive_ = positive_ && g.is_nonnegative();
  group_ = lattice_of(generators_, ambient_dim_);
  for (const auto& g : generators_) embedded_generators_.push_back(*group_.coordinates(g));
  const std::size_t r = group_.rank();
  grading_ = IntVector(r);
  if (r == 0) return;
  embedded_facets_ = cone_facets(Cone{embedded_generators_, r});
  const IntMatrix normals = facet_normals(embedded_facets_);
  pointed_ = rank_of(normals, r) == r;
  if (pointed_) {
    for (const auto& n : normals) grading_ += n;
    grading_ = primitive(grading_);
  }
}

const std::vector<Facet>& AffineSemigroup::facets() const {
  require_full(*this);
  // The Hermite basis of Z^d is the identity, so group coordinates are ambient.
  return embedded_facets_;
}

MembershipResult AffineSemigroup::membership(const IntVector& x,
                                             std::optional<std::size_t> bound) const {
  if (x.dim() != ambient_dim_)
    throw std::invalid_argument("membership: " + x.to_string() + " is not in dimension " +
                                std::to_string(ambient_dim_));
  MembershipResult result;
  result.bounded = bound.has_value();
  if (x.is_zero()) {
    result.member = true;
    return result;
  }
  if (generators_.empty()) return result;

  if (bound) {
    auto y = group_.coordinates(x);
    if (!y) return result;
    std::set<std::tuple<IntVector, std::size_t, std::size_t>> failed;
    std::vector<std::size_t> path;
    std::function<bool(const IntVector&, std::size_t, std::size_t)> search =
        [&](const IntVector& v, std::size_t start, std::size_t remaining) -> bool {
      if (v.is_zero()) return true;
      if (remaining == 0) return false;
      auto key = std::make_tuple(v, start, remaining);
      if (failed.count(key)) return false;
      ++result.states_explored;
      for (std::size_t i = start; i < embedded_generators_.size(); ++i) {
        path.push_back(i);
        if (search(v - embedded_generators_[i], i, remaining - 1)) return true;
        path.pop_back();
      }
      failed.insert(std::move(key));
      return false;
    };
    if (search(*y, 0, *bound)) {
      result.member = true;
      result.witness = path;
    }
    return result;
  }

  if (!pointed_) {
    throw PreconditionError(
        "membership in a semigroup whose cone contains a line needs an explicit search bound",
        {{"x", x.to_string()}});
  }

  std::lock_guard<std::mutex> lock(cache_->mutex);
  if (positive_) {
    // Coordinates only decrease, and the total degree drops with every step.
    if (!x.is_nonnegative()) return result;
    auto& memo = cache_->positive_memo;
    std::function<long(const IntVector&)> solve = [&](const IntVector& v) -> long {
      if (v.is_zero()) return kIsZero;
      if (auto it = memo.find(v); it != memo.end()) return it->second;
      ++result.states_explored;
      long found = kNotMember;
      for (std::size_t i = 0; i < generators_.size() && found == kNotMember; ++i) {
        IntVector rest = v - generators_[i];
        if (rest.is_nonnegative() && solve(rest) != kNotMember) found = static_cast<long>(i);
      }
      memo.emplace(v, found);
      return found;
    };
    if (solve(x) == kNotMember) return result;
    result.member = true;
    for (IntVector v = x; !v.is_zero();) {
      long i = memo.at(v);
      result.witness.push_back(static_cast<std::size_t>(i));
      v -= generators_[static_cast<std::size_t>(i)];
    }
  } else {
    auto y = group_.coordinates(x);
    if (!y) return result;
    auto& memo = cache_->pointed_memo;
    std::function<long(const IntVector&)> solve = [&](const IntVector& v) -> long {
      if (v.is_zero()) return kIsZero;
      if (dot(grading_, v) <= 0) return kNotMember;
      if (auto it = memo.find(v); it != memo.end()) return it->second;
      ++result.states_explored;
      long found = kNotMember;
      for (std::size_t i = 0; i < embedded_generators_.size() && found == kNotMember; ++i)
        if (solve(v - embedded_generators_[i]) != kNotMember) found = static_cast<long>(i);
      memo.emplace(v, found);
      return found;
    };
    if (solve(*y) == kNotMember) return result;
    result.member = true;
    for (IntVector v = *y; !v.is_zero();) {
      long i = memo.at(v);
      result.witness.push_back(static_cast<std::size_t>(i));
      v -= embedded_generators_[static_cast<std::size_t>(i)];
    }
  }
  std::sort(result.witness.begin(), result.witness.end());
  return result;
}

FullEmbedding full_embedding(const AffineSemigroup& s) {
  FullEmbedding e{s.rank(), AffineSemigroup(s.embedded_generators(), s.rank()), s.group()};
  for (std::size_t i = 0; i < s.generators().size(); ++i)
    if (e.group.from_coordinates(s.embedded_generators()[i]) != s.generators()[i])
      throw VerificationError("full embedding does not invert on generator " +
                              s.generators()[i].to_string());
  return e;
}

NormalityResult is_normal(const AffineSemigroup& s) {
  require_pointed(s);
  NormalityResult out;
  if (s.is_trivial()) return out;
  out.hilbert_basis = hilbert_basis(s.cone(), s.group());
  for (const auto& h : out.hilbert_basis) {
    if (s.contains(h)) continue;
    out.normal = false;
    out.witness = h;
    // Some multiple lies in S: h is a nonnegative rational combination of generators.
    for (long p = 2; p <= 100000; ++p) {
      if (s.contains(Integer(p) * h)) {
        out.witness_multiple = p;
        return out;
      }
    }
    throw VerificationError("no multiple of the cone point " + h.to_string() + " lies in S");
  }
  return out;
}

namespace {

FacetSemigroup build_facet_semigroup(const AffineSemigroup& s, const Facet& tau,
                                     std::size_t verify_degree) {
  const std::size_t d = s.ambient_dim();
  const IntVector& n = tau.inner_normal;
  FacetSemigroup fs;
  fs.facet = tau;

  // Column reduction of n: U n^T = (1, 0, ..., 0)^T because n is primitive.
  IntMatrix column;
  for (std::size_t j = 0; j < d; ++j) column.push_back(IntVector(std::vector<Integer>{n[j]}));
  HermiteForm h = row_hermite(column, 1);
  if (h.rank != 1 || h.echelon[0][0] != 1)
    throw VerificationError("facet normal " + n.to_string() + " is not primitive");
  fs.complement = h.transform[0];
  IntMatrix kernel(h.transform.begin() + 1, h.transform.end());
  Sublattice units = lattice_of(kernel, d);
  fs.unit_basis = units.basis();

  for (const auto& g : s.generators()) {
    Integer pairing = dot(n, g);
    if (pairing == 0) fs.incident_generators.push_back(g);
    if (pairing > 0) fs.positive_generators.push_back(g);
  }
  Sublattice incident = lattice_of(fs.incident_generators, d);
  fs.incident_generators_span_units = incident.rank() + 1 == d;
  for (const auto& u : fs.unit_basis)
    fs.incident_generators_span_units = fs.incident_generators_span_units && incident.contains(u);

  IntMatrix iso = fs.unit_basis;
  iso.push_back(fs.complement);
  fs.iso_determinant = determinant(iso);
  if (abs(fs.iso_determinant) != 1 || dot(n, fs.complement) != 1)
    throw VerificationError("facet semigroup isomorphism witness is not unimodular");
  for (const auto& u : fs.unit_basis)
    if (dot(n, u) != 0) throw VerificationError("unit basis vector off the facet hyperplane");

  for_each_l1_point(d, verify_degree, [&](const IntVector& x) {
    const bool in_halfspace = fs.contains(x);
    if (fs.in_presentation(x) != in_halfspace)
      throw VerificationError("facet semigroup presentation disagrees with D_tau at " +
                              x.to_string());
    IntVector y = fs.to_standard(x);
    if (fs.from_standard(y) != x || (y[d - 1] >= 0) != in_halfspace)
      throw VerificationError("facet semigroup isomorphism fails at " + x.to_string());
  });
  fs.verified_degree = verify_degree;
  return fs;
}

}  // namespace

bool FacetSemigroup::in_presentation(const IntVector& x) const {
  const Integer k = dot(facet.inner_normal, x);
  if (k < 0) return false;
  if (!k.fits_slong_p()) throw LimitError("facet height too large", {{"height", k.get_str()}});
  const long height = k.get_si();
  // Knapsack over the heights of the positive generators.
  std::vector<long> back(static_cast<std::size_t>(height) + 1, -1);
  std::vector<bool> reach(static_cast<std::size_t>(height) + 1, false);
  reach[0] = true;
  std::vector<long> heights;
  for (const auto& g : positive_generators) heights.push_back(dot(facet.inner_normal, g).get_si());
  for (long v = 1; v <= height; ++v) {
    for (std::size_t i = 0; i < heights.size(); ++i) {
      if (heights[i] <= v && reach[static_cast<std::size_t>(v - heights[i])]) {
        reach[static_cast<std::size_t>(v)] = true;
        back[static_cast<std::size_t>(v)] = static_cast<long>(i);
        break;
      }
    }
  }
  if (!reach[static_cast<std::size_t>(height)]) return false;
  IntVector rest = x;
  for (long v = height; v > 0;) {
    const auto i = static_cast<std::size_t>(back[static_cast<std::size_t>(v)]);
    rest -= positive_generators[i];
    v -= heights[i];
  }
  return lattice_of(unit_basis, x.dim()).contains(rest);
}

IntVector FacetSemigroup::to_standard(const IntVector& x) const {
  const std::size_t d = x.dim();
  const Integer k = dot(facet.inner_normal, x);
  auto coords = lattice_of(unit_basis, d).coordinates(x - k * complement);
  if (!coords) throw VerificationError("unit part of " + x.to_string() + " is off the unit lattice");
  std::vector<Integer> y = coords->entries();
  y.push_back(k);
  return IntVector(std::move(y));
}

IntVector FacetSemigroup::from_standard(const IntVector& y) const {
  IntVector x = y[unit_basis.size()] * complement;
  for (std::size_t i = 0; i < unit_basis.size(); ++i) x += y[i] * unit_basis[i];
  return x;
}

FacetSemigroup facet_subsemigroup(const AffineSemigroup& s, const Facet& tau,
                                  std::size_t verify_degree) {
  require_full(s);
  require_pointed(s);
  NormalityResult nr = is_normal(s);
  if (!nr.normal) throw not_normal_error(nr);
  const auto& facets = s.facets();
  auto it = std::find_if(facets.begin(), facets.end(), [&](const Facet& f) {
    return f.inner_normal == tau.inner_normal;
  });
  if (it == facets.end())
    throw PreconditionError("not a facet of the semigroup cone",
                            {{"normal", tau.inner_normal.to_string()}});
  return build_facet_semigroup(s, *it, verify_degree);
}

Decomposition decompose(const AffineSemigroup& s, std::size_t verify_degree) {
  require_full(s);
  require_pointed(s);
  NormalityResult nr = is_normal(s);
  if (!nr.normal) throw not_normal_error(nr);
  Decomposition out;
  for (const auto& f : s.facets()) out.facets.push_back(build_facet_semigroup(s, f, verify_degree));
  for_each_l1_point(s.ambient_dim(), verify_degree, [&](const IntVector& x) {
    bool in_all = true;
    for (const auto& f : out.facets) in_all = in_all && f.contains(x);
    if (s.contains(x) != in_all)
      throw VerificationError("S differs from the intersection of facet semigroups at " +
                              x.to_string());
    ++out.points_checked;
  });
  out.verified_degree = verify_degree;
  out.verified = true;
  return out;
}

const char* to_string(TriState t) {
  switch (t) {
    case TriState::yes: return "yes";
    case TriState::no: return "no";
    case TriState::inapplicable: return "inapplicable";
  }
  return "?";
}

RegularityReport regularity_report(const AffineSemigroup& s, std::size_t verification_bound) {
  require_pointed(s);
  RegularityReport rep;
  rep.verification_bound = verification_bound;
  rep.rank = s.rank();
  rep.facet_normals = facet_normals(s.embedded_facets());

  NormalityResult nr = is_normal(s);
  rep.normal = nr.normal;
  rep.maximal_order = nr.normal;
  rep.hilbert_basis = nr.hilbert_basis;
  if (!nr.normal) {
    rep.normality_witness = nr.witness;
    rep.normality_witness_multiple = nr.witness_multiple;
    return rep;
  }
  // Hochster: normal affine semigroup rings are Cohen-Macaulay.
  rep.cohen_macaulay = TriState::yes;
  IntVector ones(rep.facet_normals.size());
  for (std::size_t i = 0; i < ones.dim(); ++i) ones[i] = 1;
  auto c = solve_integer_system(rep.facet_normals, ones, s.rank());
  rep.gorenstein = c ? TriState::yes : TriState::no;
  if (c) {
    rep.gorenstein_witness_embedded = *c;
    rep.gorenstein_witness = s.group().from_coordinates(*c);
  }
  IntMatrix embedded_hb;
  for (const auto& h : rep.hilbert_basis) embedded_hb.push_back(*s.group().coordinates(h));
  rep.regular = embedded_hb.size() == s.rank() && abs(determinant(embedded_hb)) == 1;
  if (rep.regular && rep.gorenstein != TriState::yes)
    throw VerificationError("regular semigroup reported as non-Gorenstein");
  return rep;
}

std::vector<std::size_t> hilbert_function(const AffineSemigroup& s, std::size_t degree) {
  if (!s.is_positive())
    throw PreconditionError("hilbert_function needs generators in N^d");
  std::vector<std::size_t> counts(degree + 1, 0);
  for (std::size_t k = 0; k <= degree; ++k) {
    if (s.ambient_dim() == 0) {
      counts[k] = k == 0 ? 1 : 0;
      continue;
    }
    for_each_composition(s.ambient_dim(), k, [&](const IntVector& x) {
      if (s.contains(x)) ++counts[k];
    });
  }
  return counts;
}

std::vector<IntVector> elements_up_to_degree(const AffineSemigroup& s, std::size_t degree) {
  if (!s.is_positive())
    throw PreconditionError("element enumeration needs generators in N^d");
  std::vector<IntVector> out;
  if (s.ambient_dim() == 0) return {IntVector()};
  for (std::size_t k = 0; k <= degree; ++k)
    for_each_composition(s.ambient_dim(), k, [&](const IntVector& x) {
      if (s.contains(x)) out.push_back(x);
    });
  std::sort(out.begin(), out.end());
  return out;
}

void for_each_l1_point(std::size_t dim, std::size_t radius,
                       const std::function<void(const IntVector&)>& visit) {
  IntVector x(dim);
  l1_recurse(x, 0, static_cast<long>(radius), visit);
}

void for_each_composition(std::size_t dim, std::size_t total,
                          const std::function<void(const IntVector&)>& visit) {
  if (dim == 0) {
    if (total == 0) visit(IntVector());
    return;
  }
  IntVector x(dim);
  composition_recurse(x, 0, static_cast<long>(total), visit);
}

}  // namespace qtoric
