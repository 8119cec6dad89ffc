#include "qtoric/twisted_algebra.hpp"

#include <deque>
#include <set>
#include <stdexcept>

namespace qtoric {

namespace {

std::string term_string(const IntVector& s, const Coefficient& c) {
  const std::string x = "X^" + s.to_string();
  if (auto m = c.as_monomial()) {
    if (m->is_one()) return x;
    return m->to_string() + "*" + x;
  }
  return "(" + c.to_string() + ")*" + x;
}

void check_support(const TwistedAlgebra& a, const TwistedElement& x) {
  for (const auto& [s, c] : x.terms())
    if (!a.in_domain(s))
      throw PreconditionError("support outside the algebra's domain", {{"exponent", s.to_string()}});
}

/// Points of the algebra's domain inside the box [0, bound]^d.
std::vector<IntVector> grid_points(const TwistedAlgebra& a, std::size_t bound) {
  std::vector<IntVector> out;
  const std::size_t d = a.dim();
  IntVector x(d);
  while (true) {
    if (a.in_domain(x)) out.push_back(x);
    std::size_t i = 0;
    for (; i < d; ++i) {
      if (x[i] < static_cast<long>(bound)) {
        x[i] += 1;
        break;
      }
      x[i] = 0;
    }
    if (i == d) break;
  }
  return out;
}

/// Domain points with |x|₁ <= degree, sorted.
std::vector<IntVector> points_up_to_degree(const TwistedAlgebra& a, std::size_t degree) {
  if (a.domain() == TwistedAlgebra::Domain::semigroup && a.semigroup().is_positive())
    return elements_up_to_degree(a.semigroup(), degree);
  std::set<IntVector> pts;
  for_each_l1_point(a.dim(), degree, [&](const IntVector& x) {
    if (a.in_domain(x)) pts.insert(x);
  });
  return {pts.begin(), pts.end()};
}

ScalarMonomial monomial_coefficient(const TwistedElement& x, const char* what) {
  auto m = x.as_monomial();
  if (!m) throw VerificationError(std::string(what) + " is not a monomial");
  return m->first;
}

}  // namespace

// TwistedElement

TwistedElement TwistedElement::monomial(const IntVector& s, const Coefficient& c) {
  TwistedElement x;
  x.add_term(s, c);
  return x;
}

void TwistedElement::add_term(const IntVector& s, const Coefficient& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(s, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

std::optional<std::pair<ScalarMonomial, IntVector>> TwistedElement::as_monomial() const {
  if (terms_.size() != 1) return std::nullopt;
  auto m = terms_.begin()->second.as_monomial();
  if (!m) return std::nullopt;
  return std::make_pair(*m, terms_.begin()->first);
}

TwistedElement& TwistedElement::operator+=(const TwistedElement& o) {
  for (const auto& [s, c] : o.terms_) add_term(s, c);
  return *this;
}

TwistedElement& TwistedElement::operator-=(const TwistedElement& o) {
  for (const auto& [s, c] : o.terms_) add_term(s, Coefficient() - c);
  return *this;
}

TwistedElement operator*(const Coefficient& c, const TwistedElement& x) {
  TwistedElement out;
  for (const auto& [s, d] : x.terms_) out.add_term(s, c * d);
  return out;
}

std::string TwistedElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!out.empty()) out += " + ";
    out += term_string(it->first, it->second);
  }
  return out;
}

// TwistedAlgebra

TwistedAlgebra::TwistedAlgebra(Domain domain, std::optional<AffineSemigroup> s, IntVector normal,
                               Cocycle alpha)
    : domain_(domain), semigroup_(std::move(s)), normal_(std::move(normal)), alpha_(std::move(alpha)) {
  if (semigroup_ && semigroup_->ambient_dim() != alpha_.dim())
    throw std::invalid_argument("cocycle dimension differs from the semigroup's ambient dimension");
  if (domain_ == Domain::half_space && normal_.dim() != alpha_.dim())
    throw std::invalid_argument("half-space normal dimension differs from the cocycle's");
}

TwistedAlgebra::TwistedAlgebra(AffineSemigroup s, Cocycle alpha)
    : TwistedAlgebra(Domain::semigroup, std::move(s), IntVector(), std::move(alpha)) {}

TwistedAlgebra TwistedAlgebra::torus(Cocycle alpha) {
  return TwistedAlgebra(Domain::torus, std::nullopt, IntVector(), std::move(alpha));
}

TwistedAlgebra TwistedAlgebra::half_space(IntVector inner_normal, Cocycle alpha) {
  return TwistedAlgebra(Domain::half_space, std::nullopt, std::move(inner_normal), std::move(alpha));
}

const AffineSemigroup& TwistedAlgebra::semigroup() const {
  if (!semigroup_) throw std::logic_error("algebra is not defined over an affine semigroup");
  return *semigroup_;
}

bool TwistedAlgebra::in_domain(const IntVector& x) const {
  if (x.dim() != dim()) return false;
  switch (domain_) {
    case Domain::torus:
      return true;
    case Domain::half_space:
      return dot(normal_, x) >= 0;
    case Domain::semigroup:
      return semigroup_->contains(x);
  }
  return false;
}

TwistedElement TwistedAlgebra::monomial(const IntVector& s) const {
  if (!in_domain(s))
    throw PreconditionError("exponent outside the algebra's domain", {{"exponent", s.to_string()}});
  return TwistedElement::monomial(s);
}

// Products

TwistedElement torus_product(const Cocycle& alpha, const TwistedElement& x,
                             const TwistedElement& y) {
  TwistedElement out;
  for (const auto& [s, c] : x.terms())
    for (const auto& [t, d] : y.terms()) out.add_term(s + t, c * d * Coefficient(alpha(s, t)));
  return out;
}

TwistedElement product(const TwistedAlgebra& a, const TwistedElement& x, const TwistedElement& y) {
  check_support(a, x);
  check_support(a, y);
  return torus_product(a.cocycle(), x, y);
}

TwistedElement torus_inverse(const Cocycle& alpha, const IntVector& t) {
  return TwistedElement::monomial(-t, alpha(t, -t).inverse());
}

TwistedElement torus_power(const Cocycle& alpha, const TwistedElement& x, long k) {
  auto m = x.as_monomial();
  if (!m) throw std::invalid_argument("torus_power expects a monomial");
  TwistedElement base = x;
  if (k < 0) {
    base = m->first.inverse() * torus_inverse(alpha, m->second);
    k = -k;
  }
  TwistedElement out = TwistedElement::monomial(IntVector(alpha.dim()));
  for (long i = 0; i < k; ++i) out = torus_product(alpha, out, base);
  return out;
}

LeadingTerm leading_term(const TwistedElement& x) {
  if (x.is_zero()) throw PreconditionError("leading term of the zero element");
  const auto& last = *x.terms().rbegin();
  return {last.second, last.first};
}

bool subalgebra_membership(const TwistedAlgebra& a, const TwistedElement& x) {
  for (const auto& [s, c] : x.terms())
    if (!a.in_domain(s)) return false;
  return true;
}

// Quantum torus embedding

TorusEmbedding quantum_torus_embedding(const TwistedAlgebra& a, std::size_t search_bound) {
  const std::size_t d = a.dim();
  const Cocycle& alpha = a.cocycle();
  TorusEmbedding out;
  out.rank = d;
  out.search_bound = search_bound;

  IntMatrix generators;
  if (a.domain() == TwistedAlgebra::Domain::semigroup) {
    const AffineSemigroup& s = a.semigroup();
    if (!s.is_full())
      throw PreconditionError("semigroup does not generate Z^d as a group",
                              {{"rank", std::to_string(s.rank())},
                               {"dim", std::to_string(d)},
                               {"index", s.group().full_rank_index().get_str()}});
    generators = s.generators();

    // Sums of generators by number of summands, deduplicated, in sorted order.
    std::vector<IntVector> frontier{IntVector(d)};
    std::set<IntVector> seen(frontier.begin(), frontier.end());
    std::vector<IntVector> translates = frontier;
    if (s.is_pointed()) {
      for (std::size_t level = 0; level < search_bound; ++level) {
        std::set<IntVector> next;
        for (const auto& t : frontier)
          for (const auto& g : generators)
            if (!seen.count(t + g)) next.insert(t + g);
        frontier.assign(next.begin(), next.end());
        for (const auto& t : frontier) {
          seen.insert(t);
          translates.push_back(t);
        }
      }
    }
    for (std::size_t i = 0; i < d; ++i) {
      const IntVector e = IntVector::unit(d, i);
      std::optional<std::pair<IntVector, IntVector>> found;
      if (s.is_pointed()) {
        for (const auto& t : translates)
          if (s.contains(t + e)) {
            found = std::make_pair(t + e, t);
            break;
          }
      }
      out.found_by_search.push_back(found.has_value());
      if (!found) {
        // e_i = Σ c_j g_j from the unimodular transform of the group's Hermite form.
        const IntVector& row = s.group().input_transform()[i];
        IntVector plus(d), minus(d);
        for (std::size_t j = 0; j < generators.size(); ++j) {
          if (row[j] > 0) plus += row[j] * generators[j];
          if (row[j] < 0) minus -= row[j] * generators[j];
        }
        if (plus - minus != e) throw VerificationError("integer split of e_i is wrong");
        found = std::make_pair(plus, minus);
      }
      out.differences.push_back(*found);
    }
  } else {
    for (std::size_t i = 0; i < d; ++i) {
      generators.push_back(IntVector::unit(d, i));
      out.differences.emplace_back(IntVector::unit(d, i), IntVector(d));
      out.found_by_search.push_back(true);
    }
  }

  std::vector<TwistedElement> y;
  for (std::size_t i = 0; i < d; ++i) {
    const auto& [si, ti] = out.differences[i];
    TwistedElement yi = torus_product(alpha, TwistedElement::monomial(si), torus_inverse(alpha, ti));
    auto m = yi.as_monomial();
    if (!m || m->second != IntVector::unit(d, i))
      throw VerificationError("Y_" + std::to_string(i) + " is not a multiple of X^{e_i}");
    out.y_scalars.push_back(m->first);
    y.push_back(std::move(yi));
  }

  out.q_prime.assign(d, std::vector<ScalarMonomial>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const ScalarMonomial ij = monomial_coefficient(torus_product(alpha, y[i], y[j]), "Y_iY_j");
      const ScalarMonomial ji = monomial_coefficient(torus_product(alpha, y[j], y[i]), "Y_jY_i");
      out.q_prime[i][j] = ij / ji;
    }
  if (!is_multiplicatively_skew(out.q_prime))
    throw VerificationError("q' is not multiplicatively skew-symmetric");

  for (const auto& g : generators) {
    TwistedElement yg = TwistedElement::monomial(IntVector(d));
    for (std::size_t i = 0; i < d; ++i)
      if (g[i] != 0) yg = torus_product(alpha, yg, torus_power(alpha, y[i], g[i].get_si()));
    auto m = yg.as_monomial();
    if (!m || m->second != g)
      throw VerificationError("Y^g is not a multiple of X^g for g = " + g.to_string());
    out.generator_scalars.push_back(m->first.inverse());
  }
  return out;
}

// Twisting systems

TwistedElement TwistingSystem::apply(const IntVector& t, const TwistedElement& a) const {
  TwistedElement out;
  for (const auto& [s, c] : a.terms()) out.add_term(s, c * Coefficient(alpha_(s, t)));
  return out;
}

TwistedElement TwistingSystem::twisted_product(const TwistedElement& a,
                                               const TwistedElement& b) const {
  const Cocycle commutative = Cocycle::trivial(alpha_.dim());
  TwistedElement out;
  for (const auto& [t, c] : b.terms())
    out += torus_product(commutative, apply(t, a), TwistedElement::monomial(t, c));
  return out;
}

TwistCheck twisting_system(const TwistedAlgebra& a, std::size_t grid_bound,
                           std::size_t product_degree) {
  TwistCheck out{TwistingSystem(a.cocycle())};
  const TwistingSystem& tau = out.system;
  const Cocycle commutative = Cocycle::trivial(a.dim());
  const IntVector zero(a.dim());
  const TwistedElement one = TwistedElement::monomial(zero);

  const std::vector<IntVector> grid = grid_points(a, grid_bound);
  out.grid_bound = grid_bound;
  out.grid_points = grid.size();
  for (const auto& g : grid) {
    const TwistedElement xg = TwistedElement::monomial(g);
    if (tau.apply(zero, xg) != xg) throw VerificationError("τ_0 is not the identity");
    if (tau.apply(g, one) != one) throw VerificationError("τ_t(1) != 1");
  }
  // τ_{g''}(τ_{g'}(a) a') = τ_{g'+g''}(a) τ_{g''}(a') for a = X^g, a' = X^{g'}.
  for (const auto& g : grid) {
    const TwistedElement x = TwistedElement::monomial(g);
    for (const auto& g1 : grid) {
      const TwistedElement x1 = TwistedElement::monomial(g1);
      for (const auto& g2 : grid) {
        const TwistedElement lhs =
            tau.apply(g2, torus_product(commutative, tau.apply(g1, x), x1));
        const TwistedElement rhs =
            torus_product(commutative, tau.apply(g1 + g2, x), tau.apply(g2, x1));
        if (lhs != rhs)
          throw VerificationError("twisting axiom fails at " + g.to_string() + ", " +
                                  g1.to_string() + ", " + g2.to_string());
        ++out.axiom_instances;
      }
    }
  }

  const std::vector<IntVector> pts = points_up_to_degree(a, product_degree);
  out.product_degree = product_degree;
  for (const auto& s : pts)
    for (const auto& t : pts) {
      const TwistedElement xs = TwistedElement::monomial(s);
      const TwistedElement xt = TwistedElement::monomial(t);
      if (tau.twisted_product(xs, xt) != torus_product(a.cocycle(), xs, xt))
        throw VerificationError("twisted product differs at " + s.to_string() + ", " +
                                t.to_string());
      ++out.product_pairs;
    }
  return out;
}

// Facet localization

FacetLocalization localize_at_facet(const TwistedAlgebra& a, const Facet& tau,
                                    std::size_t verify_degree) {
  const AffineSemigroup& s = a.semigroup();
  FacetSemigroup fs = facet_subsemigroup(s, tau, verify_degree);
  const std::size_t d = a.dim();

  IntMatrix images;
  for (std::size_t i = 0; i < d; ++i) images.push_back(fs.from_standard(IntVector::unit(d, i)));
  ScalarMatrix q_tau = commutation_matrix(a.cocycle(), images);
  if (!is_multiplicatively_skew(q_tau))
    throw VerificationError("q_tau is not multiplicatively skew-symmetric");

  IntVector f(d);
  for (const auto& g : fs.incident_generators) f += g;

  // For x ∈ S_τ the smallest m with x + m·f in every other half-space; S is
  // normal, so the cone test decides membership, which is then confirmed.
  std::size_t checked = 0;
  for_each_l1_point(d, verify_degree, [&](const IntVector& x) {
    if (!fs.contains(x)) return;
    Integer m = 0;
    for (const auto& other : s.facets()) {
      const Integer fx = dot(other.inner_normal, x);
      const Integer ff = dot(other.inner_normal, f);
      if (fx >= 0) continue;
      if (ff <= 0)
        throw VerificationError("facet generator sum does not move " + x.to_string() + " into S");
      const Integer need = -floor_div(fx, ff);
      if (need > m) m = need;
    }
    if (!s.contains(x + m * f))
      throw VerificationError("localization check fails at " + x.to_string());
    ++checked;
  });

  FacetLocalization out{std::move(fs),
                        TwistedAlgebra::half_space(tau.inner_normal, a.cocycle()),
                        std::move(images),
                        std::move(q_tau),
                        std::move(f),
                        verify_degree,
                        checked};
  return out;
}

std::vector<std::size_t> component_dimensions(const TwistedAlgebra& a, std::size_t degree) {
  if (a.domain() != TwistedAlgebra::Domain::semigroup || !a.semigroup().is_positive())
    throw PreconditionError("component dimensions need a positive semigroup domain");
  const AffineSemigroup& s = a.semigroup();
  std::vector<std::size_t> counts(degree + 1, 0);
  std::set<IntVector> reached;
  std::deque<TwistedElement> queue{TwistedElement::monomial(IntVector(a.dim()))};
  reached.insert(IntVector(a.dim()));
  while (!queue.empty()) {
    const TwistedElement x = std::move(queue.front());
    queue.pop_front();
    const IntVector& sx = x.terms().begin()->first;
    counts[sx.sum().get_ui()] += 1;
    for (const auto& g : s.generators()) {
      const IntVector next = sx + g;
      if (next.sum() > static_cast<long>(degree) || reached.count(next)) continue;
      TwistedElement y = torus_product(a.cocycle(), x, TwistedElement::monomial(g));
      if (y.is_zero()) continue;
      reached.insert(next);
      queue.push_back(std::move(y));
    }
  }
  return counts;
}

}  // namespace qtoric
