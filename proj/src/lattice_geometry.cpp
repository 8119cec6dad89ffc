#include "qtoric/lattice_geometry.hpp"

#include <algorithm>
#include <iterator>
#include <set>

namespace qtoric {

namespace {

IntMatrix identity(std::size_t n) {
  IntMatrix m;
  m.reserve(n);
  for (std::size_t i = 0; i < n; ++i) m.push_back(IntVector::unit(n, i));
  return m;
}

void axpy_row(IntVector& target, const Integer& q, const IntVector& source) {
  for (std::size_t j = 0; j < target.dim(); ++j) target[j] -= q * source[j];
}

IntMatrix transpose(const IntMatrix& rows, std::size_t cols) {
  IntMatrix t(cols, IntVector(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) t[j][i] = rows[i][j];
  return t;
}

// Normal vector of the hyperplane spanned by d-1 vectors in Z^d, via cofactors.
IntVector cofactor_normal(const IntMatrix& rows, std::size_t d) {
  IntVector n(d);
  for (std::size_t j = 0; j < d; ++j) {
    IntMatrix minor;
    minor.reserve(rows.size());
    for (const auto& r : rows) {
      IntVector m(d - 1);
      for (std::size_t c = 0, k = 0; c < d; ++c)
        if (c != j) m[k++] = r[c];
      minor.push_back(std::move(m));
    }
    Integer det = determinant(minor);
    n[j] = (j % 2 == 0) ? det : Integer(-det);
  }
  return n;
}

// Echelon back-substitution shared by Sublattice and the integer solver.
std::optional<IntVector> echelon_coordinates(const IntMatrix& basis,
                                             const std::vector<std::size_t>& pivots,
                                             const IntVector& x) {
  IntVector y(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Integer acc = x[pivots[k]];
    for (std::size_t j = 0; j < k; ++j) acc -= y[j] * basis[j][pivots[k]];
    if (!mpz_divisible_p(acc.get_mpz_t(), basis[k][pivots[k]].get_mpz_t())) return std::nullopt;
    y[k] = exact_div(acc, basis[k][pivots[k]]);
  }
  IntVector back(x.dim());
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (std::size_t j = 0; j < x.dim(); ++j) back[j] += y[k] * basis[k][j];
  if (back != x) return std::nullopt;
  return y;
}

}  // namespace

HermiteForm row_hermite(const IntMatrix& rows, std::size_t dim) {
  require_dim(rows, dim, "row_hermite");
  const std::size_t m = rows.size();
  HermiteForm h;
  h.echelon = rows;
  h.transform = identity(m);
  auto& e = h.echelon;
  auto& u = h.transform;
  std::size_t r = 0;
  for (std::size_t c = 0; c < dim && r < m; ++c) {
    bool have_pivot = false;
    while (true) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i)
        if (e[i][c] != 0 && (best == m || abs(e[i][c]) < abs(e[best][c]))) best = i;
      if (best == m) break;
      have_pivot = true;
      std::swap(e[r], e[best]);
      std::swap(u[r], u[best]);
      bool clean = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (e[i][c] == 0) continue;
        Integer q = floor_div(e[i][c], e[r][c]);
        axpy_row(e[i], q, e[r]);
        axpy_row(u[i], q, u[r]);
        if (e[i][c] != 0) clean = false;
      }
      if (clean) break;
    }
    if (!have_pivot) continue;
    if (e[r][c] < 0) {
      e[r] = -e[r];
      u[r] = -u[r];
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q = floor_div(e[i][c], e[r][c]);
      if (q == 0) continue;
      axpy_row(e[i], q, e[r]);
      axpy_row(u[i], q, u[r]);
    }
    h.pivots.push_back(c);
    ++r;
  }
  h.rank = r;
  return h;
}

std::size_t rank_of(const std::vector<IntVector>& rows, std::size_t dim) {
  return row_hermite(rows, dim).rank;
}

Sublattice::Sublattice(std::size_t ambient_dim, IntMatrix basis, std::vector<std::size_t> pivots,
                       IntMatrix input_transform)
    : ambient_dim_(ambient_dim),
      basis_(std::move(basis)),
      pivots_(std::move(pivots)),
      input_transform_(std::move(input_transform)) {}

std::optional<IntVector> Sublattice::coordinates(const IntVector& x) const {
  if (x.dim() != ambient_dim_) throw std::invalid_argument("coordinates: dimension mismatch");
  return echelon_coordinates(basis_, pivots_, x);
}

std::optional<RatVector> Sublattice::rational_coordinates(const IntVector& x) const {
  if (x.dim() != ambient_dim_) throw std::invalid_argument("coordinates: dimension mismatch");
  RatVector y(rank());
  for (std::size_t k = 0; k < rank(); ++k) {
    Rational acc(x[pivots_[k]]);
    for (std::size_t j = 0; j < k; ++j) acc -= y[j] * basis_[j][pivots_[k]];
    y[k] = acc / basis_[k][pivots_[k]];
  }
  for (std::size_t j = 0; j < ambient_dim_; ++j) {
    Rational acc = 0;
    for (std::size_t k = 0; k < rank(); ++k) acc += y[k] * basis_[k][j];
    if (acc != x[j]) return std::nullopt;
  }
  return y;
}

IntVector Sublattice::from_coordinates(const IntVector& y) const {
  if (y.dim() != rank()) throw std::invalid_argument("from_coordinates: rank mismatch");
  IntVector x(ambient_dim_);
  for (std::size_t k = 0; k < rank(); ++k)
    for (std::size_t j = 0; j < ambient_dim_; ++j) x[j] += y[k] * basis_[k][j];
  return x;
}

bool Sublattice::is_full() const {
  return rank() == ambient_dim_ && full_rank_index() == 1;
}

Integer Sublattice::full_rank_index() const {
  if (rank() != ambient_dim_) return 0;
  return abs(determinant(basis_));
}

Sublattice lattice_of(const std::vector<IntVector>& vectors, std::size_t ambient_dim) {
  HermiteForm h = row_hermite(vectors, ambient_dim);
  IntMatrix basis(h.echelon.begin(), h.echelon.begin() + static_cast<long>(h.rank));
  return Sublattice(ambient_dim, std::move(basis), std::move(h.pivots), std::move(h.transform));
}

IntMatrix integer_kernel(const IntMatrix& rows, std::size_t dim) {
  require_dim(rows, dim, "integer_kernel");
  HermiteForm h = row_hermite(transpose(rows, dim), rows.size());
  return IntMatrix(h.transform.begin() + static_cast<long>(h.rank), h.transform.end());
}

std::optional<IntVector> solve_integer_system(const IntMatrix& rows, const IntVector& rhs,
                                              std::size_t dim) {
  require_dim(rows, dim, "solve_integer_system");
  if (rhs.dim() != rows.size()) throw std::invalid_argument("solve_integer_system: rhs size");
  // U * A^T = E, so A * U^T = E^T and A c = b reduces to b = sum_k y_k E_k.
  HermiteForm h = row_hermite(transpose(rows, dim), rows.size());
  IntMatrix basis(h.echelon.begin(), h.echelon.begin() + static_cast<long>(h.rank));
  auto y = echelon_coordinates(basis, h.pivots, rhs);
  if (!y) return std::nullopt;
  IntVector c(dim);
  for (std::size_t k = 0; k < h.rank; ++k)
    for (std::size_t j = 0; j < dim; ++j) c[j] += (*y)[k] * h.transform[k][j];
  return c;
}

IntMatrix facet_normals(const std::vector<Facet>& facets) {
  IntMatrix out;
  out.reserve(facets.size());
  for (const auto& f : facets) out.push_back(f.inner_normal);
  return out;
}

bool satisfies_all(const IntMatrix& normals, const IntVector& x) {
  for (const auto& n : normals)
    if (dot(n, x) < 0) return false;
  return true;
}

std::vector<Facet> cone_facets(const Cone& cone) {
  const std::size_t d = cone.dim_ambient;
  const IntMatrix& gens = cone.generators;
  require_dim(gens, d, "cone_facets");
  if (d > kMaxAmbientDim)
    throw LimitError("cone ambient dimension exceeds limit",
                     {{"dim", std::to_string(d)}, {"limit", std::to_string(kMaxAmbientDim)}});
  if (gens.size() > kMaxConeGenerators)
    throw LimitError("cone has too many generators", {{"generators", std::to_string(gens.size())},
                                                      {"limit", std::to_string(kMaxConeGenerators)}});
  if (d == 0) return {};
  const std::size_t r = rank_of(gens, d);
  if (r != d)
    throw PreconditionError("cone is not full-dimensional; restrict to its lattice span first",
                            {{"rank", std::to_string(r)}, {"dim", std::to_string(d)}});

  // Initial simplicial cone on d independent generators.
  std::vector<std::size_t> processed;
  IntMatrix chosen;
  for (std::size_t i = 0; i < gens.size() && chosen.size() < d; ++i) {
    chosen.push_back(gens[i]);
    if (rank_of(chosen, d) == chosen.size())
      processed.push_back(i);
    else
      chosen.pop_back();
  }
  std::set<IntVector> normals;
  for (std::size_t i = 0; i < d; ++i) {
    IntMatrix others;
    for (std::size_t j = 0; j < d; ++j)
      if (j != i) others.push_back(chosen[j]);
    IntVector n = primitive(cofactor_normal(others, d));
    if (dot(n, chosen[i]) < 0) n = -n;
    normals.insert(n);
  }

  // Beneath-beyond: add the remaining generators one at a time.
  std::vector<bool> is_processed(gens.size(), false);
  for (std::size_t i : processed) is_processed[i] = true;
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    if (is_processed[gi]) continue;
    const IntVector& g = gens[gi];
    std::vector<std::pair<IntVector, Integer>> pos, neg;
    std::set<IntVector> next;
    for (const auto& n : normals) {
      Integer s = dot(n, g);
      if (s > 0) pos.emplace_back(n, s);
      if (s < 0) neg.emplace_back(n, s);
      if (s >= 0) next.insert(n);
    }
    if (!neg.empty()) {
      for (const auto& [nf, sf] : pos) {
        for (const auto& [nh, sh] : neg) {
          IntMatrix common;
          for (std::size_t k : processed)
            if (dot(nf, gens[k]) == 0 && dot(nh, gens[k]) == 0) common.push_back(gens[k]);
          if (rank_of(common, d) + 2 != d) continue;
          IntVector n = primitive(sf * nh - sh * nf);
          next.insert(n);
        }
      }
    }
    normals = std::move(next);
    processed.push_back(gi);
    is_processed[gi] = true;
  }

  std::vector<Facet> out;
  for (const auto& n : normals) {
    Facet f{n, {}};
    for (std::size_t i = 0; i < gens.size(); ++i) {
      Integer s = dot(n, gens[i]);
      if (s < 0) throw VerificationError("facet enumeration produced a non-supporting normal");
      if (s == 0) f.incident.push_back(i);
    }
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

using Simplex = std::vector<std::size_t>;

/// Pulling triangulation of the face spanned by `face` (indices into rays),
/// using the cone's facet incidences to find the facets of each face.
void pull_triangulate(const IntMatrix& rays, const std::vector<std::vector<std::size_t>>& facet_sets,
                      const Simplex& face, std::size_t face_rank, std::vector<Simplex>& out) {
  if (face.size() == face_rank) {
    out.push_back(face);
    return;
  }
  const std::size_t apex = face.front();
  std::set<Simplex> sub_faces;
  for (const auto& fs : facet_sets) {
    Simplex meet;
    std::set_intersection(face.begin(), face.end(), fs.begin(), fs.end(), std::back_inserter(meet));
    if (meet.empty() || std::binary_search(meet.begin(), meet.end(), apex)) continue;
    IntMatrix vs;
    for (std::size_t i : meet) vs.push_back(rays[i]);
    if (rank_of(vs, rays.front().dim()) == face_rank - 1) sub_faces.insert(meet);
  }
  if (face_rank == 1) return;
  for (const auto& g : sub_faces) {
    std::vector<Simplex> part;
    pull_triangulate(rays, facet_sets, g, face_rank - 1, part);
    for (auto& sigma : part) {
      sigma.insert(sigma.begin(), apex);
      out.push_back(std::move(sigma));
    }
  }
}

/// Inverse of a square integer matrix over Q (rows of `m` are the vectors).
RatMatrix rational_inverse(const IntMatrix& m) {
  const std::size_t n = m.size();
  RatMatrix a = to_rational(m);
  RatMatrix inv = zero_rat_matrix(n);
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw VerificationError("singular simplex in triangulation");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const Rational piv = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= piv;
      inv[c][j] /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

/// Lattice points Σ λ_i u_i with 0 <= λ_i < 1 of a simplicial cone in Z^r.
/// Coset representatives of Z^r / ⟨u⟩ come from the Hermite diagonal.
void parallelepiped_points(const IntMatrix& u, std::size_t& budget, std::size_t limit,
                           std::set<IntVector>& out) {
  const std::size_t r = u.size();
  const HermiteForm h = row_hermite(u, r);
  const RatMatrix inv = rational_inverse(u);
  std::vector<Integer> diag(r);
  Integer count = 1;
  for (std::size_t k = 0; k < r; ++k) {
    diag[k] = h.echelon[k][h.pivots[k]];
    count *= diag[k];
  }
  if (count > Integer(static_cast<unsigned long>(limit - std::min(limit, budget))))
    throw LimitError("parallelepiped enumeration exceeds the configured bound",
                     {{"points", count.get_str()}, {"limit", std::to_string(limit)}});
  budget += count.get_ui();
  IntVector x(r);
  while (true) {
    // λ = x · u^{-1}; keep the fractional parts.
    IntVector y(r);
    RatVector lambda(r);
    for (std::size_t i = 0; i < r; ++i) {
      Rational acc = 0;
      for (std::size_t j = 0; j < r; ++j)
        if (x[j] != 0) acc += x[j] * inv[j][i];
      lambda[i] = acc - Rational(floor_div(acc.get_num(), acc.get_den()));
    }
    bool zero = true;
    for (std::size_t j = 0; j < r; ++j) {
      Rational acc = 0;
      for (std::size_t i = 0; i < r; ++i)
        if (lambda[i] != 0) acc += lambda[i] * u[i][j];
      if (acc.get_den() != 1) throw VerificationError("parallelepiped point is not integral");
      y[j] = acc.get_num();
      zero = zero && y[j] == 0;
    }
    if (!zero) out.insert(y);
    std::size_t k = 0;
    for (; k < r; ++k) {
      if (x[h.pivots[k]] + 1 < diag[k]) {
        x[h.pivots[k]] += 1;
        break;
      }
      x[h.pivots[k]] = 0;
    }
    if (k == r) break;
  }
}

}  // namespace

std::vector<IntVector> hilbert_basis(const Cone& cone, const Sublattice& lattice,
                                     const HilbertBasisOptions& opts) {
  const std::size_t r = lattice.rank();
  require_dim(cone.generators, lattice.ambient_dim(), "hilbert_basis");

  // Cone generators in lattice coordinates, scaled to primitive integer rays.
  std::set<IntVector> ray_set;
  for (const auto& g : cone.generators) {
    auto q = lattice.rational_coordinates(g);
    if (!q)
      throw PreconditionError("cone generator outside the lattice span",
                              {{"generator", g.to_string()}});
    Integer den = 1;
    for (const auto& c : *q) den = lcm(den, Integer(c.get_den()));
    IntVector ray(r);
    for (std::size_t k = 0; k < r; ++k) ray[k] = Integer((*q)[k] * den);
    if (!ray.is_zero()) ray_set.insert(primitive(ray));
  }
  if (r == 0) return {};
  IntMatrix rays(ray_set.begin(), ray_set.end());
  if (rank_of(rays, r) != r)
    throw PreconditionError("cone is not full-dimensional in the lattice span",
                            {{"rank", std::to_string(rank_of(rays, r))},
                             {"lattice_rank", std::to_string(r)}});

  const auto facets = cone_facets(Cone{rays, r});
  const IntMatrix normals = facet_normals(facets);
  if (rank_of(normals, r) != r) {
    IntMatrix kernel = normals.empty() ? IntMatrix{IntVector::unit(r, 0)} : integer_kernel(normals, r);
    throw PreconditionError("cone contains a line",
                            {{"line", lattice.from_coordinates(kernel.front()).to_string()}});
  }

  // Extreme rays lie on r-1 independent facets.
  IntMatrix extreme;
  for (const auto& ray : rays) {
    IntMatrix on;
    for (const auto& n : normals)
      if (dot(n, ray) == 0) on.push_back(n);
    if (rank_of(on, r) == r - 1) extreme.push_back(ray);
  }
  std::vector<std::vector<std::size_t>> facet_sets;
  for (const auto& n : normals) {
    std::vector<std::size_t> inc;
    for (std::size_t i = 0; i < extreme.size(); ++i)
      if (dot(n, extreme[i]) == 0) inc.push_back(i);
    facet_sets.push_back(std::move(inc));
  }
  Simplex all(extreme.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<Simplex> simplices;
  pull_triangulate(extreme, facet_sets, all, r, simplices);

  // Rays and parallelepiped points of every simplex generate cone ∩ lattice.
  std::set<IntVector> generating(extreme.begin(), extreme.end());
  std::size_t budget = 0;
  for (const auto& sigma : simplices) {
    IntMatrix u;
    for (std::size_t i : sigma) u.push_back(extreme[i]);
    parallelepiped_points(u, budget, opts.max_points, generating);
  }

  IntVector grading(r);
  for (const auto& n : normals) grading += n;
  grading = primitive(grading);
  std::vector<std::pair<Integer, IntVector>> candidates;
  for (const auto& y : generating) candidates.emplace_back(dot(grading, y), y);
  std::sort(candidates.begin(), candidates.end());

  // Irreducible elements of smaller degree are already in `basis`.
  std::vector<IntVector> basis;
  for (const auto& [deg, y] : candidates) {
    bool reducible = false;
    for (const auto& h : basis) {
      if (satisfies_all(normals, y - h)) {
        reducible = true;
        break;
      }
    }
    if (!reducible) basis.push_back(y);
  }
  std::vector<IntVector> out;
  out.reserve(basis.size());
  for (const auto& y : basis) out.push_back(lattice.from_coordinates(y));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qtoric
