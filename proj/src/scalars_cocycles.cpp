#include "qtoric/scalars_cocycles.hpp"

#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qtoric {

namespace {

void add_exponent(Exponents& into, const std::string& name, const Rational& e) {
  if (e == 0) return;
  auto [it, inserted] = into.emplace(name, e);
  if (inserted) return;
  it->second += e;
  if (it->second == 0) into.erase(it);
}

std::string exponent_suffix(const Rational& e) {
  if (e == 1) return "";
  if (e.get_den() == 1) return "^" + to_string(e);
  return "^(" + to_string(e) + ")";
}

void require_square(const RatMatrix& m, std::size_t dim, const std::string& what) {
  if (m.size() != dim) throw std::invalid_argument(what + ": expected " + std::to_string(dim) + " rows");
  for (const auto& row : m)
    if (row.size() != dim)
      throw std::invalid_argument(what + ": expected " + std::to_string(dim) + " columns");
}

void require_square(const IntMatrix& m, std::size_t dim, const std::string& what) {
  if (m.size() != dim) throw std::invalid_argument(what + ": expected " + std::to_string(dim) + " rows");
  for (const auto& row : m)
    if (row.dim() != dim)
      throw std::invalid_argument(what + ": expected " + std::to_string(dim) + " columns");
}

void require_unique_params(const std::vector<std::string>& params) {
  std::set<std::string> seen;
  for (const auto& p : params) {
    if (p.empty()) throw std::invalid_argument("empty parameter name");
    if (!seen.insert(p).second) throw std::invalid_argument("duplicate parameter " + p);
  }
}

Rational bilinear(const IntVector& s, const RatMatrix& m, const IntVector& t) {
  Rational acc = 0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (s[i] == 0) continue;
    Rational row = 0;
    for (std::size_t j = 0; j < t.dim(); ++j)
      if (t[j] != 0 && m[i][j] != 0) row += m[i][j] * t[j];
    acc += row * s[i];
  }
  return acc;
}

ScalarMonomial monomial_from_exponents(const std::vector<std::string>& params,
                                       const std::vector<Rational>& exps) {
  Exponents e;
  for (std::size_t k = 0; k < params.size(); ++k) add_exponent(e, params[k], exps[k]);
  return ScalarMonomial(1, std::move(e));
}

void require_vector_dim(const IntVector& v, std::size_t dim) {
  if (v.dim() != dim)
    throw std::invalid_argument("dimension mismatch: expected " + std::to_string(dim) + ", got " +
                                std::to_string(v.dim()));
}

}  // namespace

// ScalarMonomial

ScalarMonomial::ScalarMonomial(Rational coeff, Exponents exponents)
    : coeff_(std::move(coeff)) {
  if (coeff_ == 0) throw std::invalid_argument("scalar monomial with zero coefficient");
  coeff_.canonicalize();
  for (auto& [name, e] : exponents) add_exponent(exponents_, name, e);
}

ScalarMonomial ScalarMonomial::param(const std::string& name, const Rational& exponent) {
  Exponents e;
  add_exponent(e, name, exponent);
  return ScalarMonomial(1, std::move(e));
}

ScalarMonomial ScalarMonomial::inverse() const {
  Exponents e;
  for (const auto& [name, x] : exponents_) e.emplace(name, -x);
  return ScalarMonomial(1 / coeff_, std::move(e));
}

ScalarMonomial ScalarMonomial::pow(long k) const {
  if (k < 0) return inverse().pow(-k);
  Rational c = 1;
  for (long i = 0; i < k; ++i) c *= coeff_;
  Exponents e;
  for (const auto& [name, x] : exponents_) add_exponent(e, name, x * k);
  return ScalarMonomial(c, std::move(e));
}

ScalarMonomial operator*(const ScalarMonomial& a, const ScalarMonomial& b) {
  ScalarMonomial out;
  out.coeff_ = a.coeff_ * b.coeff_;
  out.exponents_ = a.exponents_;
  for (const auto& [name, e] : b.exponents_) add_exponent(out.exponents_, name, e);
  return out;
}

std::string ScalarMonomial::to_string() const {
  std::string out;
  if (coeff_ != 1 || exponents_.empty()) out = qtoric::to_string(coeff_);
  for (const auto& [name, e] : exponents_) {
    if (!out.empty()) out += "*";
    out += name + exponent_suffix(e);
  }
  return out;
}

// Coefficient

Coefficient::Coefficient(const ScalarMonomial& m) { terms_.emplace(m.exponents(), m.coeff()); }

std::optional<ScalarMonomial> Coefficient::as_monomial() const {
  if (terms_.size() != 1) return std::nullopt;
  return ScalarMonomial(terms_.begin()->second, terms_.begin()->first);
}

Coefficient& Coefficient::operator+=(const Coefficient& o) {
  for (const auto& [e, c] : o.terms_) {
    auto [it, inserted] = terms_.emplace(e, c);
    if (inserted) continue;
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
  return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& o) {
  for (const auto& [e, c] : o.terms_) {
    auto [it, inserted] = terms_.emplace(e, -c);
    if (inserted) continue;
    it->second -= c;
    if (it->second == 0) terms_.erase(it);
  }
  return *this;
}

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
  Coefficient out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      ScalarMonomial m = ScalarMonomial(ca, ea) * ScalarMonomial(cb, eb);
      out += Coefficient(m);
    }
  return out;
}

std::string Coefficient::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += ScalarMonomial(c, e).to_string();
  }
  return out;
}

// Coboundary

Coboundary::Coboundary(std::size_t dim, std::vector<std::string> params,
                       std::vector<RatMatrix> quad, std::vector<RatVector> linear)
    : dim_(dim), params_(std::move(params)), quad_(std::move(quad)), linear_(std::move(linear)) {
  require_unique_params(params_);
  if (quad_.empty()) quad_.assign(params_.size(), zero_rat_matrix(dim_));
  if (linear_.empty()) linear_.assign(params_.size(), RatVector(dim_, Rational(0)));
  if (quad_.size() != params_.size() || linear_.size() != params_.size())
    throw std::invalid_argument("coboundary: one quadratic and one linear form per parameter");
  for (std::size_t k = 0; k < params_.size(); ++k) {
    require_square(quad_[k], dim_, "coboundary quadratic form for " + params_[k]);
    if (linear_[k].size() != dim_)
      throw std::invalid_argument("coboundary linear form for " + params_[k] + ": expected " +
                                  std::to_string(dim_) + " entries");
  }
}

ScalarMonomial Coboundary::f(const IntVector& s) const {
  require_vector_dim(s, dim_);
  std::vector<Rational> exps(params_.size());
  for (std::size_t k = 0; k < params_.size(); ++k) {
    exps[k] = bilinear(s, quad_[k], s);
    for (std::size_t i = 0; i < dim_; ++i) exps[k] += linear_[k][i] * s[i];
  }
  return monomial_from_exponents(params_, exps);
}

ScalarMonomial Coboundary::differential(const IntVector& s, const IntVector& t) const {
  return f(s) * f(t) / f(s + t);
}

std::string Coboundary::exponent_polynomial(std::size_t k) const {
  std::vector<std::pair<Rational, std::string>> terms;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j) {
      Rational c = i == j ? quad_[k][i][i] : quad_[k][i][j] + quad_[k][j][i];
      if (c == 0) continue;
      std::string var = i == j ? "s" + std::to_string(i) + "^2"
                               : "s" + std::to_string(i) + "*s" + std::to_string(j);
      terms.emplace_back(c, var);
    }
  for (std::size_t i = 0; i < dim_; ++i)
    if (linear_[k][i] != 0) terms.emplace_back(linear_[k][i], "s" + std::to_string(i));
  if (terms.empty()) return "0";
  std::string out;
  for (const auto& [c, var] : terms) {
    const Rational mag = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (mag != 1) out += to_string(mag) + "*";
    out += var;
  }
  return out;
}

std::string Coboundary::describe() const {
  std::string out;
  for (std::size_t k = 0; k < params_.size(); ++k) {
    const std::string poly = exponent_polynomial(k);
    if (poly == "0") continue;
    if (!out.empty()) out += "*";
    out += params_[k] + "^(" + poly + ")";
  }
  return out.empty() ? "1" : out;
}

// Cocycle

Cocycle::Cocycle(std::size_t dim, std::vector<std::string> params, std::vector<IntMatrix> bichar,
                 std::optional<Coboundary> coboundary)
    : dim_(dim),
      params_(std::move(params)),
      bichar_(std::move(bichar)),
      coboundary_(std::move(coboundary)) {
  require_unique_params(params_);
  if (bichar_.empty()) bichar_.assign(params_.size(), IntMatrix(dim_, IntVector(dim_)));
  if (bichar_.size() != params_.size())
    throw std::invalid_argument("cocycle: one bicharacter matrix per parameter");
  for (std::size_t k = 0; k < params_.size(); ++k)
    require_square(bichar_[k], dim_, "bicharacter matrix for " + params_[k]);
  if (coboundary_) {
    if (coboundary_->dim() != dim_)
      throw std::invalid_argument("cocycle: coboundary dimension mismatch");
    if (coboundary_->params() != params_)
      throw std::invalid_argument("cocycle: coboundary parameter list mismatch");
  }
}

Cocycle Cocycle::trivial(std::size_t dim) { return Cocycle(dim, {}, {}); }

Cocycle Cocycle::from_q_exponents(std::size_t dim, std::vector<std::string> params,
                                  const std::vector<IntMatrix>& skew_exponents) {
  if (skew_exponents.size() != params.size())
    throw std::invalid_argument("one exponent matrix per parameter");
  std::vector<IntMatrix> bichar;
  for (std::size_t k = 0; k < params.size(); ++k) {
    require_square(skew_exponents[k], dim, "q exponent matrix for " + params[k]);
    IntMatrix b(dim, IntVector(dim));
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) {
        const Integer& e = skew_exponents[k][i][j];
        if (i == j && e != 0) throw std::invalid_argument("q matrix must have unit diagonal");
        if (e + skew_exponents[k][j][i] != 0)
          throw std::invalid_argument("q matrix must be multiplicatively skew-symmetric");
        if (i > j) b[i][j] = e;
      }
    bichar.push_back(std::move(b));
  }
  return Cocycle(dim, std::move(params), std::move(bichar));
}

RatMatrix Cocycle::exponent_form(std::size_t k) const {
  RatMatrix m = to_rational(bichar_.at(k));
  if (coboundary_) {
    const RatMatrix& q = coboundary_->quad()[k];
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) m[i][j] -= q[i][j] + q[j][i];
  }
  return m;
}

ScalarMonomial Cocycle::operator()(const IntVector& s, const IntVector& t) const {
  require_vector_dim(s, dim_);
  require_vector_dim(t, dim_);
  std::vector<Rational> exps(params_.size());
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Integer e = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (s[i] == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j)
        if (t[j] != 0 && bichar_[k][i][j] != 0) e += s[i] * bichar_[k][i][j] * t[j];
    }
    exps[k] = e;
  }
  ScalarMonomial out = monomial_from_exponents(params_, exps);
  if (coboundary_) out *= coboundary_->differential(s, t);
  return out;
}

ScalarMonomial cocycle_eval(const Cocycle& alpha, const IntVector& s, const IntVector& t) {
  return alpha(s, t);
}

CocycleCheck validate_cocycle(const CocycleFn& alpha, const std::vector<Triple>& triples) {
  CocycleCheck out;
  for (const auto& [s, t, u] : triples) {
    ++out.triples_checked;
    if (alpha(s, t) * alpha(s + t, u) != alpha(t, u) * alpha(s, t + u)) {
      out.ok = false;
      out.counterexample = Triple{s, t, u};
      return out;
    }
  }
  return out;
}

CocycleCheck validate_cocycle(const Cocycle& alpha, const std::vector<Triple>& triples) {
  return validate_cocycle(CocycleFn([&alpha](const IntVector& s, const IntVector& t) {
                            return alpha(s, t);
                          }),
                          triples);
}

std::vector<Triple> exhaustive_triples(std::size_t dim, long lo, long hi) {
  std::vector<IntVector> points;
  IntVector x(dim);
  for (std::size_t i = 0; i < dim; ++i) x[i] = lo;
  while (true) {
    points.push_back(x);
    std::size_t i = 0;
    for (; i < dim; ++i) {
      if (x[i] < hi) {
        x[i] += 1;
        break;
      }
      x[i] = lo;
    }
    if (i == dim) break;
  }
  std::vector<Triple> out;
  out.reserve(points.size() * points.size() * points.size());
  for (const auto& s : points)
    for (const auto& t : points)
      for (const auto& u : points) out.push_back(Triple{s, t, u});
  return out;
}

std::vector<Triple> random_triples(std::size_t dim, std::size_t count, long range,
                                   unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coord(-range, range);
  auto draw = [&] {
    IntVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = coord(rng);
    return v;
  };
  std::vector<Triple> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    IntVector s = draw();
    IntVector t = draw();
    IntVector u = draw();
    out.push_back(Triple{std::move(s), std::move(t), std::move(u)});
  }
  return out;
}

ScalarMatrix commutation_matrix(const Cocycle& alpha, const std::vector<IntVector>& generators) {
  ScalarMatrix q(generators.size(), std::vector<ScalarMonomial>(generators.size()));
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = 0; j < generators.size(); ++j)
      q[i][j] = alpha(generators[i], generators[j]) / alpha(generators[j], generators[i]);
  return q;
}

bool is_multiplicatively_skew(const ScalarMatrix& q) {
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i].size() != q.size() || !q[i][i].is_one()) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (!(q[i][j] * q[j][i]).is_one()) return false;
  }
  return true;
}

std::string to_string(const ScalarMatrix& q) {
  std::string out = "[";
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i) out += ",";
    out += "[";
    for (std::size_t j = 0; j < q[i].size(); ++j) {
      if (j) out += ",";
      out += q[i][j].to_string();
    }
    out += "]";
  }
  return out + "]";
}

CohomologyResult are_cohomologous(const Cocycle& alpha, const Cocycle& beta,
                                  const std::vector<IntVector>& group_basis) {
  if (alpha.params() != beta.params())
    throw PreconditionError("cocycles use different parameter lists");
  if (alpha.dim() != beta.dim()) throw PreconditionError("cocycles have different dimensions");
  const std::size_t d = alpha.dim();
  require_dim(group_basis, d, "group basis");

  CohomologyResult out;
  for (std::size_t i = 0; i < group_basis.size(); ++i)
    for (std::size_t j = i + 1; j < group_basis.size(); ++j) {
      const IntVector& u = group_basis[i];
      const IntVector& v = group_basis[j];
      if (alpha(u, v) / alpha(v, u) != beta(u, v) / beta(v, u)) {
        out.distinguishing_pair = std::make_pair(u, v);
        return out;
      }
    }

  // α/β = c^{sᵀDt} with D skew-free on G, so f(s) = c^{-sᵀ D_sym s / 2} works.
  std::vector<RatMatrix> quad;
  for (std::size_t k = 0; k < alpha.params().size(); ++k) {
    const RatMatrix a = alpha.exponent_form(k);
    const RatMatrix b = beta.exponent_form(k);
    RatMatrix q = zero_rat_matrix(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        q[i][j] = -((a[i][j] - b[i][j]) + (a[j][i] - b[j][i])) / 4;
        q[i][j].canonicalize();
      }
    quad.push_back(std::move(q));
  }
  Coboundary f(d, alpha.params(), std::move(quad), {});

  std::vector<std::pair<IntVector, IntVector>> pairs;
  for (const auto& u : group_basis)
    for (const auto& v : group_basis) pairs.emplace_back(u, v);
  if (!group_basis.empty()) {
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_int_distribution<long> coord(-3, 3);
    auto draw = [&] {
      IntVector x(d);
      for (const auto& b : group_basis) x += Integer(coord(rng)) * b;
      return x;
    };
    for (int n = 0; n < 64; ++n) {
      IntVector u = draw();
      IntVector v = draw();
      pairs.emplace_back(std::move(u), std::move(v));
    }
  }
  for (const auto& [u, v] : pairs) {
    if (alpha(u, v) != f.differential(u, v) * beta(u, v))
      throw VerificationError("coboundary witness fails at " + u.to_string() + ", " +
                              v.to_string());
    ++out.verified_pairs;
  }
  out.cohomologous = true;
  out.witness = std::move(f);
  return out;
}

}  // namespace qtoric
