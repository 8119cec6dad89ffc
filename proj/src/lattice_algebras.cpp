#include "qtoric/lattice_algebras.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <stdexcept>

namespace qtoric {

namespace {

std::string triple_string(const DistLattice& l, std::size_t a, std::size_t b, std::size_t c) {
  return l.name(a) + "," + l.name(b) + "," + l.name(c);
}

/// Number of down-sets of the order on positions 0..n-1 given by `below`.
std::size_t count_down_sets(const std::vector<std::vector<bool>>& below) {
  const std::size_t n = below.size();
  std::vector<bool> chosen(n, false);
  std::size_t count = 0;
  // Positions are processed in a linear extension, so a down-set decision for
  // position k only depends on positions below it.
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == n) {
      ++count;
      return;
    }
    rec(k + 1);
    bool ok = true;
    for (std::size_t j = 0; j < k && ok; ++j)
      if (below[j][k] && !chosen[j]) ok = false;
    if (!ok) return;
    chosen[k] = true;
    rec(k + 1);
    chosen[k] = false;
  };
  rec(0);
  return count;
}

}  // namespace

// DistLattice

DistLattice::DistLattice(std::vector<std::string> names,
                         const std::vector<std::pair<std::size_t, std::size_t>>& covers)
    : names_(std::move(names)) {
  const std::size_t n = names_.size();
  if (n == 0) throw PreconditionError("a lattice needs at least one element");
  {
    std::set<std::string> seen;
    for (const auto& nm : names_)
      if (!seen.insert(nm).second) throw PreconditionError("duplicate lattice element " + nm);
  }
  leq_.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) leq_[i][i] = true;
  for (const auto& [a, b] : covers) {
    if (a >= n || b >= n) throw std::out_of_range("cover index out of range");
    leq_[a][b] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (leq_[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (leq_[k][j]) leq_[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (leq_[i][j] && leq_[j][i])
        throw PreconditionError("cover relation has a cycle",
                                {{"elements", names_[i] + "," + names_[j]}});

  // Greatest lower / least upper bounds.
  auto extremal = [&](std::size_t a, std::size_t b, bool lower) -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < n; ++c) {
      const bool bound = lower ? (leq_[c][a] && leq_[c][b]) : (leq_[a][c] && leq_[b][c]);
      if (!bound) continue;
      if (!best || (lower ? leq_[*best][c] : leq_[c][*best])) best = c;
    }
    if (!best) return std::nullopt;
    for (std::size_t c = 0; c < n; ++c) {
      const bool bound = lower ? (leq_[c][a] && leq_[c][b]) : (leq_[a][c] && leq_[b][c]);
      if (bound && !(lower ? leq_[c][*best] : leq_[*best][c])) return std::nullopt;
    }
    return best;
  };
  meet_.assign(n, std::vector<std::size_t>(n));
  join_.assign(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      auto m = extremal(a, b, true);
      auto j = extremal(a, b, false);
      if (!m || !j)
        throw PreconditionError("order is not a lattice",
                                {{"pair", names_[a] + "," + names_[b]},
                                 {"missing", !m ? "meet" : "join"}});
      meet_[a][b] = *m;
      join_[a][b] = *j;
    }
  for (std::size_t c = 0; c < n; ++c) {
    bottom_ = meet_[bottom_][c];
    top_ = join_[top_][c];
  }

  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (meet_[x][join_[y][z]] != join_[meet_[x][y]][meet_[x][z]])
          throw PreconditionError("lattice is not distributive",
                                  {{"triple", triple_string(*this, x, y, z)}});

  lower_covers_.assign(n, {});
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || !leq_[b][a]) continue;
      bool cover = true;
      for (std::size_t c = 0; c < n && cover; ++c)
        if (c != a && c != b && leq_[b][c] && leq_[c][a]) cover = false;
      if (cover) lower_covers_[a].push_back(b);
    }
}

DistLattice DistLattice::from_names(std::vector<std::string> names,
                                    const std::vector<std::pair<std::string, std::string>>& covers) {
  std::map<std::string, std::size_t> id;
  for (std::size_t i = 0; i < names.size(); ++i) id.emplace(names[i], i);
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (const auto& [a, b] : covers) {
    auto ia = id.find(a);
    auto ib = id.find(b);
    if (ia == id.end() || ib == id.end())
      throw PreconditionError("cover mentions an unknown element",
                              {{"element", ia == id.end() ? a : b}});
    idx.emplace_back(ia->second, ib->second);
  }
  return DistLattice(std::move(names), idx);
}

std::optional<std::size_t> DistLattice::index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

DistLattice ideal_lattice(const Poset& p) {
  const std::size_t n = p.size;
  if (n > 20) throw LimitError("poset too large for ideal enumeration");
  std::vector<std::vector<bool>> below(n, std::vector<bool>(n, false));
  for (const auto& [a, b] : p.less) below[a][b] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (below[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (below[k][j]) below[i][j] = true;

  std::vector<unsigned long> ideals;
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    bool ok = true;
    for (std::size_t b = 0; b < n && ok; ++b)
      if (mask >> b & 1)
        for (std::size_t a = 0; a < n && ok; ++a)
          if (below[a][b] && !(mask >> a & 1)) ok = false;
    if (ok) ideals.push_back(mask);
  }
  std::vector<std::string> names;
  for (auto mask : ideals) {
    std::string nm = "{";
    for (std::size_t b = 0; b < n; ++b)
      if (mask >> b & 1) nm += (nm.size() > 1 ? "," : "") + std::to_string(b);
    names.push_back(nm + "}");
  }
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  for (std::size_t i = 0; i < ideals.size(); ++i)
    for (std::size_t j = 0; j < ideals.size(); ++j) {
      const unsigned long diff = ideals[j] & ~ideals[i];
      if ((ideals[i] & ~ideals[j]) == 0 && diff != 0 && (diff & (diff - 1)) == 0)
        covers.emplace_back(i, j);
    }
  return DistLattice(std::move(names), covers);
}

// Birkhoff

BirkhoffData birkhoff(const DistLattice& l, const std::optional<std::vector<std::size_t>>& order) {
  std::vector<std::size_t> irr;
  for (std::size_t a = 0; a < l.size(); ++a)
    if (l.lower_covers(a).size() == 1) irr.push_back(a);

  BirkhoffData out;
  if (order) {
    std::vector<std::size_t> sorted = *order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != irr)
      throw PreconditionError("order does not list the join-irreducibles exactly once");
    for (std::size_t i = 0; i < order->size(); ++i)
      for (std::size_t j = i + 1; j < order->size(); ++j)
        if (l.leq((*order)[j], (*order)[i]))
          throw PreconditionError("order is not a linear extension",
                                  {{"pair", l.name((*order)[j]) + "<" + l.name((*order)[i])}});
    out.irreducibles = *order;
  } else {
    // Kahn's algorithm with the smallest available id first.
    std::vector<std::size_t> indegree(irr.size(), 0);
    for (std::size_t i = 0; i < irr.size(); ++i)
      for (std::size_t j = 0; j < irr.size(); ++j)
        if (i != j && l.leq(irr[j], irr[i])) ++indegree[i];
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < irr.size(); ++i)
      if (indegree[i] == 0) ready.push(i);
    while (!ready.empty()) {
      const std::size_t i = ready.top();
      ready.pop();
      out.irreducibles.push_back(irr[i]);
      for (std::size_t j = 0; j < irr.size(); ++j)
        if (j != i && l.leq(irr[i], irr[j]) && --indegree[j] == 0) ready.push(j);
    }
  }

  const std::size_t n = out.irreducibles.size();
  std::vector<std::vector<bool>> below(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      below[i][j] = i != j && l.leq(out.irreducibles[i], out.irreducibles[j]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!below[i][j]) continue;
      bool cover = true;
      for (std::size_t k = 0; k < n && cover; ++k)
        if (below[i][k] && below[k][j]) cover = false;
      if (cover) out.covers.emplace_back(i, j);
    }

  out.phi.resize(l.size());
  for (std::size_t a = 0; a < l.size(); ++a) {
    for (std::size_t i = 0; i < n; ++i)
      if (l.leq(out.irreducibles[i], a)) out.phi[a].push_back(i);
    if (!out.phi_inv.emplace(out.phi[a], a).second)
      throw VerificationError("phi is not injective");
  }
  for (std::size_t a = 0; a < l.size(); ++a)
    for (std::size_t b = 0; b < l.size(); ++b) {
      const bool subset =
          std::includes(out.phi[b].begin(), out.phi[b].end(), out.phi[a].begin(), out.phi[a].end());
      if (subset != l.leq(a, b)) throw VerificationError("phi is not an order isomorphism");
    }
  if (count_down_sets(below) != l.size()) throw VerificationError("phi is not onto the ideals");
  return out;
}

// str(Π)

bool StrSemigroup::in_region(const IntVector& s) const {
  if (s.dim() != dim) return false;
  for (std::size_t k = 1; k < dim; ++k)
    if (s[k] < 0 || s[k] > s[0]) return false;
  if (s[0] < 0) return false;
  for (const auto& [i, j] : data.covers)
    if (s[i + 1] < s[j + 1]) return false;
  return true;
}

namespace {

IntMatrix build_i_map(const DistLattice& l, const BirkhoffData& data) {
  const std::size_t d = data.irreducibles.size() + 1;
  IntMatrix out;
  for (std::size_t a = 0; a < l.size(); ++a) {
    IntVector v = IntVector::unit(d, 0);
    for (std::size_t i : data.phi[a]) v[i + 1] = 1;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

StrSemigroup str_embedding(const DistLattice& l, const std::optional<std::vector<std::size_t>>& order,
                           std::size_t verify_bound) {
  BirkhoffData data = birkhoff(l, order);
  const std::size_t d = data.irreducibles.size() + 1;
  if (d > kMaxAmbientDim)
    throw LimitError("lattice rank exceeds the supported ambient dimension",
                     {{"rank", std::to_string(d - 1)}});
  IntMatrix i_map = build_i_map(l, data);
  AffineSemigroup s(i_map, d);
  StrSemigroup sg{l, std::move(data), d, std::move(i_map), std::move(s), verify_bound, 0};

  std::set<IntVector> image(sg.i_map.begin(), sg.i_map.end());
  if (image.size() != l.size()) throw VerificationError("i is not injective");
  for (std::size_t a = 0; a < l.size(); ++a) {
    if (!sg.in_region(sg.i_map[a])) throw VerificationError("i(π) lies outside T ∩ S_ij");
    for (std::size_t b = 0; b < l.size(); ++b)
      if (sg.i_map[a] + sg.i_map[b] != sg.i_map[l.meet(a, b)] + sg.i_map[l.join(a, b)])
        throw VerificationError("i(α)+i(β) != i(α∧β)+i(α∨β) at " + l.name(a) + "," + l.name(b));
  }

  // Region points with s_0 <= bound are reached by psi.
  IntVector x(d);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == d) {
      if (!sg.in_region(x)) return;
      const StandardWord w = psi(sg, x);
      if (word_exponent(sg, w) != x) throw VerificationError("i∘psi != id at " + x.to_string());
      ++sg.points_checked;
      return;
    }
    const long hi = k == 0 ? static_cast<long>(verify_bound) : x[0].get_si();
    for (long v = 0; v <= hi; ++v) {
      x[k] = v;
      rec(k + 1);
    }
    x[k] = 0;
  };
  rec(0);
  return sg;
}

IntVector word_exponent(const StrSemigroup& sg, const std::vector<std::size_t>& word) {
  IntVector s(sg.dim);
  for (std::size_t a : word) s += sg.i_map.at(a);
  return s;
}

StandardWord psi(const StrSemigroup& sg, const IntVector& s) {
  if (!sg.in_region(s))
    throw PreconditionError("vector is not in str(Π)", {{"s", s.to_string()}});
  IntVector rest = s;
  StandardWord word;
  const long steps = s[0].get_si();
  for (long step = 0; step < steps; ++step) {
    std::vector<std::size_t> support;
    for (std::size_t i = 1; i < sg.dim; ++i)
      if (rest[i] != 0) support.push_back(i - 1);
    auto it = sg.data.phi_inv.find(support);
    if (it == sg.data.phi_inv.end()) throw VerificationError("support is not an ideal");
    word.push_back(it->second);
    rest -= sg.i_map[it->second];
  }
  if (!rest.is_zero()) throw VerificationError("psi left a nonzero remainder");
  std::reverse(word.begin(), word.end());
  return word;
}

Straightened straighten(const TwistedAlgebra& a, const StrSemigroup& sg,
                        const std::vector<std::size_t>& word) {
  auto word_product = [&](const std::vector<std::size_t>& w) {
    TwistedElement x = TwistedElement::monomial(IntVector(sg.dim));
    for (std::size_t id : w) x = product(a, x, TwistedElement::monomial(sg.i_map.at(id)));
    auto m = x.as_monomial();
    if (!m) throw VerificationError("word product is not a monomial");
    return *m;
  };
  const auto [c, s] = word_product(word);
  StandardWord std_word = psi(sg, s);
  const auto [c_std, s_std] = word_product(std_word);
  if (s_std != s) throw VerificationError("standard word has a different exponent");
  return {c / c_std, std::move(std_word), s};
}

LatticeAlgebraReport lattice_algebra_report(const DistLattice& lattice, const Cocycle& alpha,
                                            std::size_t verification_bound) {
  StrSemigroup sg = str_embedding(lattice);
  if (alpha.dim() != sg.dim)
    throw PreconditionError("cocycle dimension does not match rank(Π)+1",
                            {{"expected", std::to_string(sg.dim)},
                             {"got", std::to_string(alpha.dim())}});
  RegularityReport rep = regularity_report(sg.semigroup, verification_bound);
  if (!rep.normal) throw VerificationError("str(Π) is not normal");
  return {std::move(sg), std::move(rep)};
}

}  // namespace qtoric
