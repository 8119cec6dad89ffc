#include "qtoric/model.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace qtoric {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

/// One logical entry: a line plus its indented continuation lines, with the
/// original position of every character.
struct Source {
  std::string text;
  std::vector<std::pair<std::size_t, std::size_t>> pos;
  std::size_t line = 0;

  void append(const std::string& s, std::size_t line_no, std::size_t first_col) {
    if (!text.empty()) {
      text += ' ';
      pos.emplace_back(line_no, first_col);
    }
    for (std::size_t k = 0; k < s.size(); ++k) {
      text += s[k];
      pos.emplace_back(line_no, first_col + k);
    }
  }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Cursor {
 public:
  explicit Cursor(const Source& src) : src_(src) {}

  [[noreturn]] void fail(const std::string& msg) const { fail_at(i_, msg); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
    if (at < src_.pos.size()) throw ParseError(msg, src_.pos[at].first, src_.pos[at].second);
    const auto last = src_.pos.empty() ? std::make_pair(src_.line, std::size_t(0)) : src_.pos.back();
    throw ParseError(msg, last.first, last.second + 1);
  }

  std::size_t offset() const { return i_; }

  void skip_ws() {
    while (i_ < src_.text.size() && std::isspace(static_cast<unsigned char>(src_.text[i_]))) ++i_;
  }
  bool at_end() {
    skip_ws();
    return i_ >= src_.text.size();
  }
  char peek() {
    skip_ws();
    return i_ < src_.text.size() ? src_.text[i_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  void expect_end() {
    if (!at_end()) fail("unexpected '" + std::string(1, src_.text[i_]) + "'");
  }

  std::string ident() {
    skip_ws();
    if (i_ >= src_.text.size() || !ident_start(src_.text[i_])) fail("expected a name");
    std::size_t start = i_;
    while (i_ < src_.text.size() && ident_char(src_.text[i_])) ++i_;
    return src_.text.substr(start, i_ - start);
  }
  /// Lattice element names may also start with a digit.
  std::string token() {
    skip_ws();
    if (i_ >= src_.text.size() || !ident_char(src_.text[i_])) fail("expected a name");
    std::size_t start = i_;
    while (i_ < src_.text.size() && ident_char(src_.text[i_])) ++i_;
    return src_.text.substr(start, i_ - start);
  }
  bool peek_ident(const char* word) {
    skip_ws();
    std::size_t j = i_;
    for (const char* w = word; *w; ++w, ++j)
      if (j >= src_.text.size() || src_.text[j] != *w) return false;
    return j >= src_.text.size() || !ident_char(src_.text[j]);
  }

  Integer integer() {
    skip_ws();
    std::size_t start = i_;
    if (i_ < src_.text.size() && (src_.text[i_] == '-' || src_.text[i_] == '+')) ++i_;
    std::size_t digits = i_;
    while (i_ < src_.text.size() && std::isdigit(static_cast<unsigned char>(src_.text[i_]))) ++i_;
    if (i_ == digits) fail_at(start, "expected an integer");
    std::string s = src_.text.substr(start, i_ - start);
    if (s[0] == '+') s.erase(0, 1);
    return Integer(s);
  }
  Rational rational() {
    const std::size_t start = i_;
    Integer num = integer();
    if (i_ < src_.text.size() && src_.text[i_] == '/') {
      ++i_;
      if (i_ >= src_.text.size() || !std::isdigit(static_cast<unsigned char>(src_.text[i_])))
        fail("expected a denominator");
      Integer den = integer();
      if (den == 0) fail_at(start, "zero denominator");
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
    return Rational(num);
  }
  std::size_t count() {
    const std::size_t at = i_;
    Integer v = integer();
    if (v < 0 || !v.fits_ulong_p()) fail_at(at, "expected a nonnegative integer");
    return v.get_ui();
  }

  IntVector int_vector() {
    expect('[');
    std::vector<Integer> xs;
    if (!accept(']')) {
      do xs.push_back(integer());
      while (accept(','));
      expect(']');
    }
    return IntVector(std::move(xs));
  }
  IntMatrix int_matrix() {
    expect('[');
    IntMatrix rows;
    if (!accept(']')) {
      do rows.push_back(int_vector());
      while (accept(','));
      expect(']');
    }
    return rows;
  }
  RatVector rat_vector() {
    expect('[');
    RatVector xs;
    if (!accept(']')) {
      do xs.push_back(rational());
      while (accept(','));
      expect(']');
    }
    return xs;
  }
  RatMatrix rat_matrix() {
    expect('[');
    RatMatrix rows;
    if (!accept(']')) {
      do rows.push_back(rat_vector());
      while (accept(','));
      expect(']');
    }
    return rows;
  }
  std::vector<std::string> name_list() {
    expect('[');
    std::vector<std::string> xs;
    if (!accept(']')) {
      do xs.push_back(token());
      while (accept(','));
      expect(']');
    }
    return xs;
  }

  /// factor := '-'? (rational | ident ('^' exponent)?)
  ScalarMonomial factor() {
    bool negate = false;
    if (peek() == '-' && i_ + 1 < src_.text.size() && ident_start(src_.text[i_ + 1])) {
      ++i_;
      negate = true;
    }
    ScalarMonomial out;
    if (ident_start(peek())) {
      const std::size_t at = i_;
      std::string name = ident();
      if (name == "X") fail_at(at, "X is reserved for monomials");
      Rational e = 1;
      if (accept('^')) {
        if (accept('(')) {
          e = rational();
          expect(')');
        } else {
          e = Rational(integer());
        }
      }
      out = ScalarMonomial::param(name, e);
    } else {
      const std::size_t at = i_;
      Rational c = rational();
      if (c == 0) fail_at(at, "zero scalar");
      out = ScalarMonomial(c);
    }
    return negate ? ScalarMonomial(-1) * out : out;
  }
  ScalarMonomial scalar() {
    ScalarMonomial out = factor();
    while (accept('*')) out *= factor();
    return out;
  }
  bool at_monomial() {
    skip_ws();
    std::size_t j = i_;
    if (j < src_.text.size() && src_.text[j] == '-') ++j;
    if (j >= src_.text.size() || src_.text[j] != 'X') return false;
    ++j;
    while (j < src_.text.size() && src_.text[j] == ' ') ++j;
    return j < src_.text.size() && src_.text[j] == '[';
  }

  /// Splits at top-level ';' into clause cursors over sub-ranges.
  std::vector<std::pair<std::size_t, std::size_t>> clauses() {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    int depth = 0;
    std::size_t start = i_;
    for (std::size_t j = i_; j < src_.text.size(); ++j) {
      const char c = src_.text[j];
      if (c == '[' || c == '(') ++depth;
      if (c == ']' || c == ')') --depth;
      if (c == ';' && depth == 0) {
        out.emplace_back(start, j);
        start = j + 1;
      }
    }
    out.emplace_back(start, src_.text.size());
    return out;
  }

 private:
  const Source& src_;
  std::size_t i_ = 0;
};

/// The characters [begin, end) of an entry, keeping their positions.
Source slice(const Source& src, std::size_t begin, std::size_t end) {
  Source out;
  out.line = src.line;
  out.text = src.text.substr(begin, end - begin);
  out.pos.assign(src.pos.begin() + static_cast<long>(begin), src.pos.begin() + static_cast<long>(end));
  if (out.pos.empty() && begin < src.pos.size()) out.pos.push_back(src.pos[begin]);
  return out;
}

std::string shape(std::size_t d) { return std::to_string(d) + "x" + std::to_string(d); }

bool is_square(const IntMatrix& m, std::size_t d) {
  if (m.size() != d) return false;
  for (const auto& r : m)
    if (r.dim() != d) return false;
  return true;
}

bool is_square(const RatMatrix& m, std::size_t d) {
  if (m.size() != d) return false;
  for (const auto& r : m)
    if (r.size() != d) return false;
  return true;
}

class Parser {
 public:
  ModelFile run(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    std::optional<Source> pending;
    auto flush = [&] {
      if (pending) entry(*pending);
      pending.reset();
    };
    while (std::getline(in, raw)) {
      ++line_no;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      std::string line = raw.substr(0, raw.find('#'));
      std::size_t first = line.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      std::size_t last = line.find_last_not_of(" \t");
      const std::string body = line.substr(first, last - first + 1);
      if (first > 0) {
        if (!pending) throw ParseError("continuation line without an entry", line_no, first + 1);
        pending->append(body, line_no, first + 1);
        continue;
      }
      flush();
      if (body.front() == '[') {
        if (body.back() != ']') throw ParseError("unterminated section header", line_no, 1);
        section_ = body.substr(1, body.size() - 2);
        if (section_ != "bounds" && section_ != "semigroups" && section_ != "cocycles" &&
            section_ != "lattices" && section_ != "elements")
          throw ParseError("unknown section '" + section_ + "'", line_no, 2);
        continue;
      }
      pending = Source{};
      pending->line = line_no;
      pending->append(body, line_no, 1);
    }
    flush();
    return std::move(model_);
  }

 private:
  void entry(const Source& src) {
    Cursor c(src);
    if (section_.empty()) c.fail("entry outside of a section");
    if (section_ == "bounds") return bound(c);
    const std::size_t name_at = c.offset();
    std::string name = c.ident();
    c.expect(':');
    if (!names_.insert(name).second) c.fail_at(name_at, "duplicate name '" + name + "'");
    if (section_ == "semigroups") return semigroup(src, c, name);
    if (section_ == "cocycles") return cocycle(src, c, name);
    if (section_ == "lattices") return lattice(src, c, name);
    return element(c, name);
  }

  void bound(Cursor& c) {
    const std::size_t at = c.offset();
    const std::string key = c.ident();
    c.expect('=');
    const std::size_t v = c.count();
    c.expect_end();
    if (key == "degree") model_.degree_bound = v;
    else if (key == "search") model_.search_bound = v;
    else if (key == "grid") model_.grid_bound = v;
    else c.fail_at(at, "unknown bound '" + key + "'");
  }

  template <class F>
  void each_clause(const Source& src, Cursor& c, F&& f) {
    for (const auto& [b, e] : c.clauses()) {
      Source part = slice(src, b, e);
      Cursor pc(part);
      if (pc.at_end()) pc.fail("empty clause");
      const std::size_t at = pc.offset();
      const std::string key = pc.ident();
      f(key, pc, at);
      pc.expect_end();
    }
  }

  void semigroup(const Source& src, Cursor& c, const std::string& name) {
    SemigroupDef def{name, 0, {}};
    std::optional<std::size_t> dim;
    bool have_gens = false;
    std::size_t gens_at = 0;
    each_clause(src, c, [&](const std::string& key, Cursor& pc, std::size_t at) {
      if (key == "gens") {
        gens_at = at;
        def.generators = pc.int_matrix();
        have_gens = true;
      } else if (key == "dim") {
        dim = pc.count();
      } else {
        pc.fail_at(at, "semigroup " + name + ": unknown clause '" + key + "'");
      }
    });
    if (!have_gens) c.fail("semigroup " + name + ": missing gens");
    if (!dim) {
      if (def.generators.empty()) c.fail("semigroup " + name + ": empty gens need a dim clause");
      dim = def.generators.front().dim();
    }
    for (const auto& g : def.generators)
      if (g.dim() != *dim)
        throw ParseError("semigroup " + name + ": generator " + g.to_string() +
                             " does not have dimension " + std::to_string(*dim),
                         src.pos[gens_at].first, src.pos[gens_at].second);
    if (*dim == 0) c.fail("semigroup " + name + ": dimension must be positive");
    def.dim = *dim;
    model_.semigroups.push_back(std::move(def));
  }

  void cocycle(const Source& src, Cursor& c, const std::string& name) {
    std::optional<std::size_t> dim;
    std::vector<std::string> params;
    struct Item {
      std::string key, param;
      IntMatrix int_m;
      RatMatrix rat_m;
      RatVector rat_v;
    };
    std::vector<Item> items;
    auto pos = [&](std::size_t at) { return src.pos[std::min(at, src.pos.size() - 1)]; };
    each_clause(src, c, [&](const std::string& key, Cursor& pc, std::size_t) {
      if (key == "dim") {
        dim = pc.count();
      } else if (key == "params") {
        params = pc.name_list();
      } else if (key == "bichar" || key == "qmatrix") {
        Item it{key, pc.ident(), pc.int_matrix(), {}, {}};
        items.push_back(std::move(it));
      } else if (key == "quad") {
        Item it{key, pc.ident(), {}, pc.rat_matrix(), {}};
        items.push_back(std::move(it));
      } else if (key == "linear") {
        Item it{key, pc.ident(), {}, {}, pc.rat_vector()};
        items.push_back(std::move(it));
      } else {
        pc.fail("cocycle " + name + ": unknown clause '" + key + "'");
      }
    });
    if (!dim) c.fail("cocycle " + name + ": missing dim");
    const std::size_t d = *dim;
    auto error = [&](const std::string& msg) -> ParseError {
      const auto p = pos(0);
      return ParseError("cocycle " + name + ": " + msg, p.first, p.second);
    };
    std::map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < params.size(); ++k) {
      if (params[k] == "X" || !ident_start(params[k][0]))
        throw error("invalid parameter name '" + params[k] + "'");
      if (!index.emplace(params[k], k).second) throw error("duplicate parameter " + params[k]);
    }
    std::vector<IntMatrix> bichar(params.size(), IntMatrix(d, IntVector(d)));
    std::vector<RatMatrix> quad(params.size(), zero_rat_matrix(d));
    std::vector<RatVector> linear(params.size(), RatVector(d, Rational(0)));
    bool has_coboundary = false;
    for (const auto& it : items) {
      auto k = index.find(it.param);
      if (k == index.end()) throw error(it.key + " names unknown parameter '" + it.param + "'");
      if (it.key == "bichar" || it.key == "qmatrix") {
        if (!is_square(it.int_m, d))
          throw error(it.key + " matrix for " + it.param + " is not " + shape(d));
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j) {
            if (it.key == "bichar") {
              bichar[k->second][i][j] += it.int_m[i][j];
              continue;
            }
            if ((i == j && it.int_m[i][j] != 0) || it.int_m[i][j] + it.int_m[j][i] != 0)
              throw error("qmatrix for " + it.param + " is not skew-symmetric");
            if (i > j) bichar[k->second][i][j] += it.int_m[i][j];
          }
      } else if (it.key == "quad") {
        if (!is_square(it.rat_m, d))
          throw error("quad matrix for " + it.param + " is not " + shape(d));
        quad[k->second] = it.rat_m;
        has_coboundary = true;
      } else {
        if (it.rat_v.size() != d)
          throw error("linear form for " + it.param + " needs " + std::to_string(d) + " entries");
        linear[k->second] = it.rat_v;
        has_coboundary = true;
      }
    }
    std::optional<Coboundary> cob;
    if (has_coboundary) cob = Coboundary(d, params, std::move(quad), std::move(linear));
    model_.cocycles.push_back({name, Cocycle(d, params, std::move(bichar), std::move(cob))});
  }

  void lattice(const Source& src, Cursor& c, const std::string& name) {
    LatticeDef def{name, {}, {}, std::nullopt};
    bool have_elements = false;
    std::optional<std::size_t> poset_size;
    std::vector<std::pair<Integer, Integer>> less;
    std::vector<std::pair<std::pair<std::string, std::string>, std::size_t>> covers;
    each_clause(src, c, [&](const std::string& key, Cursor& pc, std::size_t at) {
      if (key == "elements") {
        def.elements = pc.name_list();
        have_elements = true;
      } else if (key == "covers") {
        pc.expect('[');
        if (!pc.accept(']')) {
          do {
            const std::size_t pair_at = pc.offset();
            pc.expect('[');
            std::string a = pc.token();
            pc.expect(',');
            std::string b = pc.token();
            pc.expect(']');
            covers.push_back({{a, b}, pair_at});
          } while (pc.accept(','));
          pc.expect(']');
        }
      } else if (key == "poset") {
        poset_size = pc.count();
      } else if (key == "less") {
        for (const auto& row : pc.int_matrix()) {
          if (row.dim() != 2) pc.fail("lattice " + name + ": less pairs need two entries");
          less.emplace_back(row[0], row[1]);
        }
      } else {
        pc.fail_at(at, "lattice " + name + ": unknown clause '" + key + "'");
      }
    });
    if (poset_size) {
      if (have_elements || !covers.empty())
        c.fail("lattice " + name + ": use either elements/covers or poset/less");
      Poset p{*poset_size, {}};
      for (const auto& [a, b] : less) {
        if (a < 0 || b < 0 || a >= Integer(static_cast<unsigned long>(p.size)) ||
            b >= Integer(static_cast<unsigned long>(p.size)))
          c.fail("lattice " + name + ": poset relation out of range");
        p.less.emplace_back(a.get_ui(), b.get_ui());
      }
      def.poset = std::move(p);
    } else {
      if (!have_elements) c.fail("lattice " + name + ": missing elements");
      std::set<std::string> known(def.elements.begin(), def.elements.end());
      if (known.size() != def.elements.size()) c.fail("lattice " + name + ": duplicate element");
      for (const auto& [pr, at] : covers) {
        for (const auto& e : {pr.first, pr.second})
          if (!known.count(e)) {
            const auto p = src.pos[std::min(at, src.pos.size() - 1)];
            throw ParseError("lattice " + name + ": unknown element '" + e + "'", p.first, p.second);
          }
        def.covers.push_back(pr);
      }
    }
    model_.lattices.push_back(std::move(def));
  }

  void element(Cursor& c, const std::string& name) {
    ElementDef def{name, 0, {}};
    std::optional<std::size_t> dim;
    if (c.peek_ident("0")) {
      c.token();
      c.expect(';');
      if (!c.peek_ident("dim")) c.fail("element " + name + ": zero needs a dim clause");
      c.ident();
      def.dim = c.count();
      c.expect_end();
      model_.elements.push_back(std::move(def));
      return;
    }
    do {
      ScalarMonomial coeff;
      while (!c.at_monomial()) {
        coeff *= c.factor();
        c.expect('*');
      }
      if (c.accept('-')) coeff = ScalarMonomial(-1) * coeff;
      const std::size_t at = c.offset();
      if (c.ident() != "X") c.fail_at(at, "expected a monomial X[...]");
      IntVector s = c.int_vector();
      if (dim && s.dim() != *dim) c.fail_at(at, "element " + name + ": mixed dimensions");
      dim = s.dim();
      def.element.add_term(s, coeff);
    } while (c.accept('+'));
    c.expect_end();
    def.dim = *dim;
    model_.elements.push_back(std::move(def));
  }

  ModelFile model_;
  std::string section_;
  std::set<std::string> names_;
};

template <class T>
const T* find_named(const std::vector<T>& xs, const std::string& name) {
  for (const auto& x : xs)
    if (x.name == name) return &x;
  return nullptr;
}

}  // namespace

const SemigroupDef* ModelFile::find_semigroup(const std::string& n) const {
  return find_named(semigroups, n);
}
const CocycleDef* ModelFile::find_cocycle(const std::string& n) const {
  return find_named(cocycles, n);
}
const LatticeDef* ModelFile::find_lattice(const std::string& n) const {
  return find_named(lattices, n);
}
const ElementDef* ModelFile::find_element(const std::string& n) const {
  return find_named(elements, n);
}

ModelFile parse_model(const std::string& text) { return Parser().run(text); }

ScalarMonomial parse_scalar(const std::string& text) {
  Source src;
  src.line = 1;
  src.append(text, 1, 1);
  Cursor c(src);
  ScalarMonomial out = c.scalar();
  c.expect_end();
  return out;
}

AffineSemigroup build_semigroup(const SemigroupDef& def) {
  return AffineSemigroup(def.generators, def.dim);
}

DistLattice build_lattice(const LatticeDef& def) {
  if (def.poset) return ideal_lattice(*def.poset);
  return DistLattice::from_names(def.elements, def.covers);
}

}  // namespace qtoric
