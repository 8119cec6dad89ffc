// Acceptance runner: one PASS/FAIL line per criterion. Exits nonzero when
// any criterion fails.
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "support.hpp"

using namespace qtoric;
using namespace qtoric::testing;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(bool cond, const std::string& what) {
  if (!cond) throw Failure(what);
}

TwistedElement X(const IntVector& s) { return TwistedElement::monomial(s); }

std::vector<IntVector> pairs_domain(const AffineSemigroup& s, std::size_t degree) {
  return elements_up_to_degree(s, degree);
}

// 1. Associativity over monomials of total degree <= 3 and mutate-and-detect.
std::string criterion_associativity() {
  std::size_t triples = 0, cocycles = 0;
  for (std::size_t d = 1; d <= 3; ++d) {
    const auto mons = monomials_up_to(d, 3);
    for (const auto& c : fixture_cocycles(d)) {
      ++cocycles;
      const auto t = TwistedAlgebra::torus(c.alpha);
      std::vector<Triple> ts;
      for (const auto& x : mons)
        for (const auto& y : mons)
          for (const auto& z : mons) {
            const auto lhs = product(t, product(t, X(x), X(y)), X(z));
            const auto rhs = product(t, X(x), product(t, X(y), X(z)));
            check(lhs == rhs, "associativity fails for " + c.name + " at " + x.to_string() +
                                  y.to_string() + z.to_string());
            ts.push_back({x, y, z});
            ++triples;
          }
      check(validate_cocycle(c.alpha, ts).ok, "validate_cocycle rejects " + c.name);
      const IntVector a = IntVector::unit(d, 0);
      const IntVector b = IntVector::unit(d, d - 1);
      const Cocycle alpha = c.alpha;
      CocycleFn bad = [&](const IntVector& s, const IntVector& u) {
        const ScalarMonomial v = alpha(s, u);
        return (s == a && u == b) ? v * ScalarMonomial::param("q") : v;
      };
      check(!validate_cocycle(bad, ts).ok, "corrupted " + c.name + " not detected");
    }
  }
  return std::to_string(cocycles) + " cocycles, " + std::to_string(triples) + " monomial triples";
}

// 2. Twisting system reconstruction.
std::string criterion_twist() {
  std::size_t pairs = 0, axioms = 0;
  for (const auto& f : core_fixtures())
    for (const auto& c : fixture_cocycles(f.s.ambient_dim())) {
      const TwistedAlgebra a(f.s, c.alpha);
      const TwistCheck chk = twisting_system(a, 3, 5);
      check(chk.grid_bound == 3 && chk.product_degree == 5, "bounds not honored");
      const auto mons = pairs_domain(f.s, 5);
      for (const auto& x : mons)
        for (const auto& y : mons) {
          if ((x.sum() + y.sum()) > 5) continue;
          check(chk.system.twisted_product(X(x), X(y)) == product(a, X(x), X(y)),
                f.name + "/" + c.name + " product mismatch at " + x.to_string() + y.to_string());
          ++pairs;
        }
      // The axiom with the commutative product of k[S], evaluated here.
      std::vector<IntVector> grid;
      for (const auto& x : elements_up_to_degree(f.s, 3 * f.s.ambient_dim())) {
        bool in = true;
        for (std::size_t i = 0; i < x.dim(); ++i) in = in && x[i] <= 3;
        if (in) grid.push_back(x);
      }
      auto comm = [](const TwistedElement& u, const TwistedElement& v) {
        TwistedElement out;
        for (const auto& [s, cs] : u.terms())
          for (const auto& [t, ct] : v.terms()) out.add_term(s + t, cs * ct);
        return out;
      };
      const TwistingSystem& tau = chk.system;
      for (const auto& g : grid)
        for (const auto& g1 : grid)
          for (const auto& g2 : grid) {
            const auto lhs = tau.apply(g2, comm(tau.apply(g1, X(g)), X(g1)));
            const auto rhs = comm(tau.apply(g1 + g2, X(g)), tau.apply(g2, X(g1)));
            check(lhs == rhs, "twisting axiom fails for " + f.name + "/" + c.name);
            ++axioms;
          }
      check(tau.apply(IntVector(f.s.ambient_dim()), X(f.s.generators()[0])) == X(f.s.generators()[0]),
            "tau_0 is not the identity");
    }
  return std::to_string(pairs) + " product pairs (total degree <= 5), " + std::to_string(axioms) +
         " axiom instances on [0,3]^d";
}

// 3. Facet decomposition.
std::string criterion_decomposition() {
  std::size_t points = 0;
  for (const auto& f : all_fixtures()) {
    if (!f.normal) continue;
    const Decomposition dec = decompose(f.s, 6);
    check(dec.verified, f.name + " decomposition not verified");
    BruteMembership member(f.s);
    for_each_l1_point(f.s.ambient_dim(), 6, [&](const IntVector& x) {
      bool all = true;
      for (const auto& fs : dec.facets) all = all && fs.contains(x) && fs.in_presentation(x);
      check(all == member(x), f.name + " disagrees at " + x.to_string());
      ++points;
    });
  }
  try {
    decompose(n23());
    throw Failure("<2,3> was decomposed");
  } catch (const PreconditionError& e) {
    const auto& cert = e.certificate();
    const bool g = std::find(cert.begin(), cert.end(), std::make_pair(std::string("g"), std::string("(1)"))) != cert.end();
    const bool p = std::find(cert.begin(), cert.end(), std::make_pair(std::string("p"), std::string("2"))) != cert.end();
    check(g && p, "refusal lacks the witness g=1, p=2");
  }
  return std::to_string(points) + " lattice points; <2,3> refused with g=1, p=2";
}

// 4. S_tau structure and q_tau skew symmetry.
std::string criterion_facet_structure() {
  std::size_t facets = 0;
  for (const auto& f : all_fixtures()) {
    if (!f.normal) continue;
    for (const auto& tau : f.s.facets()) {
      const FacetSemigroup fs = facet_subsemigroup(f.s, tau);
      check(fs.iso_determinant == 1 || fs.iso_determinant == -1, f.name + " witness not unimodular");
      check(fs.unit_basis.size() + 1 == f.s.ambient_dim(), f.name + " unit rank wrong");
      for_each_l1_point(f.s.ambient_dim(), 5, [&](const IntVector& x) {
        const IntVector y = fs.to_standard(x);
        check(fs.from_standard(y) == x, "isomorphism does not round trip");
        check((y[y.dim() - 1] >= 0) == fs.in_presentation(x), "image is not Z^n + N");
      });
      for (const auto& c : fixture_cocycles(f.s.ambient_dim())) {
        const auto loc = localize_at_facet(TwistedAlgebra(f.s, c.alpha), tau);
        check(is_multiplicatively_skew(loc.q_tau), "q_tau not skew for " + f.name + "/" + c.name);
        for (std::size_t i = 0; i < loc.q_tau.size(); ++i) check(loc.q_tau[i][i].is_one(), "q_tau diagonal");
      }
      ++facets;
    }
  }
  return std::to_string(facets) + " facet semigroups with verified Z^n + N witnesses";
}

// 5. Maximal order iff normal.
std::string criterion_maximal_order() {
  std::vector<std::pair<std::string, AffineSemigroup>> cases;
  std::size_t constructed = 0;
  for (const auto& f : all_fixtures()) {
    cases.emplace_back(f.name, f.s);
    if (!f.normal) continue;
    const auto hb = is_normal(f.s).hilbert_basis;
    for (std::size_t k = 0; k < hb.size(); ++k) {
      IntMatrix rest;
      for (std::size_t j = 0; j < hb.size(); ++j)
        if (j != k) rest.push_back(hb[j]);
      AffineSemigroup s(rest, f.s.ambient_dim());
      if (!s.is_full() || !brute_normality_violation(s, 4, 4)) continue;
      cases.emplace_back(f.name + " minus " + hb[k].to_string(), s);
      ++constructed;
    }
  }
  check(constructed > 0, "no non-normal semigroup constructed");
  std::size_t normal = 0;
  for (const auto& [name, s] : cases) {
    const bool oracle_normal = !brute_normality_violation(s, 4, 4).has_value();
    const auto r = regularity_report(s);
    check(r.normal == oracle_normal, name + ": normality disagrees with the definition oracle");
    check(r.maximal_order == oracle_normal, name + ": maximal order is not normality");
    normal += oracle_normal;
  }
  return std::to_string(cases.size()) + " semigroups (" + std::to_string(normal) + " normal, " +
         std::to_string(constructed) + " built by removing a Hilbert basis element)";
}

// 6. Regularity fixtures with the interior-point cross-check.
std::string criterion_regularity() {
  struct Expect {
    std::string name;
    AffineSemigroup s;
    bool gorenstein;
    bool regular;
  };
  const std::vector<Expect> cases = {
      {"N2", n2(), true, true}, {"A1", a1(), true, false}, {"R13", r13(), false, false}};
  for (const auto& e : cases) {
    const auto r = regularity_report(e.s);
    check(r.cohen_macaulay == TriState::yes, e.name + " not CM");
    check((r.gorenstein == TriState::yes) == e.gorenstein, e.name + " Gorenstein wrong");
    check(r.regular == e.regular, e.name + " regularity wrong");
    if (e.gorenstein) check(r.gorenstein_witness == IntVector{1, 1}, e.name + " witness is not (1,1)");
    const auto c = brute_gorenstein_point(e.s, 6);
    check(c.has_value() == e.gorenstein, e.name + " interior-point oracle disagrees");
    if (c) check(*c == *r.gorenstein_witness, e.name + " interior-point generator differs");
  }
  return "N2 (CM, G c=(1,1), regular), A1 (CM, G c=(1,1)), R13 (CM only); oracle agrees to sum 6";
}

// 7. Quantum torus embedding.
std::string criterion_embedding() {
  std::size_t algebras = 0;
  for (const auto& f : all_fixtures()) {
    if (!f.s.is_full()) continue;
    for (const auto& c : fixture_cocycles(f.s.ambient_dim())) {
      const TwistedAlgebra a(f.s, c.alpha);
      const TorusEmbedding e = quantum_torus_embedding(a);
      const std::size_t d = a.dim();
      std::vector<TwistedElement> y;
      for (std::size_t i = 0; i < d; ++i) {
        const auto& [s, t] = e.differences[i];
        check(f.s.contains(s) && f.s.contains(t) && s - t == IntVector::unit(d, i), "bad difference");
        y.push_back(torus_product(c.alpha, X(s), torus_inverse(c.alpha, t)));
      }
      check(is_multiplicatively_skew(e.q_prime), f.name + " q' not skew");
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          check(torus_product(c.alpha, y[i], y[j]) ==
                    Coefficient(e.q_prime[i][j]) * torus_product(c.alpha, y[j], y[i]),
                "q' does not commute Y");
      const auto& gens = f.s.generators();
      for (std::size_t g = 0; g < gens.size(); ++g) {
        TwistedElement yg = X(IntVector(d));
        for (std::size_t i = 0; i < d; ++i)
          yg = torus_product(c.alpha, yg, torus_power(c.alpha, y[i], gens[g][i].get_si()));
        check(X(gens[g]) == Coefficient(e.generator_scalars[g]) * yg,
              f.name + "/" + c.name + " generator " + gens[g].to_string() + " is not mu*Y^g");
      }
      ++algebras;
    }
  }
  return std::to_string(algebras) + " algebras; <2,3>: X^2 = mu Y0^2, X^3 = mu Y0^3";
}

// 8. Cohomology.
std::string criterion_cohomology() {
  const std::vector<IntVector> e = {{1, 0}, {0, 1}};
  const Cocycle b(2, {"q"}, {IntMatrix{{0, 1}, {0, 0}}});
  const Cocycle b_prime(2, {"q"}, {IntMatrix{{0, 0}, {-1, 0}}});
  auto plane = [](long k) { return Cocycle::from_q_exponents(2, {"q"}, {IntMatrix{{0, k}, {-k, 0}}}); };
  const std::vector<Cocycle> six = {Cocycle(2, {"q"}, {}), b, b_prime, plane(1), shifted(2), plane(2)};
  const std::size_t n = six.size();
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n));
  const auto box = exhaustive_triples(2, -2, 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto r = are_cohomologous(six[i], six[j], e);
      rel[i][j] = r.cohomologous;
      if (r.cohomologous)
        for (const auto& t : box)
          check(six[i](t[0], t[1]) == r.witness->differential(t[0], t[1]) * six[j](t[0], t[1]),
                "witness fails on [-2,2]^2");
    }
  for (std::size_t i = 0; i < n; ++i) {
    check(rel[i][i], "not reflexive");
    for (std::size_t j = 0; j < n; ++j) {
      check(rel[i][j] == rel[j][i], "not symmetric");
      for (std::size_t k = 0; k < n; ++k) check(!(rel[i][j] && rel[j][k]) || rel[i][k], "not transitive");
    }
  }
  const auto r = are_cohomologous(b, b_prime, e);
  check(r.cohomologous && r.witness->describe() == "q^(-s0*s1)", "B vs B' witness is not q^(-s0*s1)");
  const auto nr = are_cohomologous(plane(1), Cocycle(2, {"q"}, {}), e);
  check(!nr.cohomologous && nr.distinguishing_pair &&
            nr.distinguishing_pair->first == e[0] && nr.distinguishing_pair->second == e[1],
        "quantum plane vs trivial lacks pair (e0,e1)");
  return "equivalence on 6 cocycles; f = q^(-s0*s1) verified on all [-2,2]^2 pairs; pair (e0,e1)";
}

// 9. Lattice pipeline.
std::string criterion_lattices() {
  std::vector<std::pair<std::string, DistLattice>> lattices;
  lattices.emplace_back("2-chain", DistLattice({"0", "1"}, {{0, 1}}));
  lattices.emplace_back("3-chain", DistLattice({"0", "1", "2"}, {{0, 1}, {1, 2}}));
  lattices.emplace_back("diamond", DistLattice({"0", "a", "b", "1"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}));
  std::size_t from_posets = 0, exactly_five = 0;
  for (std::size_t n = 0; n <= 5; ++n)
    for (const auto& p : unlabeled_posets(n)) {
      lattices.emplace_back("J(P" + std::to_string(n) + "." + std::to_string(from_posets) + ")",
                            ideal_lattice(p));
      ++from_posets;
      exactly_five += n == 5;
    }
  std::size_t words_checked = 0;
  for (const auto& [name, l] : lattices) {
    const StrSemigroup sg = str_embedding(l, std::nullopt, 4);
    const std::size_t d = sg.dim;
    std::set<IntVector> image(sg.i_map.begin(), sg.i_map.end());
    check(image.size() == l.size(), name + ": i not injective");
    // Region points with s0 <= 4, enumerated here.
    std::size_t region = 0;
    IntVector s(d);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == d) {
        const bool in = sg.in_region(s);
        check(in == sg.semigroup.contains(s), name + ": S differs from the region at " + s.to_string());
        if (in) {
          ++region;
          check(word_exponent(sg, psi(sg, s)) == s, name + ": i(psi(s)) != s");
        }
        return;
      }
      const long hi = k == 0 ? 4 : s[0].get_si();
      for (long v = 0; v <= hi; ++v) {
        s[k] = v;
        rec(k + 1);
      }
    };
    rec(0);
    std::size_t words = 0;
    for (std::size_t len = 0; len <= 4; ++len)
      for (const auto& w : standard_words(l, len)) {
        check(psi(sg, word_exponent(sg, w)) == w, name + ": psi(i(w)) != w");
        ++words;
      }
    check(words == region, name + ": standard words do not biject onto S with s0 <= 4");
    check(is_normal(sg.semigroup).normal, name + ": str not normal");

    const Cocycle alpha = quantum(d);
    const TwistedAlgebra a(sg.semigroup, alpha);
    std::vector<std::size_t> w;
    std::function<void()> all_words = [&] {
      const auto st = straighten(a, sg, w);
      std::vector<IntVector> exps, std_exps;
      for (auto x : w) exps.push_back(sg.i_map[x]);
      for (auto x : st.word) std_exps.push_back(sg.i_map[x]);
      check(st.word == psi(sg, word_exponent(sg, w)), name + ": standard word not unique");
      check(st.scalar == monomial_product_scalar(alpha, exps) / monomial_product_scalar(alpha, std_exps),
            name + ": scalar differs from the direct product");
      auto sorted = w;
      std::sort(sorted.begin(), sorted.end());
      check(straighten(a, sg, sorted).word == st.word, name + ": order dependent");
      ++words_checked;
      if (w.size() == 3) return;
      for (std::size_t x = 0; x < l.size(); ++x) {
        w.push_back(x);
        all_words();
        w.pop_back();
      }
    };
    all_words();
  }
  return std::to_string(lattices.size()) + " lattices (" + std::to_string(from_posets) +
         " ideal lattices of posets with <= 5 elements, " + std::to_string(exactly_five) +
         " with exactly 5), " + std::to_string(words_checked) + " words straightened";
}

// 10. Hilbert function twist invariance.
std::string criterion_hilbert() {
  std::size_t algebras = 0;
  for (const auto& f : all_fixtures()) {
    const auto untwisted = component_dimensions(TwistedAlgebra(f.s, Cocycle::trivial(f.s.ambient_dim())), 8);
    check(untwisted == hilbert_function(f.s, 8), f.name + ": k[S] dimensions differ from counts");
    for (const auto& c : fixture_cocycles(f.s.ambient_dim())) {
      check(component_dimensions(TwistedAlgebra(f.s, c.alpha), 8) == untwisted,
            f.name + "/" + c.name + ": component dimensions differ");
      ++algebras;
    }
  }
  return std::to_string(algebras) + " twisted algebras agree with k[S] in degrees 0..8";
}

// 11. CLI determinism and exit codes.
struct RunResult {
  std::string out;
  int code;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + QTORIC_CLI + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw Failure("cannot run " + cmd);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {out, WIFEXITED(status) ? WEXITSTATUS(status) : -1};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure("missing " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string criterion_cli() {
  const std::string dir = QTORIC_GOLDEN_DIR;
  const std::string model = "--model '" + dir + "/fixtures.qtm'";
  std::ifstream list(dir + "/commands.txt");
  check(static_cast<bool>(list), "missing commands.txt");
  std::string line;
  std::size_t goldens = 0;
  while (std::getline(list, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream in(line);
    std::string stem;
    int expect_code;
    in >> stem >> expect_code;
    std::string args;
    std::getline(in, args);
    const RunResult a = run_cli(args + " " + model);
    const RunResult b = run_cli(args + " " + model);
    check(a.out == b.out, stem + ": reports differ across runs");
    check(a.code == expect_code && b.code == expect_code,
          stem + ": exit " + std::to_string(a.code) + ", expected " + std::to_string(expect_code));
    check(a.out == read_file(dir + "/" + stem + ".json"), stem + ": differs from golden file");
    ++goldens;
  }
  check(goldens > 0, "no golden commands");
  const RunResult parse = run_cli("normal A1 --model '" + dir + "/broken.qtm'");
  check(parse.code == 2, "parse error exit " + std::to_string(parse.code));
  const RunResult pre = run_cli("decompose N23 " + model);
  check(pre.code == 3, "precondition exit " + std::to_string(pre.code));
  const RunResult ver = run_cli("cohomologous alpha beta " + model, "QTORIC_FAULT=witness");
  check(ver.code == 4, "verification exit " + std::to_string(ver.code));
  const RunResult env = run_cli("decompose A1 " + model, "QTORIC_BOUND=3");
  check(env.code == 0 && env.out.find("\"degree_source\": \"env\"") != std::string::npos,
        "QTORIC_BOUND not honored");
  return std::to_string(goldens) + " golden reports byte-identical over two runs; exit codes 2/3/4";
}

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;  // 0 when no runtime bound applies
  std::function<std::string()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "cocycle/associativity equivalence", 5, criterion_associativity},
      {2, "Zhang twist reconstruction", 10, criterion_twist},
      {3, "facet decomposition", 0, criterion_decomposition},
      {4, "S_tau structure", 0, criterion_facet_structure},
      {5, "maximal order iff normal", 0, criterion_maximal_order},
      {6, "regularity fixtures", 0, criterion_regularity},
      {7, "quantum torus embedding", 0, criterion_embedding},
      {8, "cohomology", 0, criterion_cohomology},
      {9, "lattice pipeline", 60, criterion_lattices},
      {10, "Hilbert function twist invariance", 0, criterion_hilbert},
      {11, "CLI determinism and exit codes", 0, criterion_cli},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.run();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && c.limit_seconds > 0 && secs >= c.limit_seconds) {
      ok = false;
      detail += "; runtime limit " + std::to_string(static_cast<int>(c.limit_seconds)) + " s exceeded";
    }
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::cout << (ok ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << ": " << detail << " ("
              << timing << ")" << std::endl;
    failed += !ok;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
