#include "qtoric/run.hpp"

#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>

#include "json.hpp"
#include "qtoric/model.hpp"

namespace qtoric {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::size_t kDefaultDegree = 6;
constexpr std::size_t kDefaultSearch = 6;
constexpr std::size_t kDefaultGrid = 3;

/// Unknown command, wrong arity or an unresolved name.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& what, std::string kind)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Json jint(const Integer& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

Json jvec(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v.entries()) a.push_back(jint(x));
  return a;
}

Json jmat(const IntMatrix& m) {
  Json a = Json::array();
  for (const auto& r : m) a.push_back(jvec(r));
  return a;
}

Json jscalars(const ScalarMatrix& q) {
  Json a = Json::array();
  for (const auto& row : q) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(x.to_string());
    a.push_back(std::move(r));
  }
  return a;
}

void merge_into(Json& o, const Json& extra) {
  for (const auto& [k, v] : extra.items()) o[k] = v;
}

Json exact(Json v) { return Json{{"value", std::move(v)}, {"status", "exact"}}; }

Json verified(Json v, std::size_t degree) {
  return Json{{"value", std::move(v)}, {"status", "verified"}, {"degree", degree}};
}

Json certificate_json(const PreconditionError::Certificate& cert) {
  Json o = Json::object();
  for (const auto& [k, v] : cert) o[k] = v;
  return o;
}

struct Context {
  const ModelFile& model;
  std::size_t degree;
  std::size_t search;
  std::size_t grid;
  bool perturb_witness;
};

void require_arity(const std::vector<std::string>& names, std::size_t lo, std::size_t hi,
                   const std::string& usage) {
  if (names.size() < lo || names.size() > hi)
    throw UsageError("usage: " + usage, "usage");
}

const SemigroupDef& semigroup_ref(const Context& ctx, const std::string& name) {
  if (auto p = ctx.model.find_semigroup(name)) return *p;
  throw UsageError("undefined semigroup '" + name + "'", "reference");
}
const CocycleDef& cocycle_ref(const Context& ctx, const std::string& name) {
  if (auto p = ctx.model.find_cocycle(name)) return *p;
  throw UsageError("undefined cocycle '" + name + "'", "reference");
}
const LatticeDef& lattice_ref(const Context& ctx, const std::string& name) {
  if (auto p = ctx.model.find_lattice(name)) return *p;
  throw UsageError("undefined lattice '" + name + "'", "reference");
}
const ElementDef& element_ref(const Context& ctx, const std::string& name) {
  if (auto p = ctx.model.find_element(name)) return *p;
  throw UsageError("undefined element '" + name + "'", "reference");
}

void require_same_dim(std::size_t a, std::size_t b, const std::string& what) {
  if (a != b)
    throw PreconditionError(what + ": dimension mismatch",
                            {{"expected", std::to_string(a)}, {"got", std::to_string(b)}});
}

Json facets_json(const AffineSemigroup& s) {
  Json a = Json::array();
  const IntMatrix& gens = s.embedded_generators();
  for (const auto& f : s.embedded_facets()) {
    Json inc = Json::array();
    for (std::size_t i : f.incident) inc.push_back(jvec(s.is_full() ? s.generators()[i] : gens[i]));
    a.push_back(Json{{"inner_normal", jvec(f.inner_normal)}, {"incident_generators", inc}});
  }
  return a;
}

Json normality_json(const NormalityResult& nr) {
  Json o;
  o["normal"] = exact(nr.normal);
  o["hilbert_basis"] = exact(jmat(nr.hilbert_basis));
  if (!nr.normal) {
    o["witness"] = exact(Json{{"g", jvec(*nr.witness)}, {"p", jint(nr.witness_multiple)}});
  }
  return o;
}

Json cmd_analyze(const Context& ctx, const std::vector<std::string>& names) {
  require_arity(names, 1, 1, "analyze <semigroup>");
  const SemigroupDef& def = semigroup_ref(ctx, names[0]);
  const AffineSemigroup s = build_semigroup(def);
  Json o;
  o["semigroup"] = def.name;
  o["ambient_dim"] = def.dim;
  o["generators"] = jmat(s.generators());
  o["rank"] = exact(s.rank());
  o["full"] = exact(s.is_full());
  o["positive"] = exact(s.is_positive());
  o["pointed"] = exact(s.is_pointed());
  o["group_basis"] = jmat(s.group().basis());
  if (s.rank() > 0) {
    o["facet_coordinates"] = s.is_full() ? "ambient" : "group";
    o["facets"] = exact(facets_json(s));
  }
  if (s.is_pointed()) {
    const NormalityResult nr = is_normal(s);
    merge_into(o, normality_json(nr));
  }
  if (s.is_positive()) {
    Json h = exact(hilbert_function(s, ctx.degree));
    h["degrees"] = "0.." + std::to_string(ctx.degree);
    o["hilbert_function"] = std::move(h);
  }
  return o;
}

Json cmd_normal(const Context& ctx, const std::vector<std::string>& names) {
  require_arity(names, 1, 1, "normal <semigroup>");
  const SemigroupDef& def = semigroup_ref(ctx, names[0]);
  Json o;
  o["semigroup"] = def.name;
  merge_into(o, normality_json(is_normal(build_semigroup(def))));
  return o;
}

Json cmd_facets(const Context& ctx, const std::vector<std::string>& names) {
  require_arity(names, 1, 1, "facets <semigroup>");
  const SemigroupDef& def = semigroup_ref(ctx, names[0]);
  const AffineSemigroup s = build_semigroup(def);
  if (s.rank() == 0) throw PreconditionError("the trivial semigroup has no facets");
  Json o;
  o["semigroup"] = def.name;
  o["coordinates"] = s.is_full() ? "ambient" : "group";
  o["facets"] = exact(facets_json(s));
  return o;
}

Json facet_semigroup_json(const FacetSemigroup& fs) {
  Json o;
  o["inner_normal"] = jvec(fs.facet.inner_normal);
  o["unit_basis"] = jmat(fs.unit_basis);
  o["complement"] = jvec(fs.complement);
  o["incident_generators"] = jmat(fs.incident_generators);
  o["positive_generators"] = jmat(fs.positive_generators);
  o["incident_generators_span_units"] = fs.incident_generators_span_units;
  o["isomorphism_determinant"] = jint(fs.iso_determinant);
  o["presentation"] = verified(true, fs.verified_degree);
  return o;
}

Json cmd_decompose(const Context& ctx, const std::vector<std::string>& names) {
  require_arity(names, 1, 1, "decompose <semigroup>");
  const SemigroupDef& def = semigroup_ref(ctx, names[0]);
  const Decomposition dec = decompose(build_semigroup(def), ctx.degree);
  Json o;
  o["semigroup"] = def.name;
  Json fs = Json::array();
  for (const auto& f : dec.facets) fs.push_back(facet_semigroup_json(f));
  o["facet_semigroups"] = std::move(fs);
  Json v = verified(dec.verified, dec.verified_degree);
  v["points_checked"] = dec.points_checked;
  o["intersection_equals_semigroup"] = std::move(v);
  return o;
}

Json cmd_regularity(const Context& ctx, const std::vector<std::string>& names) {
  require_arity(names, 1, 1, "regularity <semigroup>");
  const SemigroupDef& def = semigroup_ref(ctx, names[0]);
  const RegularityReport r = regularity_report(build_semigroup(def), ctx.degree);
  Json o;
  o["semigroup"] = def.name;
  o["rank"] = r.rank;
  o["normal"] = exact(r.normal);
  o["maximal_order"] = exact(r.maximal_order);
  o["cohen_macaulay"] = exact(to_string(r.cohen_macaulay));
  o["gorenstein"] = exact(to_string(r.gorenstein));
  if (r.gorenstein_witness) o["gorenstein_witness"] = exact(jvec(*r.gorenstein_witness));
  o["regular"] = exact(r.regular);
  o["balanced_dualizing_complex"] = exact(r.balanced_dualizing_complex);
  o["hilbert_basis"] = exact(jmat(r.hilbert_basis));
  o["facet_normals"] = jmat(r.facet_normals);
  if (r.normality_witness)
    o["normality_witness"] =
        exact(Json{{"g", jvec(*r.normality_witness)}, {"p", jint(r.normality_witness_multiple)}});
  return o;
}

TwistedAlgebra algebra_of(const Context& ctx, const std::string& s_name, const std::string& c_name) {
  const SemigroupDef& sd = semigroup_ref(ctx, s_name);
  const CocycleDef& cd = cocycle_ref(ctx, c_name);
  require_same_dim(sd.dim, cd.cocycle.dim(), "cocycle " + cd.name + " on semigroup " + sd.name);
  return TwistedAlgebra(build_semigroup(sd), cd.cocycle);
}

Json cmd_embed_torus(const Context& ctx, const std::vector<std::string>& names) {
  require_arity(names, 2, 2, "embed-torus <semigroup> <cocycle>");
  const TwistedAlgebra a = algebra_of(ctx, names[0], names[1]);
  const TorusEmbedding e = quantum_torus_embedding(a, ctx.search);
  Json o;
  o["semigroup"] = names[0];
  o["cocycle"] = names[1];
  o["search_bound"] = e.search_bound;
  Json ys = Json::array();
  for (std::size_t i = 0; i < e.rank; ++i)
    ys.push_back(Json{{"s", jvec(e.differences[i].first)},
                      {"t", jvec(e.differences[i].second)},
                      {"found_by", e.found_by_search[i] ? "search" : "integer_split"},
                      {"scalar", e.y_scalars[i].to_string()}});
  o["y"] = exact(std::move(ys));
  o["q_prime"] = exact(jscalars(e.q_prime));
  Json gs = Json::array();
  const IntMatrix& gens = a.semigroup().generators();
  for (std::size_t j = 0; j < gens.size(); ++j)
    gs.push_back(Json{{"generator", jvec(gens[j])}, {"mu", e.generator_scalars[j].to_string()}});
  o["generator_images"] = exact(std::move(gs));
  return o;
}

Json cmd_twist_check(const Context& ctx, const std::vector<std::string>& names) {
  require_arity(names, 2, 2, "twist-check <semigroup> <cocycle>");
  const TwistedAlgebra a = algebra_of(ctx, names[0], names[1]);
  const TwistCheck t = twisting_system(a, ctx.grid, ctx.degree);
  Json o;
  o["semigroup"] = names[0];
  o["cocycle"] = names[1];
  Json ax = verified(true, t.grid_bound);
  ax["grid_points"] = t.grid_points;
  ax["instances"] = t.axiom_instances;
  o["twisting_axiom"] = std::move(ax);
  Json pr = verified(true, t.product_degree);
  pr["pairs"] = t.product_pairs;
  o["twisted_product_matches"] = std::move(pr);
  return o;
}

/// Rechecks α = ∂f·β on every pair from the box [-r, r]^d, using the largest
/// r <= 2 that keeps the pair count at most 10^5.
std::optional<Json> witness_box_check(const Cocycle& alpha, const Cocycle& beta,
                                      const Coboundary& f) {
  const std::size_t d = alpha.dim();
  long radius = 0;
  for (long r = 2; r >= 1 && radius == 0; --r) {
    double pairs = 1;
    for (std::size_t k = 0; k < 2 * d; ++k) pairs *= static_cast<double>(2 * r + 1);
    if (pairs <= 1e5) radius = r;
  }
  if (radius == 0) return std::nullopt;
  std::vector<IntVector> box;
  IntVector x(d);
  for (std::size_t k = 0; k < d; ++k) x[k] = -radius;
  while (true) {
    box.push_back(x);
    std::size_t k = 0;
    while (k < d && x[k] == radius) x[k++] = -radius;
    if (k == d) break;
    x[k] += 1;
  }
  for (const auto& u : box)
    for (const auto& v : box)
      if (alpha(u, v) != f.differential(u, v) * beta(u, v))
        throw VerificationError("coboundary witness fails at " + u.to_string() + ", " +
                                v.to_string());
  return Json{{"value", true},
              {"status", "verified"},
              {"box", "[" + std::to_string(-radius) + "," + std::to_string(radius) + "]^" +
                          std::to_string(d)},
              {"pairs", box.size() * box.size()}};
}

Json cmd_cohomologous(const Context& ctx, const std::vector<std::string>& names) {
  require_arity(names, 2, 3, "cohomologous <cocycle> <cocycle> [semigroup]");
  const CocycleDef& a = cocycle_ref(ctx, names[0]);
  const CocycleDef& b = cocycle_ref(ctx, names[1]);
  std::vector<IntVector> basis;
  if (names.size() == 3) {
    const SemigroupDef& sd = semigroup_ref(ctx, names[2]);
    require_same_dim(a.cocycle.dim(), sd.dim, "semigroup " + sd.name);
    basis = build_semigroup(sd).group().basis();
  } else {
    for (std::size_t i = 0; i < a.cocycle.dim(); ++i)
      basis.push_back(IntVector::unit(a.cocycle.dim(), i));
  }
  CohomologyResult r = are_cohomologous(a.cocycle, b.cocycle, basis);
  Json o;
  o["alpha"] = a.name;
  o["beta"] = b.name;
  o["group_basis"] = jmat(basis);
  o["cohomologous"] = exact(r.cohomologous);
  if (r.witness) {
    if (ctx.perturb_witness && !r.witness->params().empty()) {
      std::vector<RatMatrix> quad = r.witness->quad();
      quad[0][0][0] += 1;
      r.witness = Coboundary(r.witness->dim(), r.witness->params(), std::move(quad),
                             r.witness->linear());
    }
    Json w = exact(r.witness->describe());
    w["verified_pairs"] = r.verified_pairs;
    if (const auto box = witness_box_check(a.cocycle, b.cocycle, *r.witness)) w["box_check"] = *box;
    o["witness"] = std::move(w);
  }
  if (r.distinguishing_pair)
    o["distinguishing_pair"] =
        exact(Json::array({jvec(r.distinguishing_pair->first), jvec(r.distinguishing_pair->second)}));
  return o;
}

Json cmd_multiply(const Context& ctx, const std::vector<std::string>& names) {
  require_arity(names, 3, 4, "multiply [semigroup] <cocycle> <element> <element>");
  const bool torus = names.size() == 3;
  const CocycleDef& cd = cocycle_ref(ctx, names[torus ? 0 : 1]);
  const ElementDef& x = element_ref(ctx, names[torus ? 1 : 2]);
  const ElementDef& y = element_ref(ctx, names[torus ? 2 : 3]);
  const TwistedAlgebra a = torus ? TwistedAlgebra::torus(cd.cocycle) : algebra_of(ctx, names[0], names[1]);
  for (const ElementDef* e : {&x, &y})
    if (!e->element.is_zero()) require_same_dim(a.dim(), e->dim, "element " + e->name);
  const TwistedElement p = product(a, x.element, y.element);
  Json o;
  o["algebra"] = torus ? "torus" : names[0];
  o["cocycle"] = cd.name;
  o["left"] = x.element.to_string();
  o["right"] = y.element.to_string();
  o["product"] = exact(p.to_string());
  if (!p.is_zero()) {
    const LeadingTerm lt = leading_term(p);
    o["leading_term"] =
        exact(Json{{"coefficient", lt.coeff.to_string()}, {"exponent", jvec(lt.exponent)}});
  }
  return o;
}

Json word_json(const DistLattice& l, const std::vector<std::size_t>& w) {
  Json a = Json::array();
  for (std::size_t id : w) a.push_back(l.name(id));
  return a;
}

Json cmd_straighten(const Context& ctx, const std::vector<std::string>& names) {
  if (names.size() < 2) throw UsageError("usage: straighten <lattice> <cocycle> <element>...", "usage");
  const LatticeDef& ld = lattice_ref(ctx, names[0]);
  const CocycleDef& cd = cocycle_ref(ctx, names[1]);
  const StrSemigroup sg = str_embedding(build_lattice(ld), std::nullopt, ctx.degree);
  require_same_dim(sg.dim, cd.cocycle.dim(), "cocycle " + cd.name + " on str(" + ld.name + ")");
  std::vector<std::size_t> word;
  for (std::size_t k = 2; k < names.size(); ++k) {
    auto id = sg.lattice.index(names[k]);
    if (!id) throw UsageError("lattice " + ld.name + " has no element '" + names[k] + "'", "reference");
    word.push_back(*id);
  }
  const TwistedAlgebra a(sg.semigroup, cd.cocycle);
  const Straightened st = straighten(a, sg, word);
  Json o;
  o["lattice"] = ld.name;
  o["cocycle"] = cd.name;
  o["word"] = word_json(sg.lattice, word);
  o["scalar"] = exact(st.scalar.to_string());
  o["standard_word"] = exact(word_json(sg.lattice, st.word));
  o["exponent"] = jvec(st.exponent);
  return o;
}

Json cmd_lattice(const Context& ctx, const std::vector<std::string>& names) {
  require_arity(names, 1, 2, "lattice <lattice> [cocycle]");
  const LatticeDef& ld = lattice_ref(ctx, names[0]);
  const DistLattice l = build_lattice(ld);
  const Cocycle alpha = names.size() == 2 ? cocycle_ref(ctx, names[1]).cocycle
                                          : Cocycle::trivial(birkhoff(l).irreducibles.size() + 1);
  const LatticeAlgebraReport rep = lattice_algebra_report(l, alpha, ctx.degree);
  const StrSemigroup& sg = rep.str;
  Json o;
  o["lattice"] = ld.name;
  o["size"] = l.size();
  o["irreducibles"] = exact(word_json(l, sg.data.irreducibles));
  Json phi = Json::object();
  Json imap = Json::object();
  for (std::size_t a = 0; a < l.size(); ++a) {
    std::vector<std::size_t> ids;
    for (std::size_t i : sg.data.phi[a]) ids.push_back(sg.data.irreducibles[i]);
    phi[l.name(a)] = word_json(l, ids);
    imap[l.name(a)] = jvec(sg.i_map[a]);
  }
  o["phi"] = exact(std::move(phi));
  o["i"] = exact(std::move(imap));
  Json image = verified(true, sg.verified_s0);
  image["bound_on"] = "s0";
  image["points_checked"] = sg.points_checked;
  o["image_is_region"] = std::move(image);
  const RegularityReport& r = rep.regularity;
  o["normal"] = exact(r.normal);
  o["maximal_order"] = exact(r.maximal_order);
  o["cohen_macaulay"] = exact(to_string(r.cohen_macaulay));
  o["gorenstein"] = exact(to_string(r.gorenstein));
  if (r.gorenstein_witness) o["gorenstein_witness"] = exact(jvec(*r.gorenstein_witness));
  o["regular"] = exact(r.regular);
  o["hilbert_basis"] = exact(jmat(r.hilbert_basis));
  return o;
}

using Handler = std::function<Json(const Context&, const std::vector<std::string>&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"analyze", cmd_analyze},         {"normal", cmd_normal},
      {"facets", cmd_facets},           {"decompose", cmd_decompose},
      {"regularity", cmd_regularity},   {"embed-torus", cmd_embed_torus},
      {"twist-check", cmd_twist_check}, {"cohomologous", cmd_cohomologous},
      {"multiply", cmd_multiply},       {"straighten", cmd_straighten},
      {"lattice", cmd_lattice},
  };
  return table;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : handlers()) out.push_back(k);
    return out;
  }();
  return names;
}

Outcome execute(const Invocation& inv) {
  Json rep;
  rep["command"] = inv.command;
  rep["arguments"] = inv.names;
  std::uint64_t digest = fnv1a(inv.model_text);
  digest = fnv1a(std::string(1, '\0') + inv.command, digest);
  for (const auto& n : inv.names) digest = fnv1a(std::string(1, '\0') + n, digest);
  rep["input_digest"] = "fnv1a64:" + hex64(digest);

  Outcome out;
  auto fail = [&](int code, Json error) {
    out.exit_code = code;
    rep["error"] = std::move(error);
  };
  try {
    auto handler = handlers().find(inv.command);
    if (handler == handlers().end()) throw UsageError("unknown command '" + inv.command + "'", "usage");
    const ModelFile model = parse_model(inv.model_text);
    if (!inv.fault.empty() && inv.fault != "witness")
      throw UsageError("unknown fault '" + inv.fault + "'", "usage");
    Context ctx{model, kDefaultDegree, model.search_bound.value_or(kDefaultSearch),
                model.grid_bound.value_or(kDefaultGrid), inv.fault == "witness"};
    std::string source = "default";
    if (inv.bound) {
      ctx.degree = *inv.bound;
      source = inv.bound_source.empty() ? "flag" : inv.bound_source;
    } else if (model.degree_bound) {
      ctx.degree = *model.degree_bound;
      source = "model";
    }
    rep["bounds"] = Json{{"degree", ctx.degree},
                         {"degree_source", source},
                         {"search", ctx.search},
                         {"grid", ctx.grid}};
    rep["results"] = handler->second(ctx, inv.names);
  } catch (const ParseError& e) {
    fail(kExitParse, Json{{"kind", "parse"}, {"message", e.what()}, {"line", e.line()},
                          {"column", e.column()}});
  } catch (const UsageError& e) {
    fail(kExitParse, Json{{"kind", e.kind()}, {"message", e.what()}});
  } catch (const LimitError& e) {
    fail(kExitPrecondition, Json{{"kind", "limit"},
                                 {"message", e.what()},
                                 {"certificate", certificate_json(e.certificate())}});
  } catch (const PreconditionError& e) {
    fail(kExitPrecondition, Json{{"kind", "precondition"},
                                 {"message", e.what()},
                                 {"certificate", certificate_json(e.certificate())}});
  } catch (const VerificationError& e) {
    fail(kExitVerification, Json{{"kind", "verification"}, {"message", e.what()}});
  } catch (const std::invalid_argument& e) {
    fail(kExitPrecondition, Json{{"kind", "precondition"}, {"message", e.what()}});
  } catch (const std::exception& e) {
    fail(kExitVerification, Json{{"kind", "internal"}, {"message", e.what()}});
  }
  out.report = rep.dump(2) + "\n";
  return out;
}

}  // namespace qtoric
