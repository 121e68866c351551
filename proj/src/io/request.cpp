#include <algorithm>

#include "stackbr/errors.hpp"
#include "stackbr/io.hpp"

namespace stackbr {

namespace {

const char* kCiteBar = "bar resolution: H^n(G, M) as the cohomology of the normalized cochain complex";
const char* kCiteBrauerless =
    "a linearly reductive group is Brauerless iff H^3 of its etale component with Z coefficients vanishes; "
    "a finite abelian group is Brauerless if and only if it is cyclic";
const char* kCiteClRooted =
    "Weil divisor class group of a rooted curve: principal divisors with order e_x · ord_x at rooted points";
const char* kCiteReciprocity = "Faddeev reciprocity: the residues of a class in Br k(P^1) corestrict to zero";
const char* kCiteExtends = "a class of Br k(P^1) lies in Br of the rooted curve iff e_x · res_x = 0 at every point";
const char* kCiteOpenRational = "Faddeev exact sequence: Br(P^1 \\ Z)[N] is the kernel of the corestriction sum on residues in Z";

struct Context {
  EvalContext eval;
  StackOptions stack;
  Report report;

  explicit Context(const RequestOptions& o) {
    eval.allow_prime_to_p = o.allow_prime_to_p;
    stack.ctx = &eval;
    stack.truncation = o.truncation;
    stack.brauerless.bar.budget = o.budget;
  }

  void warn(const std::string& w) {
    if (std::find(report.warnings.begin(), report.warnings.end(), w) == report.warnings.end()) report.warnings.push_back(w);
  }

  Report finish(ResultValue v, const std::string& citation) {
    report.result = std::move(v);
    report.citations.push_back(citation);
    for (const auto& w : eval.warnings) warn(w);
    return report;
  }

  Report finish(const ExtensionReport& r) {
    for (const auto& w : r.warnings) warn(w);
    return finish(extension_result(r), r.citation);
  }
};

const Json& field(const Json& j, const char* key, const std::string& op) {
  if (!j.is_object() || !j.contains(key)) throw ParseError("op '" + op + "' needs field '" + key + "'");
  return j.at(key);
}

RootedCurve rooted_of(const StackDescriptor& s, const std::string& op) {
  if (auto r = std::get_if<RootedCurve>(&s)) return *r;
  if (auto g = std::get_if<GerbeOverRootedCurve>(&s)) return g->rooted;
  throw ParseError("op '" + op + "' needs a rooted curve");
}

GerbeOverRootedCurve gerbe_of(const StackDescriptor& s, const std::string& op) {
  if (auto g = std::get_if<GerbeOverRootedCurve>(&s)) return *g;
  if (auto r = std::get_if<RootedCurve>(&s)) {
    GerbeOverRootedCurve g;
    g.group = LinRedDatum{FinGenAbGroup(), FiniteGroup::cyclic(1), true};
    g.rooted = *r;
    return g;
  }
  if (auto t = std::get_if<TrivialGerbe>(&s); t && t->curve) {
    GerbeOverRootedCurve g;
    g.group = t->group;
    g.rooted.curve = *t->curve;
    return g;
  }
  throw ParseError("op '" + op + "' needs a gerbe over a rooted curve");
}

PresentedGroup parse_coefficients(const Json& j) {
  if (!j.is_string()) throw ParseError("coeff must be \"Z\" or \"Z/n\"");
  const std::string s = j.get<std::string>();
  if (s == "Z") return PresentedGroup::free(1);
  if (s.rfind("Z/", 0) == 0) {
    Integer n = parse_integer(Json(s.substr(2)), "coeff");
    if (n < 1) throw ValidationError("coefficient order must be positive");
    return PresentedGroup::of(FinGenAbGroup::cyclic(n));
  }
  throw ParseError("coeff must be \"Z\" or \"Z/n\", got '" + s + "'");
}

Report op_cohomology(const Json& in, Context& c) {
  FiniteGroup g = parse_finite_group(field(in, "group", "cohomology"));
  PresentedGroup m = in.contains("coeff") ? parse_coefficients(in.at("coeff")) : PresentedGroup::free(1);
  Integer n = parse_integer(field(in, "degree", "cohomology"), "degree");
  if (n < 0 || n > 16) throw ValidationError("degree must lie in 0..16");
  BarOptions o;
  o.budget = c.stack.brauerless.bar.budget;
  FinGenAbGroup h = group_cohomology(g, GMod::trivial(g, m), n.get_ui(), o);
  return c.finish(group_result(h), kCiteBar);
}

Report op_brauerless(const Json& in, Context& c) {
  if (in.is_object() && in.contains("kind")) {
    GerbeOverRootedCurve g = gerbe_of(parse_stack(in), "brauerless");
    return c.finish(BoolResult{locally_brauerless(stabilizers_of(g), c.stack.brauerless)}, kCiteBrauerless);
  }
  int p = 0;
  Json group = in;
  if (in.is_object() && in.contains("char")) {
    p = static_cast<int>(parse_integer(in.at("char"), "char").get_si());
    group.erase("char");
  }
  return c.finish(BoolResult{brauerless(parse_group(group), p, c.stack.brauerless)}, kCiteBrauerless);
}

Report op_pic(const Json& in, Context& c) {
  StackDescriptor s = parse_stack(in);
  if (auto b = std::get_if<ClassifyingStack>(&s)) return c.finish(pic_classifying(*b, c.stack));
  if (auto t = std::get_if<TrivialGerbe>(&s); t && !t->curve) return c.finish(pic_classifying({t->group, t->base}, c.stack));
  if (auto r = std::get_if<RootedCurve>(&s)) return c.finish(pic_rooted(*r, c.stack));
  if (std::holds_alternative<CatalogueStack>(s)) throw Unsupported("Picard groups of catalogue stacks");
  return c.finish(pic_cl_report(gerbe_of(s, "pic"), c.stack));
}

Report op_cl(const Json& in, Context& c) {
  RootedCurve r = rooted_of(parse_stack(in), "cl");
  return c.finish(group_result(cl_stack(r)), kCiteClRooted);
}

Report op_brauer(const Json& in, Context& c) { return c.finish(brauer_stack(parse_stack(in), c.stack)); }

Report op_filtration(const Json& in, Context& c) {
  return c.finish(proper_filtration(gerbe_of(parse_stack(in), "filtration"), c.stack));
}

Report op_catalogue(const Json& in, Context& c) {
  if (in.is_object() && in.contains("kind")) return c.finish(brauer_stack(parse_stack(in), c.stack));
  const Json& name = field(in, "name", "catalogue");
  if (!name.is_string()) throw ParseError("catalogue name must be a string");
  return c.finish(brauer_catalogue(catalogue_name(name.get<std::string>()), parse_base(field(in, "base", "catalogue")), c.stack));
}

Report op_faddeev(const Json& in, Context& c) {
  if (in.contains("stack")) {
    RootedCurve r = rooted_of(parse_stack(in.at("stack")), "faddeev");
    std::vector<RemovedPoint> support;
    if (in.contains("support")) support = parse_points(in.at("support"));
    FaddeevSequenceReport rep = stacky_faddeev_sequence(r, support, c.stack);
    SequenceResult s;
    s.truncation = rep.truncation;
    for (const auto& n : rep.nodes) s.nodes.emplace_back(n.name, n.homology.to_string());
    s.composition_zero = rep.composition_zero;
    s.exact = rep.exact;
    s.surjective = rep.surjective;
    return c.finish(s, rep.citation);
  }
  BaseDescriptor base = parse_base(field(in, "base", "faddeev"));
  if (in.contains("residues")) return c.finish(BoolResult{faddeev_validate(parse_residues(in.at("residues")), base)}, kCiteReciprocity);
  if (in.contains("removed")) {
    if (!c.stack.truncation) throw ParseError("brauer of an open rational curve needs --truncation");
    FinGenAbGroup g = brauer_open_rational(parse_points(in.at("removed")), base, *c.stack.truncation);
    c.warn("N-torsion only: Br computed up to " + c.stack.truncation->get_str() + "-torsion");
    return c.finish(group_result(g), kCiteOpenRational);
  }
  throw ParseError("op 'faddeev' needs 'stack', 'residues' or 'removed'");
}

Report op_extends(const Json& in, Context& c) {
  RootedCurve r = rooted_of(parse_stack(field(in, "stack", "extends")), "extends");
  return c.finish(BoolResult{class_extends(parse_residues(field(in, "residues", "extends")), r)}, kCiteExtends);
}

}  // namespace

Report run_request(const std::string& op, const Json& input, const RequestOptions& options) {
  if (options.truncation && *options.truncation < 1) throw ValidationError("truncation must be at least 1");
  if (options.budget < 1) throw ValidationError("budget must be at least 1");
  Context c(options);
  if (op == "cohomology") return op_cohomology(input, c);
  if (op == "brauerless") return op_brauerless(input, c);
  if (op == "pic") return op_pic(input, c);
  if (op == "cl") return op_cl(input, c);
  if (op == "brauer") return op_brauer(input, c);
  if (op == "filtration") return op_filtration(input, c);
  if (op == "catalogue") return op_catalogue(input, c);
  if (op == "faddeev") return op_faddeev(input, c);
  if (op == "extends") return op_extends(input, c);
  throw ParseError("unknown op '" + op + "'");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const HypothesisUnmet*>(&e) || dynamic_cast<const NotLocallyBrauerless*>(&e)) return 2;
  return 1;
}

std::pair<Report, int> run_request_safely(const std::string& op, const Json& input, const RequestOptions& options) {
  try {
    return {run_request(op, input, options), 0};
  } catch (const Error& e) {
    Report r;
    r.error = ErrorInfo{e.kind(), e.what()};
    return {r, exit_code_for(e)};
  } catch (const Json::exception& e) {
    Report r;
    r.error = ErrorInfo{"ParseError", e.what()};
    return {r, 1};
  } catch (const std::exception& e) {
    Report r;
    r.error = ErrorInfo{"Error", e.what()};
    return {r, 1};
  }
}

}  // namespace stackbr
