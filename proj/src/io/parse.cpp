#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "stackbr/errors.hpp"
#include "stackbr/io.hpp"

namespace stackbr {

namespace {

void only_keys(const Json& j, const std::string& what, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ParseError(what + " must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ParseError("unknown field '" + k + "' in " + what);
}

const Json& required(const Json& j, const char* key, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(what + " needs field '" + key + "'");
  return *it;
}

bool get_bool(const Json& j, const char* key, bool fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) throw ParseError(std::string("field '") + key + "' must be a boolean");
  return it->get<bool>();
}

int get_int(const Json& j, const char* key, int fallback, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  Integer v = parse_integer(*it, what + "." + key);
  if (!v.fits_sint_p()) throw ParseError(what + "." + key + " is out of range");
  return static_cast<int>(v.get_si());
}

std::string get_string(const Json& j, const char* key, const std::string& fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::vector<RootPoint> parse_roots(const Json& j) {
  if (!j.is_array()) throw ParseError("roots must be an array");
  std::vector<RootPoint> out;
  for (const auto& r : j) {
    only_keys(r, "root", {"label", "deg", "e"});
    RootPoint p;
    p.label = get_string(r, "label", "");
    if (p.label.empty()) throw ParseError("root needs a non-empty label");
    p.degree = get_int(r, "deg", 1, "root");
    p.e = parse_integer(required(r, "e", "root"), "root.e");
    out.push_back(p);
  }
  return out;
}

}  // namespace

Integer parse_integer(const Json& j, const std::string& what) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
  if (j.is_number_unsigned()) return Integer(std::to_string(j.get<unsigned long long>()));
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    Integer v;
    if (s.empty() || v.set_str(s, 10) != 0) throw ParseError(what + ": '" + s + "' is not an integer");
    return v;
  }
  throw ParseError(what + " must be an integer");
}

BaseDescriptor parse_base(const Json& j) {
  if (!j.is_object()) throw ParseError("base must be a JSON object");
  const std::string kind = get_string(j, "base", "");
  if (kind == "algclosed" || kind == "sepclosed") {
    only_keys(j, "base", {"base", "char"});
    int p = get_int(j, "char", 0, "base");
    return kind == "algclosed" ? BaseDescriptor::alg_closed(p) : BaseDescriptor::sep_closed(p);
  }
  if (kind == "Fq") {
    only_keys(j, "base", {"base", "q"});
    return BaseDescriptor::finite_field(parse_integer(required(j, "q", "base"), "base.q"));
  }
  if (kind == "strict-henselian") {
    only_keys(j, "base", {"base", "residue_char", "regular"});
    return BaseDescriptor::strict_henselian(get_int(j, "residue_char", 0, "base"), get_bool(j, "regular", true));
  }
  if (kind == "symbolic") {
    only_keys(j, "base", {"base", "name", "invertible", "regular", "noetherian", "connected"});
    std::vector<Integer> inv;
    if (auto it = j.find("invertible"); it != j.end()) {
      if (!it->is_array()) throw ParseError("base.invertible must be an array");
      for (const auto& x : *it) inv.push_back(parse_integer(x, "base.invertible"));
    }
    return BaseDescriptor::symbolic(get_string(j, "name", "S"), inv, get_bool(j, "regular", true),
                                    get_bool(j, "noetherian", true), get_bool(j, "connected", true));
  }
  throw ParseError("unknown base kind '" + kind + "' (expected algclosed, sepclosed, Fq, strict-henselian, symbolic)");
}

FiniteGroup parse_finite_group(const Json& j) {
  if (j.is_string()) return FiniteGroup::by_name(j.get<std::string>());
  if (j.is_array()) {
    std::vector<std::vector<int>> table;
    for (const auto& row : j) {
      if (!row.is_array()) throw ParseError("multiplication table rows must be arrays");
      std::vector<int> r;
      for (const auto& x : row) {
        if (!x.is_number_integer()) throw ParseError("multiplication table entries must be integers");
        r.push_back(x.get<int>());
      }
      table.push_back(std::move(r));
    }
    return FiniteGroup::from_table(std::move(table), "table");
  }
  throw ParseError("a finite group is a name or a multiplication table");
}

LinRedDatum parse_group(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.rfind("mu_", 0) == 0)
      return {FinGenAbGroup::cyclic(parse_integer(Json(s.substr(3)), "group")), FiniteGroup::cyclic(1), true};
    if (s == "Gm") return {FinGenAbGroup::free(1), FiniteGroup::cyclic(1), true};
    FiniteGroup g = FiniteGroup::by_name(s);
    bool ab = g.is_abelian();
    return {FinGenAbGroup(), std::move(g), ab};
  }
  only_keys(j, "group", {"diag", "etale", "commutative"});
  std::size_t free = 0;
  std::vector<Integer> orders;
  if (auto it = j.find("diag"); it != j.end()) {
    if (!it->is_array()) throw ParseError("group.diag must be an array");
    for (const auto& x : *it) {
      Integer n = parse_integer(x, "group.diag");
      if (n < 0) throw ParseError("group.diag entries must be non-negative");
      if (n == 0)
        ++free;
      else
        orders.push_back(n);
    }
  }
  FiniteGroup etale = FiniteGroup::cyclic(1);
  if (auto it = j.find("etale"); it != j.end()) etale = parse_finite_group(*it);
  bool commutative = get_bool(j, "commutative", etale.is_abelian());
  if (commutative && !etale.is_abelian()) throw ValidationError("a non-abelian etale part cannot be commutative");
  return {FinGenAbGroup::from_orders(free, orders), std::move(etale), commutative};
}

CurveDescriptor parse_curve(const Json& j, const std::optional<BaseDescriptor>& fallback_base) {
  only_keys(j, "curve", {"genus", "punctures", "base", "name"});
  CurveDescriptor c;
  c.genus = get_int(j, "genus", 0, "curve");
  c.name = get_string(j, "name", "X");
  if (auto it = j.find("punctures"); it != j.end()) {
    if (!it->is_array()) throw ParseError("curve.punctures must be an array");
    for (const auto& p : *it) {
      only_keys(p, "puncture", {"label", "deg"});
      Puncture q{get_string(p, "label", ""), get_int(p, "deg", 1, "puncture")};
      if (q.label.empty()) throw ParseError("puncture needs a non-empty label");
      c.punctures.push_back(q);
    }
  }
  if (auto it = j.find("base"); it != j.end())
    c.base = parse_base(*it);
  else if (fallback_base)
    c.base = *fallback_base;
  else
    throw ParseError("curve needs a base");
  c.validate();
  return c;
}

StackDescriptor parse_stack(const Json& j) {
  if (!j.is_object()) throw ParseError("stack must be a JSON object");
  const std::string kind = get_string(j, "kind", "");
  std::optional<BaseDescriptor> base;
  if (auto it = j.find("base"); it != j.end()) base = parse_base(*it);

  if (kind == "classifying") {
    only_keys(j, "classifying stack", {"kind", "group", "base"});
    if (!base) throw ParseError("classifying stack needs a base");
    return ClassifyingStack{parse_group(required(j, "group", "classifying stack")), *base};
  }
  if (kind == "trivial-gerbe") {
    only_keys(j, "trivial gerbe", {"kind", "group", "curve", "base"});
    TrivialGerbe g;
    g.group = parse_group(required(j, "group", "trivial gerbe"));
    if (auto it = j.find("curve"); it != j.end()) {
      g.curve = parse_curve(*it, base);
      g.base = g.curve->base;
    } else if (base) {
      g.base = *base;
    } else {
      throw ParseError("trivial gerbe needs a curve or a base");
    }
    return g;
  }
  if (kind == "rooted") {
    only_keys(j, "rooted curve", {"kind", "curve", "roots", "base"});
    RootedCurve r;
    r.curve = parse_curve(required(j, "curve", "rooted curve"), base);
    if (auto it = j.find("roots"); it != j.end()) r.roots = parse_roots(*it);
    r.validate();
    return r;
  }
  if (kind == "gerbe-rooted") {
    only_keys(j, "gerbe", {"kind", "group", "curve", "roots", "base", "split", "stabilizers", "assumptions", "relative_pic"});
    GerbeOverRootedCurve g;
    g.group = parse_group(required(j, "group", "gerbe"));
    g.rooted.curve = parse_curve(required(j, "curve", "gerbe"), base);
    if (auto it = j.find("roots"); it != j.end()) g.rooted.roots = parse_roots(*it);
    g.split = get_bool(j, "split", true);
    if (auto it = j.find("stabilizers"); it != j.end()) {
      if (!it->is_object()) throw ParseError("gerbe.stabilizers must map root labels to groups");
      for (const auto& [label, grp] : it->items()) g.stabilizers[label] = parse_group(grp);
    }
    if (auto it = j.find("assumptions"); it != j.end()) {
      only_keys(*it, "assumptions", {"has_section", "pic_injective"});
      g.assumptions.has_section = get_bool(*it, "has_section", false);
      g.assumptions.pic_injective = get_bool(*it, "pic_injective", false);
    }
    if (auto it = j.find("relative_pic"); it != j.end()) {
      only_keys(*it, "relative_pic", {"rank", "torsion"});
      std::vector<Integer> torsion;
      if (auto t = it->find("torsion"); t != it->end())
        for (const auto& x : *t) torsion.push_back(parse_integer(x, "relative_pic.torsion"));
      g.relative_pic = FinGenAbGroup::from_orders(static_cast<std::size_t>(get_int(*it, "rank", 0, "relative_pic")), torsion);
    }
    g.validate();
    return g;
  }
  if (kind == "catalogue") {
    only_keys(j, "catalogue stack", {"kind", "name", "base"});
    if (!base) throw ParseError("catalogue stack needs a base");
    return CatalogueStack{catalogue_name(get_string(j, "name", "")), *base};
  }
  throw ParseError("unknown stack kind '" + kind + "' (expected classifying, trivial-gerbe, rooted, gerbe-rooted, catalogue)");
}

ResidueTuple parse_residues(const Json& j) {
  only_keys(j, "residues", {"truncation", "values"});
  Integer n = parse_integer(required(j, "truncation", "residues"), "residues.truncation");
  std::vector<std::tuple<std::string, Integer, int>> vals;
  if (auto it = j.find("values"); it != j.end()) {
    if (!it->is_array()) throw ParseError("residues.values must be an array");
    for (const auto& v : *it) {
      only_keys(v, "residue", {"label", "value", "deg"});
      vals.emplace_back(get_string(v, "label", ""), parse_integer(required(v, "value", "residue"), "residue.value"),
                        get_int(v, "deg", 1, "residue"));
    }
  }
  return ResidueTuple(n, vals);
}

std::vector<RemovedPoint> parse_points(const Json& j) {
  if (!j.is_array()) throw ParseError("points must be an array");
  std::vector<RemovedPoint> out;
  for (const auto& p : j) {
    only_keys(p, "point", {"label", "deg"});
    out.push_back({get_string(p, "label", ""), get_int(p, "deg", 1, "point")});
    if (out.back().label.empty()) throw ParseError("point needs a non-empty label");
  }
  return out;
}

Json load_json_argument(const std::string& arg) {
  std::string text;
  if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) {
    text = arg;
  } else if (arg == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(arg);
    if (!in) throw ParseError("cannot read '" + arg + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace stackbr
