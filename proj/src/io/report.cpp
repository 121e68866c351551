#include "stackbr/errors.hpp"
#include "stackbr/io.hpp"

namespace stackbr {

namespace {

Splitness split_from(const std::string& s) {
  if (s == "true") return Splitness::Yes;
  if (s == "false") return Splitness::No;
  if (s == "unknown") return Splitness::Unknown;
  throw ParseError("bad split value '" + s + "'");
}

Json result_json(const ResultValue& v) {
  return std::visit(
      [](const auto& r) -> Json {
        using T = std::decay_t<decltype(r)>;
        Json j;
        if constexpr (std::is_same_v<T, GroupResult>) {
          j["type"] = "group";
          j["value"] = r.value;
          j["concrete"] = r.concrete;
          if (r.group) {
            j["rank"] = r.group->free_rank();
            Json t = Json::array();
            for (const auto& d : r.group->invariant_factors()) t.push_back(d.get_str());
            j["torsion"] = t;
          }
        } else if constexpr (std::is_same_v<T, ExtensionResult>) {
          j["type"] = "extension";
          Json pieces = Json::array();
          for (const auto& p : r.pieces) pieces.push_back({{"value", p.value}, {"note", p.note}});
          j["pieces"] = pieces;
          j["split"] = to_string(r.split);
          j["value"] = r.value ? Json(*r.value) : Json(nullptr);
          j["computed"] = r.computed;
          j["facts"] = Json::object();
          for (const auto& [k, v] : r.facts) j["facts"][k] = v;
        } else if constexpr (std::is_same_v<T, BoolResult>) {
          j["type"] = "boolean";
          j["value"] = r.value;
        } else {
          j["type"] = "sequence";
          j["truncation"] = r.truncation.get_str();
          Json nodes = Json::array();
          for (const auto& [name, h] : r.nodes) nodes.push_back({{"name", name}, {"homology", h}});
          j["nodes"] = nodes;
          j["composition_zero"] = r.composition_zero;
          j["exact"] = r.exact;
          j["surjective"] = r.surjective;
        }
        return j;
      },
      v);
}

ResultValue result_from_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "group") {
    GroupResult g;
    g.value = j.at("value").get<std::string>();
    g.concrete = j.at("concrete").get<bool>();
    if (j.contains("rank")) {
      std::vector<Integer> t;
      for (const auto& x : j.at("torsion")) t.push_back(parse_integer(x, "torsion"));
      g.group = FinGenAbGroup::from_orders(j.at("rank").get<std::size_t>(), t);
    }
    return g;
  }
  if (type == "extension") {
    ExtensionResult e;
    for (const auto& p : j.at("pieces")) e.pieces.push_back({p.at("value").get<std::string>(), p.at("note").get<std::string>()});
    e.split = split_from(j.at("split").get<std::string>());
    if (!j.at("value").is_null()) e.value = j.at("value").get<std::string>();
    e.computed = j.at("computed").get<bool>();
    for (const auto& [k, v] : j.at("facts").items()) e.facts[k] = v.get<std::string>();
    return e;
  }
  if (type == "boolean") return BoolResult{j.at("value").get<bool>()};
  if (type == "sequence") {
    SequenceResult s;
    s.truncation = parse_integer(j.at("truncation"), "truncation");
    for (const auto& n : j.at("nodes")) s.nodes.emplace_back(n.at("name").get<std::string>(), n.at("homology").get<std::string>());
    s.composition_zero = j.at("composition_zero").get<bool>();
    s.exact = j.at("exact").get<bool>();
    s.surjective = j.at("surjective").get<bool>();
    return s;
  }
  throw ParseError("unknown result type '" + type + "'");
}

}  // namespace

GroupResult group_result(const GroupExpr& e) {
  GroupResult g;
  GroupExpr s = e.simplify();
  g.value = s.to_string();
  g.concrete = s.is_concrete();
  if (g.concrete) g.group = s.concrete();
  return g;
}

ExtensionResult extension_result(const ExtensionReport& r) {
  ExtensionResult e;
  for (std::size_t i = 0; i < r.pieces.size(); ++i)
    e.pieces.push_back({r.pieces[i].to_string(), i < r.piece_notes.size() ? r.piece_notes[i] : ""});
  e.split = r.split;
  if (r.value) e.value = r.value->to_string();
  e.computed = r.computed;
  e.facts = r.facts;
  return e;
}

std::string headline(const ResultValue& v) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, GroupResult>) {
          return r.value;
        } else if constexpr (std::is_same_v<T, ExtensionResult>) {
          return r.value ? *r.value : "undetermined";
        } else if constexpr (std::is_same_v<T, BoolResult>) {
          return r.value ? "true" : "false";
        } else {
          return r.composition_zero && r.exact && r.surjective ? "exact" : "not exact";
        }
      },
      v);
}

Json to_json(const Report& r) {
  Json j;
  j["result"] = r.result ? result_json(*r.result) : Json(nullptr);
  j["citations"] = r.citations;
  j["warnings"] = r.warnings;
  if (r.error) j["error"] = {{"kind", r.error->kind}, {"message", r.error->message}};
  if (r.timing_ms) j["timing_ms"] = *r.timing_ms;
  return j;
}

Report report_from_json(const Json& j) {
  Report r;
  try {
    if (!j.at("result").is_null()) r.result = result_from_json(j.at("result"));
    r.citations = j.at("citations").get<std::vector<std::string>>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (j.contains("error")) r.error = ErrorInfo{j["error"].at("kind").get<std::string>(), j["error"].at("message").get<std::string>()};
    if (j.contains("timing_ms")) r.timing_ms = j.at("timing_ms").get<long>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string render_json(const Report& r) { return to_json(r).dump(2) + "\n"; }

std::string render_text(const Report& r) {
  std::string out;
  if (r.error) out += "error: " + r.error->kind + ": " + r.error->message + "\n";
  if (r.result) {
    out += headline(*r.result) + "\n";
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, ExtensionResult>) {
            out += "split: " + to_string(v.split) + "\n";
            for (std::size_t i = 0; i < v.pieces.size(); ++i) {
              out += "piece " + std::to_string(i + 1) + ": " + v.pieces[i].value;
              if (!v.pieces[i].note.empty()) out += " (" + v.pieces[i].note + ")";
              out += "\n";
            }
            for (const auto& [k, f] : v.facts) out += k + ": " + f + "\n";
          } else if constexpr (std::is_same_v<T, SequenceResult>) {
            out += "truncation: " + v.truncation.get_str() + "\n";
            out += std::string("composition zero: ") + (v.composition_zero ? "true" : "false") + "\n";
            for (const auto& [name, h] : v.nodes) out += "homology at " + name + ": " + h + "\n";
            out += std::string("surjective: ") + (v.surjective ? "true" : "false") + "\n";
          }
        },
        *r.result);
  }
  for (const auto& c : r.citations) out += "citation: " + c + "\n";
  for (const auto& w : r.warnings) out += "warning: " + w + "\n";
  if (r.timing_ms) out += "timing: " + std::to_string(*r.timing_ms) + " ms\n";
  return out;
}

}  // namespace stackbr
