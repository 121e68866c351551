#pragma once

// JSON descriptors in, reports out.  Keys are emitted sorted and groups are
// rendered canonically, so identical requests give byte-identical output.

#include <json.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stackbr/stack.hpp"

namespace stackbr {

using Json = nlohmann::json;

// All parsers throw ParseError on malformed or unknown fields and let the
// descriptor validators raise ValidationError afterwards.
Integer parse_integer(const Json& j, const std::string& what);
BaseDescriptor parse_base(const Json& j);
FiniteGroup parse_finite_group(const Json& j);
LinRedDatum parse_group(const Json& j);
CurveDescriptor parse_curve(const Json& j, const std::optional<BaseDescriptor>& fallback_base = std::nullopt);
StackDescriptor parse_stack(const Json& j);
ResidueTuple parse_residues(const Json& j);
std::vector<RemovedPoint> parse_points(const Json& j);

// Accepts inline JSON (starting with '{' or '['), "-" for stdin, or a path.
Json load_json_argument(const std::string& arg);

struct GroupResult {
  std::string value;
  bool concrete = true;
  std::optional<FinGenAbGroup> group;  // concrete values only
};

struct PieceResult {
  std::string value;
  std::string note;
};

struct ExtensionResult {
  std::vector<PieceResult> pieces;
  Splitness split = Splitness::Unknown;
  std::optional<std::string> value;
  bool computed = false;
  std::map<std::string, std::string> facts;
};

struct BoolResult {
  bool value = false;
};

struct SequenceResult {
  Integer truncation;
  std::vector<std::pair<std::string, std::string>> nodes;  // name, homology
  bool composition_zero = false;
  bool exact = false;
  bool surjective = false;
};

using ResultValue = std::variant<GroupResult, ExtensionResult, BoolResult, SequenceResult>;

struct ErrorInfo {
  std::string kind;
  std::string message;
};

struct Report {
  std::optional<ResultValue> result;
  std::optional<ErrorInfo> error;
  std::vector<std::string> citations;
  std::vector<std::string> warnings;
  std::optional<long> timing_ms;
};

GroupResult group_result(const GroupExpr& e);
ExtensionResult extension_result(const ExtensionReport& r);

Json to_json(const Report& r);
Report report_from_json(const Json& j);
std::string render_json(const Report& r);
std::string render_text(const Report& r);

// The headline value: the group, "true"/"false", "undetermined" for
// extensions without a value, or the exactness verdict of a sequence.
std::string headline(const ResultValue& v);

struct RequestOptions {
  std::optional<Integer> truncation;
  std::size_t budget = 1'000'000;
  bool allow_prime_to_p = false;
};

// Ops: pic, cl, brauer, brauerless, cohomology, faddeev, extends,
// filtration, catalogue.  Library errors propagate.
Report run_request(const std::string& op, const Json& input, const RequestOptions& options = {});

// 0 on success, 2 when a theorem's hypotheses fail, 1 otherwise.
int exit_code_for(const std::exception& e);

// Runs the request and folds errors into the report.
std::pair<Report, int> run_request_safely(const std::string& op, const Json& input, const RequestOptions& options);

}  // namespace stackbr
