#pragma once

// Stacky curves, gerbes and classifying stacks: Picard, class and Brauer
// groups, and the residue calculus over finite fields.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stackbr/curve.hpp"

namespace stackbr {

struct RootPoint {
  std::string label;
  int degree = 1;
  Integer e = 2;
};

struct RootedCurve {
  CurveDescriptor curve;
  std::vector<RootPoint> roots;

  // Distinct labels disjoint from the punctures, e >= 2, e prime to the
  // characteristic, degree 1 over separably closed bases.
  void validate() const;
  Integer root_product() const;
};

struct ClassifyingStack {
  LinRedDatum group;
  BaseDescriptor base;
};

struct FiltrationAssumptions {
  bool has_section = false;   // the stack has an S-point
  bool pic_injective = false; // H^1(S, Pic_{X/S}) -> H^1(S, Pic_{stack/S}) is injective
};

// A gerbe banded by a commutative group over a rooted curve.  A split gerbe
// is BG times the rooted curve, with stabilizer G x mu_e over a root of
// order e.  Non-split gerbes with nontrivial G need their root stabilizers.
struct GerbeOverRootedCurve {
  LinRedDatum group;
  RootedCurve rooted;
  bool split = true;
  std::map<std::string, LinRedDatum> stabilizers;
  FiltrationAssumptions assumptions;
  std::optional<FinGenAbGroup> relative_pic;  // Pic of the stack relative to S, when known

  void validate() const;
};

// BG over a curve (as a split gerbe with no roots) or over the base.
struct TrivialGerbe {
  LinRedDatum group;
  std::optional<CurveDescriptor> curve;
  BaseDescriptor base;
};

enum class CatalogueName { X1, Y1, Y02 };

struct CatalogueStack {
  CatalogueName which;
  BaseDescriptor base;
};

using StackDescriptor = std::variant<ClassifyingStack, TrivialGerbe, RootedCurve, GerbeOverRootedCurve, CatalogueStack>;

CatalogueName catalogue_name(const std::string& name);  // "X1" | "Y1" | "Y02"
std::string to_string(CatalogueName n);

enum class Splitness { Yes, No, Unknown };
std::string to_string(Splitness s);

struct ExtensionReport {
  std::vector<GroupExpr> pieces;
  std::vector<std::string> piece_notes;  // parallel to pieces; may be empty strings
  Splitness split = Splitness::Unknown;
  std::string citation;
  // Present iff split, all but one piece is zero, or computed directly.
  std::optional<GroupExpr> value;
  bool computed = false;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> facts;

  static ExtensionReport make(std::vector<GroupExpr> pieces, Splitness split, std::string citation);
};

struct ResidueTuple {
  Integer truncation = 1;
  struct Entry {
    Integer value;
    int degree = 1;
  };
  std::map<std::string, Entry> entries;

  // Reduces values mod N; ValidationError for N < 1 or bad degrees.
  ResidueTuple(Integer truncation, const std::vector<std::tuple<std::string, Integer, int>>& values);
};

struct StackOptions {
  EvalContext* ctx = nullptr;  // collects warnings; optional
  // Multiplier for the default truncation lcm(e) * multiplier.
  Integer truncation_multiplier = 2;
  std::optional<Integer> truncation;
  BrauerlessOptions brauerless;
};

// Geometric stabilizers with the characteristic they live over.
std::vector<std::pair<LinRedDatum, int>> stabilizers_of(const GerbeOverRootedCurve& s);

ExtensionReport brauer_classifying(const ClassifyingStack& s, const StackOptions& options = {});
ExtensionReport pic_classifying(const ClassifyingStack& s, const StackOptions& options = {});

// Divisor class group of a genus 0 rooted curve over an algebraically
// closed field.
FinGenAbGroup cl_stack(const RootedCurve& s);

// Iterated root sequence.  facts["pullback_index"] records the index of
// the pulled back Picard group of the coarse curve when it is computed.
ExtensionReport pic_rooted(const RootedCurve& s, const StackOptions& options = {});

ExtensionReport pic_cl_report(const GerbeOverRootedCurve& s, const StackOptions& options = {});

ExtensionReport brauer_stack(const StackDescriptor& s, const StackOptions& options = {});

ExtensionReport brauer_catalogue(CatalogueName which, const BaseDescriptor& base, const StackOptions& options = {});

ExtensionReport proper_filtration(const GerbeOverRootedCurve& s, const StackOptions& options = {});

// Over F_q, with H^1(F_{q^d}, Q/Z) identified with Q/Z by Frobenius:
// restriction to a degree d extension multiplies by d, corestriction is
// the identity.
Integer restrict_residue(const Integer& value, int degree);
Integer corestrict_residue(const Integer& value, int degree);

bool faddeev_validate(const ResidueTuple& rt, const BaseDescriptor& base);

// InvalidClass when the residues violate reciprocity.
bool class_extends(const ResidueTuple& rt, const RootedCurve& s);

struct RemovedPoint {
  std::string label;
  int degree = 1;
};

// N-torsion of Br(P^1 minus Z) over a finite field.
FinGenAbGroup brauer_open_rational(const std::vector<RemovedPoint>& removed, const BaseDescriptor& base,
                                   const Integer& truncation);

// ker(+ Z/e_i -> Z/lcm, 1_i -> lcm/e_i): the cokernel of Br P^1 -> Br of
// the rooted P^1 over a finite field.
FinGenAbGroup rooted_p1_cokernel(const std::vector<Integer>& orders);

struct SequenceNode {
  std::string name;
  FinGenAbGroup homology;
};

struct FaddeevSequenceReport {
  Integer truncation;
  std::vector<SequenceNode> nodes;
  bool composition_zero = false;
  bool exact = false;       // middle homologies vanish
  bool surjective = false;  // last map onto H^1(k, Z/N)
  std::string citation;
};

// Truncated residue sequence of a rooted P^1 over a finite field on the
// given support (roots are added to it).  HypothesisUnmet when the root
// orders are not pairwise coprime; the message carries the cokernel.
FaddeevSequenceReport stacky_faddeev_sequence(const RootedCurve& s, const std::vector<RemovedPoint>& support,
                                              const StackOptions& options = {});

}  // namespace stackbr
