#include "stackbr/stack.hpp"

#include <algorithm>
#include <set>

#include "stackbr/errors.hpp"

namespace stackbr {

namespace {

const char* kCiteClassifying =
    "split sequences for classifying stacks: Pic(BG_S) = Pic(S) ⊕ G^∨(S) and "
    "H^2(BG_S, Gm) = H^2(S, Gm) ⊕ H^1(S, G^∨) for cyclic or connected G";
const char* kCiteTwoStep =
    "iterated splitting for a product of cyclic factors: "
    "H^2(B(C_1 × C_2)_S, Gm) = H^2(S, Gm) ⊕ H^1(S, C_1^∨) ⊕ H^1(S, C_2^∨) ⊕ Hom_S(C_1, C_2^∨)";
const char* kCiteRoot = "root stack sequence 0 → Pic(X) → Pic(X_n) → H^0(D, Z/n) → 0, of order n^{#components of D}";
const char* kCiteCl =
    "Weil divisor class group of a stacky curve: 0 → Cl → Pic → Pic(generic residual gerbe) → 0";
const char* kCiteTsen =
    "stacky Tsen theorem: H^2(X, Gm) ≅ H^1(X, G^∨) for a G-gerbe over a locally Brauerless tame stacky curve "
    "over an algebraically closed field";
const char* kCiteHenselian =
    "proper stacky curves over a strictly henselian regular base: H^2(X, Gm) = Br'(X) ≅ H^1(X, G^∨)";
const char* kCiteFaddeevCoprime =
    "stacky Faddeev sequence: Br X ≅ Br P^1_k ≅ Br k for pairwise coprime root orders at rational points";
const char* kCiteP1Brauer =
    "Brauer group of a rooted P^1: the cokernel of Br P^1 → Br X is ker(⊕ H^1(κ(x_i), (1/e_i)Z/Z) → H^1(k, Q/Z))";
const char* kCiteOpen = "Faddeev residue sequence for open rooted rational curves: classes are residue tuples "
                        "killed by e_x at roots and summing to zero";
const char* kCiteFiltration =
    "filtration of H^2(X, Gm) for a proper gerbe over a stacky curve with graded pieces H^2(X, Gm), "
    "coker(H^1(S, Pic_{X/S}) → H^1(S, Pic_{stack/S})) and a subgroup of H^0(S, R^1 g_* G^∨)";
const char* kCiteX1 = "Brauer group of the compactified moduli stack of elliptic curves: Br' X(1)_S ≅ Br' S";
const char* kCiteY1 = "Brauer group of the moduli stack of elliptic curves: Br' Y(1)_S = Br'(A^1_S) ⊕ H^1(S, Z/12), split";
const char* kCiteY02 =
    "Brauer group of Y_0(2): Br' Y_0(2)_S = Br'(A^1_S \\ {0}) ⊕ H^1(S, Z/4) ⊕ H^0(S, Z/2), split";

bool algebraically_closed(const BaseDescriptor& b) {
  return b.kind == BaseKind::AlgClosed || (b.kind == BaseKind::SepClosed && b.characteristic == 0);
}

bool tame(const BaseDescriptor& b, const Integer& n) {
  if (b.is_symbolic()) return b.inverts(n);
  return b.characteristic == 0 || n % b.characteristic != 0;
}

bool trivial_group(const LinRedDatum& g) { return g.diag_characters.is_trivial() && g.etale.order() == 1; }

void require_commutative(const LinRedDatum& g, const char* what) {
  if (!g.commutative) throw Unsupported(std::string(what) + " needs a commutative group datum");
}

LinRedDatum times_mu(const LinRedDatum& g, const Integer& e) {
  return {direct_sum(g.diag_characters, FinGenAbGroup::cyclic(e)), g.etale, g.commutative};
}

std::optional<Integer> finite_order(const LinRedDatum& g) {
  if (!g.diag_characters.is_finite()) return std::nullopt;
  return g.diag_characters.order() * g.etale.order();
}

EtaleCoeff dual_coeff(const LinRedDatum& g) { return EtaleCoeff::sum(cartier_dual(g)); }

GroupExpr evaluate(const GroupExpr& e, const BaseDescriptor& base, EvalContext& ctx) {
  return e.substitute(base.label(), base, ctx);
}

struct CtxHolder {
  EvalContext local;
  EvalContext& ctx;
  explicit CtxHolder(const StackOptions& o) : ctx(o.ctx ? *o.ctx : local) {}
};

void attach_warnings(ExtensionReport& r, const EvalContext& ctx) {
  for (const auto& w : ctx.warnings)
    if (std::find(r.warnings.begin(), r.warnings.end(), w) == r.warnings.end()) r.warnings.push_back(w);
}

Integer lcm_of(const std::vector<Integer>& v) {
  Integer l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_mpz_t());
  return l;
}

bool pairwise_coprime(const std::vector<Integer>& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      Integer g;
      mpz_gcd(g.get_mpz_t(), v[i].get_mpz_t(), v[j].get_mpz_t());
      if (g != 1) return false;
    }
  return true;
}

std::vector<Integer> root_orders(const RootedCurve& s) {
  std::vector<Integer> out;
  for (const auto& r : s.roots) out.push_back(r.e);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Descriptors

void RootedCurve::validate() const {
  curve.validate();
  std::set<std::string> labels;
  for (const auto& p : curve.punctures) labels.insert(p.label);
  std::set<std::string> seen;
  for (const auto& r : roots) {
    if (!seen.insert(r.label).second) throw ValidationError("duplicate root label '" + r.label + "'");
    if (labels.count(r.label)) throw ValidationError("root '" + r.label + "' is also a puncture");
    if (r.e < 2) throw ValidationError("root '" + r.label + "' must have order e >= 2");
    if (r.degree < 1) throw ValidationError("root '" + r.label + "' has non-positive degree");
    if (curve.base.is_separably_closed() && r.degree != 1)
      throw ValidationError("root '" + r.label + "' must have degree 1 over a separably closed base");
    if (!tame(curve.base, r.e))
      throw BadCharacteristic("root '" + r.label + "' of order " + r.e.get_str() + " is not tame over " +
                              curve.base.label());
  }
}

Integer RootedCurve::root_product() const {
  Integer p = 1;
  for (const auto& r : roots) p *= r.e;
  return p;
}

void GerbeOverRootedCurve::validate() const {
  rooted.validate();
  if (!group.commutative) throw ValidationError("gerbe bands must be commutative");
  if (auto n = finite_order(group); n && !tame(rooted.curve.base, *n))
    throw BadCharacteristic("gerbe band of order " + n->get_str() + " is not tame over " + rooted.curve.base.label());
  for (const auto& [label, stab] : stabilizers) {
    auto it = std::find_if(rooted.roots.begin(), rooted.roots.end(), [&](const RootPoint& r) { return r.label == label; });
    if (it == rooted.roots.end()) throw ValidationError("stabilizer given at '" + label + "', which is not a root");
    auto n = finite_order(group);
    auto m = finite_order(stab);
    if (n && m && *m != *n * it->e)
      throw ValidationError("stabilizer at '" + label + "' has order " + m->get_str() + ", expected " +
                            Integer(*n * it->e).get_str());
  }
}

CatalogueName catalogue_name(const std::string& name) {
  if (name == "X1") return CatalogueName::X1;
  if (name == "Y1") return CatalogueName::Y1;
  if (name == "Y02") return CatalogueName::Y02;
  throw ValidationError("unknown catalogue stack '" + name + "'");
}

std::string to_string(CatalogueName n) {
  switch (n) {
    case CatalogueName::X1: return "X1";
    case CatalogueName::Y1: return "Y1";
    case CatalogueName::Y02: return "Y02";
  }
  return "?";
}

std::string to_string(Splitness s) {
  switch (s) {
    case Splitness::Yes: return "true";
    case Splitness::No: return "false";
    case Splitness::Unknown: return "unknown";
  }
  return "unknown";
}

ExtensionReport ExtensionReport::make(std::vector<GroupExpr> pieces, Splitness split, std::string citation) {
  ExtensionReport r;
  r.pieces = std::move(pieces);
  r.piece_notes.assign(r.pieces.size(), "");
  r.split = split;
  r.citation = std::move(citation);
  std::size_t nonzero = 0;
  GroupExpr sum;
  for (auto& p : r.pieces) {
    p = p.simplify();
    if (!p.is_zero()) ++nonzero;
    sum += p;
  }
  if (split == Splitness::Yes || nonzero <= 1) r.value = sum.simplify();
  return r;
}

ResidueTuple::ResidueTuple(Integer n, const std::vector<std::tuple<std::string, Integer, int>>& values)
    : truncation(std::move(n)) {
  if (truncation < 1) throw ValidationError("truncation must be at least 1");
  for (const auto& [label, v, d] : values) {
    if (d < 1) throw ValidationError("residue at '" + label + "' has non-positive degree");
    Integer r = v % truncation;
    if (r < 0) r += truncation;
    if (!entries.emplace(label, Entry{r, d}).second) throw ValidationError("duplicate residue label '" + label + "'");
  }
}

std::vector<std::pair<LinRedDatum, int>> stabilizers_of(const GerbeOverRootedCurve& s) {
  const BaseDescriptor& base = s.rooted.curve.base;
  const int p = base.is_symbolic() ? 0 : base.characteristic;
  std::vector<std::pair<LinRedDatum, int>> out{{s.group, p}};
  for (const auto& r : s.rooted.roots) {
    auto it = s.stabilizers.find(r.label);
    if (it != s.stabilizers.end()) {
      out.emplace_back(it->second, p);
    } else if (s.split || trivial_group(s.group)) {
      out.emplace_back(times_mu(s.group, r.e), p);
    } else {
      throw HypothesisUnmet("non-split gerbe: the stabilizer over root '" + r.label + "' must be supplied");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classifying stacks

namespace {

struct CyclicFactor {
  EtaleCoeff group;  // mu_a, Z/b or Gm
  EtaleCoeff dual;
  bool finite = true;
};

std::vector<CyclicFactor> cyclic_factors(const LinRedDatum& g) {
  std::vector<CyclicFactor> out;
  for (std::size_t i = 0; i < g.diag_characters.free_rank(); ++i)
    out.push_back({EtaleCoeff::gm(), EtaleCoeff::integers(), false});
  for (const auto& a : g.diag_characters.invariant_factors())
    out.push_back({EtaleCoeff::mu(a), EtaleCoeff::constant(a), true});
  const FinGenAbGroup etale = g.etale.abelian_invariants();
  for (const auto& b : etale.invariant_factors())
    out.push_back({EtaleCoeff::constant(b), EtaleCoeff::mu(b), true});
  return out;
}

}  // namespace

ExtensionReport brauer_classifying(const ClassifyingStack& s, const StackOptions& options) {
  require_commutative(s.group, "the classifying stack computation");
  CtxHolder h(options);
  const BaseDescriptor& base = s.base;
  const std::string S = base.label();
  auto factors = cyclic_factors(s.group);

  std::vector<GroupExpr> pieces;
  pieces.push_back(GroupExpr::term(FormalTerm::h(2, Space::of_base(S), EtaleCoeff::gm())));
  for (const auto& f : factors) pieces.push_back(GroupExpr::term(FormalTerm::h(1, Space::of_base(S), f.dual)));
  for (std::size_t i = 0; i < factors.size(); ++i)
    for (std::size_t j = i + 1; j < factors.size(); ++j) {
      // Homs between a torus and a finite group vanish.
      if (!factors[i].finite || !factors[j].finite) continue;
      pieces.push_back(GroupExpr::term(FormalTerm::hom(Space::of_base(S), factors[i].group, factors[j].dual)));
    }
  for (auto& p : pieces) p = evaluate(p, base, h.ctx);
  auto r = ExtensionReport::make(std::move(pieces), Splitness::Yes, factors.size() <= 1 ? kCiteClassifying : kCiteTwoStep);
  attach_warnings(r, h.ctx);
  return r;
}

ExtensionReport pic_classifying(const ClassifyingStack& s, const StackOptions& options) {
  require_commutative(s.group, "the classifying stack computation");
  CtxHolder h(options);
  std::vector<GroupExpr> pieces{pic_of_base(s.base), etale_h(s.base, dual_coeff(s.group), 0, h.ctx)};
  auto r = ExtensionReport::make(std::move(pieces), Splitness::Yes, kCiteClassifying);
  attach_warnings(r, h.ctx);
  return r;
}

// ---------------------------------------------------------------------------
// Picard and class groups

FinGenAbGroup cl_stack(const RootedCurve& s) {
  s.validate();
  if (!algebraically_closed(s.curve.base)) throw UnsupportedBase("class groups are computed over algebraically closed fields");
  if (s.curve.genus != 0) throw UnsupportedGenus("class groups are computed for genus 0 coarse curves");
  // Generators: the roots, then one auxiliary schemey point y.  A rational
  // function with divisor [x] - [y] on the coarse curve has divisor
  // e_x [x] - [y] on the stack; on an affine curve [y] itself is principal.
  const std::size_t r = s.roots.size();
  const std::size_t cols = r + (s.curve.proper() ? 0 : 1);
  IntMatrix rel(r + 1, cols);
  for (std::size_t i = 0; i < r; ++i) {
    rel(i, i) = s.roots[i].e;
    rel(r, i) = -1;
  }
  if (!s.curve.proper()) rel(r, r) = 1;
  return cokernel(rel);
}

namespace {

// Pic of a genus 0 rooted curve over an algebraically closed field, built
// one root at a time.  Returns the relation matrix and the step orders.
struct IteratedPic {
  IntMatrix relations;
  std::size_t coarse_generators = 0;
  std::vector<Integer> step_orders;
};

IteratedPic iterate_roots(const RootedCurve& s) {
  IteratedPic it;
  // Pic(P^1) = Z h with every point of class h; Pic of an affine genus 0
  // curve is zero.
  it.coarse_generators = s.curve.proper() ? 1 : 0;
  std::size_t gens = it.coarse_generators;
  IntMatrix rel(gens, 0);
  for (const auto& root : s.roots) {
    const std::size_t g2 = gens + 1;
    IntMatrix next(g2, rel.cols() + 1);
    for (std::size_t i = 0; i < gens; ++i)
      for (std::size_t j = 0; j < rel.cols(); ++j) next(i, j) = rel(i, j);
    next(gens, rel.cols()) = root.e;
    if (s.curve.proper()) next(0, rel.cols()) = -1;
    // Cokernel of Pic(old) -> Pic(new) is Z^{g2} / (relations + old generators).
    IntMatrix old(g2, gens);
    for (std::size_t i = 0; i < gens; ++i) old(i, i) = 1;
    it.step_orders.push_back(cokernel(next.hconcat(old)).order());
    rel = next;
    gens = g2;
  }
  it.relations = rel;
  return it;
}

}  // namespace

ExtensionReport pic_rooted(const RootedCurve& s, const StackOptions& options) {
  s.validate();
  CtxHolder h(options);
  std::vector<FinGenAbGroup> local;
  for (const auto& r : s.roots) local.push_back(FinGenAbGroup::cyclic(r.e));
  std::vector<GroupExpr> pieces{pic_curve(s.curve), GroupExpr(direct_sum(local))};

  if (algebraically_closed(s.curve.base) && s.curve.genus == 0) {
    IteratedPic it = iterate_roots(s);
    ExtensionReport r;
    r.pieces = pieces;
    r.piece_notes.assign(pieces.size(), "");
    r.split = Splitness::Unknown;
    r.citation = kCiteRoot;
    r.value = GroupExpr(cokernel(it.relations));
    r.computed = true;
    // Index of the pulled back coarse Picard group.
    IntMatrix pulled(it.relations.rows(), it.coarse_generators);
    for (std::size_t i = 0; i < it.coarse_generators; ++i) pulled(i, i) = 1;
    r.facts["pullback_index"] = cokernel(it.relations.hconcat(pulled)).order().get_str();
    std::string steps;
    for (const auto& o : it.step_orders) steps += (steps.empty() ? "" : ",") + o.get_str();
    r.facts["step_orders"] = steps;
    return r;
  }
  auto r = ExtensionReport::make(std::move(pieces), Splitness::Unknown, kCiteRoot);
  attach_warnings(r, h.ctx);
  return r;
}

ExtensionReport pic_cl_report(const GerbeOverRootedCurve& s, const StackOptions& options) {
  s.validate();
  CtxHolder h(options);
  const BaseDescriptor& base = s.rooted.curve.base;
  GroupExpr cl;
  if (algebraically_closed(base) && s.rooted.curve.genus == 0)
    cl = cl_stack(s.rooted);
  else
    cl = GroupExpr::term(FormalTerm::other("Cl(" + s.rooted.curve.name + ")", Space::named(s.rooted.curve.name, base.label())));
  GroupExpr gerbe_pic;
  if (trivial_group(s.group))
    gerbe_pic = FinGenAbGroup();
  else if (algebraically_closed(base) || s.split)
    gerbe_pic = etale_h(base, dual_coeff(s.group), 0, h.ctx);
  else
    gerbe_pic = GroupExpr::term(FormalTerm::other("Pic(generic residual gerbe)", Space::named(s.rooted.curve.name, base.label())));
  Splitness split = (s.split || trivial_group(s.group)) ? Splitness::Yes : Splitness::Unknown;
  auto r = ExtensionReport::make({cl, gerbe_pic}, split, kCiteCl);
  attach_warnings(r, h.ctx);
  return r;
}

// ---------------------------------------------------------------------------
// Brauer groups

namespace {

GerbeOverRootedCurve as_gerbe(const RootedCurve& s) {
  GerbeOverRootedCurve g;
  g.group = LinRedDatum{FinGenAbGroup(), FiniteGroup::cyclic(1), true};
  g.rooted = s;
  g.split = true;
  return g;
}

void gate(const GerbeOverRootedCurve& s, const StackOptions& options) {
  auto stabs = stabilizers_of(s);
  if (!locally_brauerless(stabs, options.brauerless))
    throw NotLocallyBrauerless("a geometric stabilizer of the stack is not Brauerless; the Tsen comparison does not apply");
}

Integer default_truncation(const std::vector<Integer>& orders, const StackOptions& options) {
  if (options.truncation) {
    if (*options.truncation < 1) throw ValidationError("truncation must be at least 1");
    return *options.truncation;
  }
  return lcm_of(orders) * options.truncation_multiplier;
}

ExtensionReport brauer_rooted_finite_field(const RootedCurve& s, const StackOptions& options) {
  const auto orders = root_orders(s);
  if (s.curve.genus != 0) throw HypothesisUnmet("Brauer groups of rooted curves over finite fields need a genus 0 coarse curve");
  if (s.curve.proper()) {
    bool rational = std::all_of(s.roots.begin(), s.roots.end(), [](const RootPoint& r) { return r.degree == 1; });
    FinGenAbGroup coker = rooted_p1_cokernel(orders);
    if (rational && pairwise_coprime(orders)) {
      auto r = ExtensionReport::make({brauer_of_base(s.curve.base), coker}, Splitness::Unknown, kCiteFaddeevCoprime);
      return r;
    }
    return ExtensionReport::make({brauer_of_base(s.curve.base), coker}, Splitness::Unknown, kCiteP1Brauer);
  }
  // Open curve: N-torsion through the residue sequence.
  const Integer N = default_truncation(orders, options);
  std::vector<Integer> levels;
  for (const auto& r : s.roots) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), r.e.get_mpz_t(), N.get_mpz_t());
    levels.push_back(g);
  }
  for (std::size_t i = 0; i < s.curve.punctures.size(); ++i) levels.push_back(N);
  ExtensionReport r = ExtensionReport::make({GroupExpr(rooted_p1_cokernel(levels))}, Splitness::Yes, kCiteOpen);
  r.facts["truncation"] = N.get_str();
  r.warnings.push_back("N-torsion only: Br computed up to " + N.get_str() + "-torsion");
  return r;
}

ExtensionReport brauer_gerbe(const GerbeOverRootedCurve& s, const StackOptions& options) {
  s.validate();
  CtxHolder h(options);
  const BaseDescriptor& base = s.rooted.curve.base;
  const bool trivial = trivial_group(s.group);

  if (algebraically_closed(base)) {
    gate(s, options);
    GroupExpr v = h1_curve(s.rooted.curve, dual_coeff(s.group), h.ctx);
    auto r = ExtensionReport::make({v}, Splitness::Yes, kCiteTsen);
    attach_warnings(r, h.ctx);
    return r;
  }
  if (base.kind == BaseKind::StrictHenselianLocal) {
    if (!base.regular) throw HypothesisUnmet("the strictly henselian base must be regular");
    if (!s.rooted.curve.proper()) throw HypothesisUnmet("the coarse curve must be proper over a strictly henselian base");
    gate(s, options);
    GroupExpr v = h1_curve(s.rooted.curve, dual_coeff(s.group), h.ctx);
    auto r = ExtensionReport::make({v}, Splitness::Yes, kCiteHenselian);
    attach_warnings(r, h.ctx);
    return r;
  }
  if (base.kind == BaseKind::FiniteField && trivial) return brauer_rooted_finite_field(s.rooted, options);
  if (base.kind == BaseKind::SepClosed)
    throw HypothesisUnmet("the Tsen comparison needs an algebraically closed field; " + base.label() +
                          " is separably closed of positive characteristic");
  if (base.kind == BaseKind::FiniteField)
    throw HypothesisUnmet("Brauer groups of nontrivial gerbes over finite fields are not determined");
  throw HypothesisUnmet("no Brauer group theorem applies over the symbolic base " + base.label() +
                        "; see the proper filtration");
}

}  // namespace

ExtensionReport brauer_stack(const StackDescriptor& s, const StackOptions& options) {
  return std::visit(
      [&](const auto& d) -> ExtensionReport {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ClassifyingStack>) {
          return brauer_classifying(d, options);
        } else if constexpr (std::is_same_v<T, TrivialGerbe>) {
          if (!d.curve) return brauer_classifying({d.group, d.base}, options);
          GerbeOverRootedCurve g;
          g.group = d.group;
          g.rooted.curve = *d.curve;
          g.rooted.curve.base = d.base;
          return brauer_gerbe(g, options);
        } else if constexpr (std::is_same_v<T, RootedCurve>) {
          return brauer_gerbe(as_gerbe(d), options);
        } else if constexpr (std::is_same_v<T, GerbeOverRootedCurve>) {
          return brauer_gerbe(d, options);
        } else {
          return brauer_catalogue(d.which, d.base, options);
        }
      },
      s);
}

ExtensionReport brauer_catalogue(CatalogueName which, const BaseDescriptor& base, const StackOptions& options) {
  if (!base.inverts(2)) throw HypothesisUnmet("2 must be invertible on " + base.label());
  if (!base.noetherian) throw HypothesisUnmet(base.label() + " must be noetherian");
  if (which != CatalogueName::X1 && !base.regular) throw HypothesisUnmet(base.label() + " must be regular");
  CtxHolder h(options);
  const std::string S = base.label();
  std::vector<GroupExpr> pieces;
  const char* cite = kCiteX1;
  switch (which) {
    case CatalogueName::X1:
      pieces.push_back(GroupExpr::term(FormalTerm::brauer(Space::of_base(S))));
      break;
    case CatalogueName::Y1:
      cite = kCiteY1;
      pieces.push_back(GroupExpr::term(FormalTerm::brauer(Space::affine_line(S))));
      pieces.push_back(GroupExpr::term(FormalTerm::h(1, Space::of_base(S), EtaleCoeff::constant(12))));
      break;
    case CatalogueName::Y02:
      cite = kCiteY02;
      pieces.push_back(GroupExpr::term(FormalTerm::brauer(Space::punctured_line(S))));
      pieces.push_back(GroupExpr::term(FormalTerm::h(1, Space::of_base(S), EtaleCoeff::constant(4))));
      pieces.push_back(GroupExpr::term(FormalTerm::h(0, Space::of_base(S), EtaleCoeff::constant(2))));
      break;
  }
  for (auto& p : pieces) p = evaluate(p, base, h.ctx);
  auto r = ExtensionReport::make(std::move(pieces), Splitness::Yes, cite);
  if (which == CatalogueName::Y02 && base.kind == BaseKind::FiniteField) {
    const Integer N = options.truncation ? *options.truncation : Integer(4) * options.truncation_multiplier;
    FinGenAbGroup t = brauer_open_rational({{"0", 1}, {"inf", 1}}, base, N);
    r.warnings.push_back("Br'(A1 \\ {0}) over " + S + " is not finitely generated; its " + N.get_str() +
                         "-torsion is " + t.to_string());
  }
  attach_warnings(r, h.ctx);
  return r;
}

ExtensionReport proper_filtration(const GerbeOverRootedCurve& s, const StackOptions& options) {
  s.validate();
  CtxHolder h(options);
  const CurveDescriptor& x = s.rooted.curve;
  const BaseDescriptor& base = x.base;
  if (!x.proper()) throw HypothesisUnmet("the coarse curve must be proper");
  if (!base.regular) throw HypothesisUnmet("the base " + base.label() + " must be regular");
  const bool sep_closed = base.is_separably_closed();
  // Over separably closed fields points exist and H^1(S, -) vanishes.
  if (!sep_closed && !s.assumptions.has_section) throw HypothesisUnmet("the stack must have an S-point");
  if (!sep_closed && !s.assumptions.pic_injective)
    throw HypothesisUnmet("H^1(S, Pic_{X/S}) → H^1(S, Pic_{stack/S}) must be injective");

  const std::string S = base.label();
  const Space coarse = x.genus == 0 ? Space::projective_line(S) : x.space();

  GroupExpr p1;
  if (algebraically_closed(base))
    p1 = FinGenAbGroup();  // Tsen
  else
    p1 = GroupExpr::term(FormalTerm::h(2, coarse, EtaleCoeff::gm()));

  GroupExpr p2;
  if (sep_closed) {
    p2 = FinGenAbGroup();
  } else if (s.relative_pic && x.genus == 0) {
    // Pic_{P^1/S} = Z and H^1(S, Z) = 0 for normal S; the free part of the
    // relative Picard group contributes nothing either.
    for (const auto& t : s.relative_pic->invariant_factors())
      p2 += etale_h(base, EtaleCoeff::constant(t), 1, h.ctx);
  } else {
    p2 = GroupExpr::term(FormalTerm::other("coker(H^1(" + S + ", Pic_{X/" + S + "}) → H^1(" + S + ", Pic_{stack/" + S + "}))",
                                           Space::of_base(S)));
  }

  GroupExpr p3;
  std::string note3 = "upper bound: subgroup of";
  if (trivial_group(s.group) || x.genus == 0) {
    p3 = FinGenAbGroup();  // stalks H^1(P^1, G^∨) vanish
  } else if (algebraically_closed(base)) {
    p3 = h1_curve(x, dual_coeff(s.group), h.ctx);
    if (locally_brauerless(stabilizers_of(s), options.brauerless)) note3 = "equals (stacky Tsen theorem)";
  } else {
    p3 = GroupExpr::term(FormalTerm::other("H^0(" + S + ", R^1 g_* G^∨)", Space::of_base(S)));
  }

  auto r = ExtensionReport::make({p1, p2, p3}, Splitness::Unknown, kCiteFiltration);
  r.piece_notes[2] = note3;
  attach_warnings(r, h.ctx);
  return r;
}

}  // namespace stackbr
