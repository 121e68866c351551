#include <set>

#include "stackbr/errors.hpp"
#include "stackbr/stack.hpp"

namespace stackbr {

namespace {

void require_finite_field(const BaseDescriptor& base) {
  if (base.kind != BaseKind::FiniteField) throw UnsupportedBase("residue calculus is implemented over finite fields");
}

Integer lcm_of(const std::vector<Integer>& v) {
  Integer l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_mpz_t());
  return l;
}

}  // namespace

Integer restrict_residue(const Integer& value, int degree) { return value * degree; }

Integer corestrict_residue(const Integer& value, int /*degree*/) { return value; }

bool faddeev_validate(const ResidueTuple& rt, const BaseDescriptor& base) {
  require_finite_field(base);
  Integer sum = 0;
  for (const auto& [label, e] : rt.entries) sum += corestrict_residue(e.value, e.degree);
  return sum % rt.truncation == 0;
}

bool class_extends(const ResidueTuple& rt, const RootedCurve& s) {
  s.validate();
  require_finite_field(s.curve.base);
  if (s.curve.genus != 0 || !s.curve.proper()) throw HypothesisUnmet("residue classes are handled on a rooted P^1");
  if (!faddeev_validate(rt, s.curve.base)) throw InvalidClass("residues do not sum to zero");
  for (const auto& [label, entry] : rt.entries) {
    Integer e = 1;
    for (const auto& r : s.roots)
      if (r.label == label) e = r.e;
    if ((e * entry.value) % rt.truncation != 0) return false;
  }
  return true;
}

FinGenAbGroup rooted_p1_cokernel(const std::vector<Integer>& orders) {
  if (orders.empty()) return FinGenAbGroup();
  const Integer L = lcm_of(orders);
  const std::size_t n = orders.size();
  PresentedGroup src{n, IntMatrix::diagonal(orders)};
  PresentedGroup tgt{1, IntMatrix::diagonal({L})};
  IntMatrix m(1, n);
  for (std::size_t i = 0; i < n; ++i) m(0, i) = L / orders[i];
  return kernel(make_map(src, tgt, m)).group.group();
}

FinGenAbGroup brauer_open_rational(const std::vector<RemovedPoint>& removed, const BaseDescriptor& base,
                                   const Integer& truncation) {
  require_finite_field(base);
  if (truncation < 1) throw ValidationError("truncation must be at least 1");
  std::set<std::string> seen;
  for (const auto& p : removed) {
    if (p.degree < 1) throw ValidationError("point '" + p.label + "' has non-positive degree");
    if (!seen.insert(p.label).second) throw ValidationError("duplicate point label '" + p.label + "'");
  }
  // Residues at each removed point lie in (1/N)Z/Z and corestrict by the
  // identity, so the N-torsion is the kernel of the sum map.
  return rooted_p1_cokernel(std::vector<Integer>(removed.size(), truncation));
}

FaddeevSequenceReport stacky_faddeev_sequence(const RootedCurve& s, const std::vector<RemovedPoint>& support,
                                              const StackOptions& options) {
  s.validate();
  require_finite_field(s.curve.base);
  if (s.curve.genus != 0 || !s.curve.proper()) throw HypothesisUnmet("the coarse curve must be P^1");
  std::vector<Integer> orders;
  for (const auto& r : s.roots) {
    if (r.degree != 1) throw HypothesisUnmet("root '" + r.label + "' is not a rational point");
    orders.push_back(r.e);
  }
  for (std::size_t i = 0; i < orders.size(); ++i)
    for (std::size_t j = i + 1; j < orders.size(); ++j) {
      Integer g;
      mpz_gcd(g.get_mpz_t(), orders[i].get_mpz_t(), orders[j].get_mpz_t());
      if (g != 1)
        throw HypothesisUnmet("root orders are not pairwise coprime; the cokernel of Br P^1 → Br X is " +
                              rooted_p1_cokernel(orders).to_string());
    }

  // Support: roots first, then the remaining listed points.
  std::vector<Integer> e;
  std::set<std::string> labels;
  for (const auto& r : s.roots) {
    labels.insert(r.label);
    e.push_back(r.e);
  }
  for (const auto& p : support) {
    if (labels.count(p.label)) continue;
    if (p.degree < 1) throw ValidationError("point '" + p.label + "' has non-positive degree");
    labels.insert(p.label);
    e.push_back(1);
  }
  const std::size_t n = e.size();
  const Integer E = lcm_of(e);
  const Integer T = options.truncation ? *options.truncation : E * options.truncation_multiplier;
  if (T < 1) throw ValidationError("truncation must be at least 1");

  // A T-torsion class of Br k(P^1) unramified off the support is its
  // residue tuple r_x in (1/(T e_x))Z/Z with sum zero: write r_x = u_x/(T e_x)
  // and take K = {u : sum u_x (E/e_x) = 0 mod T E} modulo T e_x in each slot.
  IntMatrix cond(1, n + 1);
  for (std::size_t i = 0; i < n; ++i) cond(0, i) = E / e[i];
  cond(0, n) = T * E;
  IntMatrix ker = integer_kernel(cond);
  IntMatrix proj = ker.rows_range(0, n);
  IntMatrix basis = lattice_basis(proj);

  std::vector<Integer> slot_orders;
  for (const auto& x : e) slot_orders.push_back(T * x);
  PresentedGroup t1{basis.cols(), lattice_coordinates(basis, IntMatrix::diagonal(slot_orders))};
  PresentedGroup t2{n, IntMatrix::diagonal(std::vector<Integer>(n, T))};
  PresentedGroup t3{1, IntMatrix::diagonal({T})};

  Complex c;
  c.terms = {PresentedGroup::free(0), t1, t2, t3, PresentedGroup::free(0)};
  IntMatrix d2(1, n);
  for (std::size_t i = 0; i < n; ++i) d2(0, i) = E / e[i];
  // e_x res_x sends u/(T e_x) to u/T, so d1 is the inclusion of K.
  c.differentials = {IntMatrix(basis.cols(), 0), basis, d2, IntMatrix(0, 1)};

  FaddeevSequenceReport rep;
  rep.truncation = T;
  rep.citation =
      "stacky Faddeev sequence: 0 → Br k → Br k(P^1) → ⊕ H^1(κ(x), Q/Z) → H^1(k, Q/Z) → 0 with maps ⊕ e_x·res_x "
      "and Σ (N/e_x)·Cor, truncated at level " + T.get_str();
  try {
    validate_complex(c);
    rep.composition_zero = true;
  } catch (const MalformedComplex&) {
    rep.composition_zero = false;
    return rep;
  }
  const char* names[] = {"Br k", "Br k(P1)", "residues", "H1(k, Q/Z)"};
  for (std::size_t i = 0; i < 4; ++i) rep.nodes.push_back({names[i], homology_at(c, i)});
  rep.exact = rep.nodes[0].homology.is_trivial() && rep.nodes[1].homology.is_trivial() &&
              rep.nodes[2].homology.is_trivial();
  rep.surjective = rep.nodes[3].homology.is_trivial();
  return rep;
}

}  // namespace stackbr
