#include <set>

#include "stackbr/curve.hpp"
#include "stackbr/errors.hpp"

namespace stackbr {

int CurveDescriptor::removed_points() const {
  int r = 0;
  for (const auto& p : punctures) r += p.degree;
  return r;
}

void CurveDescriptor::validate() const {
  if (genus < 0) throw ValidationError("genus must be non-negative");
  std::set<std::string> seen;
  for (const auto& p : punctures) {
    if (p.degree < 1) throw ValidationError("puncture '" + p.label + "' has non-positive degree");
    if (base.is_separably_closed() && p.degree != 1)
      throw ValidationError("puncture '" + p.label + "' must have degree 1 over a separably closed base");
    if (!seen.insert(p.label).second) throw ValidationError("duplicate puncture label '" + p.label + "'");
  }
}

namespace {

void require_tame(const CurveDescriptor& x, const Integer& n) {
  const int p = x.base.characteristic;
  if (!x.base.is_symbolic() && p > 0 && n % p == 0)
    throw BadCharacteristic("H^1 of a curve with coefficients of order " + n.get_str() + " in characteristic " +
                            std::to_string(p));
}

}  // namespace

GroupExpr h1_curve(const CurveDescriptor& x, const EtaleCoeff& coeff, EvalContext& ctx) {
  x.validate();
  if (coeff.kind == CoeffKind::Sum) {
    GroupExpr out;
    for (const auto& p : coeff.pieces) out += h1_curve(x, EtaleCoeff::of(p), ctx);
    return out;
  }
  if (coeff.kind == CoeffKind::ConstZ) return FinGenAbGroup();  // Hom(pi_1, Z) = 0
  if (coeff.kind != CoeffKind::ConstCyclic && coeff.kind != CoeffKind::Mu)
    throw Unsupported("H^1 of a curve with coefficients " + coeff.to_string());
  if (coeff.n < 1) throw ValidationError("cyclic coefficient order must be positive");
  const Integer& n = coeff.n;
  switch (x.base.kind) {
    case BaseKind::FiniteField:
      throw UnsupportedBase("H^1 of curves over finite fields is not tabulated");
    case BaseKind::Symbolic:
      return GroupExpr::term(FormalTerm::h(1, x.space(), coeff));
    case BaseKind::StrictHenselianLocal:
      if (!x.proper()) throw UnsupportedBase("affine curves over a strictly henselian base");
      [[fallthrough]];
    case BaseKind::AlgClosed:
    case BaseKind::SepClosed: {
      require_tame(x, n);
      std::size_t rank = 2 * static_cast<std::size_t>(x.genus);
      if (!x.proper()) rank += static_cast<std::size_t>(x.removed_points() - 1);
      (void)ctx;
      return repeat(FinGenAbGroup::cyclic(n), rank);
    }
  }
  throw UnsupportedBase("unknown base");
}

GroupExpr h1_curve(const CurveDescriptor& x, const EtaleCoeff& coeff) {
  EvalContext ctx;
  return h1_curve(x, coeff, ctx);
}

GroupExpr units_mod_n(const CurveDescriptor& x, const Integer& n) {
  x.validate();
  if (x.genus != 0) throw UnsupportedGenus("units modulo n are tabulated for genus 0 only");
  if (!x.base.is_separably_closed()) throw UnsupportedBase("units modulo n need a separably closed base");
  require_tame(x, n);
  int r = x.removed_points();
  return repeat(FinGenAbGroup::cyclic(n), r > 1 ? static_cast<std::size_t>(r - 1) : 0);
}

GroupExpr pic_curve(const CurveDescriptor& x) {
  x.validate();
  if (x.genus == 0) {
    if (x.proper()) return GroupExpr(FinGenAbGroup::free(1)) + pic_of_base(x.base);
    if (x.base.is_field()) return FinGenAbGroup();
  }
  if (x.proper() && x.base.kind == BaseKind::AlgClosed)
    return GroupExpr(FinGenAbGroup::free(1)) + GroupExpr::term(FormalTerm::jac(x.space()));
  return GroupExpr::term(FormalTerm::pic(x.space()));
}

}  // namespace stackbr
