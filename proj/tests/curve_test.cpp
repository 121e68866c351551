#include <gtest/gtest.h>

#include "stackbr/curve.hpp"
#include "stackbr/errors.hpp"

using namespace stackbr;

namespace {

CurveDescriptor curve(int genus, int punctures, BaseDescriptor base = BaseDescriptor::alg_closed(0)) {
  CurveDescriptor x{genus, {}, base, "X"};
  for (int i = 0; i < punctures; ++i) x.punctures.push_back({"p" + std::to_string(i), 1});
  return x;
}

FinGenAbGroup power(long n, std::size_t r) { return repeat(FinGenAbGroup::cyclic(n), r); }

}  // namespace

TEST(Curves, H1ClosedForms) {
  for (int g = 0; g <= 3; ++g)
    for (int r = 0; r <= 4; ++r)
      for (long n : {2L, 3L, 12L}) {
        std::size_t expected = 2 * g + (r > 0 ? r - 1 : 0);
        EXPECT_EQ(h1_curve(curve(g, r), EtaleCoeff::constant(n)), GroupExpr(power(n, expected)));
        EXPECT_EQ(h1_curve(curve(g, r), EtaleCoeff::mu(n)), GroupExpr(power(n, expected)));
      }
  EXPECT_EQ(h1_curve(curve(1, 0), EtaleCoeff::sum({{EtaleTag::Constant, 3}, {EtaleTag::MuType, 2}})),
            GroupExpr(direct_sum({power(3, 2), power(2, 2)})));
  EXPECT_EQ(h1_curve(curve(2, 0, BaseDescriptor::strict_henselian(5, true)), EtaleCoeff::constant(3)), GroupExpr(power(3, 4)));
}

TEST(Curves, H1Errors) {
  EXPECT_THROW(h1_curve(curve(0, 2, BaseDescriptor::finite_field(5)), EtaleCoeff::constant(2)), UnsupportedBase);
  EXPECT_THROW(h1_curve(curve(0, 2, BaseDescriptor::alg_closed(3)), EtaleCoeff::constant(3)), BadCharacteristic);
  EXPECT_THROW(h1_curve(curve(0, 2, BaseDescriptor::strict_henselian(5, true)), EtaleCoeff::constant(2)),
               UnsupportedBase);
  CurveDescriptor dup = curve(0, 2);
  dup.punctures[1].label = dup.punctures[0].label;
  EXPECT_THROW(h1_curve(dup, EtaleCoeff::constant(2)), ValidationError);
  EXPECT_EQ(h1_curve(curve(1, 0, BaseDescriptor::symbolic("S", {})), EtaleCoeff::constant(2)).to_string(),
            "H^1(X, Z/2)");
}

TEST(Curves, UnitsAndPicard) {
  EXPECT_EQ(units_mod_n(curve(0, 0), 5), GroupExpr());
  EXPECT_EQ(units_mod_n(curve(0, 1), 5), GroupExpr());
  EXPECT_EQ(units_mod_n(curve(0, 3), 5), GroupExpr(power(5, 2)));
  EXPECT_THROW(units_mod_n(curve(1, 3), 5), UnsupportedGenus);
  EXPECT_EQ(pic_curve(curve(0, 0)), GroupExpr(FinGenAbGroup::free(1)));
  EXPECT_EQ(pic_curve(curve(0, 2)), GroupExpr());
  EXPECT_EQ(pic_curve(curve(2, 0)).to_string(), "Z ⊕ Jac(X)");
  EXPECT_EQ(pic_curve(curve(0, 0, BaseDescriptor::symbolic("S", {}))).to_string(), "Z ⊕ Pic(S)");
}

TEST(Curves, KummerSequenceInGenusZero) {
  // 0 -> O*(X)/n -> H^1(X, mu_n) -> Pic(X)[n] -> 0 with Pic(X)[n] = 0 in genus 0.
  for (int r = 1; r <= 5; ++r)
    for (long n : {2L, 5L, 6L}) {
      auto x = curve(0, r);
      EXPECT_EQ(h1_curve(x, EtaleCoeff::mu(n)), units_mod_n(x, n));
    }
  EXPECT_EQ(h1_curve(curve(0, 0), EtaleCoeff::mu(4)), units_mod_n(curve(0, 0), 4));
}

TEST(Curves, PuncturesAreRationalOverSeparablyClosedBases) {
  CurveDescriptor x = curve(0, 2);
  x.punctures[0].degree = 2;
  EXPECT_THROW(x.validate(), ValidationError);
  x.base = BaseDescriptor::finite_field(7);
  EXPECT_NO_THROW(x.validate());
}
