#include <gtest/gtest.h>

#include <chrono>

#include "stackbr/cohomology.hpp"
#include "stackbr/errors.hpp"

using namespace stackbr;

namespace {

FinGenAbGroup Z(std::size_t r = 1) { return FinGenAbGroup::free(r); }
FinGenAbGroup C(long n) { return FinGenAbGroup::cyclic(n); }

FinGenAbGroup integral(const FiniteGroup& g, std::size_t n, BarOptions o = {}) {
  return group_cohomology(g, GMod::trivial_integers(g), n, o);
}

// Closed form for H^n(Z/m, Z).
FinGenAbGroup cyclic_closed_form(int m, std::size_t n) {
  if (n == 0) return Z();
  return n % 2 == 0 ? C(m) : FinGenAbGroup();
}

LinRedDatum datum(std::vector<Integer> diag, const std::string& etale) {
  return {FinGenAbGroup::from_orders(0, diag), FiniteGroup::by_name(etale), true};
}

}  // namespace

TEST(FiniteGroup, NamedGroups) {
  EXPECT_EQ(FiniteGroup::by_name("S3").order(), 6);
  EXPECT_FALSE(FiniteGroup::by_name("S3").is_abelian());
  EXPECT_EQ(FiniteGroup::by_name("D4").order(), 8);
  EXPECT_EQ(FiniteGroup::by_name("Q8").order(), 8);
  EXPECT_EQ(FiniteGroup::by_name("Z/3xZ/4-semidirect").order(), 12);
  EXPECT_FALSE(FiniteGroup::by_name("Z/3xZ/4-semidirect").is_abelian());
  EXPECT_EQ(FiniteGroup::by_name("Z/2xZ/4").abelian_invariants(), direct_sum(C(2), C(4)));
  EXPECT_EQ(FiniteGroup::by_name("Z/4xZ/6").abelian_invariants(), direct_sum(C(2), C(12)));
  EXPECT_EQ(FiniteGroup::by_name("trivial").abelian_invariants(), FinGenAbGroup());
  EXPECT_THROW(FiniteGroup::by_name("A5"), ParseError);
  EXPECT_THROW(FiniteGroup::by_name("S3").abelian_invariants(), Unsupported);
  // Q8 has a unique element of order 2; D4 has five.
  auto count_involutions = [](const FiniteGroup& g) {
    int n = 0;
    for (int a = 0; a < g.order(); ++a) n += g.element_order(a) == 2;
    return n;
  };
  EXPECT_EQ(count_involutions(FiniteGroup::quaternion8()), 1);
  EXPECT_EQ(count_involutions(FiniteGroup::dihedral8()), 5);
}

TEST(FiniteGroup, TableValidation) {
  EXPECT_THROW(FiniteGroup::from_table({{0, 1}, {1, 1}}), ValidationError);
  EXPECT_THROW(FiniteGroup::from_table({{0, 1, 2}, {1, 2, 0}}), ValidationError);
  // Latin square that is not associative.
  EXPECT_THROW(FiniteGroup::from_table({{0, 1, 2, 3, 4},
                                        {1, 0, 3, 4, 2},
                                        {2, 4, 0, 1, 3},
                                        {3, 2, 4, 0, 1},
                                        {4, 3, 1, 2, 0}}),
               ValidationError);
  auto g = FiniteGroup::from_table({{1, 0}, {0, 1}});
  EXPECT_EQ(g.identity(), 1);
  EXPECT_EQ(integral(g, 2), C(2));
}

TEST(GroupCohomology, CyclicClosedForms) {
  for (int m = 1; m <= 12; ++m) {
    auto g = FiniteGroup::cyclic(m);
    for (std::size_t n = 0; n <= 4; ++n) EXPECT_EQ(integral(g, n), cyclic_closed_form(m, n)) << m << " " << n;
  }
}

TEST(GroupCohomology, SymmetricGroupS3) {
  auto s3 = FiniteGroup::symmetric3();
  EXPECT_EQ(integral(s3, 0), Z());
  EXPECT_EQ(integral(s3, 1), FinGenAbGroup());
  EXPECT_EQ(integral(s3, 2), C(2));
  EXPECT_EQ(integral(s3, 3), FinGenAbGroup());
  EXPECT_EQ(integral(s3, 4), C(6));
  for (std::size_t n : {1, 2}) {
    auto h = integral(s3, n);
    EXPECT_TRUE(h.is_trivial() || h.exponent() == 2);
  }
}

TEST(GroupCohomology, SchurMultipliersOfOrderEightAndTwelve) {
  EXPECT_EQ(integral(FiniteGroup::quaternion8(), 2), direct_sum(C(2), C(2)));
  EXPECT_EQ(integral(FiniteGroup::quaternion8(), 3), FinGenAbGroup());
  EXPECT_EQ(integral(FiniteGroup::dihedral8(), 2), direct_sum(C(2), C(2)));
  EXPECT_EQ(integral(FiniteGroup::dihedral8(), 3), C(2));
  EXPECT_EQ(integral(FiniteGroup::dicyclic12(), 3), FinGenAbGroup());
  EXPECT_EQ(integral(FiniteGroup::dicyclic12(), 2), C(4));
}

TEST(GroupCohomology, FastPathMatchesFullComplex) {
  for (const char* name : {"Z/2", "Z/3", "Z/4", "Z/2xZ/2", "S3", "Z/6"}) {
    auto g = FiniteGroup::by_name(name);
    auto bar = bar_complex(g, GMod::trivial_integers(g), 4).to_complex();
    for (std::size_t n = 0; n <= 3; ++n) EXPECT_EQ(homology_at(bar, n), integral(g, n)) << name << " " << n;
  }
}

TEST(GroupCohomology, NormalizedAgreesWithUnnormalized) {
  BarOptions raw;
  raw.normalized = false;
  for (const char* name : {"Z/2", "Z/3", "Z/4", "Z/2xZ/2", "Z/5", "S3", "Z/6"}) {
    auto g = FiniteGroup::by_name(name);
    auto a = bar_complex(g, GMod::trivial_integers(g), 4).to_complex();
    auto b = bar_complex(g, GMod::trivial_integers(g), 4, raw).to_complex();
    for (std::size_t n = 0; n <= 3; ++n) EXPECT_EQ(homology_at(a, n), homology_at(b, n)) << name << " " << n;
    auto z2 = GMod::trivial(g, PresentedGroup::of(C(2)));
    for (std::size_t n = 0; n <= 2; ++n)
      EXPECT_EQ(group_cohomology(g, z2, n), group_cohomology(g, z2, n, raw)) << name << " " << n;
  }
}

TEST(GroupCohomology, TwistedAndTorsionCoefficients) {
  auto c2 = FiniteGroup::cyclic(2);
  auto sign = GMod::from_generators(c2, PresentedGroup::free(1), {{1, IntMatrix::from_rows({{-1}})}});
  EXPECT_EQ(group_cohomology(c2, sign, 0), FinGenAbGroup());
  EXPECT_EQ(group_cohomology(c2, sign, 1), C(2));
  EXPECT_EQ(group_cohomology(c2, sign, 2), FinGenAbGroup());
  EXPECT_EQ(group_cohomology(c2, sign, 3), C(2));
  auto c4 = FiniteGroup::cyclic(4);
  auto z2 = GMod::trivial(c4, PresentedGroup::of(C(2)));
  for (std::size_t n = 0; n <= 3; ++n) EXPECT_EQ(group_cohomology(c4, z2, n), C(2));
  // Universal coefficients: H^2(S3, Z/2) = H^2(S3, Z)/2 + H^3(S3, Z)[2].
  auto s3 = FiniteGroup::symmetric3();
  EXPECT_EQ(group_cohomology(s3, GMod::trivial(s3, PresentedGroup::of(C(2))), 2), C(2));
  EXPECT_EQ(group_cohomology(s3, GMod::trivial(s3, PresentedGroup::of(C(3))), 2), FinGenAbGroup());
}

TEST(GroupCohomology, ModuleValidation) {
  auto c2 = FiniteGroup::cyclic(2);
  EXPECT_THROW(GMod::from_generators(c2, PresentedGroup::free(1), {{1, IntMatrix::from_rows({{2}})}}),
               ValidationError);
  // On Z/3 the element 1 cannot act by 2 for a group of order 2... it can: 2*2 = 4 = 1 mod 3.
  EXPECT_NO_THROW(GMod::from_generators(c2, PresentedGroup::of(C(3)), {{1, IntMatrix::from_rows({{2}})}}));
  EXPECT_THROW(GMod::from_generators(FiniteGroup::cyclic(3), PresentedGroup::free(1), {{1, IntMatrix::from_rows({{-1}})}}),
               ValidationError);
}

TEST(GroupCohomology, BudgetIsEnforced) {
  auto g = FiniteGroup::cyclic(12);
  BarOptions tight;
  tight.budget = 1000;
  EXPECT_THROW(integral(g, 3, tight), ResourceLimit);
  EXPECT_NO_THROW(integral(g, 2, tight));
}

TEST(GroupCohomology, BarH3MatchesKunnethForSmallProducts) {
  auto start = std::chrono::steady_clock::now();
  for (int a = 1; a <= 36; ++a)
    for (int b = a; a * b <= 36; ++b) {
      auto g = FiniteGroup::direct_product(FiniteGroup::cyclic(a), FiniteGroup::cyclic(b));
      EXPECT_EQ(integral(g, 3), kunneth_h3(C(a), C(b))) << a << "x" << b;
    }
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 60.0);
}

TEST(LinearlyReductive, Pi0) {
  EXPECT_EQ(pi0_of_stabilizer(datum({4}, "trivial"), 2).order(), 1);
  EXPECT_EQ(pi0_of_stabilizer(datum({6}, "trivial"), 3).abelian_invariants(), C(2));
  EXPECT_EQ(pi0_of_stabilizer(datum({2}, "Z/2"), 0).abelian_invariants(), direct_sum(C(2), C(2)));
  LinRedDatum bad{C(2), FiniteGroup::symmetric3(), false};
  EXPECT_THROW(pi0_of_stabilizer(bad, 0), Unsupported);
  EXPECT_THROW(pi0_of_stabilizer(datum({}, "Z/3"), 3), BadCharacteristic);
  LinRedDatum torus{FinGenAbGroup::from_orders(1, {5}), FiniteGroup::cyclic(1), true};
  EXPECT_EQ(pi0_of_stabilizer(torus, 0).abelian_invariants(), C(5));
}

TEST(LinearlyReductive, Brauerless) {
  for (int n = 1; n <= 12; ++n) EXPECT_TRUE(brauerless(datum({n}, "trivial")));
  EXPECT_FALSE(brauerless(datum({}, "Z/2xZ/2")));
  EXPECT_FALSE(brauerless(datum({2}, "Z/2")));
  EXPECT_TRUE(brauerless(datum({2}, "Z/3")));
  EXPECT_TRUE(brauerless({FinGenAbGroup(), FiniteGroup::symmetric3(), false}));
  EXPECT_TRUE(brauerless({FinGenAbGroup(), FiniteGroup::quaternion8(), false}));
  EXPECT_FALSE(brauerless({FinGenAbGroup(), FiniteGroup::dihedral8(), false}));
  // mu_2 x mu_2 is Brauerless where mu_2 is infinitesimal.
  EXPECT_TRUE(brauerless(datum({2, 2}, "trivial"), 2));
  EXPECT_FALSE(brauerless(datum({2, 2}, "trivial"), 3));
  // Large abelian groups go through the Kunneth table.
  EXPECT_TRUE(brauerless(datum({}, "Z/60")));
  EXPECT_FALSE(brauerless(datum({}, "Z/5xZ/10")));
  EXPECT_TRUE(locally_brauerless({}));
  EXPECT_FALSE(locally_brauerless({{datum({3}, "trivial"), 0}, {datum({2, 2}, "trivial"), 0}}));
}

TEST(LinearlyReductive, BrauerlessMatchesCyclicityForAbelian) {
  for (int a = 1; a <= 36; ++a)
    for (int b = 1; a * b <= 36; ++b) {
      auto g = FiniteGroup::direct_product(FiniteGroup::cyclic(a), FiniteGroup::cyclic(b));
      EXPECT_EQ(brauerless_group(g), g.abelian_invariants().is_cyclic()) << a << "x" << b;
    }
}

TEST(LinearlyReductive, CartierDual) {
  EXPECT_EQ(cartier_dual(datum({12}, "trivial")), (EtaleGroupExpr{{EtaleTag::Constant, 12}}));
  EXPECT_EQ(cartier_dual(datum({}, "Z/2")), (EtaleGroupExpr{{EtaleTag::MuType, 2}}));
  EXPECT_EQ(cartier_dual(datum({2}, "Z/3")), (EtaleGroupExpr{{EtaleTag::Constant, 2}, {EtaleTag::MuType, 3}}));
  EXPECT_THROW(cartier_dual({FinGenAbGroup(), FiniteGroup::symmetric3(), false}), Unsupported);
}
