#include <gtest/gtest.h>

#include <random>

#include "stackbr/abelian.hpp"
#include "stackbr/errors.hpp"

using namespace stackbr;

namespace {

FinGenAbGroup Z(std::size_t r = 1) { return FinGenAbGroup::free(r); }
FinGenAbGroup C(long n) { return FinGenAbGroup::cyclic(n); }

// Determinant by cofactor expansion; only for tiny matrices.
Integer det(const IntMatrix& m) {
  std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Integer total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (sgn(m(0, c)) == 0) continue;
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t k = 0, j = 0; k < n; ++k)
        if (k != c) minor(r - 1, j++) = m(r, k);
    Integer term = m(0, c) * det(minor);
    total += (c % 2 == 0) ? term : Integer(-term);
  }
  return total;
}

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// Invariant factors from gcds of k x k minors.
std::vector<Integer> determinantal_factors(const IntMatrix& m) {
  std::vector<Integer> out;
  Integer prev = 1;
  for (std::size_t k = 1; k <= std::min(m.rows(), m.cols()); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(m.rows(), k, 0, cur, rs);
    subsets(m.cols(), k, 0, cur, cs);
    Integer g = 0;
    for (const auto& r : rs)
      for (const auto& c : cs) {
        IntMatrix sub(k, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(r[i], c[j]);
        Integer d = det(sub);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      }
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

bool is_smith_diagonal(const SmithForm& s) {
  for (std::size_t i = 0; i < s.d.rows(); ++i)
    for (std::size_t j = 0; j < s.d.cols(); ++j) {
      if (i != j && sgn(s.d(i, j)) != 0) return false;
      if (i == j && sgn(s.d(i, j)) < 0) return false;
    }
  auto diag = s.diagonal();
  for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
    if (sgn(diag[i]) == 0 && sgn(diag[i + 1]) != 0) return false;
    if (sgn(diag[i]) != 0 && !mpz_divisible_p(diag[i + 1].get_mpz_t(), diag[i].get_mpz_t())) return false;
  }
  return true;
}

// Exterior square of a finite abelian group given by its invariant factors.
FinGenAbGroup exterior_square(const FinGenAbGroup& a) {
  std::vector<Integer> orders;
  const auto& f = a.invariant_factors();
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      Integer g;
      mpz_gcd(g.get_mpz_t(), f[i].get_mpz_t(), f[j].get_mpz_t());
      orders.push_back(g);
    }
  return FinGenAbGroup::from_orders(0, orders);
}

void chains(long bound, long last, long product, std::vector<long>& cur, std::vector<std::vector<long>>& out) {
  if (!cur.empty()) out.push_back(cur);
  for (long d = last; product * d <= bound; d += last) {
    cur.push_back(d);
    chains(bound, d, product * d, cur, out);
    cur.pop_back();
  }
}

// Every nontrivial finite abelian group of order at most bound, as
// invariant factor chains.
std::vector<FinGenAbGroup> abelian_groups_up_to(long bound) {
  std::vector<std::vector<long>> raw;
  std::vector<long> cur;
  for (long first = 2; first <= bound; ++first) {
    cur = {first};
    chains(bound, first, first, cur, raw);
  }
  std::vector<FinGenAbGroup> out;
  for (const auto& c : raw) {
    std::vector<Integer> orders(c.begin(), c.end());
    out.push_back(FinGenAbGroup::from_orders(0, orders));
  }
  return out;
}

}  // namespace

TEST(SmithNormalForm, SmallExample) {
  auto s = smith_normal_form(IntMatrix::from_rows({{2, 4}, {6, 8}}));
  EXPECT_EQ(s.diagonal(), (std::vector<Integer>{2, 4}));
  EXPECT_EQ(s.u * IntMatrix::from_rows({{2, 4}, {6, 8}}) * s.v, s.d);
}

TEST(SmithNormalForm, ZeroAndEmpty) {
  auto s = smith_normal_form(IntMatrix(3, 2));
  EXPECT_EQ(s.rank, 0u);
  EXPECT_TRUE(s.d.is_zero());
  EXPECT_EQ(cokernel(IntMatrix(3, 0)), Z(3));
  EXPECT_EQ(cokernel(IntMatrix(0, 4)), FinGenAbGroup());
}

TEST(SmithNormalForm, MatchesDeterminantalDivisors) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    IntMatrix m = random_matrix(rng, r, c, -9, 9);
    auto s = smith_normal_form(m);
    auto expected = determinantal_factors(m);
    ASSERT_EQ(s.rank, expected.size()) << m.to_string();
    for (std::size_t i = 0; i < s.rank; ++i) EXPECT_EQ(s.d(i, i), expected[i]) << m.to_string();
  }
}

TEST(SmithNormalForm, RandomTransformsUpTo50) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    std::size_t r = 1 + rng() % 50, c = 1 + rng() % 50;
    IntMatrix m = random_matrix(rng, r, c, -9, 9);
    auto s = smith_normal_form(m);
    EXPECT_EQ(s.u * m * s.v, s.d);
    EXPECT_EQ(s.u * s.u_inverse, IntMatrix::identity(r));
    EXPECT_TRUE(is_smith_diagonal(s));
    // Integer inverse of v exists iff lattice spanned by v is everything.
    EXPECT_EQ(cokernel(s.v), FinGenAbGroup());
    EXPECT_EQ(cokernel(m.transpose()).torsion(), cokernel(m).torsion());
  }
}

TEST(SmithNormalForm, DeterministicOutput) {
  std::mt19937 rng(3);
  IntMatrix m = random_matrix(rng, 6, 5, -9, 9);
  auto a = smith_normal_form(m);
  auto b = smith_normal_form(m);
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.v, b.v);
}

TEST(MatrixInvariants, SparsePathAgreesWithDense) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t r = 64 + rng() % 40, c = 64 + rng() % 40;
    IntMatrix m(r, c);
    std::uniform_int_distribution<int> val(-3, 3);
    for (std::size_t i = 0; i < r; ++i)
      for (int k = 0; k < 3; ++k) m(i, rng() % c) = val(rng) * ((trial % 2) ? 2 : 1);
    auto inv = matrix_invariants(m);
    auto s = smith_normal_form(m);
    EXPECT_EQ(inv.rank, s.rank);
    std::vector<Integer> tors;
    for (std::size_t i = 0; i < s.rank; ++i)
      if (s.d(i, i) != 1) tors.push_back(s.d(i, i));
    EXPECT_EQ(inv.torsion, tors);
  }
}

TEST(MatrixInvariants, OverflowFallsBackToBigIntegers) {
  // A chain x_{i+1} = 1000 x_i forces entries far beyond 64 bits.
  std::size_t n = 80;
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1000;
    if (i + 1 < n) m(i, i + 1) = -1;
  }
  m(n - 1, 0) = 1;
  auto inv = matrix_invariants(m);
  EXPECT_EQ(inv.rank, n);
  Integer expected;
  mpz_ui_pow_ui(expected.get_mpz_t(), 1000, n);
  expected += 1;
  ASSERT_EQ(inv.torsion.size(), 1u);
  EXPECT_EQ(abs(inv.torsion[0]), expected);
}

TEST(FinGenAbGroup, CanonicalForm) {
  auto g = FinGenAbGroup::from_orders(1, {4, 6, 1, 0});
  EXPECT_EQ(g.free_rank(), 2u);
  EXPECT_EQ(g.invariant_factors(), (std::vector<Integer>{2, 12}));
  EXPECT_EQ(g.to_string(), "Z ⊕ Z ⊕ Z/2 ⊕ Z/12");
  EXPECT_EQ(FinGenAbGroup().to_string(), "0");
  EXPECT_EQ(FinGenAbGroup::from_orders(0, {2, 3}), C(6));
  EXPECT_THROW(g.order(), NotFinite);
}

TEST(FinGenAbGroup, Operations) {
  EXPECT_EQ(direct_sum(C(2), C(4)).to_string(), "Z/2 ⊕ Z/4");
  EXPECT_EQ(tensor(C(4), C(6)), C(2));
  EXPECT_EQ(tensor(Z(), C(6)), C(6));
  EXPECT_EQ(tensor(Z(2), Z(3)), Z(6));
  EXPECT_EQ(tor(C(4), C(6)), C(2));
  EXPECT_EQ(tor(Z(), C(6)), FinGenAbGroup());
  EXPECT_EQ(hom_group(C(4), C(6)), C(2));
  EXPECT_EQ(hom_group(Z(), C(6)), C(6));
  EXPECT_EQ(hom_group(C(6), Z()), FinGenAbGroup());
  EXPECT_EQ(dual_finite(direct_sum(C(2), C(3))), C(6));
  EXPECT_THROW(dual_finite(Z()), NotFinite);
}

TEST(Cokernel, Examples) {
  EXPECT_EQ(cokernel(IntMatrix::from_rows({{6}})), C(6));
  // generators x1, x2, y; relations 2x1 - y and 3x2 - y
  EXPECT_EQ(cokernel(IntMatrix::from_rows({{2, 0}, {0, 3}, {-1, -1}})), Z());
  EXPECT_EQ(cokernel(IntMatrix::from_rows({{2, 0}, {0, 2}, {-1, -1}})), direct_sum(Z(), C(2)));
}

TEST(PresentedGroups, KernelImageCokernel) {
  // multiplication by 2 on Z/4
  auto z4 = PresentedGroup::of(C(4));
  auto f = make_map(z4, z4, IntMatrix::from_rows({{2}}));
  EXPECT_EQ(kernel(f).group.group(), C(2));
  EXPECT_EQ(image(f), C(2));
  EXPECT_EQ(cokernel(f), C(2));
  // Z/2 -> Z/4 by 1 is not a homomorphism
  EXPECT_THROW(make_map(PresentedGroup::of(C(2)), z4, IntMatrix::from_rows({{1}})), ValidationError);
}

TEST(Homology, FreeAndPresentedComplexes) {
  // Z --2--> Z --0--> Z
  Complex c{{PresentedGroup::free(1), PresentedGroup::free(1), PresentedGroup::free(1)},
            {IntMatrix::from_rows({{2}}), IntMatrix::from_rows({{0}})}};
  EXPECT_EQ(homology_at(c, 0), FinGenAbGroup());
  EXPECT_EQ(homology_at(c, 1), C(2));
  EXPECT_EQ(homology_at(c, 2), Z());
  // Z/4 --2--> Z/4 --2--> Z/4
  auto z4 = PresentedGroup::of(C(4));
  Complex d{{z4, z4, z4}, {IntMatrix::from_rows({{2}}), IntMatrix::from_rows({{2}})}};
  EXPECT_EQ(homology_at(d, 1), FinGenAbGroup());
  EXPECT_EQ(homology_at(d, 0), C(2));
  EXPECT_EQ(homology_at(d, 2), C(2));
}

TEST(Homology, RejectsNonComplex) {
  Complex c{{PresentedGroup::free(1), PresentedGroup::free(1), PresentedGroup::free(1)},
            {IntMatrix::from_rows({{1}}), IntMatrix::from_rows({{1}})}};
  EXPECT_THROW(homology_at(c, 1), MalformedComplex);
}

TEST(Homology, RenormalizedComplexAgrees) {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    // A random two-term complex Z^a / R -> Z^b / S with a zero-composition tail.
    std::size_t a = 1 + rng() % 4, b = 1 + rng() % 4;
    IntMatrix f = random_matrix(rng, b, a, -4, 4);
    IntMatrix s = random_matrix(rng, b, 1 + rng() % 3, -6, 6);
    IntMatrix r = integer_kernel(f.hconcat(s)).rows_range(0, a);
    Complex c{{PresentedGroup{a, r}, PresentedGroup{b, s}}, {f}};
    Complex n = renormalize(c);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(homology_at(c, i), homology_at(n, i));
    EXPECT_EQ(homology_at(c, 0), kernel(make_map(c.terms[0], c.terms[1], f)).group.group());
    EXPECT_EQ(homology_at(c, 1), cokernel(make_map(c.terms[0], c.terms[1], f)));
  }
}

TEST(Kunneth, Examples) {
  EXPECT_EQ(kunneth_h3(C(2), C(2)), C(2));
  EXPECT_EQ(kunneth_h3(C(2), C(3)), FinGenAbGroup());
  EXPECT_EQ(kunneth_h3(C(4), C(6)), C(2));
  auto t = integral_cohomology_of_abelian(direct_sum(C(2), C(2)), 4);
  EXPECT_EQ(t[0], Z());
  EXPECT_EQ(t[1], FinGenAbGroup());
  EXPECT_EQ(t[2], direct_sum(C(2), C(2)));
  EXPECT_EQ(t[3], C(2));
}

TEST(Kunneth, MatchesExteriorSquareAndCyclicity) {
  for (const auto& a : abelian_groups_up_to(64)) {
    auto table = integral_cohomology_of_abelian(a, 3);
    EXPECT_EQ(table[3], exterior_square(a)) << a.to_string();
    EXPECT_EQ(table[3].is_trivial(), a.is_cyclic()) << a.to_string();
    const auto& f = a.invariant_factors();
    std::vector<Integer> rest(f.begin() + 1, f.end());
    EXPECT_EQ(kunneth_h3(C(f[0].get_si()), FinGenAbGroup::from_orders(0, rest)), table[3]) << a.to_string();
  }
}
