#include <algorithm>

#include "stackbr/cohomology.hpp"
#include "stackbr/errors.hpp"

namespace stackbr {

bool brauerless_group(const FiniteGroup& g, const BrauerlessOptions& options) {
  if (g.order() <= options.bar_order_limit)
    return group_cohomology(g, GMod::trivial_integers(g), 3, options.bar).is_trivial();
  if (g.is_abelian()) return integral_cohomology_of_abelian(g.abelian_invariants(), 3)[3].is_trivial();
  throw ResourceLimit("non-abelian group of order " + std::to_string(g.order()) +
                      " exceeds the bar complex order limit of " + std::to_string(options.bar_order_limit));
}

namespace {

Integer prime_to_p_part(Integer n, int p) {
  if (p <= 1) return n;
  while (n % p == 0) n /= p;
  return n;
}

}  // namespace

FiniteGroup pi0_of_stabilizer(const LinRedDatum& d, int characteristic) {
  if (characteristic < 0) throw BadCharacteristic("characteristic must be 0 or a prime");
  if (characteristic > 1 && d.etale.order() % characteristic == 0)
    throw BadCharacteristic("etale part of order " + std::to_string(d.etale.order()) +
                            " is not tame in characteristic " + std::to_string(characteristic));
  if (!d.commutative) {
    if (!d.diag_characters.is_trivial())
      throw Unsupported("non-commutative stabilizer with a nontrivial diagonalizable part");
    return d.etale;
  }
  if (!d.etale.is_abelian()) throw ValidationError("commutative datum with a non-abelian etale part");
  std::vector<Integer> orders;
  for (const Integer& a : d.diag_characters.invariant_factors()) orders.push_back(prime_to_p_part(a, characteristic));
  FinGenAbGroup diag = FinGenAbGroup::from_orders(0, orders);
  return FiniteGroup::from_abelian(direct_sum(diag, d.etale.abelian_invariants()));
}

bool brauerless(const LinRedDatum& d, int characteristic, const BrauerlessOptions& options) {
  return brauerless_group(pi0_of_stabilizer(d, characteristic), options);
}

bool locally_brauerless(const std::vector<std::pair<LinRedDatum, int>>& stabilizers,
                        const BrauerlessOptions& options) {
  return std::all_of(stabilizers.begin(), stabilizers.end(),
                     [&](const auto& s) { return brauerless(s.first, s.second, options); });
}

EtaleGroupExpr cartier_dual(const LinRedDatum& d) {
  if (!d.commutative || !d.etale.is_abelian()) throw Unsupported("Cartier dual of a non-commutative group");
  EtaleGroupExpr out;
  for (std::size_t i = 0; i < d.diag_characters.free_rank(); ++i) out.push_back({EtaleTag::Constant, 0});
  for (const Integer& a : d.diag_characters.invariant_factors()) out.push_back({EtaleTag::Constant, a});
  const FinGenAbGroup etale = d.etale.abelian_invariants();
  for (const Integer& a : etale.invariant_factors()) out.push_back({EtaleTag::MuType, a});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace stackbr
