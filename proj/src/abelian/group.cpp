#include <algorithm>

#include "stackbr/abelian.hpp"
#include "stackbr/errors.hpp"

namespace stackbr {

namespace {

Integer gcd_of(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer lcm_of(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

}  // namespace

FinGenAbGroup FinGenAbGroup::from_orders(std::size_t free_rank, const std::vector<Integer>& orders) {
  FinGenAbGroup g;
  g.free_rank_ = free_rank;
  std::vector<Integer> t;
  for (const Integer& o : orders) {
    Integer a = abs(o);
    if (a == 0)
      ++g.free_rank_;
    else if (a != 1)
      t.push_back(a);
  }
  // Pairwise (gcd, lcm) replacement leaves a divisibility chain.
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      Integer g2 = gcd_of(t[i], t[j]);
      Integer l2 = lcm_of(t[i], t[j]);
      t[i] = g2;
      t[j] = l2;
    }
  for (const Integer& a : t)
    if (a != 1) g.factors_.push_back(a);
  return g;
}

FinGenAbGroup FinGenAbGroup::cyclic(const Integer& n) { return from_orders(0, {n}); }

FinGenAbGroup FinGenAbGroup::free(std::size_t rank) { return from_orders(rank, {}); }

Integer FinGenAbGroup::order() const {
  if (free_rank_ > 0) throw NotFinite("group " + to_string() + " is infinite");
  Integer n = 1;
  for (const Integer& a : factors_) n *= a;
  return n;
}

Integer FinGenAbGroup::exponent() const {
  if (free_rank_ > 0) throw NotFinite("group " + to_string() + " is infinite");
  return factors_.empty() ? Integer(1) : factors_.back();
}

FinGenAbGroup FinGenAbGroup::torsion() const { return from_orders(0, factors_); }

std::string FinGenAbGroup::to_string() const {
  if (is_trivial()) return "0";
  std::string out;
  auto append = [&](const std::string& s) {
    if (!out.empty()) out += " ⊕ ";
    out += s;
  };
  for (std::size_t i = 0; i < free_rank_; ++i) append("Z");
  for (const Integer& a : factors_) append("Z/" + a.get_str());
  return out;
}

FinGenAbGroup direct_sum(const FinGenAbGroup& a, const FinGenAbGroup& b) {
  std::vector<Integer> orders = a.invariant_factors();
  orders.insert(orders.end(), b.invariant_factors().begin(), b.invariant_factors().end());
  return FinGenAbGroup::from_orders(a.free_rank() + b.free_rank(), orders);
}

FinGenAbGroup direct_sum(const std::vector<FinGenAbGroup>& parts) {
  FinGenAbGroup out;
  for (const auto& p : parts) out = direct_sum(out, p);
  return out;
}

FinGenAbGroup repeat(const FinGenAbGroup& a, std::size_t times) {
  FinGenAbGroup out;
  for (std::size_t i = 0; i < times; ++i) out = direct_sum(out, a);
  return out;
}

FinGenAbGroup tensor(const FinGenAbGroup& a, const FinGenAbGroup& b) {
  std::vector<Integer> orders;
  for (const Integer& x : a.invariant_factors())
    for (std::size_t i = 0; i < b.free_rank(); ++i) orders.push_back(x);
  for (const Integer& y : b.invariant_factors())
    for (std::size_t i = 0; i < a.free_rank(); ++i) orders.push_back(y);
  for (const Integer& x : a.invariant_factors())
    for (const Integer& y : b.invariant_factors()) orders.push_back(gcd_of(x, y));
  return FinGenAbGroup::from_orders(a.free_rank() * b.free_rank(), orders);
}

FinGenAbGroup tor(const FinGenAbGroup& a, const FinGenAbGroup& b) {
  std::vector<Integer> orders;
  for (const Integer& x : a.invariant_factors())
    for (const Integer& y : b.invariant_factors()) orders.push_back(gcd_of(x, y));
  return FinGenAbGroup::from_orders(0, orders);
}

FinGenAbGroup hom_group(const FinGenAbGroup& a, const FinGenAbGroup& b) {
  std::vector<Integer> orders;
  for (const Integer& y : b.invariant_factors())
    for (std::size_t i = 0; i < a.free_rank(); ++i) orders.push_back(y);
  for (const Integer& x : a.invariant_factors())
    for (const Integer& y : b.invariant_factors()) orders.push_back(gcd_of(x, y));
  return FinGenAbGroup::from_orders(a.free_rank() * b.free_rank(), orders);
}

FinGenAbGroup dual_finite(const FinGenAbGroup& a) {
  if (!a.is_finite()) throw NotFinite("dual of infinite group " + a.to_string());
  return a;
}

FinGenAbGroup cokernel(const IntMatrix& m) {
  Invariants inv = matrix_invariants(m);
  return FinGenAbGroup::from_orders(m.rows() - inv.rank, inv.torsion);
}

FinGenAbGroup cokernel(const SparseMatrix& m) {
  Invariants inv = matrix_invariants(m);
  return FinGenAbGroup::from_orders(m.rows() - inv.rank, inv.torsion);
}

PresentedGroup PresentedGroup::free(std::size_t rank) { return {rank, IntMatrix(rank, 0)}; }

PresentedGroup PresentedGroup::of(const FinGenAbGroup& g) {
  std::size_t n = g.free_rank() + g.invariant_factors().size();
  PresentedGroup p{n, IntMatrix(n, g.invariant_factors().size())};
  for (std::size_t i = 0; i < g.invariant_factors().size(); ++i)
    p.relations(g.free_rank() + i, i) = g.invariant_factors()[i];
  return p;
}

FinGenAbGroup PresentedGroup::group() const { return cokernel(relations); }

bool in_lattice(const IntMatrix& lattice, const IntMatrix& w) {
  if (w.cols() == 0) return true;
  if (lattice.rows() != w.rows()) throw ValidationError("in_lattice: dimension mismatch");
  if (lattice.cols() == 0) return w.is_zero();
  SmithForm s = smith_normal_form(lattice);
  IntMatrix z = s.u * w;
  for (std::size_t r = 0; r < z.rows(); ++r)
    for (std::size_t c = 0; c < z.cols(); ++c) {
      if (r < s.rank) {
        if (!mpz_divisible_p(z(r, c).get_mpz_t(), s.d(r, r).get_mpz_t())) return false;
      } else if (sgn(z(r, c)) != 0) {
        return false;
      }
    }
  return true;
}

IntMatrix lattice_basis(const IntMatrix& m) {
  if (m.cols() == 0) return IntMatrix(m.rows(), 0);
  SmithForm s = smith_normal_form(m);
  IntMatrix basis(m.rows(), s.rank);
  for (std::size_t c = 0; c < s.rank; ++c)
    for (std::size_t r = 0; r < m.rows(); ++r) basis(r, c) = s.u_inverse(r, c) * s.d(c, c);
  return basis;
}

IntMatrix integer_kernel(const IntMatrix& m) {
  if (m.rows() == 0) return IntMatrix::identity(m.cols());
  SmithForm s = smith_normal_form(m);
  return s.v.columns(s.rank, m.cols());
}

IntMatrix lattice_coordinates(const IntMatrix& basis, const IntMatrix& w) {
  if (basis.rows() != w.rows()) throw ValidationError("lattice_coordinates: dimension mismatch");
  if (basis.cols() == 0) {
    if (!w.is_zero()) throw ValidationError("vector outside lattice");
    return IntMatrix(0, w.cols());
  }
  SmithForm s = smith_normal_form(basis);
  if (s.rank != basis.cols()) throw ValidationError("lattice basis is not independent");
  IntMatrix z = s.u * w;
  IntMatrix y(basis.cols(), w.cols());
  for (std::size_t c = 0; c < w.cols(); ++c) {
    for (std::size_t r = 0; r < z.rows(); ++r) {
      if (r < s.rank) {
        if (!mpz_divisible_p(z(r, c).get_mpz_t(), s.d(r, r).get_mpz_t()))
          throw ValidationError("vector outside lattice");
        mpz_divexact(y(r, c).get_mpz_t(), z(r, c).get_mpz_t(), s.d(r, r).get_mpz_t());
      } else if (sgn(z(r, c)) != 0) {
        throw ValidationError("vector outside lattice");
      }
    }
  }
  return s.v * y;
}

AbMap make_map(PresentedGroup source, PresentedGroup target, IntMatrix matrix) {
  if (matrix.rows() != target.generators || matrix.cols() != source.generators)
    throw ValidationError("map matrix has wrong shape");
  if (!in_lattice(target.relations, matrix * source.relations))
    throw ValidationError("map does not respect relations");
  return {std::move(source), std::move(target), std::move(matrix)};
}

namespace {

// Basis of {x in Z^a : f x in im(target relations)}.
IntMatrix preimage_of_relations(const IntMatrix& f, const IntMatrix& target_relations) {
  std::size_t a = f.cols();
  if (f.rows() == 0) return IntMatrix::identity(a);
  IntMatrix stacked = f.hconcat(target_relations);
  IntMatrix ker = integer_kernel(stacked);
  return lattice_basis(ker.rows_range(0, a));
}

}  // namespace

Subgroup kernel(const AbMap& f) {
  IntMatrix basis = preimage_of_relations(f.matrix, f.target.relations);
  IntMatrix rel = lattice_coordinates(basis, f.source.relations);
  return {{basis.cols(), rel}, basis};
}

FinGenAbGroup image(const AbMap& f) {
  return cokernel(preimage_of_relations(f.matrix, f.target.relations));
}

FinGenAbGroup cokernel(const AbMap& f) { return cokernel(f.matrix.hconcat(f.target.relations)); }

void validate_complex(const Complex& c) {
  if (c.differentials.size() + 1 != c.terms.size() && !(c.terms.empty() && c.differentials.empty()))
    throw MalformedComplex("complex needs one differential between consecutive terms");
  for (std::size_t i = 0; i < c.terms.size(); ++i)
    if (c.terms[i].relations.rows() != c.terms[i].generators)
      throw MalformedComplex("term " + std::to_string(i) + " has a malformed presentation");
  for (std::size_t i = 0; i < c.differentials.size(); ++i) {
    const IntMatrix& d = c.differentials[i];
    if (d.rows() != c.terms[i + 1].generators || d.cols() != c.terms[i].generators)
      throw MalformedComplex("differential " + std::to_string(i) + " has wrong shape");
    if (!in_lattice(c.terms[i + 1].relations, d * c.terms[i].relations))
      throw MalformedComplex("differential " + std::to_string(i) + " does not respect relations");
    if (i > 0 && !in_lattice(c.terms[i + 1].relations, d * c.differentials[i - 1]))
      throw MalformedComplex("d∘d is nonzero at term " + std::to_string(i));
  }
}

FinGenAbGroup homology_at(const Complex& c, std::size_t i) {
  if (i >= c.terms.size()) throw ValidationError("homology index out of range");
  validate_complex(c);
  const PresentedGroup& mid = c.terms[i];
  const bool has_out = i + 1 < c.terms.size();
  const bool has_in = i > 0;
  auto is_free = [](const PresentedGroup& p) { return p.relations.is_zero(); };
  if (is_free(mid) && (!has_out || is_free(c.terms[i + 1])) && (!has_in || is_free(c.terms[i - 1]))) {
    // For free terms ker d_i is saturated, so the torsion is that of coker d_{i-1}.
    Invariants in = has_in ? matrix_invariants(c.differentials[i - 1]) : Invariants{};
    Invariants out = has_out ? matrix_invariants(c.differentials[i]) : Invariants{};
    return FinGenAbGroup::from_orders(mid.generators - in.rank - out.rank, in.torsion);
  }
  IntMatrix ker = has_out ? preimage_of_relations(c.differentials[i], c.terms[i + 1].relations)
                          : IntMatrix::identity(mid.generators);
  IntMatrix gens = mid.relations;
  if (has_in) gens = c.differentials[i - 1].hconcat(mid.relations);
  return cokernel(lattice_coordinates(ker, gens));
}

Complex renormalize(const Complex& c) {
  validate_complex(c);
  Complex out;
  std::vector<SmithForm> forms;
  for (const auto& t : c.terms) {
    if (t.relations.cols() == 0) {
      forms.push_back({IntMatrix::identity(t.generators), IntMatrix::identity(t.generators),
                       IntMatrix(t.generators, 0), IntMatrix(0, 0), 0});
      out.terms.push_back(t);
      continue;
    }
    forms.push_back(smith_normal_form(t.relations));
    out.terms.push_back({t.generators, forms.back().d});
  }
  for (std::size_t i = 0; i < c.differentials.size(); ++i)
    out.differentials.push_back(forms[i + 1].u * c.differentials[i] * forms[i].u_inverse);
  return out;
}

namespace {

std::vector<FinGenAbGroup> combine_kunneth(const std::vector<FinGenAbGroup>& a,
                                           const std::vector<FinGenAbGroup>& b, std::size_t top) {
  std::vector<FinGenAbGroup> out(top + 1);
  for (std::size_t n = 0; n <= top; ++n) {
    std::vector<FinGenAbGroup> parts;
    for (std::size_t i = 0; i <= n; ++i) parts.push_back(tensor(a[i], b[n - i]));
    for (std::size_t i = 0; i <= n + 1; ++i) parts.push_back(tor(a[i], b[n + 1 - i]));
    out[n] = direct_sum(parts);
  }
  return out;
}

std::vector<FinGenAbGroup> cyclic_table(const Integer& n, std::size_t top) {
  std::vector<FinGenAbGroup> t(top + 1);
  t[0] = FinGenAbGroup::free(1);
  for (std::size_t k = 1; k <= top; ++k)
    t[k] = (n == 0) ? (k == 1 ? FinGenAbGroup::free(1) : FinGenAbGroup())
                    : (k % 2 == 0 ? FinGenAbGroup::cyclic(n) : FinGenAbGroup());
  return t;
}

}  // namespace

std::vector<FinGenAbGroup> integral_cohomology_of_abelian(const FinGenAbGroup& a, std::size_t max_degree) {
  std::vector<Integer> factors(a.free_rank(), Integer(0));
  factors.insert(factors.end(), a.invariant_factors().begin(), a.invariant_factors().end());
  std::size_t top = max_degree + factors.size();
  std::vector<FinGenAbGroup> table = cyclic_table(1, top);
  for (const Integer& f : factors) {
    --top;
    table = combine_kunneth(table, cyclic_table(f, top + 1), top);
  }
  table.resize(max_degree + 1);
  return table;
}

FinGenAbGroup kunneth_h3(const FinGenAbGroup& a, const FinGenAbGroup& b) {
  if (!a.is_finite() || !b.is_finite()) throw NotFinite("kunneth_h3 expects finite groups");
  auto ta = integral_cohomology_of_abelian(a, 4);
  auto tb = integral_cohomology_of_abelian(b, 4);
  return combine_kunneth(ta, tb, 3)[3];
}

}  // namespace stackbr
