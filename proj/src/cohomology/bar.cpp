#include <queue>

#include "stackbr/cohomology.hpp"
#include "stackbr/errors.hpp"

namespace stackbr {

namespace {

// Lattice membership against a fixed relation lattice.
class RelationLattice {
 public:
  explicit RelationLattice(const IntMatrix& relations) : empty_(relations.cols() == 0) {
    if (!empty_) snf_ = smith_normal_form(relations);
  }

  bool contains(const IntMatrix& w) const {
    if (empty_) return w.is_zero();
    IntMatrix z = snf_.u * w;
    for (std::size_t r = 0; r < z.rows(); ++r)
      for (std::size_t c = 0; c < z.cols(); ++c) {
        if (r < snf_.rank) {
          if (!mpz_divisible_p(z(r, c).get_mpz_t(), snf_.d(r, r).get_mpz_t())) return false;
        } else if (sgn(z(r, c)) != 0) {
          return false;
        }
      }
    return true;
  }

 private:
  bool empty_;
  SmithForm snf_;
};

IntMatrix difference(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) -= b(r, c);
  return out;
}

std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t budget) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > budget / base) return budget + 1;
    out *= base;
  }
  return out;
}

}  // namespace

GMod GMod::trivial(const FiniteGroup& g, const PresentedGroup& m) {
  return {m, std::vector<IntMatrix>(g.order(), IntMatrix::identity(m.generators))};
}

GMod GMod::from_generators(const FiniteGroup& g, const PresentedGroup& m,
                           const std::vector<std::pair<int, IntMatrix>>& generators) {
  std::vector<IntMatrix> action(g.order());
  std::vector<char> known(g.order(), 0);
  action[g.identity()] = IntMatrix::identity(m.generators);
  known[g.identity()] = 1;
  std::queue<int> todo;
  todo.push(g.identity());
  while (!todo.empty()) {
    int h = todo.front();
    todo.pop();
    for (const auto& [s, rho] : generators) {
      if (s < 0 || s >= g.order()) throw ValidationError("action given on an unknown element");
      int sh = g.mul(s, h);
      if (known[sh]) continue;
      known[sh] = 1;
      action[sh] = rho * action[h];
      todo.push(sh);
    }
  }
  for (char k : known)
    if (!k) throw ValidationError("listed elements do not generate the group");
  GMod out{m, std::move(action)};
  validate_gmod(g, out);
  return out;
}

void validate_gmod(const FiniteGroup& g, const GMod& m) {
  const std::size_t k = m.module.generators;
  if (m.module.relations.rows() != k) throw ValidationError("module presentation is malformed");
  if (static_cast<int>(m.action.size()) != g.order()) throw ValidationError("action needs one matrix per element");
  for (const auto& a : m.action)
    if (a.rows() != k || a.cols() != k) throw ValidationError("action matrix has wrong shape");
  RelationLattice lattice(m.module.relations);
  for (int a = 0; a < g.order(); ++a)
    if (!lattice.contains(m.action[a] * m.module.relations))
      throw ValidationError("action does not preserve relations");
  if (!lattice.contains(difference(m.action[g.identity()], IntMatrix::identity(k))))
    throw ValidationError("identity does not act trivially");
  for (int a = 0; a < g.order(); ++a)
    for (int b = 0; b < g.order(); ++b)
      if (!lattice.contains(difference(m.action[a] * m.action[b], m.action[g.mul(a, b)])))
        throw ValidationError("action is not a homomorphism");
}

BarComplex bar_complex(const FiniteGroup& g, const GMod& m, std::size_t max_degree, const BarOptions& options) {
  validate_gmod(g, m);
  std::vector<int> letters;
  for (int a = 0; a < g.order(); ++a)
    if (!options.normalized || a != g.identity()) letters.push_back(a);
  std::vector<int> letter_of(g.order(), -1);
  for (std::size_t i = 0; i < letters.size(); ++i) letter_of[letters[i]] = static_cast<int>(i);
  const std::size_t L = letters.size();
  const std::size_t k = m.module.generators;

  if (checked_power(L, max_degree, options.budget) > options.budget)
    throw ResourceLimit("bar complex of degree " + std::to_string(max_degree) + " over a group of order " +
                        std::to_string(g.order()) + " exceeds the budget of " +
                        std::to_string(options.budget) + " cochain copies");

  std::vector<std::vector<std::vector<std::int64_t>>> action(g.order());
  for (int a = 0; a < g.order(); ++a) {
    action[a].assign(k, std::vector<std::int64_t>(k));
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) {
        if (!m.action[a](r, c).fits_slong_p()) throw ResourceLimit("action entries exceed machine words");
        action[a][r][c] = m.action[a](r, c).get_si();
      }
  }

  BarComplex out;
  out.coefficients = m.module;
  for (std::size_t n = 0; n <= max_degree; ++n) out.copies.push_back(checked_power(L, n, options.budget));

  std::vector<int> tuple, reduced;
  for (std::size_t n = 0; n < max_degree; ++n) {
    const std::size_t rows = out.copies[n + 1], cols = out.copies[n];
    SparseMatrix d(rows * k, cols * k);
    tuple.assign(n + 1, 0);
    auto index_of = [&](const std::vector<int>& t) {
      std::size_t idx = 0;
      for (int x : t) idx = idx * L + static_cast<std::size_t>(letter_of[x]);
      return idx;
    };
    for (std::size_t row = 0; row < rows; ++row) {
      std::size_t rem = row;
      for (std::size_t i = n + 1; i-- > 0;) {
        tuple[i] = letters[rem % L];
        rem /= L;
      }
      const std::size_t base_row = row * k;
      // g1 . f(g2, ..., g_{n+1})
      reduced.assign(tuple.begin() + 1, tuple.end());
      std::size_t col = index_of(reduced) * k;
      const auto& rho = action[tuple[0]];
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) d.add(base_row + a, col + b, rho[a][b]);
      // (-1)^i f(..., g_i g_{i+1}, ...)
      for (std::size_t i = 1; i <= n; ++i) {
        int prod = g.mul(tuple[i - 1], tuple[i]);
        if (options.normalized && prod == g.identity()) continue;
        reduced.clear();
        for (std::size_t j = 0; j < i - 1; ++j) reduced.push_back(tuple[j]);
        reduced.push_back(prod);
        for (std::size_t j = i + 1; j <= n; ++j) reduced.push_back(tuple[j]);
        col = index_of(reduced) * k;
        const std::int64_t sign = (i % 2 == 0) ? 1 : -1;
        for (std::size_t a = 0; a < k; ++a) d.add(base_row + a, col + a, sign);
      }
      // (-1)^{n+1} f(g1, ..., g_n)
      reduced.assign(tuple.begin(), tuple.begin() + static_cast<long>(n));
      col = index_of(reduced) * k;
      const std::int64_t sign = ((n + 1) % 2 == 0) ? 1 : -1;
      for (std::size_t a = 0; a < k; ++a) d.add(base_row + a, col + a, sign);
    }
    d.finalize();
    out.differentials.push_back(std::move(d));
  }
  return out;
}

Complex BarComplex::to_complex() const {
  Complex c;
  const std::size_t k = coefficients.generators;
  const std::size_t nrel = coefficients.relations.cols();
  for (std::size_t copies_n : copies) {
    PresentedGroup term{copies_n * k, IntMatrix(copies_n * k, copies_n * nrel)};
    for (std::size_t t = 0; t < copies_n; ++t)
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t r = 0; r < nrel; ++r) term.relations(t * k + a, t * nrel + r) = coefficients.relations(a, r);
    c.terms.push_back(std::move(term));
  }
  for (const auto& d : differentials) c.differentials.push_back(d.to_dense());
  return c;
}

FinGenAbGroup group_cohomology(const FiniteGroup& g, const GMod& m, std::size_t n, const BarOptions& options) {
  const bool free_module = m.module.relations.is_zero();
  if (free_module && n >= 1) {
    BarComplex bar = bar_complex(g, m, n, options);
    // H^n is killed by |G|, and ker d^n is saturated in the free module C^n.
    return cokernel(bar.differentials[n - 1]).torsion();
  }
  BarComplex bar = bar_complex(g, m, n + 1, options);
  constexpr std::size_t kDenseGenerators = 4000;
  if (bar.copies[n + 1] * m.module.generators > kDenseGenerators)
    throw ResourceLimit("dense homology for non-free coefficients is limited to " +
                        std::to_string(kDenseGenerators) + " generators per degree");
  return homology_at(bar.to_complex(), n);
}

}  // namespace stackbr
