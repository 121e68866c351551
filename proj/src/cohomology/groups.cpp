#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

#include "stackbr/cohomology.hpp"
#include "stackbr/errors.hpp"

namespace stackbr {

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<int>> table, std::string name) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw ValidationError("group table is empty");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw ValidationError("group table is not square");
    std::vector<char> seen(n, 0);
    for (int x : row) {
      if (x < 0 || x >= n) throw ValidationError("group table entry out of range");
      if (seen[x]++) throw ValidationError("group table row is not a permutation");
    }
  }
  for (int c = 0; c < n; ++c) {
    std::vector<char> seen(n, 0);
    for (int r = 0; r < n; ++r)
      if (seen[table[r][c]]++) throw ValidationError("group table column is not a permutation");
  }
  int e = -1;
  for (int a = 0; a < n && e < 0; ++a) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = table[a][x] == x && table[x][a] == x;
    if (ok) e = a;
  }
  if (e < 0) throw ValidationError("group table has no identity");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw ValidationError("group table is not associative");
  FiniteGroup g;
  g.table_ = std::move(table);
  g.identity_ = e;
  g.inverse_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.table_[a][b] == e) g.inverse_[a] = b;
  g.name_ = name.empty() ? "G" + std::to_string(n) : std::move(name);
  return g;
}

namespace {

template <class Elem, class Mul>
FiniteGroup from_elements(const std::vector<Elem>& elems, Mul mul, std::string name) {
  std::map<Elem, int> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> table(elems.size(), std::vector<int>(elems.size()));
  for (std::size_t a = 0; a < elems.size(); ++a)
    for (std::size_t b = 0; b < elems.size(); ++b) table[a][b] = index.at(mul(elems[a], elems[b]));
  return FiniteGroup::from_table(std::move(table), std::move(name));
}

// Pairs (a, b) with (a1, b1)(a2, b2) = (a1 + s^b1 a2, b1 + b2), s = -1.
FiniteGroup inversion_semidirect(int m, int k, std::string name) {
  std::vector<std::pair<int, int>> elems;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < k; ++b) elems.emplace_back(a, b);
  return from_elements(
      elems,
      [m, k](const std::pair<int, int>& x, const std::pair<int, int>& y) {
        int a = (x.second % 2 == 0) ? x.first + y.first : x.first - y.first;
        return std::make_pair(((a % m) + m) % m, (x.second + y.second) % k);
      },
      std::move(name));
}

}  // namespace

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw ValidationError("cyclic group order must be positive");
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  return from_table(std::move(table), n == 1 ? "trivial" : "Z/" + std::to_string(n));
}

FiniteGroup FiniteGroup::symmetric3() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return from_elements(
      perms,
      [](const std::array<int, 3>& x, const std::array<int, 3>& y) {
        return std::array<int, 3>{x[y[0]], x[y[1]], x[y[2]]};
      },
      "S3");
}

FiniteGroup FiniteGroup::dihedral8() { return inversion_semidirect(4, 2, "D4"); }

FiniteGroup FiniteGroup::dicyclic12() { return inversion_semidirect(3, 4, "Z/3xZ/4-semidirect"); }

FiniteGroup FiniteGroup::quaternion8() {
  using Q = std::array<int, 4>;
  std::vector<Q> elems;
  for (int i = 0; i < 4; ++i)
    for (int s : {1, -1}) {
      Q q{0, 0, 0, 0};
      q[i] = s;
      elems.push_back(q);
    }
  return from_elements(
      elems,
      [](const Q& a, const Q& b) {
        return Q{a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
                 a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
                 a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
                 a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
      },
      "Q8");
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const int n = a.order(), m = b.order();
  std::vector<std::vector<int>> table(n * m, std::vector<int>(n * m));
  for (int x = 0; x < n * m; ++x)
    for (int y = 0; y < n * m; ++y) table[x][y] = a.mul(x / m, y / m) * m + b.mul(x % m, y % m);
  return from_table(std::move(table), a.name() + "x" + b.name());
}

FiniteGroup FiniteGroup::from_abelian(const FinGenAbGroup& a) {
  if (!a.is_finite()) throw NotFinite("cannot tabulate infinite group " + a.to_string());
  FiniteGroup g = cyclic(1);
  bool first = true;
  for (const Integer& d : a.invariant_factors()) {
    if (!d.fits_sint_p() || d > 4096) throw ResourceLimit("group too large to tabulate");
    FiniteGroup c = cyclic(static_cast<int>(d.get_si()));
    g = first ? c : direct_product(g, c);
    first = false;
  }
  return g;
}

FiniteGroup FiniteGroup::by_name(const std::string& name) {
  if (name == "Z/3xZ/4-semidirect") return dicyclic12();
  std::vector<std::string> parts;
  std::stringstream in(name);
  for (std::string piece; std::getline(in, piece, 'x');) parts.push_back(piece);
  if (parts.empty()) throw ParseError("empty group name");
  auto one = [](const std::string& p) -> FiniteGroup {
    if (p == "S3") return symmetric3();
    if (p == "D4") return dihedral8();
    if (p == "Q8") return quaternion8();
    if (p == "trivial" || p == "1" || p == "0") return cyclic(1);
    if (p.rfind("Z/", 0) == 0) {
      std::size_t used = 0;
      int n = 0;
      try {
        n = std::stoi(p.substr(2), &used);
      } catch (const std::exception&) {
        throw ParseError("bad cyclic group name '" + p + "'");
      }
      if (used != p.size() - 2 || n < 1) throw ParseError("bad cyclic group name '" + p + "'");
      if (n > 4096) throw ResourceLimit("group too large to tabulate");
      return cyclic(n);
    }
    throw ParseError("unknown group name '" + p + "'");
  };
  FiniteGroup g = one(parts[0]);
  for (std::size_t i = 1; i < parts.size(); ++i) g = direct_product(g, one(parts[i]));
  g.name_ = name;
  return g;
}

int FiniteGroup::element_order(int a) const {
  int k = 1;
  for (int x = a; x != identity_; x = mul(x, a)) ++k;
  return k;
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < order(); ++a)
    for (int b = a + 1; b < order(); ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

FinGenAbGroup FiniteGroup::abelian_invariants() const {
  if (!is_abelian()) throw Unsupported("group " + name_ + " is not abelian");
  const int n = order();
  std::vector<int> orders(n);
  for (int a = 0; a < n; ++a) orders[a] = element_order(a);
  std::vector<Integer> factors;
  int rest = n;
  for (int p = 2; rest > 1; ++p) {
    if (rest % p) continue;
    while (rest % p == 0) rest /= p;
    // counts[k] = #{x : x^(p^k) = e}, written as a power of p
    std::vector<int> logs{0};
    for (long pk = p;; pk *= p) {
      int count = 0;
      for (int a = 0; a < n; ++a)
        if (pk % orders[a] == 0) ++count;
      int lg = 0;
      for (int c = count; c > 1; c /= p) ++lg;
      if (lg == logs.back()) break;
      logs.push_back(lg);
    }
    // logs[k] - logs[k-1] factors have order at least p^k
    std::vector<int> at_least;
    for (std::size_t k = 1; k < logs.size(); ++k) at_least.push_back(logs[k] - logs[k - 1]);
    for (int j = 1; j <= (at_least.empty() ? 0 : at_least[0]); ++j) {
      Integer q = 1;
      for (int c : at_least)
        if (c >= j) q *= p;
      factors.push_back(q);
    }
  }
  return FinGenAbGroup::from_orders(0, factors);
}

std::string EtalePiece::to_string() const {
  if (tag == EtaleTag::Constant) return n == 0 ? "Z" : "Z/" + n.get_str();
  return "mu_" + n.get_str();
}

}  // namespace stackbr
