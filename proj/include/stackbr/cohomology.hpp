#pragma once

// Finite groups, group modules, bar complexes and the Brauerless test for
// linearly reductive stabilizers.

#include <string>
#include <utility>
#include <vector>

#include "stackbr/abelian.hpp"

namespace stackbr {

class FiniteGroup {
 public:
  // Multiplication table over elements 0..n-1; validated (closure, identity,
  // inverses, associativity).
  static FiniteGroup from_table(std::vector<std::vector<int>> table, std::string name = "");

  static FiniteGroup cyclic(int n);
  static FiniteGroup symmetric3();
  static FiniteGroup dihedral8();
  static FiniteGroup quaternion8();
  // Z/3 x| Z/4 with the generator of Z/4 acting by inversion.
  static FiniteGroup dicyclic12();
  static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);
  // Product of cyclic groups matching the invariant factors; NotFinite for free parts.
  static FiniteGroup from_abelian(const FinGenAbGroup& a);
  // "Z/n", "S3", "D4", "Q8", "Z/3xZ/4-semidirect", "trivial", or products
  // such as "Z/2xZ/2" and "S3xZ/2".
  static FiniteGroup by_name(const std::string& name);

  int order() const { return static_cast<int>(table_.size()); }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[a][b]; }
  int inverse(int a) const { return inverse_[a]; }
  int element_order(int a) const;
  bool is_abelian() const;
  const std::string& name() const { return name_; }
  const std::vector<std::vector<int>>& table() const { return table_; }

  // Unsupported for non-abelian groups.
  FinGenAbGroup abelian_invariants() const;

 private:
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  int identity_ = 0;
  std::string name_;
};

// A G-module structure on a presented abelian group.  action[g] acts on
// generators; it is determined modulo the relations.
struct GMod {
  PresentedGroup module;
  std::vector<IntMatrix> action;

  static GMod trivial(const FiniteGroup& g, const PresentedGroup& m);
  static GMod trivial_integers(const FiniteGroup& g) { return trivial(g, PresentedGroup::free(1)); }
  // Extends the action of the listed elements to the whole group and
  // validates it.
  static GMod from_generators(const FiniteGroup& g, const PresentedGroup& m,
                              const std::vector<std::pair<int, IntMatrix>>& generators);
};

// ValidationError unless action is a homomorphism G -> Aut(module).
void validate_gmod(const FiniteGroup& g, const GMod& m);

struct BarOptions {
  // Upper bound on the number of cochain copies (tuples) in a degree.
  std::size_t budget = 1'000'000;
  bool normalized = true;
};

// Cochains C^0..C^max_degree.  Degree n is indexed by n-tuples of elements,
// non-identity ones when normalized, times the module generators.
struct BarComplex {
  PresentedGroup coefficients;
  std::vector<std::size_t> copies;
  std::vector<SparseMatrix> differentials;  // C^n -> C^{n+1}

  // Dense form; intended for small complexes.
  Complex to_complex() const;
};

// ResourceLimit when the top degree has more copies than the budget.
BarComplex bar_complex(const FiniteGroup& g, const GMod& m, std::size_t max_degree,
                       const BarOptions& options = {});

// H^n(G, M).  For coefficients that are free as abelian groups and n >= 1 the
// group is finite, so only C^{n-1} -> C^n is assembled.
FinGenAbGroup group_cohomology(const FiniteGroup& g, const GMod& m, std::size_t n,
                               const BarOptions& options = {});

struct LinRedDatum {
  // Character group of the diagonalizable part; free summands allowed.
  FinGenAbGroup diag_characters;
  FiniteGroup etale;
  bool commutative = true;
};

enum class EtaleTag { Constant, MuType };

// Constant(0) stands for the constant sheaf Z.
struct EtalePiece {
  EtaleTag tag;
  Integer n;
  friend bool operator==(const EtalePiece& a, const EtalePiece& b) { return a.tag == b.tag && a.n == b.n; }
  friend bool operator<(const EtalePiece& a, const EtalePiece& b) {
    return a.tag != b.tag ? a.tag < b.tag : a.n < b.n;
  }
  std::string to_string() const;
};

using EtaleGroupExpr = std::vector<EtalePiece>;

struct BrauerlessOptions {
  // Groups up to this order go through the bar complex; larger abelian
  // groups use the Kunneth table.
  int bar_order_limit = 24;
  BarOptions bar;
};

// H^3(G, Z) == 0.
bool brauerless_group(const FiniteGroup& g, const BrauerlessOptions& options = {});

// pi_0 of the stabilizer over a geometric point of characteristic p (0 for
// characteristic zero).
FiniteGroup pi0_of_stabilizer(const LinRedDatum& d, int characteristic);

bool brauerless(const LinRedDatum& d, int characteristic = 0, const BrauerlessOptions& options = {});

bool locally_brauerless(const std::vector<std::pair<LinRedDatum, int>>& stabilizers,
                        const BrauerlessOptions& options = {});

// Sorted by (tag, n).  Unsupported for non-commutative data.
EtaleGroupExpr cartier_dual(const LinRedDatum& d);

}  // namespace stackbr
