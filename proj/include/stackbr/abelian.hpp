#pragma once

// Exact integer linear algebra and finitely generated abelian groups.
//
// Conventions: vectors are columns, a matrix M with m rows and n columns is a
// map Z^n -> Z^m, and a presentation Z^g / im(R) stores its relations as the
// columns of a g x k matrix R.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace stackbr {

using Integer = mpz_class;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);
  static IntMatrix diagonal(const std::vector<Integer>& entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix transpose() const;
  IntMatrix column(std::size_t c) const;
  IntMatrix columns(std::size_t begin, std::size_t end) const;
  IntMatrix rows_range(std::size_t begin, std::size_t end) const;
  bool is_zero() const;

  // [this | other]; row counts must agree.
  IntMatrix hconcat(const IntMatrix& other) const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  // row[dst] += k * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& k);
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& k);
  void negate_row(std::size_t r);
  void negate_col(std::size_t c);

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

// Row-oriented sparse matrix with machine-word entries.  Bar complexes are
// assembled in this form; dense conversion is for small blocks only.
class SparseMatrix {
 public:
  using Entry = std::pair<std::uint32_t, std::int64_t>;

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  // Accumulates v into entry (r, c).  Call finalize() before reading.
  void add(std::size_t r, std::size_t c, std::int64_t v);
  void finalize();

  const std::vector<Entry>& row(std::size_t r) const { return row_entries_[r]; }
  std::size_t nonzeros() const;

  SparseMatrix transpose() const;
  IntMatrix to_dense() const;
  static SparseMatrix from_dense(const IntMatrix& m);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<Entry>> row_entries_;
};

// u * a * v == d with u, v unimodular and d diagonal with d_0 | d_1 | ...
struct SmithForm {
  IntMatrix u;
  IntMatrix u_inverse;
  IntMatrix d;
  IntMatrix v;
  std::size_t rank = 0;

  std::vector<Integer> diagonal() const;
};

// Pivot rule: smallest nonzero absolute value, then lowest row, then lowest
// column.  The output is deterministic for a given input.
SmithForm smith_normal_form(const IntMatrix& a);

struct Invariants {
  std::size_t rank = 0;
  // Diagonal entries greater than one, in divisibility order.
  std::vector<Integer> torsion;
};

// Rank and nontrivial invariant factors without transforms.  Matrices with a
// dimension of at least 64 go through sparse unit-pivot elimination first.
Invariants matrix_invariants(const IntMatrix& a);
Invariants matrix_invariants(const SparseMatrix& a);

class FinGenAbGroup {
 public:
  FinGenAbGroup() = default;

  // Z^free_rank plus cyclic factors of the given orders in any order; orders
  // of 0 count as free summands and orders of 1 are dropped.
  static FinGenAbGroup from_orders(std::size_t free_rank, const std::vector<Integer>& orders);
  static FinGenAbGroup cyclic(const Integer& n);
  static FinGenAbGroup free(std::size_t rank);
  static FinGenAbGroup trivial() { return {}; }

  std::size_t free_rank() const { return free_rank_; }
  const std::vector<Integer>& invariant_factors() const { return factors_; }

  bool is_trivial() const { return free_rank_ == 0 && factors_.empty(); }
  bool is_finite() const { return free_rank_ == 0; }
  // At most one summand in the canonical form.
  bool is_cyclic() const { return free_rank_ + factors_.size() <= 1; }
  Integer order() const;  // NotFinite when free_rank > 0
  Integer exponent() const;  // NotFinite when free_rank > 0
  FinGenAbGroup torsion() const;

  // "0", or summands joined by " ⊕ " such as "Z ⊕ Z/2 ⊕ Z/4".
  std::string to_string() const;

  friend bool operator==(const FinGenAbGroup& a, const FinGenAbGroup& b) {
    return a.free_rank_ == b.free_rank_ && a.factors_ == b.factors_;
  }
  friend bool operator!=(const FinGenAbGroup& a, const FinGenAbGroup& b) { return !(a == b); }

 private:
  std::size_t free_rank_ = 0;
  std::vector<Integer> factors_;
};

FinGenAbGroup direct_sum(const FinGenAbGroup& a, const FinGenAbGroup& b);
FinGenAbGroup direct_sum(const std::vector<FinGenAbGroup>& parts);
FinGenAbGroup repeat(const FinGenAbGroup& a, std::size_t times);
FinGenAbGroup tensor(const FinGenAbGroup& a, const FinGenAbGroup& b);
FinGenAbGroup tor(const FinGenAbGroup& a, const FinGenAbGroup& b);
FinGenAbGroup hom_group(const FinGenAbGroup& a, const FinGenAbGroup& b);
// Hom(a, Q/Z); NotFinite for groups with free part.
FinGenAbGroup dual_finite(const FinGenAbGroup& a);

// Z^rows / im(m).
FinGenAbGroup cokernel(const IntMatrix& m);
FinGenAbGroup cokernel(const SparseMatrix& m);

struct PresentedGroup {
  std::size_t generators = 0;
  IntMatrix relations;  // generators x k

  static PresentedGroup free(std::size_t rank);
  static PresentedGroup of(const FinGenAbGroup& g);
  FinGenAbGroup group() const;
};

// A homomorphism given on generators.  make_map checks that relations are
// sent into the relation lattice of the target.
struct AbMap {
  PresentedGroup source;
  PresentedGroup target;
  IntMatrix matrix;  // target.generators x source.generators
};

AbMap make_map(PresentedGroup source, PresentedGroup target, IntMatrix matrix);

// True when every column of w lies in the column span of lattice.
bool in_lattice(const IntMatrix& lattice, const IntMatrix& w);

// Basis of the sublattice of Z^n spanned by the columns of m (n x rank).
IntMatrix lattice_basis(const IntMatrix& m);

// Integer basis of {x : m x = 0}, as columns.
IntMatrix integer_kernel(const IntMatrix& m);

// Coordinates y with basis * y == w for each column of w.  The basis must
// have independent columns and w must lie in its span.
IntMatrix lattice_coordinates(const IntMatrix& basis, const IntMatrix& w);

struct Subgroup {
  PresentedGroup group;
  IntMatrix embedding;  // columns are generators as elements of the ambient presentation
};

Subgroup kernel(const AbMap& f);
FinGenAbGroup image(const AbMap& f);
FinGenAbGroup cokernel(const AbMap& f);

// Cochain-style complex: differentials[i] maps terms[i] to terms[i + 1].
struct Complex {
  std::vector<PresentedGroup> terms;
  std::vector<IntMatrix> differentials;
};

// Checks shapes, that each differential respects relations and that
// consecutive differentials compose to zero.  Throws MalformedComplex.
void validate_complex(const Complex& c);

// ker d_i / im d_{i-1}.  Throws MalformedComplex on an invalid complex.
FinGenAbGroup homology_at(const Complex& c, std::size_t i);

// Rewrites every term in its Smith basis, conjugating the differentials.
Complex renormalize(const Complex& c);

// H^0..H^max_degree of a finite abelian group with trivial integer
// coefficients, via the Kunneth formula on its cyclic factors.
std::vector<FinGenAbGroup> integral_cohomology_of_abelian(const FinGenAbGroup& a,
                                                          std::size_t max_degree);

// H^3(A x B, Z) for finite abelian A, B.
FinGenAbGroup kunneth_h3(const FinGenAbGroup& a, const FinGenAbGroup& b);

}  // namespace stackbr
