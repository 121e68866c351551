#include <algorithm>
#include <sstream>

#include "stackbr/abelian.hpp"
#include "stackbr/errors.hpp"

namespace stackbr {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Integer(0)) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw ValidationError("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

IntMatrix IntMatrix::diagonal(const std::vector<Integer>& entries) {
  IntMatrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntMatrix IntMatrix::column(std::size_t c) const { return columns(c, c + 1); }

IntMatrix IntMatrix::columns(std::size_t begin, std::size_t end) const {
  IntMatrix m(rows_, end - begin);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = begin; c < end; ++c) m(r, c - begin) = (*this)(r, c);
  return m;
}

IntMatrix IntMatrix::rows_range(std::size_t begin, std::size_t end) const {
  IntMatrix m(end - begin, cols_);
  for (std::size_t r = begin; r < end; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(r - begin, c) = (*this)(r, c);
  return m;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return sgn(x) == 0; });
}

IntMatrix IntMatrix::hconcat(const IntMatrix& other) const {
  if (other.rows_ != rows_) throw ValidationError("hconcat: row count mismatch");
  IntMatrix m(rows_, cols_ + other.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c);
    for (std::size_t c = 0; c < other.cols_; ++c) m(r, cols_ + c) = other(r, c);
  }
  return m;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < cols_; ++c) mpz_swap((*this)(a, c).get_mpz_t(), (*this)(b, c).get_mpz_t());
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < rows_; ++r) mpz_swap((*this)(r, a).get_mpz_t(), (*this)(r, b).get_mpz_t());
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, const Integer& k) {
  if (sgn(k) == 0) return;
  for (std::size_t c = 0; c < cols_; ++c) {
    const Integer& s = (*this)(src, c);
    if (sgn(s) != 0) mpz_addmul((*this)(dst, c).get_mpz_t(), k.get_mpz_t(), s.get_mpz_t());
  }
}

void IntMatrix::add_col_multiple(std::size_t dst, std::size_t src, const Integer& k) {
  if (sgn(k) == 0) return;
  for (std::size_t r = 0; r < rows_; ++r) {
    const Integer& s = (*this)(r, src);
    if (sgn(s) != 0) mpz_addmul((*this)(r, dst).get_mpz_t(), k.get_mpz_t(), s.get_mpz_t());
  }
}

void IntMatrix::negate_row(std::size_t r) {
  for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
}

void IntMatrix::negate_col(std::size_t c) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = -(*this)(r, c);
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw ValidationError("matrix product: shape mismatch");
  IntMatrix m(a.rows_, b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Integer& x = a(r, k);
      if (sgn(x) == 0) continue;
      for (std::size_t c = 0; c < b.cols_; ++c) {
        const Integer& y = b(k, c);
        if (sgn(y) != 0) mpz_addmul(m(r, c).get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      }
    }
  return m;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ValidationError("matrix sum: shape mismatch");
  IntMatrix m = a;
  for (std::size_t i = 0; i < m.data_.size(); ++i) m.data_[i] += b.data_[i];
  return m;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string IntMatrix::to_string() const {
  std::ostringstream out;
  out << "[";
  for (std::size_t r = 0; r < rows_; ++r) {
    out << (r ? "; " : "");
    for (std::size_t c = 0; c < cols_; ++c) out << (c ? " " : "") << (*this)(r, c).get_str();
  }
  out << "]";
  return out.str();
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_entries_(rows) {}

void SparseMatrix::add(std::size_t r, std::size_t c, std::int64_t v) {
  if (v != 0) row_entries_[r].emplace_back(static_cast<std::uint32_t>(c), v);
}

void SparseMatrix::finalize() {
  for (auto& row : row_entries_) {
    std::sort(row.begin(), row.end());
    std::vector<Entry> merged;
    merged.reserve(row.size());
    for (const auto& e : row) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second += e.second;
      else
        merged.push_back(e);
      if (merged.back().second == 0) merged.pop_back();
    }
    row.swap(merged);
  }
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& row : row_entries_) n += row.size();
  return n;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& [c, v] : row_entries_[r]) t.row_entries_[c].emplace_back(static_cast<std::uint32_t>(r), v);
  return t;
}

IntMatrix SparseMatrix::to_dense() const {
  IntMatrix m(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& [c, v] : row_entries_[r]) m(r, c) = static_cast<long>(v);
  return m;
}

SparseMatrix SparseMatrix::from_dense(const IntMatrix& m) {
  SparseMatrix s(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const Integer& x = m(r, c);
      if (sgn(x) == 0) continue;
      if (!x.fits_slong_p()) throw ResourceLimit("matrix entry exceeds machine word");
      s.add(r, c, x.get_si());
    }
  s.finalize();
  return s;
}

}  // namespace stackbr
