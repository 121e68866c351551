#include <algorithm>
#include <set>

#include "stackbr/abelian.hpp"
#include "stackbr/errors.hpp"

namespace stackbr {

namespace {

constexpr std::size_t kDenseLimit = 64;

struct Pivot {
  bool found = false;
  std::size_t row = 0;
  std::size_t col = 0;
};

// Smallest nonzero |entry| in the block [t.., t..]; ties go to the lowest
// row, then the lowest column.
Pivot find_pivot(const IntMatrix& d, std::size_t t) {
  Pivot p;
  const Integer* best = nullptr;
  for (std::size_t r = t; r < d.rows(); ++r)
    for (std::size_t c = t; c < d.cols(); ++c) {
      const Integer& x = d(r, c);
      if (sgn(x) == 0) continue;
      if (!best || mpz_cmpabs(x.get_mpz_t(), best->get_mpz_t()) < 0) {
        best = &x;
        p = {true, r, c};
      }
    }
  return p;
}

// Smallest nonzero entry on the cross through (t, t).
Pivot find_cross_pivot(const IntMatrix& d, std::size_t t) {
  Pivot p;
  const Integer* best = nullptr;
  auto consider = [&](std::size_t r, std::size_t c) {
    const Integer& x = d(r, c);
    if (sgn(x) == 0) return;
    if (!best || mpz_cmpabs(x.get_mpz_t(), best->get_mpz_t()) < 0) {
      best = &x;
      p = {true, r, c};
    }
  };
  for (std::size_t r = t; r < d.rows(); ++r) consider(r, t);
  for (std::size_t c = t + 1; c < d.cols(); ++c) consider(t, c);
  return p;
}

// Row and column operations mirrored into the transforms when requested.
class Reducer {
 public:
  Reducer(IntMatrix d, bool track) : d_(std::move(d)), track_(track) {
    if (track_) {
      u_ = IntMatrix::identity(d_.rows());
      u_inv_ = IntMatrix::identity(d_.rows());
      v_ = IntMatrix::identity(d_.cols());
    }
  }

  std::size_t run() {
    std::size_t t = 0;
    const std::size_t n = std::min(d_.rows(), d_.cols());
    while (t < n) {
      Pivot p = find_pivot(d_, t);
      if (!p.found) break;
      move_to(p, t);
      for (;;) {
        bool clean = true;
        for (std::size_t r = t + 1; r < d_.rows(); ++r) {
          if (sgn(d_(r, t)) == 0) continue;
          Integer q;
          mpz_tdiv_q(q.get_mpz_t(), d_(r, t).get_mpz_t(), d_(t, t).get_mpz_t());
          row_add(r, t, -q);
          if (sgn(d_(r, t)) != 0) clean = false;
        }
        for (std::size_t c = t + 1; c < d_.cols(); ++c) {
          if (sgn(d_(t, c)) == 0) continue;
          Integer q;
          mpz_tdiv_q(q.get_mpz_t(), d_(t, c).get_mpz_t(), d_(t, t).get_mpz_t());
          col_add(c, t, -q);
          if (sgn(d_(t, c)) != 0) clean = false;
        }
        if (!clean) {
          move_to(find_cross_pivot(d_, t), t);
          continue;
        }
        bool divisible = true;
        for (std::size_t r = t + 1; r < d_.rows() && divisible; ++r)
          for (std::size_t c = t + 1; c < d_.cols(); ++c)
            if (!mpz_divisible_p(d_(r, c).get_mpz_t(), d_(t, t).get_mpz_t())) {
              row_add(t, r, 1);
              divisible = false;
              break;
            }
        if (divisible) break;
      }
      if (sgn(d_(t, t)) < 0) {
        d_.negate_row(t);
        if (track_) {
          u_.negate_row(t);
          u_inv_.negate_col(t);
        }
      }
      ++t;
    }
    return t;
  }

  IntMatrix& d() { return d_; }
  IntMatrix& u() { return u_; }
  IntMatrix& u_inv() { return u_inv_; }
  IntMatrix& v() { return v_; }

 private:
  void move_to(const Pivot& p, std::size_t t) {
    if (p.row != t) {
      d_.swap_rows(p.row, t);
      if (track_) {
        u_.swap_rows(p.row, t);
        u_inv_.swap_cols(p.row, t);
      }
    }
    if (p.col != t) {
      d_.swap_cols(p.col, t);
      if (track_) v_.swap_cols(p.col, t);
    }
  }

  // row[dst] += k row[src]
  void row_add(std::size_t dst, std::size_t src, const Integer& k) {
    d_.add_row_multiple(dst, src, k);
    if (track_) {
      u_.add_row_multiple(dst, src, k);
      u_inv_.add_col_multiple(src, dst, -k);
    }
  }

  void col_add(std::size_t dst, std::size_t src, const Integer& k) {
    d_.add_col_multiple(dst, src, k);
    if (track_) v_.add_col_multiple(dst, src, k);
  }

  IntMatrix d_;
  bool track_;
  IntMatrix u_, u_inv_, v_;
};

Invariants dense_invariants(const IntMatrix& a) {
  Reducer red(a, false);
  Invariants inv;
  inv.rank = red.run();
  for (std::size_t i = 0; i < inv.rank; ++i)
    if (red.d()(i, i) != 1) inv.torsion.push_back(red.d()(i, i));
  return inv;
}

struct Overflow {};

inline std::int64_t sub_mul(std::int64_t a, std::int64_t f, std::int64_t b) {
  std::int64_t prod, out;
  if (__builtin_mul_overflow(f, b, &prod) || __builtin_sub_overflow(a, prod, &out)) throw Overflow{};
  return out;
}
inline Integer sub_mul(const Integer& a, const Integer& f, const Integer& b) { return a - f * b; }
inline bool is_unit(std::int64_t x) { return x == 1 || x == -1; }
inline bool is_unit(const Integer& x) { return x == 1 || x == -1; }
inline Integer to_integer(std::int64_t x) { return Integer(static_cast<long>(x)); }
inline Integer to_integer(const Integer& x) { return x; }

// Markowitz-ordered elimination with unit pivots.  Whatever cannot be
// reduced by a unit pivot is handed to the dense reducer.
template <class T>
class UnitEliminator {
 public:
  using Entry = std::pair<std::uint32_t, T>;

  explicit UnitEliminator(const SparseMatrix& a)
      : rows_(a.rows()), col_rows_(a.cols()), col_count_(a.cols(), 0),
        row_alive_(a.rows(), 1), col_done_(a.cols(), 0), no_unit_(a.cols(), 0) {
    for (std::size_t r = 0; r < a.rows(); ++r) {
      rows_[r].reserve(a.row(r).size());
      for (const auto& [c, v] : a.row(r)) {
        rows_[r].emplace_back(c, T(static_cast<long>(v)));
        col_rows_[c].push_back(static_cast<std::uint32_t>(r));
        ++col_count_[c];
      }
    }
    for (std::size_t c = 0; c < col_count_.size(); ++c)
      if (col_count_[c] > 0) queue_.insert({col_count_[c], static_cast<std::uint32_t>(c)});
  }

  Invariants run() {
    std::size_t rank = 0;
    std::vector<Entry> scratch;
    for (;;) {
      auto [found, pr, pc] = choose_pivot();
      if (!found) break;
      ++rank;
      const T pivot = value_at(pr, pc);
      std::vector<std::uint32_t> targets;
      for (std::uint32_t r : col_rows_[pc])
        if (r != pr && row_alive_[r]) targets.push_back(r);
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
      for (std::uint32_t r : targets) {
        T a = value_at(r, pc);
        if (a == 0) continue;
        // pivot is +-1, so its inverse is itself
        T f = a * pivot;
        eliminate(r, pr, f, scratch);
      }
      // drop the pivot row and column
      row_alive_[pr] = 0;
      for (const auto& [c, v] : rows_[pr]) {
        if (c == pc) continue;
        update_count(c, col_count_[c] - 1);
      }
      queue_.erase({col_count_[pc], pc});
      col_done_[pc] = 1;
      rows_[pr].clear();
      rows_[pr].shrink_to_fit();
    }
    return finish(rank);
  }

 private:
  struct Choice {
    bool found;
    std::uint32_t row;
    std::uint32_t col;
  };

  T value_at(std::uint32_t r, std::uint32_t c) const {
    const auto& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry& e, std::uint32_t key) { return e.first < key; });
    if (it != row.end() && it->first == c) return it->second;
    return T(0);
  }

  Choice choose_pivot() {
    Choice best{false, 0, 0};
    std::size_t best_cost = 0;
    int examined = 0;
    for (auto it = queue_.begin(); it != queue_.end(); ++it) {
      std::uint32_t c = it->second;
      if (no_unit_[c]) continue;
      std::size_t count = it->first;
      if (best.found && best_cost == 0) break;
      bool any = false;
      for (std::uint32_t r : col_rows_[c]) {
        if (!row_alive_[r]) continue;
        T v = value_at(r, c);
        if (!is_unit(v)) continue;
        any = true;
        std::size_t cost = (count - 1) * (rows_[r].size() - 1);
        if (!best.found || cost < best_cost || (cost == best_cost && (c < best.col || (c == best.col && r < best.row)))) {
          best = {true, r, c};
          best_cost = cost;
        }
      }
      if (!any) no_unit_[c] = 1;
      if (any && ++examined >= 8) break;
    }
    return best;
  }

  void update_count(std::uint32_t c, std::size_t next) {
    if (col_done_[c]) return;
    if (col_count_[c] > 0) queue_.erase({col_count_[c], c});
    col_count_[c] = next;
    if (next > 0) queue_.insert({next, c});
    no_unit_[c] = 0;
  }

  // row[r] -= f * row[p]
  void eliminate(std::uint32_t r, std::uint32_t p, const T& f, std::vector<Entry>& out) {
    const auto& a = rows_[r];
    const auto& b = rows_[p];
    out.clear();
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        std::uint32_t c = b[j].first;
        T v = sub_mul(T(0), f, b[j].second);
        ++j;
        if (v != 0) {
          out.emplace_back(c, v);
          col_rows_[c].push_back(r);
          update_count(c, col_count_[c] + 1);
        }
      } else {
        std::uint32_t c = a[i].first;
        T v = sub_mul(a[i].second, f, b[j].second);
        ++i;
        ++j;
        if (v != 0) {
          out.emplace_back(c, v);
        } else {
          update_count(c, col_count_[c] - 1);
        }
      }
    }
    rows_[r].swap(out);
  }

  Invariants finish(std::size_t rank) {
    std::vector<std::uint32_t> live_rows;
    std::vector<std::int64_t> col_index(col_count_.size(), -1);
    std::size_t ncols = 0;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (!row_alive_[r] || rows_[r].empty()) continue;
      live_rows.push_back(static_cast<std::uint32_t>(r));
      for (const auto& [c, v] : rows_[r])
        if (col_index[c] < 0) col_index[c] = static_cast<std::int64_t>(ncols++);
    }
    IntMatrix rest(live_rows.size(), ncols);
    for (std::size_t i = 0; i < live_rows.size(); ++i)
      for (const auto& [c, v] : rows_[live_rows[i]]) rest(i, col_index[c]) = to_integer(v);
    Invariants inv = dense_invariants(rest);
    inv.rank += rank;
    return inv;
  }

  std::vector<std::vector<Entry>> rows_;
  std::vector<std::vector<std::uint32_t>> col_rows_;
  std::vector<std::size_t> col_count_;
  std::vector<char> row_alive_;
  std::vector<char> col_done_;
  std::vector<char> no_unit_;
  std::set<std::pair<std::size_t, std::uint32_t>> queue_;
};

}  // namespace

std::vector<Integer> SmithForm::diagonal() const {
  std::vector<Integer> out;
  for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) out.push_back(d(i, i));
  return out;
}

SmithForm smith_normal_form(const IntMatrix& a) {
  Reducer red(a, true);
  SmithForm s;
  s.rank = red.run();
  s.d = std::move(red.d());
  s.u = std::move(red.u());
  s.u_inverse = std::move(red.u_inv());
  s.v = std::move(red.v());
  return s;
}

Invariants matrix_invariants(const IntMatrix& a) {
  if (a.rows() < kDenseLimit && a.cols() < kDenseLimit) return dense_invariants(a);
  bool small_entries = true;
  for (std::size_t r = 0; r < a.rows() && small_entries; ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (!a(r, c).fits_slong_p()) {
        small_entries = false;
        break;
      }
  if (!small_entries) return dense_invariants(a);
  return matrix_invariants(SparseMatrix::from_dense(a));
}

Invariants matrix_invariants(const SparseMatrix& a) {
  if (a.rows() < kDenseLimit && a.cols() < kDenseLimit) return dense_invariants(a.to_dense());
  try {
    return UnitEliminator<std::int64_t>(a).run();
  } catch (const Overflow&) {
    return UnitEliminator<Integer>(a).run();
  }
}

}  // namespace stackbr
