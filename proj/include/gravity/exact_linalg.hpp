#pragma once

// Exact rational sparse matrices, rank and kernel computation, and finite
// cochain complexes.  Everything runs over arbitrary-precision rationals;
// rank uses fraction-free (Bareiss) elimination.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gravity {

using Int = mpz_class;
using Rat = mpq_class;

// sorted-by-index sparse vector
using SparseVec = std::vector<std::pair<int, Rat>>;

inline void sparse_axpy(SparseVec& x, const Rat& a, const SparseVec& y) {
  if (a == 0) return;
  SparseVec out;
  out.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, a * y[j].second);
      ++j;
    } else {
      Rat v = x[i].second + a * y[j].second;
      if (v != 0) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  x = std::move(out);
}

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("RationalMatrix: bad shape");
  }

  static RationalMatrix identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t nnz() const { return a_.size(); }

  void set(int r, int c, const Rat& v) {
    check(r, c);
    if (v == 0)
      a_.erase({r, c});
    else
      a_[{r, c}] = v;
  }
  void add(int r, int c, const Rat& v) {
    check(r, c);
    auto it = a_.find({r, c});
    if (it == a_.end()) {
      if (v != 0) a_[{r, c}] = v;
    } else {
      it->second += v;
      if (it->second == 0) a_.erase(it);
    }
  }
  Rat at(int r, int c) const {
    check(r, c);
    auto it = a_.find({r, c});
    return it == a_.end() ? Rat(0) : it->second;
  }
  bool isZero() const { return a_.empty(); }

  template <typename F>
  void forEach(F&& f) const {
    for (const auto& [rc, v] : a_) f(rc.first, rc.second, v);
  }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (const auto& [rc, v] : a_) t.a_[{rc.second, rc.first}] = v;
    return t;
  }

  RationalMatrix operator*(const RationalMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    // group right factor's entries by row
    std::vector<SparseVec> rowsOfO(o.rows_);
    for (const auto& [rc, v] : o.a_) rowsOfO[rc.first].emplace_back(rc.second, v);
    RationalMatrix p(rows_, o.cols_);
    for (const auto& [rc, v] : a_)
      for (const auto& [j, w] : rowsOfO[rc.second]) p.add(rc.first, j, v * w);
    return p;
  }

  std::vector<Rat> apply(const std::vector<Rat>& x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("apply: size mismatch");
    std::vector<Rat> y(rows_, Rat(0));
    for (const auto& [rc, v] : a_) y[rc.first] += v * x[rc.second];
    return y;
  }

  std::vector<SparseVec> columns() const {
    std::vector<SparseVec> cols(cols_);
    for (const auto& [rc, v] : a_) cols[rc.second].emplace_back(rc.first, v);
    return cols;
  }

 private:
  void check(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
      throw std::out_of_range("RationalMatrix: index out of range");
  }
  int rows_ = 0, cols_ = 0;
  std::map<std::pair<int, int>, Rat> a_;
};

// Rank over Q via fraction-free Bareiss elimination on an integer copy
// (rows are scaled by denominator lcms, which preserves rank).  Pivots are
// chosen to favor sparse rows.
inline int rank(const RationalMatrix& m) {
  int R = m.rows(), C = m.cols();
  if (R == 0 || C == 0 || m.isZero()) return 0;
  std::vector<std::vector<Int>> a(R, std::vector<Int>(C, 0));
  {
    std::vector<Int> lcm(R, 1);
    m.forEach([&](int r, int, const Rat& v) {
      mpz_lcm(lcm[r].get_mpz_t(), lcm[r].get_mpz_t(), v.get_den().get_mpz_t());
    });
    m.forEach([&](int r, int c, const Rat& v) {
      a[r][c] = v.get_num() * (lcm[r] / v.get_den());
    });
  }
  auto rowNnz = [&](int r, int fromCol) {
    int cnt = 0;
    for (int c = fromCol; c < C; ++c)
      if (a[r][c] != 0) ++cnt;
    return cnt;
  };
  Int prev = 1;
  int rk = 0;
  for (int col = 0; col < C && rk < R; ++col) {
    int piv = -1, best = -1;
    for (int r = rk; r < R; ++r) {
      if (a[r][col] == 0) continue;
      int nz = rowNnz(r, col);
      if (piv == -1 || nz < best) { piv = r; best = nz; }
    }
    if (piv == -1) continue;
    std::swap(a[rk], a[piv]);
    for (int r = rk + 1; r < R; ++r) {
      if (a[r][col] == 0 && a[rk][col] == 0) continue;
      for (int c = col + 1; c < C; ++c) {
        Int t = a[r][c] * a[rk][col] - a[r][col] * a[rk][c];
        mpz_divexact(a[r][c].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[r][col] = 0;
    }
    prev = a[rk][col];
    ++rk;
  }
  return rk;
}

// Basis of the right kernel via Gauss-Jordan over Q.  Each returned vector v
// satisfies m v = 0 exactly; size is cols - rank.
inline std::vector<std::vector<Rat>> kernel_basis(const RationalMatrix& m) {
  int R = m.rows(), C = m.cols();
  std::vector<std::vector<Rat>> a(R, std::vector<Rat>(C, Rat(0)));
  m.forEach([&](int r, int c, const Rat& v) { a[r][c] = v; });
  std::vector<int> pivotColOfRow;
  std::vector<int> pivotRowOfCol(C, -1);
  int rk = 0;
  for (int col = 0; col < C && rk < R; ++col) {
    int piv = -1;
    for (int r = rk; r < R; ++r)
      if (a[r][col] != 0) { piv = r; break; }
    if (piv == -1) continue;
    std::swap(a[rk], a[piv]);
    Rat inv = 1 / a[rk][col];
    for (int c = col; c < C; ++c) a[rk][c] *= inv;
    for (int r = 0; r < R; ++r) {
      if (r == rk || a[r][col] == 0) continue;
      Rat f = a[r][col];
      for (int c = col; c < C; ++c) a[r][c] -= f * a[rk][c];
    }
    pivotColOfRow.push_back(col);
    pivotRowOfCol[col] = rk;
    ++rk;
  }
  std::vector<std::vector<Rat>> kernel;
  for (int j = 0; j < C; ++j) {
    if (pivotRowOfCol[j] != -1) continue;
    std::vector<Rat> v(C, Rat(0));
    v[j] = 1;
    for (int r = 0; r < rk; ++r) v[pivotColOfRow[r]] = -a[r][j];
    kernel.push_back(std::move(v));
  }
  return kernel;
}

// Incremental column-space tracker over Q.  Feeds columns one at a time and
// keeps an echelon basis; with tracking enabled it can express any vector of
// the span in terms of the original pivot columns.
class RowReducer {
 public:
  explicit RowReducer(int rows, bool track = false) : rows_(rows), track_(track) {}

  int rank() const { return static_cast<int>(pivots_.size()); }
  int rows() const { return rows_; }

  // Returns true when the column is independent of everything added so far
  // (it then becomes a pivot).
  bool add_column(const SparseVec& col) {
    SparseVec w = col;
    std::vector<Rat> coefs;
    reduce(w, track_ ? &coefs : nullptr);
    if (w.empty()) return false;
    Rat lead = w.front().second;
    for (auto& [i, v] : w) v /= lead;
    if (track_) {
      std::vector<Rat> expr(pivots_.size() + 1, Rat(0));
      expr.back() = 1;
      for (size_t j = 0; j < coefs.size(); ++j)
        if (coefs[j] != 0)
          for (size_t i = 0; i < expr_[j].size(); ++i) expr[i] -= coefs[j] * expr_[j][i];
      for (auto& e : expr) e /= lead;
      expr_.push_back(std::move(expr));
    }
    pivots_.push_back({w.front().first, std::move(w)});
    return true;
  }

  bool in_span(const SparseVec& v) const {
    SparseVec w = v;
    reduce(w, nullptr);
    return w.empty();
  }

  // Coefficients over the original pivot columns, or nothing if v is outside
  // the span.  Requires tracking.
  std::optional<std::vector<Rat>> solve(const SparseVec& v) const {
    if (!track_) throw std::logic_error("RowReducer::solve requires tracking");
    SparseVec w = v;
    std::vector<Rat> coefs;
    reduce(w, &coefs);
    if (!w.empty()) return std::nullopt;
    std::vector<Rat> x(pivots_.size(), Rat(0));
    for (size_t j = 0; j < coefs.size(); ++j)
      if (coefs[j] != 0)
        for (size_t i = 0; i < expr_[j].size(); ++i) x[i] += coefs[j] * expr_[j][i];
    return x;
  }

 private:
  struct Pivot {
    int row;
    SparseVec vec;  // normalized: vec[row] == 1, leading entry at row
  };

  void reduce(SparseVec& w, std::vector<Rat>* coefs) const {
    if (coefs) coefs->assign(pivots_.size(), Rat(0));
    for (size_t j = 0; j < pivots_.size() && !w.empty(); ++j) {
      const auto& p = pivots_[j];
      auto it = std::lower_bound(w.begin(), w.end(), p.row,
                                 [](const std::pair<int, Rat>& e, int r) { return e.first < r; });
      if (it == w.end() || it->first != p.row) continue;
      Rat c = it->second;
      sparse_axpy(w, -c, p.vec);
      if (coefs) (*coefs)[j] = c;
    }
  }

  int rows_;
  bool track_;
  std::vector<Pivot> pivots_;
  std::vector<std::vector<Rat>> expr_;  // reduced pivot j over original pivots
};

// A finite cochain complex 0 -> V_0 -> V_1 -> ... -> V_m -> 0 with exact
// rational differentials; d_{p+1} d_p = 0 is checked at construction.
class FiniteComplex {
 public:
  FiniteComplex(std::vector<int> dims, std::vector<RationalMatrix> diffs)
      : dims_(std::move(dims)), d_(std::move(diffs)) {
    if (dims_.empty()) throw std::invalid_argument("FiniteComplex: empty");
    if (d_.size() + 1 != dims_.size())
      throw std::invalid_argument("FiniteComplex: need one differential per adjacent pair");
    for (size_t p = 0; p < d_.size(); ++p) {
      if (d_[p].cols() != dims_[p] || d_[p].rows() != dims_[p + 1])
        throw std::invalid_argument("FiniteComplex: differential shape mismatch");
      if (p > 0 && !(d_[p] * d_[p - 1]).isZero())
        throw std::invalid_argument("FiniteComplex: d.d != 0");
    }
  }

  int positions() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  const RationalMatrix& differential(int p) const { return d_.at(p); }

  // dim ker(d_p) - rank(d_{p-1}) at every position p
  std::vector<int> homology_dims() const {
    std::vector<int> ranks(d_.size());
    for (size_t p = 0; p < d_.size(); ++p) ranks[p] = rank(d_[p]);
    std::vector<int> h(dims_.size());
    for (size_t p = 0; p < dims_.size(); ++p) {
      int out = p < d_.size() ? ranks[p] : 0;
      int in = p > 0 ? ranks[p - 1] : 0;
      h[p] = dims_[p] - out - in;
    }
    return h;
  }

 private:
  std::vector<int> dims_;
  std::vector<RationalMatrix> d_;
};

}  // namespace gravity
