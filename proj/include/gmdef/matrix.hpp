#pragma once
#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gmdef/scalar.hpp"

namespace gmdef {

using Vec = std::vector<Scalar>;

inline bool vec_is_zero(const Vec& v) {
  for (auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}
inline Vec vec_add(const Vec& a, const Vec& b) {
  Vec r(a);
  for (std::size_t i = 0; i < r.size(); i++) r[i] += b[i];
  return r;
}
inline Vec vec_sub(const Vec& a, const Vec& b) {
  Vec r(a);
  for (std::size_t i = 0; i < r.size(); i++) r[i] -= b[i];
  return r;
}
inline Vec vec_scale(const Scalar& c, const Vec& a) {
  Vec r(a);
  for (auto& x : r) x *= c;
  return r;
}

// Dense row-major matrix over Q(i). Also used as a plain container of row
// vectors (bases, representative lists); linear maps act on column vectors.
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<Scalar> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

  Scalar& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  const Scalar& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; i++) m.at(i, i) = Scalar(1);
    return m;
  }

  Vec row(int r) const {
    Vec v(cols);
    for (int j = 0; j < cols; j++) v[j] = at(r, j);
    return v;
  }
  void set_row(int r, const Vec& v) {
    for (int j = 0; j < cols; j++) at(r, j) = v[j];
  }

  bool is_zero() const {
    for (auto& x : a)
      if (!x.is_zero()) return false;
    return true;
  }

  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
};

inline Matrix from_rows(const std::vector<Vec>& rows, int cols) {
  Matrix m(static_cast<int>(rows.size()), cols);
  for (int i = 0; i < m.rows; i++) m.set_row(i, rows[i]);
  return m;
}

inline Matrix add(const Matrix& x, const Matrix& y) {
  Matrix r(x);
  for (std::size_t i = 0; i < r.a.size(); i++) r.a[i] += y.a[i];
  return r;
}
inline Matrix sub(const Matrix& x, const Matrix& y) {
  Matrix r(x);
  for (std::size_t i = 0; i < r.a.size(); i++) r.a[i] -= y.a[i];
  return r;
}
inline Matrix scale(const Scalar& c, const Matrix& x) {
  Matrix r(x);
  for (auto& v : r.a) v *= c;
  return r;
}

inline Matrix mul(const Matrix& x, const Matrix& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matrix product shape mismatch");
  Matrix r(x.rows, y.cols);
  for (int i = 0; i < x.rows; i++)
    for (int k = 0; k < x.cols; k++) {
      const Scalar& s = x.at(i, k);
      if (s.is_zero()) continue;
      for (int j = 0; j < y.cols; j++) {
        const Scalar& t = y.at(k, j);
        if (!t.is_zero()) r.at(i, j) += s * t;
      }
    }
  return r;
}

inline Vec matvec(const Matrix& m, const Vec& v) {
  if (m.cols != static_cast<int>(v.size())) throw std::invalid_argument("matrix apply shape mismatch");
  Vec r(m.rows);
  for (int i = 0; i < m.rows; i++)
    for (int j = 0; j < m.cols; j++) {
      const Scalar& s = m.at(i, j);
      if (!s.is_zero() && !v[j].is_zero()) r[i] += s * v[j];
    }
  return r;
}

inline Matrix transpose(const Matrix& m) {
  Matrix r(m.cols, m.rows);
  for (int i = 0; i < m.rows; i++)
    for (int j = 0; j < m.cols; j++) r.at(j, i) = m.at(i, j);
  return r;
}
inline Matrix conj_transpose(const Matrix& m) {
  Matrix r(m.cols, m.rows);
  for (int i = 0; i < m.rows; i++)
    for (int j = 0; j < m.cols; j++) r.at(j, i) = m.at(i, j).conj();
  return r;
}

inline Matrix vstack(const Matrix& x, const Matrix& y) {
  if (x.rows == 0) return y;
  if (y.rows == 0) return x;
  if (x.cols != y.cols) throw std::invalid_argument("vstack width mismatch");
  Matrix r(x.rows + y.rows, x.cols);
  std::copy(x.a.begin(), x.a.end(), r.a.begin());
  std::copy(y.a.begin(), y.a.end(), r.a.begin() + x.a.size());
  return r;
}
inline Matrix hstack(const Matrix& x, const Matrix& y) {
  if (x.rows != y.rows) throw std::invalid_argument("hstack height mismatch");
  Matrix r(x.rows, x.cols + y.cols);
  for (int i = 0; i < x.rows; i++) {
    for (int j = 0; j < x.cols; j++) r.at(i, j) = x.at(i, j);
    for (int j = 0; j < y.cols; j++) r.at(i, x.cols + j) = y.at(i, j);
  }
  return r;
}

struct RrefResult {
  Matrix m;
  int rank = 0;
  std::vector<int> pivots;  // pivot column of each of the first `rank` rows
};

// Reduced row echelon form. Pivot choice is the first row with a nonzero entry
// in column order, so the output is deterministic.
inline RrefResult rref(Matrix m) {
  RrefResult res;
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; col++) {
    int piv = -1;
    for (int r = rank; r < m.rows; r++)
      if (!m.at(r, col).is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = 0; j < m.cols; j++) std::swap(m.at(piv, j), m.at(rank, j));
    Scalar inv = m.at(rank, col).inverse();
    for (int j = col; j < m.cols; j++) m.at(rank, j) *= inv;
    for (int r = 0; r < m.rows; r++) {
      if (r == rank) continue;
      Scalar f = m.at(r, col);
      if (f.is_zero()) continue;
      for (int j = col; j < m.cols; j++) m.at(r, j) -= f * m.at(rank, j);
    }
    res.pivots.push_back(col);
    rank++;
  }
  res.rank = rank;
  res.m = std::move(m);
  return res;
}

inline int rank_of(const Matrix& m) { return rref(m).rank; }

// Basis of {x : m x = 0}, one row per non-pivot column, in column order.
inline Matrix kernel_basis_rows(const Matrix& m) {
  RrefResult r = rref(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (int p : r.pivots) is_pivot[p] = true;
  Matrix out(m.cols - r.rank, m.cols);
  int row = 0;
  for (int j = 0; j < m.cols; j++) {
    if (is_pivot[j]) continue;
    out.at(row, j) = Scalar(1);
    for (int i = 0; i < r.rank; i++) out.at(row, r.pivots[i]) = -r.m.at(i, j);
    row++;
  }
  return out;
}

// Canonical solution of m x = b: zero in every non-pivot coordinate.
// "Inconsistent" is a value, not an error.
inline std::optional<Vec> solve_particular(const Matrix& m, const Vec& b) {
  Matrix aug(m.rows, m.cols + 1);
  for (int i = 0; i < m.rows; i++) {
    for (int j = 0; j < m.cols; j++) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols) = b[i];
  }
  RrefResult r = rref(std::move(aug));
  for (int p : r.pivots)
    if (p == m.cols) return std::nullopt;
  Vec x(m.cols);
  for (int i = 0; i < r.rank; i++) x[r.pivots[i]] = r.m.at(i, m.cols);
  return x;
}

// Columnwise canonical solve of m X = B; fails if any column of B is outside
// the column span of m.
inline std::optional<Matrix> solve_columns(const Matrix& m, const Matrix& b) {
  Matrix aug = hstack(m, b);
  RrefResult r = rref(std::move(aug));
  for (int p : r.pivots)
    if (p >= m.cols) return std::nullopt;
  Matrix x(m.cols, b.cols);
  for (int i = 0; i < r.rank; i++)
    for (int j = 0; j < b.cols; j++) x.at(r.pivots[i], j) = r.m.at(i, m.cols + j);
  return x;
}

inline std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("inverse of non-square matrix");
  auto x = solve_columns(m, Matrix::identity(m.rows));
  return x;
}

inline Scalar det(Matrix m) {
  if (m.rows != m.cols) throw std::invalid_argument("det of non-square matrix");
  Scalar d(1);
  for (int col = 0; col < m.cols; col++) {
    int piv = -1;
    for (int r = col; r < m.rows; r++)
      if (!m.at(r, col).is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) return Scalar(0);
    if (piv != col) {
      for (int j = 0; j < m.cols; j++) std::swap(m.at(piv, j), m.at(col, j));
      d = -d;
    }
    d *= m.at(col, col);
    Scalar inv = m.at(col, col).inverse();
    for (int r = col + 1; r < m.rows; r++) {
      Scalar f = m.at(r, col);
      if (f.is_zero()) continue;
      f *= inv;
      for (int j = col; j < m.cols; j++) m.at(r, j) -= f * m.at(col, j);
    }
  }
  return d;
}

// Row span with canonical (rref) basis, so equality of subspaces is equality
// of their stored bases.
struct Subspace {
  int ambient = 0;
  Matrix basis;               // rref rows, full row rank
  std::vector<int> pivots;    // pivot column per basis row

  static Subspace zero(int ambient) {
    Subspace s;
    s.ambient = ambient;
    s.basis = Matrix(0, ambient);
    return s;
  }
  static Subspace full(int ambient) { return span_rows(Matrix::identity(ambient)); }

  static Subspace span_rows(const Matrix& rows) {
    RrefResult r = rref(rows);
    Subspace s;
    s.ambient = rows.cols;
    s.pivots = r.pivots;
    s.basis = Matrix(r.rank, rows.cols);
    for (int i = 0; i < r.rank; i++) s.basis.set_row(i, r.m.row(i));
    return s;
  }

  int dim() const { return basis.rows; }
  bool is_zero_space() const { return basis.rows == 0; }

  // v reduced modulo the span; zero remainder means membership.
  Vec reduce(Vec v) const {
    for (int i = 0; i < basis.rows; i++) {
      Scalar f = v[pivots[i]];
      if (f.is_zero()) continue;
      for (int j = 0; j < ambient; j++) v[j] -= f * basis.at(i, j);
    }
    return v;
  }

  bool contains(const Vec& v) const { return vec_is_zero(reduce(v)); }
  bool contains(const Subspace& o) const {
    for (int i = 0; i < o.basis.rows; i++)
      if (!contains(o.basis.row(i))) return false;
    return true;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient == b.ambient && a.basis == b.basis;
  }
};

inline Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.ambient != b.ambient) throw std::invalid_argument("subspace sum ambient mismatch");
  return Subspace::span_rows(vstack(a.basis, b.basis));
}

inline Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient != b.ambient) throw std::invalid_argument("subspace intersect ambient mismatch");
  int k = a.dim(), l = b.dim();
  if (k == 0 || l == 0) return Subspace::zero(a.ambient);
  // (u, v) with u^T A = v^T B; w = u^T A spans the intersection.
  Matrix m(a.ambient, k + l);
  for (int i = 0; i < a.ambient; i++) {
    for (int c = 0; c < k; c++) m.at(i, c) = a.basis.at(c, i);
    for (int c = 0; c < l; c++) m.at(i, k + c) = -b.basis.at(c, i);
  }
  Matrix ker = kernel_basis_rows(m);
  Matrix w(ker.rows, a.ambient);
  for (int r = 0; r < ker.rows; r++)
    for (int c = 0; c < k; c++) {
      const Scalar& u = ker.at(r, c);
      if (u.is_zero()) continue;
      for (int j = 0; j < a.ambient; j++) w.at(r, j) += u * a.basis.at(c, j);
    }
  return Subspace::span_rows(w);
}

// Incremental rank tracker used by the greedy complement.
struct RrefAccum {
  int cols = 0;
  std::vector<Vec> rows;
  std::vector<int> pivots;

  explicit RrefAccum(int c) : cols(c) {}

  Vec reduce(Vec v) const {
    for (std::size_t i = 0; i < rows.size(); i++) {
      Scalar f = v[pivots[i]];
      if (f.is_zero()) continue;
      for (int j = 0; j < cols; j++) v[j] -= f * rows[i][j];
    }
    return v;
  }

  bool add(const Vec& v) {
    Vec r = reduce(v);
    int p = -1;
    for (int j = 0; j < cols; j++)
      if (!r[j].is_zero()) {
        p = j;
        break;
      }
    if (p < 0) return false;
    Scalar inv = r[p].inverse();
    for (auto& x : r) x *= inv;
    rows.push_back(std::move(r));
    pivots.push_back(p);
    return true;
  }
};

// Greedy complement of sub inside `inside`: walk the canonical basis rows of
// `inside` in order and keep those that raise the rank. For the full ambient
// space this selects the earliest standard basis vectors.
inline Matrix complement_rows(const Subspace& sub, const Subspace& inside) {
  if (!inside.contains(sub)) throw std::invalid_argument("split_complement: sub not inside");
  RrefAccum acc(sub.ambient);
  for (int i = 0; i < sub.basis.rows; i++) acc.add(sub.basis.row(i));
  std::vector<Vec> kept;
  for (int i = 0; i < inside.basis.rows; i++) {
    Vec v = inside.basis.row(i);
    if (acc.add(v)) kept.push_back(v);
  }
  return from_rows(kept, sub.ambient);
}

inline Subspace split_complement(const Subspace& sub, const Subspace& inside) {
  return Subspace::span_rows(complement_rows(sub, inside));
}

// Coordinates of v in the row space of `basis` (nullopt when outside).
inline std::optional<Vec> coords_in_rows(const Matrix& basis, const Vec& v) {
  return solve_particular(transpose(basis), v);
}

}  // namespace gmdef
