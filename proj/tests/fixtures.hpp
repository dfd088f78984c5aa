#pragma once
#include <vector>

#include "gmdef/connection.hpp"
#include "gmdef/deformation.hpp"
#include "gmdef/dgla.hpp"
#include "test_util.hpp"

namespace gmdef::testutil {

// bracket tensor of gl_N on matrix units E_ab (index a*N+b):
// [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb
inline Matrix gl_bracket(int n) {
  int d = n * n;
  Matrix t(d * d, d);
  for (int a = 0; a < n; a++)
    for (int b = 0; b < n; b++)
      for (int c = 0; c < n; c++)
        for (int e = 0; e < n; e++) {
          int row = (a * n + b) * d + (c * n + e);
          if (b == c) t.at(row, a * n + e) += Scalar(1);
          if (e == a) t.at(row, c * n + b) -= Scalar(1);
        }
  return t;
}

inline Matrix zero_bracket(int di, int dj, int dtarget) { return Matrix(di * dj, dtarget); }

inline std::vector<std::vector<Matrix>> zero_brackets(const std::vector<int>& dims) {
  int n = static_cast<int>(dims.size()) - 1;
  std::vector<std::vector<Matrix>> b(n + 1, std::vector<Matrix>(n + 1));
  for (int i = 0; i <= n; i++)
    for (int j = 0; i + j <= n; j++) b[i][j] = zero_bracket(dims[i], dims[j], dims[i + j]);
  return b;
}

// abelian dgla with a random differential chained so d*d = 0 by construction
inline Dgla make_abelian_dgla(Rng& rng, const std::vector<int>& dims) {
  Dgla l;
  l.max_degree = static_cast<int>(dims.size()) - 1;
  l.dims = dims;
  l.bracket = zero_brackets(dims);
  l.d.resize(l.max_degree + 1);
  Matrix prev(0, 0);
  for (int i = 0; i <= l.max_degree; i++) {
    int target = i + 1 <= l.max_degree ? dims[i + 1] : 0;
    if (i == 0) {
      l.d[0] = random_matrix(rng, target, dims[0], 2);
    } else {
      // rows of the left kernel of d[i-1] span the legal row space for d[i]
      Matrix lk = kernel_basis_rows(transpose(l.d[i - 1]));
      Matrix mix = random_matrix(rng, target, lk.rows, 2);
      l.d[i] = Matrix(target, dims[i]);
      for (int r = 0; r < target; r++)
        for (int c = 0; c < dims[i]; c++) {
          Scalar s;
          for (int k = 0; k < lk.rows; k++) s += mix.at(r, k) * lk.at(k, c);
          l.d[i].at(r, c) = s;
        }
    }
  }
  return l;
}

// splitting built from the canonical complements: delta inverts d on the
// chosen complement of ker d and kills the rest
inline Splitting standard_splitting(const Dgla& l) {
  Splitting s;
  s.delta.resize(l.max_degree + 1);
  s.delta[0] = Matrix(0, l.dims[0]);
  // rest[i]: complement of im d[i-1] in L^i; u[i]: complement of ker d[i]
  // chosen inside span(rest[i]) so that delta kills the image of delta
  std::vector<Matrix> rest(l.max_degree + 1), u(l.max_degree + 1);
  for (int i = 0; i <= l.max_degree; i++) {
    Subspace imd = i >= 1 ? image_rows(l.d[i - 1]) : Subspace::zero(l.dims[i]);
    rest[i] = complement_rows(imd, Subspace::full(l.dims[i]));
    Subspace rest_span = Subspace::span_rows(rest[i]);
    Subspace kd = Subspace::span_rows(kernel_basis_rows(l.d[i]));
    u[i] = complement_rows(intersect(kd, rest_span), rest_span);
  }
  for (int i = 1; i <= l.max_degree; i++) {
    // columns of m: images d(u_j), then the chosen complement of im d
    Matrix m(l.dims[i], l.dims[i]);
    int k = u[i - 1].rows;
    for (int j = 0; j < k; j++) {
      Vec img = matvec(l.d[i - 1], u[i - 1].row(j));
      for (int r = 0; r < l.dims[i]; r++) m.at(r, j) = img[r];
    }
    for (int j = 0; j < rest[i].rows; j++)
      for (int r = 0; r < l.dims[i]; r++) m.at(r, k + j) = rest[i].at(j, r);
    std::optional<Matrix> minv = inverse(m);
    if (!minv) throw std::logic_error("standard_splitting: decomposition matrix singular");
    // delta = [u_1 ... u_k | 0] * m^{-1}
    Matrix upart(l.dims[i - 1], l.dims[i]);
    for (int j = 0; j < k; j++)
      for (int r = 0; r < l.dims[i - 1]; r++) upart.at(r, j) = u[i - 1].at(j, r);
    s.delta[i] = mul(upart, *minv);
  }
  return s;
}

// finite commutative graded algebra with differential, for building dglas as
// g (x) C
struct Cdga {
  int top = 0;
  std::vector<int> dims;
  std::vector<std::vector<Matrix>> mult;  // mult[i][j] for i+j <= top
  std::vector<Matrix> d;                  // d[i]: dims[i+1] x dims[i], d[top] zero rows
  std::vector<std::vector<Bitype>> types; // optional, per degree
};

inline Cdga surface_cdga(int genus) {
  Cdga c;
  c.top = 2;
  c.dims = {1, 2 * genus, 1};
  c.mult.assign(3, std::vector<Matrix>(3));
  c.mult[0][0] = Matrix(1, 1);
  c.mult[0][0].at(0, 0) = Scalar(1);
  c.mult[0][1] = Matrix::identity(2 * genus);
  c.mult[1][0] = Matrix::identity(2 * genus);
  c.mult[0][2] = Matrix::identity(1);
  c.mult[2][0] = Matrix::identity(1);
  Matrix cup(2 * genus * 2 * genus, 1);
  for (int i = 0; i < genus; i++) {
    cup.at(i * (2 * genus) + (genus + i), 0) = Scalar(1);
    cup.at((genus + i) * (2 * genus) + i, 0) = Scalar(-1);
  }
  c.mult[1][1] = cup;
  c.d.resize(3);
  c.d[0] = Matrix(2 * genus, 1);
  c.d[1] = Matrix(1, 2 * genus);
  c.d[2] = Matrix(0, 1);
  // Hodge types: 1 of type (0,0), a_i of (1,0), b_i of (0,1), vol of (1,1)
  c.types.resize(3);
  c.types[0] = {Bitype{0, 0}};
  for (int i = 0; i < genus; i++) c.types[1].push_back(Bitype{1, 0});
  for (int i = 0; i < genus; i++) c.types[1].push_back(Bitype{0, 1});
  c.types[2] = {Bitype{1, 1}};
  return c;
}

// contractible factor: degree 0 = {1, s}, degree 1 = {ds}, d s = ds,
// s*s = 0, s*ds = 0
inline Cdga interval_cdga() {
  Cdga c;
  c.top = 1;
  c.dims = {2, 1};
  c.mult.assign(2, std::vector<Matrix>(2));
  Matrix m00(4, 2);
  m00.at(0, 0) = Scalar(1);  // 1*1 = 1
  m00.at(1, 1) = Scalar(1);  // 1*s = s
  m00.at(2, 1) = Scalar(1);  // s*1 = s
  c.mult[0][0] = m00;
  Matrix m01(2, 1);
  m01.at(0, 0) = Scalar(1);  // 1*ds = ds
  c.mult[0][1] = m01;
  c.mult[1][0] = m01;
  c.d.resize(2);
  c.d[0] = Matrix(1, 2);
  c.d[0].at(0, 1) = Scalar(1);
  c.d[1] = Matrix(0, 1);
  return c;
}

// graded tensor product of cdgas with Koszul signs, truncated at cap
inline Cdga cdga_tensor(const Cdga& a, const Cdga& b, int cap) {
  Cdga t;
  t.top = std::min(cap, a.top + b.top);
  // blocks per degree: (ja, jb) with ja ascending, index a-major inside
  auto block_off = [&](int k, int ja) {
    int off = 0;
    for (int j = 0; j <= std::min(k, a.top); j++) {
      if (k - j > b.top) continue;
      if (j == ja) return off;
      off += a.dims[j] * b.dims[k - j];
    }
    return -1;
  };
  t.dims.resize(t.top + 1);
  for (int k = 0; k <= t.top; k++) {
    int dim = 0;
    for (int ja = 0; ja <= std::min(k, a.top); ja++)
      if (k - ja <= b.top) dim += a.dims[ja] * b.dims[k - ja];
    t.dims[k] = dim;
  }
  t.mult.assign(t.top + 1, std::vector<Matrix>(t.top + 1));
  for (int i = 0; i <= t.top; i++)
    for (int j = 0; i + j <= t.top; j++) {
      Matrix m(t.dims[i] * t.dims[j], t.dims[i + j]);
      for (int ja = 0; ja <= std::min(i, a.top); ja++) {
        int jb = i - ja;
        if (jb > b.top) continue;
        for (int ka = 0; ka <= std::min(j, a.top); ka++) {
          int kb = j - ka;
          if (kb > b.top || ja + ka > a.top || jb + kb > b.top) continue;
          int out = block_off(i + j, ja + ka);
          Scalar sign = ((jb * ka) % 2 == 0) ? Scalar(1) : Scalar(-1);
          for (int pa = 0; pa < a.dims[ja]; pa++)
            for (int pb = 0; pb < b.dims[jb]; pb++)
              for (int qa = 0; qa < a.dims[ka]; qa++)
                for (int qb = 0; qb < b.dims[kb]; qb++) {
                  int row = (block_off(i, ja) + pa * b.dims[jb] + pb) * t.dims[j] +
                            (block_off(j, ka) + qa * b.dims[kb] + qb);
                  const Matrix& ma = a.mult[ja][ka];
                  const Matrix& mb = b.mult[jb][kb];
                  for (int ra = 0; ra < a.dims[ja + ka]; ra++) {
                    const Scalar& ca = ma.at(pa * a.dims[ka] + qa, ra);
                    if (ca.is_zero()) continue;
                    for (int rb = 0; rb < b.dims[jb + kb]; rb++) {
                      const Scalar& cb = mb.at(pb * b.dims[kb] + qb, rb);
                      if (!cb.is_zero())
                        m.at(row, out + ra * b.dims[jb + kb] + rb) += sign * ca * cb;
                    }
                  }
                }
        }
      }
      t.mult[i][j] = std::move(m);
    }
  t.d.resize(t.top + 1);
  for (int i = 0; i <= t.top; i++) {
    int target = i + 1 <= t.top ? t.dims[i + 1] : 0;
    Matrix dm(target, t.dims[i]);
    for (int ja = 0; ja <= std::min(i, a.top); ja++) {
      int jb = i - ja;
      if (jb > b.top) continue;
      int src = block_off(i, ja);
      for (int pa = 0; pa < a.dims[ja]; pa++)
        for (int pb = 0; pb < b.dims[jb]; pb++) {
          int col = src + pa * b.dims[jb] + pb;
          // da (x) u
          if (ja + 1 <= a.top && ja + 1 + jb <= t.top && i + 1 <= t.top) {
            int out = block_off(i + 1, ja + 1);
            for (int r = 0; r < a.dims[ja + 1]; r++) {
              const Scalar& cd = a.d[ja].at(r, pa);
              if (!cd.is_zero()) dm.at(out + r * b.dims[jb] + pb, col) += cd;
            }
          }
          // (-1)^{|a|} a (x) du
          if (jb + 1 <= b.top && ja + jb + 1 <= t.top && i + 1 <= t.top) {
            int out = block_off(i + 1, ja);
            Scalar sign = (ja % 2 == 0) ? Scalar(1) : Scalar(-1);
            for (int r = 0; r < b.dims[jb + 1]; r++) {
              const Scalar& cd = b.d[jb].at(r, pb);
              if (!cd.is_zero()) dm.at(out + pa * b.dims[jb + 1] + r, col) += sign * cd;
            }
          }
        }
    }
    t.d[i] = std::move(dm);
  }
  return t;
}

// dgla g (x) C for an ungraded Lie algebra g; basis index r*g_dim + p with
// C-index r major
inline Dgla lie_tensor_cdga(int g_dim, const Matrix& g_bracket, const Cdga& c, int cap = 3) {
  Dgla l;
  l.max_degree = std::min(cap, c.top);
  for (int i = 0; i <= l.max_degree; i++) l.dims.push_back(g_dim * c.dims[i]);
  l.d.resize(l.max_degree + 1);
  for (int i = 0; i <= l.max_degree; i++) {
    int target = i + 1 <= l.max_degree ? l.dims[i + 1] : 0;
    l.d[i] = Matrix(target, l.dims[i]);
    if (i + 1 <= l.max_degree)
      for (int r = 0; r < c.dims[i + 1]; r++)
        for (int rc = 0; rc < c.dims[i]; rc++) {
          const Scalar& cd = c.d[i].at(r, rc);
          if (cd.is_zero()) continue;
          for (int p = 0; p < g_dim; p++) l.d[i].at(r * g_dim + p, rc * g_dim + p) = cd;
        }
  }
  l.bracket.assign(l.max_degree + 1, std::vector<Matrix>(l.max_degree + 1));
  for (int i = 0; i <= l.max_degree; i++)
    for (int j = 0; i + j <= l.max_degree; j++) {
      Matrix t(l.dims[i] * l.dims[j], l.dims[i + j]);
      for (int ri = 0; ri < c.dims[i]; ri++)
        for (int rj = 0; rj < c.dims[j]; rj++) {
          const Matrix& cm = c.mult[i][j];
          for (int p = 0; p < g_dim; p++)
            for (int q = 0; q < g_dim; q++) {
              int row = (ri * g_dim + p) * l.dims[j] + (rj * g_dim + q);
              for (int rt = 0; rt < c.dims[i + j]; rt++) {
                const Scalar& cc = cm.at(ri * c.dims[j] + rj, rt);
                if (cc.is_zero()) continue;
                for (int s = 0; s < g_dim; s++) {
                  const Scalar& gb = g_bracket.at((p * g_dim + q), s);
                  if (!gb.is_zero()) t.at(row, rt * g_dim + s) += cc * gb;
                }
              }
            }
        }
      l.bracket[i][j] = std::move(t);
    }
  if (!c.types.empty()) {
    l.types.resize(l.max_degree + 1);
    for (int i = 0; i <= l.max_degree; i++)
      for (int r = 0; r < c.dims[i]; r++)
        for (int p = 0; p < g_dim; p++) l.types[i].push_back(c.types[i][r]);
  }
  return l;
}

// extend with zero-dimensional pieces up to the requested top degree
inline Dgla pad_dgla(Dgla l, int max_degree) {
  if (max_degree < l.max_degree) throw std::invalid_argument("pad_dgla: cannot shrink");
  int old = l.max_degree;
  l.max_degree = max_degree;
  l.dims.resize(max_degree + 1, 0);
  l.d.resize(max_degree + 1);
  for (int i = 0; i <= max_degree; i++) {
    int target = i + 1 <= max_degree ? l.dims[i + 1] : 0;
    if (i >= old || l.d[i].rows != target) {
      Matrix nd(target, l.dims[i]);
      if (i < old)
        for (int r = 0; r < l.d[i].rows; r++)
          for (int c = 0; c < l.d[i].cols; c++) nd.at(r, c) = l.d[i].at(r, c);
      l.d[i] = std::move(nd);
    }
  }
  std::vector<std::vector<Matrix>> br(max_degree + 1, std::vector<Matrix>(max_degree + 1));
  for (int i = 0; i <= max_degree; i++)
    for (int j = 0; i + j <= max_degree; j++) {
      if (i <= old && j <= old && i + j <= old)
        br[i][j] = l.bracket[i][j];
      else
        br[i][j] = Matrix(l.dims[i] * l.dims[j], l.dims[i + j]);
    }
  l.bracket = std::move(br);
  if (l.bigraded()) l.types.resize(max_degree + 1);
  if (l.has_double) {
    l.d1.resize(max_degree + 1);
    l.d2.resize(max_degree + 1);
    for (int i = old; i <= max_degree; i++) {
      int target = i + 1 <= max_degree ? l.dims[i + 1] : 0;
      l.d1[i] = Matrix(target, l.dims[i]);
      l.d2[i] = Matrix(target, l.dims[i]);
    }
  }
  return l;
}

inline Dgla direct_sum_dgla(const Dgla& x, const Dgla& y) {
  if (x.max_degree != y.max_degree)
    throw std::invalid_argument("direct_sum_dgla: degree mismatch");
  Dgla l;
  l.max_degree = x.max_degree;
  for (int i = 0; i <= l.max_degree; i++) l.dims.push_back(x.dims[i] + y.dims[i]);
  auto block_diag = [&](const Matrix& a, const Matrix& b) {
    Matrix m(a.rows + b.rows, a.cols + b.cols);
    for (int r = 0; r < a.rows; r++)
      for (int c = 0; c < a.cols; c++) m.at(r, c) = a.at(r, c);
    for (int r = 0; r < b.rows; r++)
      for (int c = 0; c < b.cols; c++) m.at(a.rows + r, a.cols + c) = b.at(r, c);
    return m;
  };
  l.d.resize(l.max_degree + 1);
  for (int i = 0; i <= l.max_degree; i++) l.d[i] = block_diag(x.d[i], y.d[i]);
  if (x.has_double && y.has_double) {
    l.has_double = true;
    l.d1.resize(l.max_degree + 1);
    l.d2.resize(l.max_degree + 1);
    for (int i = 0; i <= l.max_degree; i++) {
      l.d1[i] = block_diag(x.d1[i], y.d1[i]);
      l.d2[i] = block_diag(x.d2[i], y.d2[i]);
    }
  }
  l.bracket.assign(l.max_degree + 1, std::vector<Matrix>(l.max_degree + 1));
  for (int i = 0; i <= l.max_degree; i++)
    for (int j = 0; i + j <= l.max_degree; j++) {
      Matrix t(l.dims[i] * l.dims[j], l.dims[i + j]);
      for (int p = 0; p < x.dims[i]; p++)
        for (int q = 0; q < x.dims[j]; q++) {
          Vec v = x.bracket_basis(i, p, j, q);
          for (int r = 0; r < x.dims[i + j]; r++) t.at(p * l.dims[j] + q, r) = v[r];
        }
      for (int p = 0; p < y.dims[i]; p++)
        for (int q = 0; q < y.dims[j]; q++) {
          Vec v = y.bracket_basis(i, p, j, q);
          for (int r = 0; r < y.dims[i + j]; r++)
            t.at((x.dims[i] + p) * l.dims[j] + (x.dims[j] + q), x.dims[i + j] + r) = v[r];
        }
      l.bracket[i][j] = std::move(t);
    }
  if (x.bigraded() && y.bigraded()) {
    l.types.resize(l.max_degree + 1);
    for (int i = 0; i <= l.max_degree; i++) {
      l.types[i] = x.types[i];
      l.types[i].insert(l.types[i].end(), y.types[i].begin(), y.types[i].end());
    }
  }
  return l;
}

// acyclic double complex on one square: gamma in degree 0, a = d1 gamma,
// b = d2 gamma in degree 1, c = d1 b = -d2 a in degree 2; zero bracket
inline Dgla square_double_dgla() {
  Dgla l;
  l.max_degree = 3;
  l.dims = {1, 2, 1, 0};
  l.bracket = zero_brackets(l.dims);
  auto zero_d = [&] {
    std::vector<Matrix> d(4);
    for (int i = 0; i <= 3; i++) d[i] = Matrix(i + 1 <= 3 ? l.dims[i + 1] : 0, l.dims[i]);
    return d;
  };
  l.d1 = zero_d();
  l.d2 = zero_d();
  l.d1[0].at(0, 0) = Scalar(1);   // gamma -> a
  l.d2[0].at(1, 0) = Scalar(1);   // gamma -> b
  l.d1[1].at(0, 1) = Scalar(1);   // b -> c
  l.d2[1].at(0, 0) = Scalar(-1);  // a -> -c
  l.d = zero_d();
  for (int i = 0; i <= 3; i++) l.d[i] = add(l.d1[i], l.d2[i]);
  l.has_double = true;
  l.types = {{Bitype{0, 0}}, {Bitype{1, 0}, Bitype{0, 1}}, {Bitype{1, 1}}, {}};
  return l;
}

// e in degree 0, f = d1 e in degree 1, d2 = 0: fails the ddbar criterion
inline Dgla ef_double_dgla() {
  Dgla l;
  l.max_degree = 3;
  l.dims = {1, 1, 0, 0};
  l.bracket = zero_brackets(l.dims);
  l.d1 = {Matrix(1, 1), Matrix(0, 1), Matrix(0, 0), Matrix(0, 0)};
  l.d1[0].at(0, 0) = Scalar(1);
  l.d2 = {Matrix(1, 1), Matrix(0, 1), Matrix(0, 0), Matrix(0, 0)};
  l.d = l.d1;
  l.has_double = true;
  return l;
}

inline Dgla thickened_torus_gl2() {
  Cdga c = cdga_tensor(surface_cdga(1), interval_cdga(), 3);
  return lie_tensor_cdga(4, gl_bracket(2), c, 3);
}

inline Dgla torus_gl2() { return lie_tensor_cdga(4, gl_bracket(2), surface_cdga(1), 3); }

// formal model with nonabelian degree-0 action: [s, eta1] = eta1,
// [s, eta2] = -eta2, [eta1, eta2] = omega; its Kuranishi ring is
// Sym(t1,t2)/(t1 t2) and exp(s (x) m^2) acts nontrivially on it
inline Dgla ambiguity_dgla() {
  Dgla l;
  l.max_degree = 2;
  l.dims = {1, 2, 1};
  l.bracket = zero_brackets(l.dims);
  l.bracket[0][1].at(0, 0) = Scalar(1);
  l.bracket[0][1].at(1, 1) = Scalar(-1);
  l.bracket[1][0].at(0, 0) = Scalar(-1);
  l.bracket[1][0].at(1, 1) = Scalar(1);
  l.bracket[1][1].at(1, 0) = Scalar(1);
  l.bracket[1][1].at(2, 0) = Scalar(1);
  l.d.resize(3);
  for (int i = 0; i <= 2; i++) l.d[i] = Matrix(i + 1 <= 2 ? l.dims[i + 1] : 0, l.dims[i]);
  return l;
}

// random element of V (x) m over the given ring
inline RingTensor random_ring_tensor(Rng& rng, int vdim, const GradedArtinAlgebra& a,
                                     int num_bound = 3) {
  RingTensor t = rt_zero(vdim, a);
  for (int k = 1; k <= a.n; k++) t.c[k] = random_matrix(rng, vdim, a.dims[k], num_bound);
  return t;
}

// left inverse of an injective matrix (columns independent)
inline Matrix left_inverse(const Matrix& m) {
  std::optional<Matrix> sol = solve_columns(transpose(m), Matrix::identity(m.cols));
  if (!sol) throw std::logic_error("left_inverse: matrix has dependent columns");
  return transpose(*sol);
}

// formal dgla with H^0 = 0: zero differential, random symmetric bracket
// Sym^2 H^1 -> H^2, everything else zero (Jacobi is vacuous)
inline Dgla formal_random_dgla(Rng& rng, int h1, int h2) {
  Dgla l;
  l.max_degree = 2;
  l.dims = {0, h1, h2};
  l.bracket = zero_brackets(l.dims);
  Matrix b(h1 * h1, h2);
  for (int p = 0; p < h1; p++)
    for (int q = p; q < h1; q++) {
      Vec v = random_vec(rng, h2, 3);
      b.set_row(p * h1 + q, v);
      b.set_row(q * h1 + p, v);
    }
  l.bracket[1][1] = std::move(b);
  l.d.resize(3);
  for (int i = 0; i <= 2; i++) l.d[i] = Matrix(i + 1 <= 2 ? l.dims[i + 1] : 0, l.dims[i]);
  return l;
}

// Two harmonic pairs eta1 (1,0), eta2 (0,1) and eta3 (1,0), eta4 (0,1) with
// [eta1,eta2] = omega harmonic and [eta3,eta4] = c exact, plus gamma0 in
// degree 0 with D'gamma0 = a, D''gamma0 = b, D'b = -c, D''a = c.
// Degree 1 order: eta1 eta2 eta3 eta4 a b; degree 2 order: omega c.
inline Dgla hodge_pair_dgla() {
  Dgla l;
  l.max_degree = 2;
  l.dims = {1, 6, 2};
  l.bracket = zero_brackets(l.dims);
  l.bracket[1][1].at(0 * 6 + 1, 0) = Scalar(1);  // [eta1,eta2] = omega
  l.bracket[1][1].at(1 * 6 + 0, 0) = Scalar(1);
  l.bracket[1][1].at(2 * 6 + 3, 1) = Scalar(1);  // [eta3,eta4] = c
  l.bracket[1][1].at(3 * 6 + 2, 1) = Scalar(1);
  auto zero_d = [&] {
    std::vector<Matrix> d(3);
    for (int i = 0; i <= 2; i++) d[i] = Matrix(i + 1 <= 2 ? l.dims[i + 1] : 0, l.dims[i]);
    return d;
  };
  l.d1 = zero_d();
  l.d2 = zero_d();
  l.d1[0].at(4, 0) = Scalar(1);   // gamma0 -> a
  l.d2[0].at(5, 0) = Scalar(1);   // gamma0 -> b
  l.d1[1].at(1, 5) = Scalar(-1);  // b -> -c
  l.d2[1].at(1, 4) = Scalar(1);   // a -> c
  l.d = zero_d();
  for (int i = 0; i <= 2; i++) l.d[i] = add(l.d1[i], l.d2[i]);
  l.has_double = true;
  l.types = {{Bitype{0, 0}},
             {Bitype{1, 0}, Bitype{0, 1}, Bitype{1, 0}, Bitype{0, 1}, Bitype{1, 0}, Bitype{0, 1}},
             {Bitype{1, 1}, Bitype{1, 1}}};
  return l;
}

inline Splitting hodge_pair_splitting(const Dgla& l) {
  Splitting s = zero_splitting(l);
  s.delta[1].at(0, 4) = Scalar(Rational(1, 2));   // a -> gamma0/2
  s.delta[1].at(0, 5) = Scalar(Rational(1, 2));   // b -> gamma0/2
  s.delta[2].at(4, 1) = Scalar(Rational(1, 2));   // c -> (a - b)/2
  s.delta[2].at(5, 1) = Scalar(Rational(-1, 2));
  return s;
}

// fiber C^2 with coordinates of type (0,0) and (1,1); gamma0 acts by diag(1,2)
inline FormalityModel hodge_pair_model(int n) {
  Dgla l = hodge_pair_dgla();
  Matrix ev(4, 1);
  ev.at(0, 0) = Scalar(1);
  ev.at(3, 0) = Scalar(2);
  return make_formality_model(l, hodge_pair_splitting(l), 2, {Bitype{0, 0}, Bitype{1, 1}}, ev, n);
}

// zero differential, one harmonic pair with [eta1,eta2] = omega
inline Dgla formal_pair_dgla() {
  Dgla l;
  l.max_degree = 2;
  l.dims = {1, 2, 1};
  l.bracket = zero_brackets(l.dims);
  l.bracket[1][1].at(0 * 2 + 1, 0) = Scalar(1);
  l.bracket[1][1].at(1 * 2 + 0, 0) = Scalar(1);
  std::vector<Matrix> d(3);
  for (int i = 0; i <= 2; i++) d[i] = Matrix(i + 1 <= 2 ? l.dims[i + 1] : 0, l.dims[i]);
  l.d = d;
  l.d1 = d;
  l.d2 = d;
  l.has_double = true;
  l.types = {{Bitype{0, 0}}, {Bitype{1, 0}, Bitype{0, 1}}, {Bitype{1, 1}}};
  return l;
}

inline FormalityModel formal_pair_model(int n) {
  Dgla l = formal_pair_dgla();
  return make_formality_model(l, zero_splitting(l), 1, {Bitype{0, 0}}, Matrix(1, 1), n);
}

}  // namespace gmdef::testutil
