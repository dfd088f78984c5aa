#pragma once
#include <array>
#include <map>

#include "gmdef/matrix.hpp"
#include "gmdef/report.hpp"

namespace gmdef {

// Graded Artin local algebra truncated at m-degree n: A = Gr^0 + ... + Gr^n
// with Gr^0 one-dimensional (the scalars) and m = Gr^1 + ... + Gr^n.
// Elements are flat coordinate vectors over the degree-ordered basis.
struct GradedArtinAlgebra {
  int n = 0;
  std::vector<int> dims;                   // size n+1, dims[0] == 1
  std::vector<std::vector<Matrix>> mult;   // mult[j][k] for j+k<=n: (dims[j]*dims[k]) x dims[j+k]

  int total_dim() const {
    int t = 0;
    for (int d : dims) t += d;
    return t;
  }
  int offset(int k) const {
    int t = 0;
    for (int j = 0; j < k; j++) t += dims[j];
    return t;
  }
  const Matrix& mtab(int j, int k) const { return mult[j][k]; }

  // product of basis vectors e^j_a * e^k_b as Gr^{j+k} coordinates
  Vec basis_product(int j, int a, int k, int b) const {
    const Matrix& t = mult[j][k];
    return t.row(a * dims[k] + b);
  }
};

inline Vec alg_zero(const GradedArtinAlgebra& a) { return Vec(a.total_dim()); }

inline Vec alg_unit(const GradedArtinAlgebra& a) {
  Vec v(a.total_dim());
  v[0] = Scalar(1);
  return v;
}

inline Vec alg_slice(const GradedArtinAlgebra& a, const Vec& x, int k) {
  Vec v(a.dims[k]);
  int off = a.offset(k);
  for (int i = 0; i < a.dims[k]; i++) v[i] = x[off + i];
  return v;
}

inline void alg_add_slice(const GradedArtinAlgebra& a, Vec& x, int k, const Vec& piece) {
  int off = a.offset(k);
  for (int i = 0; i < a.dims[k]; i++) x[off + i] += piece[i];
}

inline Vec alg_mul(const GradedArtinAlgebra& a, const Vec& x, const Vec& y) {
  Vec z(a.total_dim());
  for (int j = 0; j <= a.n; j++)
    for (int k = 0; j + k <= a.n; k++) {
      const Matrix& t = a.mult[j][k];
      int xo = a.offset(j), yo = a.offset(k), zo = a.offset(j + k);
      for (int p = 0; p < a.dims[j]; p++) {
        const Scalar& xs = x[xo + p];
        if (xs.is_zero()) continue;
        for (int q = 0; q < a.dims[k]; q++) {
          const Scalar& ys = y[yo + q];
          if (ys.is_zero()) continue;
          Scalar c = xs * ys;
          int row = p * a.dims[k] + q;
          for (int r = 0; r < a.dims[j + k]; r++) {
            const Scalar& m = t.at(row, r);
            if (!m.is_zero()) z[zo + r] += c * m;
          }
        }
      }
    }
  return z;
}

inline Vec alg_pow(const GradedArtinAlgebra& a, const Vec& x, int e) {
  Vec r = alg_unit(a);
  for (int i = 0; i < e; i++) r = alg_mul(a, r, x);
  return r;
}

inline Report validate_algebra(const GradedArtinAlgebra& a) {
  Report rep;
  rep.require("grade0.dim1", !a.dims.empty() && a.dims[0] == 1, "Gr^0 must be one-dimensional");
  if (!rep.ok()) return rep;
  bool shapes = static_cast<int>(a.dims.size()) == a.n + 1;
  for (int j = 0; j <= a.n && shapes; j++)
    for (int k = 0; j + k <= a.n && shapes; k++)
      shapes = a.mult[j][k].rows == a.dims[j] * a.dims[k] && a.mult[j][k].cols == a.dims[j + k];
  rep.require("mult.shapes", shapes, "multiplication tensor shape mismatch");
  if (!shapes) return rep;

  bool unit = true;
  for (int k = 0; k <= a.n && unit; k++)
    for (int b = 0; b < a.dims[k] && unit; b++) {
      Vec u(a.dims[k]);
      u[b] = Scalar(1);
      unit = a.basis_product(0, 0, k, b) == u && a.basis_product(k, b, 0, 0) == u;
    }
  rep.require("unit", unit, "Gr^0 generator is not a unit");

  bool comm = true;
  for (int j = 0; j <= a.n && comm; j++)
    for (int k = j; j + k <= a.n && comm; k++)
      for (int p = 0; p < a.dims[j] && comm; p++)
        for (int q = 0; q < a.dims[k] && comm; q++)
          comm = a.basis_product(j, p, k, q) == a.basis_product(k, q, j, p);
  rep.require("commutative", comm, "basis products do not commute");

  bool assoc = true;
  std::string w;
  for (int j = 0; j <= a.n && assoc; j++)
    for (int k = 0; j + k <= a.n && assoc; k++)
      for (int l = 0; j + k + l <= a.n && assoc; l++)
        for (int p = 0; p < a.dims[j] && assoc; p++)
          for (int q = 0; q < a.dims[k] && assoc; q++)
            for (int s = 0; s < a.dims[l] && assoc; s++) {
              Vec xy = a.basis_product(j, p, k, q);
              Vec left(a.dims[j + k + l]);
              for (int r = 0; r < a.dims[j + k]; r++)
                if (!xy[r].is_zero()) {
                  Vec t = a.basis_product(j + k, r, l, s);
                  for (int c = 0; c < a.dims[j + k + l]; c++) left[c] += xy[r] * t[c];
                }
              Vec yz = a.basis_product(k, q, l, s);
              Vec right(a.dims[j + k + l]);
              for (int r = 0; r < a.dims[k + l]; r++)
                if (!yz[r].is_zero()) {
                  Vec t = a.basis_product(j, p, k + l, r);
                  for (int c = 0; c < a.dims[j + k + l]; c++) right[c] += yz[r] * t[c];
                }
              assoc = left == right;
              if (!assoc)
                w = "degrees (" + std::to_string(j) + "," + std::to_string(k) + "," +
                    std::to_string(l) + ") indices (" + std::to_string(p) + "," +
                    std::to_string(q) + "," + std::to_string(s) + ")";
            }
  rep.require("associative", assoc, w);
  return rep;
}

// Free truncated polynomial algebra with its monomial bookkeeping. Monomials
// of a fixed degree are ordered by exponent vector, lexicographically
// descending, e.g. t1^2 > t1 t2 > t2^2.
struct SymAlgebra {
  GradedArtinAlgebra alg;
  int vars = 0;
  std::vector<std::vector<std::vector<int>>> monomials;   // [degree][index] -> exponents
  std::vector<std::map<std::vector<int>, int>> index;     // [degree]: exponents -> index

  int index_of(int degree, const std::vector<int>& e) const { return index[degree].at(e); }
};

namespace detail {
inline void enum_monomials(int vars, int degree, int var, std::vector<int>& cur,
                           std::vector<std::vector<int>>& out) {
  if (var == vars - 1) {
    cur[var] = degree;
    out.push_back(cur);
    return;
  }
  for (int e = degree; e >= 0; e--) {
    cur[var] = e;
    enum_monomials(vars, degree - e, var + 1, cur, out);
  }
}
}  // namespace detail

inline SymAlgebra sym_truncated(int vars, int n) {
  if (vars < 0 || n < 0) throw std::invalid_argument("sym_truncated: bad arguments");
  SymAlgebra s;
  s.vars = vars;
  s.alg.n = n;
  s.monomials.resize(n + 1);
  s.index.resize(n + 1);
  for (int k = 0; k <= n; k++) {
    std::vector<int> cur(std::max(vars, 1));
    if (vars == 0) {
      if (k == 0) s.monomials[k].push_back({});
    } else {
      detail::enum_monomials(vars, k, 0, cur, s.monomials[k]);
    }
    for (int i = 0; i < static_cast<int>(s.monomials[k].size()); i++)
      s.index[k][s.monomials[k][i]] = i;
    s.alg.dims.push_back(static_cast<int>(s.monomials[k].size()));
  }
  s.alg.mult.assign(n + 1, std::vector<Matrix>(n + 1));
  for (int j = 0; j <= n; j++)
    for (int k = 0; j + k <= n; k++) {
      Matrix t(s.alg.dims[j] * s.alg.dims[k], s.alg.dims[j + k]);
      for (int p = 0; p < s.alg.dims[j]; p++)
        for (int q = 0; q < s.alg.dims[k]; q++) {
          std::vector<int> e = s.monomials[j][p];
          for (std::size_t v = 0; v < e.size(); v++) e[v] += s.monomials[k][q][v];
          t.at(p * s.alg.dims[k] + q, s.index_of(j + k, e)) = Scalar(1);
        }
      s.alg.mult[j][k] = std::move(t);
    }
  return s;
}

// Homogeneous ideal given by generator spans per degree.
struct IdealData {
  std::vector<Subspace> generators;  // index = degree; empty spans allowed
};

// Degree-wise span of the ideal generated by `gens` inside algebra a:
// I_k = gens_k + I_{k-1} * Gr^1.
inline std::vector<Subspace> saturate_ideal(const GradedArtinAlgebra& a, const IdealData& gens) {
  std::vector<Subspace> sat(a.n + 1, Subspace::zero(0));
  for (int k = 0; k <= a.n; k++) {
    std::vector<Vec> rows;
    if (k < static_cast<int>(gens.generators.size()) && gens.generators[k].ambient != 0) {
      if (gens.generators[k].ambient != a.dims[k])
        throw std::invalid_argument("saturate_ideal: generator ambient mismatch in degree " +
                                    std::to_string(k));
      for (int i = 0; i < gens.generators[k].dim(); i++)
        rows.push_back(gens.generators[k].basis.row(i));
    }
    if (k >= 1) {
      const Matrix& t = a.mult[k - 1][1];
      for (int i = 0; i < sat[k - 1].dim(); i++) {
        Vec w = sat[k - 1].basis.row(i);
        for (int v = 0; v < a.dims[1]; v++) {
          Vec prod(a.dims[k]);
          for (int p = 0; p < a.dims[k - 1]; p++) {
            if (w[p].is_zero()) continue;
            int row = p * a.dims[1] + v;
            for (int c = 0; c < a.dims[k]; c++) {
              const Scalar& m = t.at(row, c);
              if (!m.is_zero()) prod[c] += w[p] * m;
            }
          }
          rows.push_back(std::move(prod));
        }
      }
    }
    Matrix m = from_rows(rows, a.dims[k]);
    sat[k] = rows.empty() ? Subspace::zero(a.dims[k]) : Subspace::span_rows(m);
  }
  return sat;
}

// Quotient of a free truncated algebra by a homogeneous ideal. Quotient bases
// are the non-pivot monomials of each degree.
struct ConeRing {
  SymAlgebra sym;
  GradedArtinAlgebra ring;
  std::vector<Subspace> ideal;                  // saturated, per degree
  std::vector<Matrix> proj;                     // Pi_k coords of a Sym^k vector: dims (ring.dims[k] x sym dims)
  std::vector<Matrix> lift;                     // monomial section: (sym dims x ring.dims[k])
  std::vector<std::vector<int>> basis_monomial; // per degree: monomial index of each ring basis vector
};

inline ConeRing quotient_by_ideal(const SymAlgebra& sym, const IdealData& gens) {
  ConeRing c;
  c.sym = sym;
  c.ideal = saturate_ideal(sym.alg, gens);
  int n = sym.alg.n;
  c.ring.n = n;
  c.proj.resize(n + 1);
  c.lift.resize(n + 1);
  c.basis_monomial.resize(n + 1);
  for (int k = 0; k <= n; k++) {
    int sd = sym.alg.dims[k];
    const Subspace& I = c.ideal[k];
    std::vector<bool> is_pivot(sd, false);
    for (int p : I.pivots) is_pivot[p] = true;
    std::vector<int> keep;
    for (int j = 0; j < sd; j++)
      if (!is_pivot[j]) keep.push_back(j);
    int qd = static_cast<int>(keep.size());
    c.ring.dims.push_back(qd);
    c.basis_monomial[k] = keep;
    Matrix proj(qd, sd), lift(sd, qd);
    for (int i = 0; i < qd; i++) {
      proj.at(i, keep[i]) = Scalar(1);
      lift.at(keep[i], i) = Scalar(1);
    }
    for (int r = 0; r < I.dim(); r++)
      for (int i = 0; i < qd; i++) proj.at(i, I.pivots[r]) = -I.basis.at(r, keep[i]);
    c.proj[k] = std::move(proj);
    c.lift[k] = std::move(lift);
  }
  c.ring.mult.assign(n + 1, std::vector<Matrix>(n + 1));
  for (int j = 0; j <= n; j++)
    for (int k = 0; j + k <= n; k++) {
      Matrix t(c.ring.dims[j] * c.ring.dims[k], c.ring.dims[j + k]);
      for (int p = 0; p < c.ring.dims[j]; p++)
        for (int q = 0; q < c.ring.dims[k]; q++) {
          std::vector<int> e = sym.monomials[j][c.basis_monomial[j][p]];
          const std::vector<int>& f = sym.monomials[k][c.basis_monomial[k][q]];
          for (std::size_t v = 0; v < e.size(); v++) e[v] += f[v];
          Vec unit(sym.alg.dims[j + k]);
          unit[sym.index_of(j + k, e)] = Scalar(1);
          Vec red = matvec(c.proj[j + k], unit);
          t.set_row(p * c.ring.dims[k] + q, red);
        }
      c.ring.mult[j][k] = std::move(t);
    }
  return c;
}

// Quadratic cone ring: Sym(t_1..t_v)/I with I generated by I_2 only.
inline ConeRing quotient_cone(int h1_dim, const Subspace& i2, int n) {
  SymAlgebra sym = sym_truncated(h1_dim, n);
  if (n >= 2 && i2.ambient != sym.alg.dims[2])
    throw std::invalid_argument("quotient_cone: I2 ambient must be dim Sym^2");
  IdealData gens;
  gens.generators.resize(n + 1, Subspace::zero(0));
  if (n >= 2) gens.generators[2] = i2;
  for (int k = 0; k <= n; k++)
    if (gens.generators[k].ambient == 0) gens.generators[k] = Subspace::zero(sym.alg.dims[k]);
  return quotient_by_ideal(sym, gens);
}

// Power of the maximal ideal computed from actual products: m^k is spanned by
// products of m^{k-1} basis vectors with m basis vectors.
inline Subspace maximal_ideal_power(const GradedArtinAlgebra& a, int k) {
  int total = a.total_dim();
  std::vector<Vec> mrows;
  for (int i = a.dims[0]; i < total; i++) {
    Vec v(total);
    v[i] = Scalar(1);
    mrows.push_back(std::move(v));
  }
  Subspace m = mrows.empty() ? Subspace::zero(total)
                             : Subspace::span_rows(from_rows(mrows, total));
  if (k <= 0) return Subspace::full(total);
  Subspace cur = m;
  for (int e = 2; e <= k; e++) {
    std::vector<Vec> rows;
    for (int i = 0; i < cur.dim(); i++)
      for (int j = 0; j < m.dim(); j++)
        rows.push_back(alg_mul(a, cur.basis.row(i), m.basis.row(j)));
    cur = rows.empty() ? Subspace::zero(total) : Subspace::span_rows(from_rows(rows, total));
  }
  return cur;
}

// Truncation-filtration steps W_0 >= W_{-1} >= ... >= W_{-(n+1)} = 0, where
// W_{-k} is spanned by the degrees >= k. Index in the result is k.
inline std::vector<Subspace> weight_filtration(const GradedArtinAlgebra& a) {
  std::vector<Subspace> w;
  int total = a.total_dim();
  for (int k = 0; k <= a.n + 1; k++) {
    int off = k <= a.n ? a.offset(k) : total;
    Matrix rows(total - off, total);
    for (int i = 0; i < total - off; i++) rows.at(i, off + i) = Scalar(1);
    w.push_back(Subspace::span_rows(rows));
  }
  return w;
}

// Degree-wise tensor product of truncated algebras, with the block table kept
// for ideal bookkeeping: degree k splits into blocks Gr^ja (x) Gr^jb.
struct BlockAlgebra {
  GradedArtinAlgebra alg;
  // per degree: (ja, jb, offset within degree)
  std::vector<std::vector<std::array<int, 3>>> blocks;

  int block_offset(int degree, int ja) const {
    for (auto& b : blocks[degree])
      if (b[0] == ja) return b[2];
    throw std::invalid_argument("no such block");
  }
};

inline BlockAlgebra tensor_product(const GradedArtinAlgebra& a, const GradedArtinAlgebra& b, int n) {
  BlockAlgebra t;
  t.alg.n = n;
  t.blocks.resize(n + 1);
  for (int k = 0; k <= n; k++) {
    int dim = 0;
    for (int ja = 0; ja <= std::min(k, a.n); ja++) {
      int jb = k - ja;
      if (jb > b.n) continue;
      t.blocks[k].push_back({ja, jb, dim});
      dim += a.dims[ja] * b.dims[jb];
    }
    t.alg.dims.push_back(dim);
  }
  t.alg.mult.assign(n + 1, std::vector<Matrix>(n + 1));
  for (int j = 0; j <= n; j++)
    for (int k = 0; j + k <= n; k++) {
      Matrix m(t.alg.dims[j] * t.alg.dims[k], t.alg.dims[j + k]);
      for (auto& bj : t.blocks[j])
        for (auto& bk : t.blocks[k]) {
          int ja = bj[0], jb = bj[1], ka = bk[0], kb = bk[1];
          if (ja + ka > a.n || jb + kb > b.n) continue;  // truncated in a factor
          int out_off = t.block_offset(j + k, ja + ka);
          const Matrix& ma = a.mult[ja][ka];
          const Matrix& mb = b.mult[jb][kb];
          for (int pa = 0; pa < a.dims[ja]; pa++)
            for (int pb = 0; pb < b.dims[jb]; pb++)
              for (int qa = 0; qa < a.dims[ka]; qa++)
                for (int qb = 0; qb < b.dims[kb]; qb++) {
                  int row = (bj[2] + pa * b.dims[jb] + pb) * t.alg.dims[k] +
                            (bk[2] + qa * b.dims[kb] + qb);
                  for (int ra = 0; ra < a.dims[ja + ka]; ra++) {
                    const Scalar& ca = ma.at(pa * a.dims[ka] + qa, ra);
                    if (ca.is_zero()) continue;
                    for (int rb = 0; rb < b.dims[jb + kb]; rb++) {
                      const Scalar& cb = mb.at(pb * b.dims[kb] + qb, rb);
                      if (!cb.is_zero())
                        m.at(row, out_off + ra * b.dims[jb + kb] + rb) = ca * cb;
                    }
                  }
                }
        }
      t.alg.mult[j][k] = std::move(m);
    }
  return t;
}

// Symmetric-pair index bookkeeping for quadratic data on Sym^2 of an h-dim
// space: pairs (a<=b) in the monomial order of sym_truncated, which lists
// t_a t_b with a ascending then b ascending.
inline int sym2_dim(int h) { return h * (h + 1) / 2; }
inline int sym2_index(int h, int a, int b) {
  if (a > b) std::swap(a, b);
  // monomial (a,b) has exponent vector with e[a], e[b] incremented; in the
  // lex-descending order of sym_truncated the index is:
  int idx = 0;
  for (int i = 0; i < a; i++) idx += h - i;
  return idx + (b - a);
}

}  // namespace gmdef
