#pragma once
#include <optional>

#include "gmdef/dgla.hpp"
#include "gmdef/matrix.hpp"
#include "gmdef/report.hpp"

namespace gmdef {

// signed 1-based generator indices: +k is generator k-1, -k its inverse
using Word = std::vector<int>;

inline Word free_reduce(const Word& w) {
  Word out;
  for (int letter : w) {
    if (!out.empty() && out.back() == -letter)
      out.pop_back();
    else
      out.push_back(letter);
  }
  return out;
}

inline Word inverse_word(const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
  return out;
}

inline bool is_reduced(const Word& w) {
  for (std::size_t i = 0; i + 1 < w.size(); i++)
    if (w[i] == -w[i + 1]) return false;
  return true;
}

struct Presentation {
  int gens = 0;
  std::vector<Word> relations;
};

struct Representation {
  std::vector<Matrix> images;  // one invertible N x N matrix per generator
  std::optional<Subspace> lie_subalgebra;  // rows in flattened N^2 coords
};

// flattened End(V) index: matrix entry (r,c) at r*n + c
inline Vec flatten(const Matrix& m) {
  Vec v(m.rows * m.cols);
  for (int r = 0; r < m.rows; r++)
    for (int c = 0; c < m.cols; c++) v[r * m.cols + c] = m.at(r, c);
  return v;
}

inline Matrix unflatten(const Vec& v, int n) {
  Matrix m(n, n);
  for (int r = 0; r < n; r++)
    for (int c = 0; c < n; c++) m.at(r, c) = v[r * n + c];
  return m;
}

// matrix of u -> g u g^{-1} on flattened End(V)
inline Matrix ad_operator(const Matrix& g, const Matrix& ginv) {
  int n = g.rows;
  Matrix a(n * n, n * n);
  for (int r = 0; r < n; r++)
    for (int c = 0; c < n; c++)
      for (int rr = 0; rr < n; rr++)
        for (int cc = 0; cc < n; cc++)
          a.at(rr * n + cc, r * n + c) = g.at(rr, r) * ginv.at(c, cc);
  return a;
}

inline Matrix rep_of_word(const Presentation& p, const Representation& r, const Word& w) {
  int n = r.images.empty() ? 0 : r.images[0].rows;
  Matrix m = Matrix::identity(n);
  for (int letter : w) {
    int j = std::abs(letter) - 1;
    if (j < 0 || j >= p.gens) throw std::invalid_argument("word uses unknown generator");
    if (letter > 0) {
      m = mul(m, r.images[j]);
    } else {
      std::optional<Matrix> inv = inverse(r.images[j]);
      if (!inv) throw model_error("generator image is singular");
      m = mul(m, *inv);
    }
  }
  return m;
}

inline Report validate_rep(const Presentation& p, const Representation& r) {
  Report rep;
  bool shapes = static_cast<int>(r.images.size()) == p.gens && p.gens >= 0;
  int n = r.images.empty() ? 0 : r.images[0].rows;
  for (auto& m : r.images)
    if (m.rows != n || m.cols != n) shapes = false;
  rep.require("shapes", shapes, "need one square matrix per generator");
  if (!shapes) return rep;

  bool invertible = true;
  for (auto& m : r.images)
    if (rank_of(m) != n) invertible = false;
  rep.require("invertible", invertible, "a generator image is singular");
  if (!invertible) return rep;

  bool reduced = true;
  for (auto& w : p.relations)
    if (!is_reduced(w)) reduced = false;
  rep.require("relations.reduced", reduced, "a relation word is not freely reduced");

  bool holds = true;
  std::string witness;
  for (std::size_t i = 0; i < p.relations.size(); i++)
    if (!(rep_of_word(p, r, p.relations[i]) == Matrix::identity(n))) {
      holds = false;
      witness = "relation " + std::to_string(i);
      break;
    }
  rep.require("relations.hold", holds, witness);

  if (r.lie_subalgebra) {
    const Subspace& s = *r.lie_subalgebra;
    bool amb = s.ambient == n * n;
    rep.require("subalgebra.ambient", amb, "subalgebra must live in flattened End(V)");
    if (amb) {
      bool closed = true;
      for (int a = 0; a < s.dim() && closed; a++)
        for (int b = 0; b < s.dim() && closed; b++) {
          Matrix x = unflatten(s.basis.row(a), n), y = unflatten(s.basis.row(b), n);
          Matrix comm = sub(mul(x, y), mul(y, x));
          closed = s.contains(flatten(comm));
        }
      rep.require("subalgebra.bracket_closed", closed);
      bool inv = true;
      for (int j = 0; j < p.gens && inv; j++) {
        Matrix ginv = *inverse(r.images[j]);
        for (int a = 0; a < s.dim() && inv; a++) {
          Matrix conj = mul(r.images[j], mul(unflatten(s.basis.row(a), n), ginv));
          inv = s.contains(flatten(conj));
        }
      }
      rep.require("subalgebra.ad_invariant", inv);
    }
  }
  return rep;
}

// Cached per-representation data: module coordinates and Ad-operators. The
// coefficient module is End(V) or the declared subalgebra.
struct RepContext {
  Presentation pres;
  int n = 0;
  int mdim = 0;
  Matrix module_basis;  // mdim x n^2, rows
  std::vector<Matrix> ad, ad_inv;  // module operators per generator
};

namespace detail {
inline Matrix module_op(const Matrix& basis, const Matrix& op_n2) {
  // conjugate an End(V) operator into module coordinates
  int mdim = basis.rows;
  Matrix out(mdim, mdim);
  for (int c = 0; c < mdim; c++) {
    Vec img = matvec(op_n2, basis.row(c));
    std::optional<Vec> coords = coords_in_rows(basis, img);
    if (!coords) throw model_error("module is not invariant under the group action");
    for (int r2 = 0; r2 < mdim; r2++) out.at(r2, c) = (*coords)[r2];
  }
  return out;
}
}  // namespace detail

inline RepContext rep_context(const Presentation& p, const Representation& r) {
  RepContext ctx;
  ctx.pres = p;
  ctx.n = r.images.empty() ? 0 : r.images[0].rows;
  if (r.lie_subalgebra) {
    ctx.module_basis = r.lie_subalgebra->basis;
  } else {
    ctx.module_basis = Matrix::identity(ctx.n * ctx.n);
  }
  ctx.mdim = ctx.module_basis.rows;
  bool full = !r.lie_subalgebra.has_value();
  for (int j = 0; j < p.gens; j++) {
    std::optional<Matrix> inv = inverse(r.images[j]);
    if (!inv) throw model_error("generator image is singular");
    Matrix a = ad_operator(r.images[j], *inv);
    Matrix ai = ad_operator(*inv, r.images[j]);
    ctx.ad.push_back(full ? std::move(a) : detail::module_op(ctx.module_basis, a));
    ctx.ad_inv.push_back(full ? std::move(ai) : detail::module_op(ctx.module_basis, ai));
  }
  return ctx;
}

// Ad of a word as a module operator
inline Matrix word_ad(const RepContext& ctx, const Word& w) {
  Matrix m = Matrix::identity(ctx.mdim);
  for (int letter : w) {
    int j = std::abs(letter) - 1;
    m = mul(m, letter > 0 ? ctx.ad[j] : ctx.ad_inv[j]);
  }
  return m;
}

// Fox derivative of a word with respect to generator j, evaluated through Ad
inline Matrix fox_derivative(const RepContext& ctx, const Word& w, int j) {
  Matrix out(ctx.mdim, ctx.mdim);
  Matrix prefix = Matrix::identity(ctx.mdim);
  for (int letter : w) {
    int k = std::abs(letter) - 1;
    if (letter > 0) {
      if (k == j) out = add(out, prefix);
      prefix = mul(prefix, ctx.ad[k]);
    } else {
      prefix = mul(prefix, ctx.ad_inv[k]);
      if (k == j) out = sub(out, prefix);
    }
  }
  return out;
}

struct CochainComplex {
  Matrix d0;  // (gens*mdim) x mdim
  Matrix d1;  // (rels*mdim) x (gens*mdim)
};

inline CochainComplex cochain_complex(const RepContext& ctx) {
  int m = ctx.mdim, gens = ctx.pres.gens;
  int rels = static_cast<int>(ctx.pres.relations.size());
  CochainComplex cc;
  cc.d0 = Matrix(gens * m, m);
  for (int j = 0; j < gens; j++) {
    Matrix block = sub(ctx.ad[j], Matrix::identity(m));
    for (int r = 0; r < m; r++)
      for (int c = 0; c < m; c++) cc.d0.at(j * m + r, c) = block.at(r, c);
  }
  cc.d1 = Matrix(rels * m, gens * m);
  for (int i = 0; i < rels; i++)
    for (int j = 0; j < gens; j++) {
      Matrix block = fox_derivative(ctx, ctx.pres.relations[i], j);
      for (int r = 0; r < m; r++)
        for (int c = 0; c < m; c++) cc.d1.at(i * m + r, j * m + c) = block.at(r, c);
    }
  return cc;
}

struct GroupCohomology {
  std::vector<int> h_dims;  // H0, H1, H2
  Matrix h0, h1, h2;        // representative rows in C0, C1, C2
  CochainComplex cc;
  int mdim = 0;
};

inline GroupCohomology rep_cohomology(const RepContext& ctx) {
  GroupCohomology g;
  g.cc = cochain_complex(ctx);
  g.mdim = ctx.mdim;
  int c2dim = g.cc.d1.rows;
  Subspace ker0 = Subspace::span_rows(kernel_basis_rows(g.cc.d0));
  g.h0 = ker0.basis;
  Subspace ker1 = Subspace::span_rows(kernel_basis_rows(g.cc.d1));
  Subspace im0 = image_rows(g.cc.d0);
  g.h1 = complement_rows(im0, ker1);
  Subspace im1 = image_rows(g.cc.d1);
  g.h2 = complement_rows(im1, Subspace::full(c2dim));
  g.h_dims = {g.h0.rows, g.h1.rows, g.h2.rows};
  return g;
}

// evaluate a 1-cochain on a word by the cocycle rule
inline Vec cocycle_eval(const RepContext& ctx, const Vec& z, const Word& w) {
  Vec val(ctx.mdim);
  Matrix prefix = Matrix::identity(ctx.mdim);
  auto letter_block = [&](int j) {
    Vec b(ctx.mdim);
    for (int r = 0; r < ctx.mdim; r++) b[r] = z[j * ctx.mdim + r];
    return b;
  };
  for (int letter : w) {
    int j = std::abs(letter) - 1;
    if (letter > 0) {
      Vec t = matvec(prefix, letter_block(j));
      for (int r = 0; r < ctx.mdim; r++) val[r] += t[r];
      prefix = mul(prefix, ctx.ad[j]);
    } else {
      prefix = mul(prefix, ctx.ad_inv[j]);
      Vec t = matvec(prefix, letter_block(j));
      for (int r = 0; r < ctx.mdim; r++) val[r] -= t[r];
    }
  }
  return val;
}

inline Vec module_bracket(const RepContext& ctx, const Vec& u, const Vec& v) {
  Matrix x(ctx.n, ctx.n), y(ctx.n, ctx.n);
  Vec uf(ctx.n * ctx.n), vf(ctx.n * ctx.n);
  for (int r = 0; r < ctx.mdim; r++) {
    if (!u[r].is_zero())
      for (int c = 0; c < ctx.n * ctx.n; c++) uf[c] += u[r] * ctx.module_basis.at(r, c);
    if (!v[r].is_zero())
      for (int c = 0; c < ctx.n * ctx.n; c++) vf[c] += v[r] * ctx.module_basis.at(r, c);
  }
  x = unflatten(uf, ctx.n);
  y = unflatten(vf, ctx.n);
  Matrix comm = sub(mul(x, y), mul(y, x));
  std::optional<Vec> coords = coords_in_rows(ctx.module_basis, flatten(comm));
  if (!coords) throw model_error("module is not bracket closed");
  return *coords;
}

// prefix-sum cup product of 1-cochains, one module block per relation
inline Vec cup_eval(const RepContext& ctx, const Vec& u, const Vec& v) {
  int rels = static_cast<int>(ctx.pres.relations.size());
  Vec out(rels * ctx.mdim);
  auto letter_block = [&](const Vec& z, int j) {
    Vec b(ctx.mdim);
    for (int r = 0; r < ctx.mdim; r++) b[r] = z[j * ctx.mdim + r];
    return b;
  };
  for (int i = 0; i < rels; i++) {
    const Word& w = ctx.pres.relations[i];
    Vec uval(ctx.mdim);
    Matrix prefix = Matrix::identity(ctx.mdim);
    for (std::size_t pos = 0; pos < w.size(); pos++) {
      int letter = w[pos];
      int j = std::abs(letter) - 1;
      if (letter > 0) {
        // chain piece [p_i, x_j]: term [u(p_i), Ad(p_i) v(x_j)]
        if (pos >= 1) {
          Vec term = module_bracket(ctx, uval, matvec(prefix, letter_block(v, j)));
          for (int r = 0; r < ctx.mdim; r++) out[i * ctx.mdim + r] += term[r];
        }
        Vec t = matvec(prefix, letter_block(u, j));
        for (int r = 0; r < ctx.mdim; r++) uval[r] += t[r];
        prefix = mul(prefix, ctx.ad[j]);
      } else {
        // chain piece -[p_i x_j^-1, x_j]: advance first so the Fox boundary
        // of the relation cell matches d^1 on inverse letters
        prefix = mul(prefix, ctx.ad_inv[j]);
        Vec t = matvec(prefix, letter_block(u, j));
        for (int r = 0; r < ctx.mdim; r++) uval[r] -= t[r];
        Vec term = module_bracket(ctx, uval, matvec(prefix, letter_block(v, j)));
        for (int r = 0; r < ctx.mdim; r++) out[i * ctx.mdim + r] -= term[r];
      }
    }
  }
  return out;
}

// class of a 2-cochain in the chosen H^2 basis
inline std::optional<Vec> h2_class(const GroupCohomology& g, const Vec& v) {
  Matrix a = transpose(g.h2);
  a = hstack(a, g.cc.d1);
  std::optional<Vec> sol = solve_particular(a, v);
  if (!sol) return std::nullopt;
  Vec coords(g.h2.rows);
  for (int j = 0; j < g.h2.rows; j++) coords[j] = (*sol)[j];
  return coords;
}

inline std::optional<Vec> h1_class(const GroupCohomology& g, const Vec& v) {
  if (!vec_is_zero(matvec(g.cc.d1, v))) return std::nullopt;
  Matrix a = transpose(g.h1);
  a = hstack(a, g.cc.d0);
  std::optional<Vec> sol = solve_particular(a, v);
  if (!sol) return std::nullopt;
  Vec coords(g.h1.rows);
  for (int j = 0; j < g.h1.rows; j++) coords[j] = (*sol)[j];
  return coords;
}

// symmetric bilinear obstruction pairing Sym^2 H^1 -> H^2: the (a,b) row is
// the class of u_a cup u_b + u_b cup u_a
inline Matrix cup_obstruction(const RepContext& ctx, const GroupCohomology& g) {
  int h1 = g.h_dims[1], h2 = g.h_dims[2];
  Matrix b(sym2_dim(h1), h2);
  for (int p = 0; p < h1; p++)
    for (int q = p; q < h1; q++) {
      Vec s = vec_add(cup_eval(ctx, g.h1.row(p), g.h1.row(q)),
                      cup_eval(ctx, g.h1.row(q), g.h1.row(p)));
      std::optional<Vec> cls = h2_class(g, s);
      if (!cls) throw std::logic_error("cup of cocycles did not land in C^2");
      b.set_row(sym2_index(h1, p, q), *cls);
    }
  return b;
}

struct FormalPackage {
  Dgla dgla;
  Augmentation aug;
};

// formal dgla on (H^0, H^1, H^2) with zero differential; brackets from the
// module bracket in degree 0 and the cup pairing in degree 1
inline FormalPackage to_formal_dgla(const RepContext& ctx, const GroupCohomology& g,
                                    const std::vector<Bitype>& h1_types = {},
                                    const std::vector<Bitype>& h2_types = {}) {
  FormalPackage out;
  Dgla& l = out.dgla;
  l.max_degree = 2;
  l.dims = g.h_dims;
  l.d.resize(3);
  for (int i = 0; i <= 2; i++) l.d[i] = Matrix(i + 1 <= 2 ? l.dims[i + 1] : 0, l.dims[i]);
  l.bracket.assign(3, std::vector<Matrix>(3));
  int h0 = l.dims[0], h1 = l.dims[1], h2 = l.dims[2];

  Matrix b00(h0 * h0, h0);
  for (int p = 0; p < h0; p++)
    for (int q = 0; q < h0; q++) {
      Vec br = module_bracket(ctx, g.h0.row(p), g.h0.row(q));
      std::optional<Vec> coords = coords_in_rows(g.h0, br);
      if (!coords) throw std::logic_error("invariants are not bracket closed");
      b00.set_row(p * h0 + q, *coords);
    }
  l.bracket[0][0] = std::move(b00);

  // pointwise bracket of an invariant with a cochain, blockwise
  auto pointwise = [&](const Vec& u0, const Vec& z, int blocks) {
    Vec outv(blocks * ctx.mdim);
    for (int blk = 0; blk < blocks; blk++) {
      Vec zb(ctx.mdim);
      for (int r = 0; r < ctx.mdim; r++) zb[r] = z[blk * ctx.mdim + r];
      Vec t = module_bracket(ctx, u0, zb);
      for (int r = 0; r < ctx.mdim; r++) outv[blk * ctx.mdim + r] = t[r];
    }
    return outv;
  };

  int rels = static_cast<int>(ctx.pres.relations.size());
  Matrix b01(h0 * h1, h1), b02(h0 * h2, h2);
  for (int p = 0; p < h0; p++) {
    for (int q = 0; q < h1; q++) {
      std::optional<Vec> cls = h1_class(g, pointwise(g.h0.row(p), g.h1.row(q), ctx.pres.gens));
      if (!cls) throw std::logic_error("bracket with invariant left the cocycles");
      b01.set_row(p * h1 + q, *cls);
    }
    for (int q = 0; q < h2; q++) {
      std::optional<Vec> cls = h2_class(g, pointwise(g.h0.row(p), g.h2.row(q), rels));
      if (!cls) throw std::logic_error("bracket with invariant failed in degree 2");
      b02.set_row(p * h2 + q, *cls);
    }
  }
  Matrix b10(h1 * h0, h1), b20(h2 * h0, h2);
  for (int p = 0; p < h1; p++)
    for (int q = 0; q < h0; q++) {
      Vec v = b01.row(q * h1 + p);
      for (auto& s : v) s = -s;
      b10.set_row(p * h0 + q, v);
    }
  for (int p = 0; p < h2; p++)
    for (int q = 0; q < h0; q++) {
      Vec v = b02.row(q * h2 + p);
      for (auto& s : v) s = -s;
      b20.set_row(p * h0 + q, v);
    }
  l.bracket[0][1] = std::move(b01);
  l.bracket[1][0] = std::move(b10);
  l.bracket[0][2] = std::move(b02);
  l.bracket[2][0] = std::move(b20);

  Matrix cup = cup_obstruction(ctx, g);
  Matrix b11(h1 * h1, h2);
  for (int p = 0; p < h1; p++)
    for (int q = 0; q < h1; q++) b11.set_row(p * h1 + q, cup.row(sym2_index(h1, p, q)));
  l.bracket[1][1] = std::move(b11);

  if (!h1_types.empty() || !h2_types.empty()) {
    if (static_cast<int>(h1_types.size()) != h1 || static_cast<int>(h2_types.size()) != h2)
      throw model_error("bigrading must label every H^1 and H^2 basis vector");
    l.types.resize(3);
    l.types[0].assign(h0, Bitype{0, 0});
    l.types[1] = h1_types;
    l.types[2] = h2_types;
  }

  Report rep = validate_dgla(l);
  if (!rep.ok()) throw model_error("formal dgla failed validation: " + rep.first_failure());

  out.aug.g_dim = ctx.mdim;
  Matrix gb(ctx.mdim * ctx.mdim, ctx.mdim);
  for (int p = 0; p < ctx.mdim; p++)
    for (int q = 0; q < ctx.mdim; q++) {
      Vec ep(ctx.mdim), eq(ctx.mdim);
      ep[p] = Scalar(1);
      eq[q] = Scalar(1);
      gb.set_row(p * ctx.mdim + q, module_bracket(ctx, ep, eq));
    }
  out.aug.g_bracket = std::move(gb);
  out.aug.eps = transpose(g.h0);
  return out;
}

// standard surface-group presentation: generators a_1..a_g, b_1..b_g and the
// single relation prod [a_i, b_i]
inline Presentation surface_presentation(int genus) {
  Presentation p;
  p.gens = 2 * genus;
  Word w;
  for (int i = 1; i <= genus; i++) {
    int a = i, b = genus + i;
    w.push_back(a);
    w.push_back(b);
    w.push_back(-a);
    w.push_back(-b);
  }
  p.relations.push_back(w);
  return p;
}

}  // namespace gmdef
