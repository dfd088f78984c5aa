#pragma once
#include <functional>

#include "gmdef/artin.hpp"
#include "gmdef/dgla.hpp"

namespace gmdef {

struct CoefficientRing {
  GradedArtinAlgebra algebra;
};

// element of V (x) A for a graded piece V of a dgla (or an ambient Lie
// algebra): one coefficient matrix per m-degree, c[k] of shape vdim x dims[k]
struct RingTensor {
  int vdim = 0;
  std::vector<Matrix> c;
};

inline RingTensor rt_zero(int vdim, const GradedArtinAlgebra& a) {
  RingTensor t;
  t.vdim = vdim;
  for (int k = 0; k <= a.n; k++) t.c.emplace_back(vdim, a.dims[k]);
  return t;
}

inline bool rt_is_zero(const RingTensor& x) {
  for (auto& m : x.c)
    if (!m.is_zero()) return false;
  return true;
}

inline RingTensor rt_add(const RingTensor& x, const RingTensor& y) {
  RingTensor z = x;
  for (std::size_t k = 0; k < z.c.size(); k++) z.c[k] = add(z.c[k], y.c[k]);
  return z;
}

inline RingTensor rt_sub(const RingTensor& x, const RingTensor& y) {
  RingTensor z = x;
  for (std::size_t k = 0; k < z.c.size(); k++) z.c[k] = sub(z.c[k], y.c[k]);
  return z;
}

inline RingTensor rt_scale(const Scalar& s, const RingTensor& x) {
  RingTensor z = x;
  for (auto& m : z.c) m = scale(s, m);
  return z;
}

inline bool rt_in_m(const RingTensor& x) { return x.c.empty() || x.c[0].is_zero(); }

inline RingTensor apply_linear(const Matrix& op, const RingTensor& x) {
  RingTensor z;
  z.vdim = op.rows;
  for (auto& m : x.c) z.c.push_back(mul(op, m));
  return z;
}

// bilinear extension over the ring of a bracket table br with rows indexed by
// (xa * ydim + yb)
inline RingTensor tensor_bracket(const Matrix& br, int ydim, const GradedArtinAlgebra& a,
                                 const RingTensor& x, const RingTensor& y) {
  int xdim = x.vdim, zdim = br.cols;
  if (br.rows != xdim * ydim || y.vdim != ydim)
    throw std::invalid_argument("tensor_bracket: shape mismatch");
  RingTensor out = rt_zero(zdim, a);
  for (int ju = 0; ju <= a.n; ju++) {
    if (x.c[ju].is_zero()) continue;
    for (int jv = 0; ju + jv <= a.n; jv++) {
      if (y.c[jv].is_zero()) continue;
      const Matrix& mt = a.mult[ju][jv];
      Matrix& dst = out.c[ju + jv];
      for (int p = 0; p < a.dims[ju]; p++)
        for (int q = 0; q < a.dims[jv]; q++) {
          Vec bz(zdim);
          bool any = false;
          for (int xa = 0; xa < xdim; xa++) {
            const Scalar& xs = x.c[ju].at(xa, p);
            if (xs.is_zero()) continue;
            for (int yb = 0; yb < ydim; yb++) {
              const Scalar& ys = y.c[jv].at(yb, q);
              if (ys.is_zero()) continue;
              Scalar c = xs * ys;
              int row = xa * ydim + yb;
              for (int z = 0; z < zdim; z++) {
                const Scalar& b = br.at(row, z);
                if (!b.is_zero()) {
                  bz[z] += c * b;
                  any = true;
                }
              }
            }
          }
          if (!any) continue;
          int mrow = p * a.dims[jv] + q;
          for (int r = 0; r < a.dims[ju + jv]; r++) {
            const Scalar& m = mt.at(mrow, r);
            if (m.is_zero()) continue;
            for (int z = 0; z < zdim; z++)
              if (!bz[z].is_zero()) dst.at(z, r) += bz[z] * m;
          }
        }
    }
  }
  return out;
}

struct MCElement {
  RingTensor zeta;                    // over L^1
  std::optional<RingTensor> framing;  // over the ambient g
};

struct GaugeElement {
  RingTensor lambda;  // over L^0
};

inline RingTensor mc_defect(const Dgla& l, const CoefficientRing& a, const MCElement& x) {
  if (l.max_degree < 2) throw std::invalid_argument("mc_defect: need degrees up to 2");
  if (x.zeta.vdim != l.dims[1] || static_cast<int>(x.zeta.c.size()) != a.algebra.n + 1)
    throw std::invalid_argument("mc_defect: shape mismatch");
  if (!rt_in_m(x.zeta)) throw std::invalid_argument("mc_defect: element not in L (x) m");
  RingTensor d = apply_linear(l.d[1], x.zeta);
  RingTensor half = rt_scale(Scalar(Rational(1, 2)),
                             tensor_bracket(l.bracket[1][1], l.dims[1], a.algebra, x.zeta, x.zeta));
  return rt_add(d, half);
}

// truncated Baker-Campbell-Hausdorff product in a nilpotent Lie algebra over
// m; exact while m^5 = 0, which covers the supported truncation orders
inline RingTensor bch(const GradedArtinAlgebra& a, const Matrix& bracket_table,
                      const RingTensor& x, const RingTensor& y) {
  if (!rt_in_m(x) || !rt_in_m(y)) throw std::invalid_argument("bch: arguments must lie in m");
  if (a.n > 4 && !rt_is_zero(x) && !rt_is_zero(y))
    throw std::invalid_argument("bch: truncation order beyond the supported series");
  auto br = [&](const RingTensor& u, const RingTensor& v) {
    return tensor_bracket(bracket_table, v.vdim, a, u, v);
  };
  RingTensor z = rt_add(x, y);
  RingTensor xy = br(x, y);
  z = rt_add(z, rt_scale(Scalar(rat(1, 2)), xy));
  RingTensor xxy = br(x, xy);
  RingTensor yyx = br(y, rt_scale(Scalar(-1), xy));
  z = rt_add(z, rt_scale(Scalar(rat(1, 12)), xxy));
  z = rt_add(z, rt_scale(Scalar(rat(1, 12)), yyx));
  z = rt_add(z, rt_scale(Scalar(rat(-1, 24)), br(y, xxy)));
  return z;
}

// exp(lambda) . alpha = alpha + sum_k ad^k/(k+1)! ([lambda, alpha] - d lambda);
// a framing transforms on the left by exp(eps(lambda))
inline MCElement gauge_act(const Dgla& l, const CoefficientRing& a, const GaugeElement& lam,
                           const MCElement& x, const Augmentation* aug = nullptr) {
  if (lam.lambda.vdim != l.dims[0]) throw std::invalid_argument("gauge_act: shape mismatch");
  if (!rt_in_m(lam.lambda)) throw std::invalid_argument("gauge_act: gauge element not in m");
  const GradedArtinAlgebra& alg = a.algebra;
  MCElement out = x;
  RingTensor cur = rt_sub(tensor_bracket(l.bracket[0][1], l.dims[1], alg, lam.lambda, x.zeta),
                          apply_linear(l.d[0], lam.lambda));
  Rational fact = 1;
  for (int k = 0; k < alg.n && !rt_is_zero(cur); k++) {
    fact *= k + 1;
    out.zeta = rt_add(out.zeta, rt_scale(Scalar(Rational(1) / fact), cur));
    cur = tensor_bracket(l.bracket[0][1], l.dims[1], alg, lam.lambda, cur);
  }
  if (x.framing) {
    if (!aug) throw std::invalid_argument("gauge_act: framing needs an augmentation");
    RingTensor eps_lam = apply_linear(aug->eps, lam.lambda);
    out.framing = bch(alg, aug->g_bracket, eps_lam, *x.framing);
  }
  return out;
}

struct GaugeFixResult {
  MCElement fixed;
  GaugeElement trans;
};

// Degreewise normalization: after the k-th step delta(zeta) and delta_g(z)
// vanish through m-degree k. The step gauge element is
//   lambda_k = delta(zeta_k) - iota delta_g(z_k + eps delta zeta_k),
// the unique choice killing both defects at once under the action convention
// used by gauge_act.
inline GaugeFixResult gauge_fix(const Dgla& l, const CoefficientRing& a, const Splitting& s,
                                const MCElement& x, const Augmentation* aug = nullptr,
                                const Cohomology* coh = nullptr) {
  const GradedArtinAlgebra& alg = a.algebra;
  bool framed = x.framing.has_value();
  if (framed && (!aug || !s.delta_g || !coh))
    throw std::invalid_argument("gauge_fix: framing needs augmentation, delta_g and cohomology");
  Matrix iota(0, 0);
  if (framed) iota = transpose(coh->h_basis[0]);

  GaugeFixResult r;
  r.fixed = x;
  r.trans.lambda = rt_zero(l.dims[0], alg);
  for (int k = 1; k <= alg.n; k++) {
    Matrix lam_k = mul(s.delta[1], r.fixed.zeta.c[k]);
    if (framed) {
      Matrix t = add(r.fixed.framing->c[k], mul(aug->eps, lam_k));
      lam_k = sub(lam_k, mul(iota, mul(*s.delta_g, t)));
    }
    if (lam_k.is_zero()) continue;
    GaugeElement step;
    step.lambda = rt_zero(l.dims[0], alg);
    step.lambda.c[k] = std::move(lam_k);
    r.fixed = gauge_act(l, a, step, r.fixed, aug);
    r.trans.lambda = bch(alg, l.bracket[0][0], step.lambda, r.trans.lambda);
  }
  for (int k = 1; k <= alg.n; k++) {
    if (!mul(s.delta[1], r.fixed.zeta.c[k]).is_zero())
      throw std::logic_error("gauge_fix: normalization did not converge");
    if (framed && !mul(*s.delta_g, r.fixed.framing->c[k]).is_zero())
      throw std::logic_error("gauge_fix: framing normalization did not converge");
  }
  return r;
}

struct KuranishiResult {
  ConeRing cone;
  Cohomology coh;            // harmonic representatives of the input model
  RingTensor universal;      // over cone.ring, coefficients in L^1
  IdealData raw_generators;  // residual harmonic obstructions per degree, in Sym coords
  std::vector<Bitype> var_types;                    // set when respect_grading
  std::vector<std::vector<Bitype>> monomial_types;  // per degree, when respect_grading
  Report grading;                                   // when respect_grading
};

namespace detail {
// every nonzero entry of a row block must sit in basis positions of one type
inline bool rows_pure(const Matrix& rows, const std::vector<Bitype>& types,
                      std::vector<Bitype>* out = nullptr) {
  for (int r = 0; r < rows.rows; r++) {
    bool found = false;
    Bitype t{0, 0};
    for (int c = 0; c < rows.cols; c++) {
      if (rows.at(r, c).is_zero()) continue;
      if (!found) {
        t = types[c];
        found = true;
      } else if (!(types[c] == t)) {
        return false;
      }
    }
    if (out) out->push_back(t);
  }
  return true;
}
}  // namespace detail

inline KuranishiResult kuranishi(const Dgla& l, const Splitting& s, const Augmentation* aug,
                                 int n, bool respect_grading = false) {
  if (l.max_degree < 2) throw std::invalid_argument("kuranishi: need degrees up to 2");
  if (n < 0) throw std::invalid_argument("kuranishi: negative truncation");
  KuranishiResult out;
  out.coh = cohomology(l, &s);
  int h1 = out.coh.h_dims[1];
  SymAlgebra sym = sym_truncated(h1, n);
  Matrix p2 = harmonic_projector(l, s, 2);

  // recursion over the free ring: zeta_1 is the tautological harmonic element,
  // zeta_k = -1/2 delta([zeta,zeta]_k), and the residual harmonic part of the
  // defect in each degree contributes ideal generators
  RingTensor zeta = rt_zero(l.dims[1], sym.alg);
  if (n >= 1) zeta.c[1] = transpose(out.coh.h_basis[1]);
  IdealData gens;
  gens.generators.assign(n + 1, Subspace::zero(0));
  for (int k = 0; k <= n; k++) gens.generators[k] = Subspace::zero(sym.alg.dims[k]);
  for (int k = 2; k <= n; k++) {
    Matrix bb(l.dims[2], sym.alg.dims[k]);
    for (int i = 1; i < k; i++) {
      int j = k - i;
      const Matrix& mt = sym.alg.mult[i][j];
      for (int p = 0; p < sym.alg.dims[i]; p++)
        for (int q = 0; q < sym.alg.dims[j]; q++) {
          Vec bz(l.dims[2]);
          bool any = false;
          for (int xa = 0; xa < l.dims[1]; xa++) {
            const Scalar& xs = zeta.c[i].at(xa, p);
            if (xs.is_zero()) continue;
            for (int yb = 0; yb < l.dims[1]; yb++) {
              const Scalar& ys = zeta.c[j].at(yb, q);
              if (ys.is_zero()) continue;
              Scalar cc = xs * ys;
              int row = xa * l.dims[1] + yb;
              for (int z = 0; z < l.dims[2]; z++) {
                const Scalar& b = l.bracket[1][1].at(row, z);
                if (!b.is_zero()) {
                  bz[z] += cc * b;
                  any = true;
                }
              }
            }
          }
          if (!any) continue;
          int mrow = p * sym.alg.dims[j] + q;
          for (int r = 0; r < sym.alg.dims[k]; r++) {
            const Scalar& m = mt.at(mrow, r);
            if (m.is_zero()) continue;
            for (int z = 0; z < l.dims[2]; z++)
              if (!bz[z].is_zero()) bb.at(z, r) += bz[z] * m;
          }
        }
    }
    Matrix half = scale(Scalar(rat(1, 2)), bb);
    zeta.c[k] = scale(Scalar(-1), mul(s.delta[2], half));
    Matrix resid = mul(p2, half);
    if (!resid.is_zero()) {
      std::optional<Matrix> coords = solve_columns(transpose(out.coh.h_basis[2]), resid);
      if (!coords) throw std::logic_error("kuranishi: residual defect is not harmonic");
      gens.generators[k] = Subspace::span_rows(*coords);
    }
  }
  out.raw_generators = gens;
  out.cone = quotient_by_ideal(sym, gens);

  out.universal = rt_zero(l.dims[1], out.cone.ring);
  for (int k = 1; k <= n; k++)
    out.universal.c[k] = mul(zeta.c[k], transpose(out.cone.proj[k]));

  MCElement u;
  u.zeta = out.universal;
  CoefficientRing ring{out.cone.ring};
  if (!rt_is_zero(mc_defect(l, ring, u)))
    throw model_error("kuranishi: universal element has a nonzero residual defect");

  if (respect_grading) {
    if (l.types.empty()) throw model_error("kuranishi: grading requested on an ungraded model");
    std::vector<Bitype> h1t, h2t;
    bool pure = detail::rows_pure(out.coh.h_basis[1], l.types[1], &h1t) &&
                detail::rows_pure(out.coh.h_basis[2], l.types[2], &h2t);
    out.grading.require("harmonic.pure", pure, "harmonic representatives are not pure");
    for (auto& t : h1t) out.var_types.push_back({-t[0], -t[1]});
    out.monomial_types.resize(n + 1);
    for (int k = 0; k <= n && pure; k++)
      for (auto& e : sym.monomials[k]) {
        Bitype t{0, 0};
        for (int v = 0; v < h1; v++) {
          t[0] += e[v] * out.var_types[v][0];
          t[1] += e[v] * out.var_types[v][1];
        }
        out.monomial_types[k].push_back(t);
      }
    bool bigraded = pure;
    for (int k = 0; k <= n && bigraded; k++) {
      const Subspace& ideal = out.cone.ideal[k];
      for (int r = 0; r < ideal.dim() && bigraded; r++) {
        // each homogeneous-type component of an ideal element stays inside
        std::map<Bitype, Vec> pieces;
        for (int c = 0; c < sym.alg.dims[k]; c++) {
          if (ideal.basis.at(r, c).is_zero()) continue;
          auto it = pieces.try_emplace(out.monomial_types[k][c], Vec(sym.alg.dims[k])).first;
          it->second[c] = ideal.basis.at(r, c);
        }
        for (auto& [t, v] : pieces)
          if (!ideal.contains(v)) bigraded = false;
      }
    }
    out.grading.require("ideal.bigraded", bigraded,
                        bigraded ? "" : "obstruction ideal mixes distinct types");
  }
  return out;
}

// S1 (x) S2 with S1 free on a complement of eps(H^0) in g and S2 the Kuranishi
// ring; the two ideal images and the j-adic filtration are exposed
struct GmProduct {
  SymAlgebra s1;
  KuranishiResult kur;
  BlockAlgebra product;
  IdealData j_ideal, q_ideal;          // per-degree spans: S1 (x) m2 and m1 (x) S2
  std::vector<Subspace> j_filtration;  // k = 0..n+1: image of j^k in total coords
};

inline GmProduct preferred_gm_product(const Dgla& l, const Splitting& s, const Augmentation& aug,
                                      int n) {
  GmProduct out;
  out.kur = kuranishi(l, s, &aug, n);
  Matrix eps_h0 = mul(aug.eps, transpose(out.kur.coh.h_basis[0]));
  if (rank_of(eps_h0) != out.kur.coh.h_dims[0])
    throw model_error("preferred_gm_product: augmentation is not injective on H^0");
  int free_gens = aug.g_dim - out.kur.coh.h_dims[0];
  out.s1 = sym_truncated(free_gens, n);
  out.product = tensor_product(out.s1.alg, out.kur.cone.ring, n);

  const BlockAlgebra& t = out.product;
  auto block_span = [&](int degree, bool want_jb_positive, int min_jb) {
    std::vector<Vec> rows;
    for (auto& b : t.blocks[degree]) {
      int ja = b[0], jb = b[1];
      bool keep = want_jb_positive ? jb >= min_jb : ja >= 1;
      if (!keep) continue;
      int width = out.s1.alg.dims[ja] * out.kur.cone.ring.dims[jb];
      for (int i = 0; i < width; i++) {
        Vec v(t.alg.dims[degree]);
        v[b[2] + i] = Scalar(1);
        rows.push_back(std::move(v));
      }
    }
    return rows.empty() ? Subspace::zero(t.alg.dims[degree])
                        : Subspace::span_rows(from_rows(rows, t.alg.dims[degree]));
  };
  out.j_ideal.generators.resize(n + 1, Subspace::zero(0));
  out.q_ideal.generators.resize(n + 1, Subspace::zero(0));
  for (int d = 0; d <= n; d++) {
    out.j_ideal.generators[d] = block_span(d, true, 1);
    out.q_ideal.generators[d] = block_span(d, false, 1);
  }
  int total = t.alg.total_dim();
  for (int k = 0; k <= n + 1; k++) {
    std::vector<Vec> rows;
    for (int d = 0; d <= n; d++) {
      Subspace sp = block_span(d, true, k);
      for (int i = 0; i < sp.dim(); i++) {
        Vec v(total);
        for (int c = 0; c < sp.ambient; c++) v[t.alg.offset(d) + c] = sp.basis.at(i, c);
        rows.push_back(std::move(v));
      }
    }
    out.j_filtration.push_back(rows.empty() ? Subspace::zero(total)
                                            : Subspace::span_rows(from_rows(rows, total)));
  }
  return out;
}

// Order <= 2 isomorphism classes straight from the cochain data: a free block
// and the classical quadric constraints, with no splitting machinery involved
struct IsoClasses {
  int order = 0;
  Matrix h1_reps;     // representative rows picked in ker d^1
  Subspace quadrics;  // constraint span in Sym^2 coordinates (zero span at order 1)
  int framing_dim = 0;
};

inline IsoClasses brute_force_iso_classes(const Dgla& l, const Augmentation* aug, int order) {
  if (order < 1 || order > 2)
    throw std::invalid_argument("brute_force_iso_classes: only orders 1 and 2");
  IsoClasses out;
  out.order = order;
  Subspace ker1 = Subspace::span_rows(kernel_basis_rows(l.d[1]));
  Subspace im0 = image_rows(l.d[0]);
  out.h1_reps = complement_rows(im0, ker1);
  int h1 = out.h1_reps.rows;
  out.quadrics = Subspace::zero(sym2_dim(h1));
  if (order == 2) {
    Subspace ker2 = Subspace::span_rows(kernel_basis_rows(l.d[2]));
    Subspace im1 = image_rows(l.d[1]);
    Matrix h2 = complement_rows(im1, ker2);
    // class coordinates of 1/2 [alpha_1, alpha_1] per quadratic monomial
    Matrix q(h2.rows, sym2_dim(h1));
    Matrix solve_in = hstack(transpose(h2), l.d[1]);
    for (int a = 0; a < h1; a++)
      for (int b = a; b < h1; b++) {
        Vec xa = out.h1_reps.row(a), xb = out.h1_reps.row(b);
        Vec br(l.dims[2]);
        for (int i = 0; i < l.dims[1]; i++) {
          if (xa[i].is_zero()) continue;
          for (int j = 0; j < l.dims[1]; j++) {
            if (xb[j].is_zero()) continue;
            Scalar c = xa[i] * xb[j];
            for (int z = 0; z < l.dims[2]; z++) br[z] += c * l.bracket[1][1].at(i * l.dims[1] + j, z);
          }
        }
        // the coefficient of t_a t_b in [zeta, zeta]/2 is the symmetrized
        // bracket for a < b and half the square term on the diagonal
        Scalar w = a == b ? Scalar(rat(1, 2)) : Scalar(1);
        std::optional<Vec> sol = solve_particular(solve_in, br);
        if (!sol) throw model_error("brute_force_iso_classes: bracket of cocycles is not closed");
        for (int r = 0; r < h2.rows; r++) q.at(r, sym2_index(h1, a, b)) = w * (*sol)[r];
      }
    out.quadrics = Subspace::span_rows(q);
  }
  if (aug) {
    Subspace ker0 = Subspace::span_rows(kernel_basis_rows(l.d[0]));
    out.framing_dim = aug->g_dim - rank_of(mul(aug->eps, transpose(ker0.basis)));
  }
  return out;
}

// Induced automorphism of the Kuranishi ring from gauging the universal
// element by exp of a degree >= 2 invariant and re-normalizing; identity on
// Gr^1 by construction
inline Matrix ambiguity_act(const Dgla& l, const Splitting& s, const KuranishiResult& kr,
                            const RingTensor& h) {
  const GradedArtinAlgebra& ring = kr.cone.ring;
  if (h.vdim != kr.coh.h_dims[0] || static_cast<int>(h.c.size()) != ring.n + 1)
    throw std::invalid_argument("ambiguity_act: shape mismatch");
  if (!h.c[0].is_zero() || (ring.n >= 1 && !h.c[1].is_zero()))
    throw std::invalid_argument("ambiguity_act: element must lie in m^2");

  CoefficientRing a{ring};
  GaugeElement lam;
  lam.lambda = apply_linear(transpose(kr.coh.h_basis[0]), h);
  MCElement moved = gauge_act(l, a, lam, MCElement{kr.universal, {}});
  GaugeFixResult fixed = gauge_fix(l, a, s, moved);

  // read the generator substitution off the harmonic part and extend it
  // multiplicatively to the monomial basis
  Matrix p1 = harmonic_projector(l, s, 1);
  RingTensor harm = apply_linear(p1, fixed.fixed.zeta);
  int h1 = kr.coh.h_dims[1];
  std::vector<Vec> gen_image;
  for (int a2 = 0; a2 < h1; a2++) gen_image.push_back(alg_zero(ring));
  for (int k = 1; k <= ring.n; k++) {
    std::optional<Matrix> coords = solve_columns(transpose(kr.coh.h_basis[1]), harm.c[k]);
    if (!coords) throw std::logic_error("ambiguity_act: harmonic part left the span");
    for (int a2 = 0; a2 < h1; a2++)
      for (int c = 0; c < ring.dims[k]; c++) gen_image[a2][ring.offset(k) + c] = coords->at(a2, c);
  }

  int total = ring.total_dim();
  Matrix subst(total, total);
  for (int k = 0; k <= ring.n; k++)
    for (int i = 0; i < ring.dims[k]; i++) {
      const std::vector<int>& e = kr.cone.sym.monomials[k][kr.cone.basis_monomial[k][i]];
      Vec img = alg_unit(ring);
      for (int v = 0; v < h1; v++)
        for (int rep = 0; rep < e[v]; rep++) img = alg_mul(ring, img, gen_image[v]);
      for (int r = 0; r < total; r++) subst.at(r, ring.offset(k) + i) = img[r];
    }
  return subst;
}

}  // namespace gmdef
