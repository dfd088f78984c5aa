#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gmdef/deformation.hpp"
#include "gmdef/mhs.hpp"

namespace gmdef {

// Finite bigraded ddbar model of the twisted form algebra, the fiber it acts
// on, and the deformation ring of its degree 1 cohomology. The degree 0 part
// acts on the fiber through ev; higher form slots never reach the fiber
// checks, so they are not materialized.
struct FormalityModel {
  Dgla e;
  Splitting s;
  int vdim = 0;
  std::vector<Bitype> v_types;  // bigrading of the fiber
  Matrix ev;                    // (vdim*vdim) x dims[0], column a = action of basis vector a
  KuranishiResult kur;
  std::vector<Bitype> h1_types;                   // type of each harmonic degree 1 basis row
  std::vector<std::vector<Bitype>> ring_types;    // type of each surviving ring coordinate
};

namespace detail {

inline Bitype add_types(const Bitype& x, const Bitype& y) {
  return Bitype{x[0] + y[0], x[1] + y[1]};
}

}  // namespace detail

inline Matrix ev_of(const FormalityModel& m, const Vec& e0) {
  Matrix out(m.vdim, m.vdim);
  for (int a = 0; a < m.e.dims[0]; a++) {
    if (e0[a].is_zero()) continue;
    for (int i = 0; i < m.vdim; i++)
      for (int j = 0; j < m.vdim; j++) out.at(i, j) += e0[a] * m.ev.at(i * m.vdim + j, a);
  }
  return out;
}

inline Report validate_formality_model(const FormalityModel& m) {
  Report rep;
  rep.require("ddbar", m.e.has_double && check_ddbar(m.e).ok,
              "double structure fails the ddbar property");
  if (!rep.ok()) return rep;

  Subspace joint = intersect(Subspace::span_rows(kernel_basis_rows(m.e.d1[1])),
                             Subspace::span_rows(kernel_basis_rows(m.e.d2[1])));
  rep.require("harmonic.match", Subspace::span_rows(m.kur.coh.h_basis[1]) == joint,
              "degree 1 harmonics differ from ker D' cap ker D''");
  rep.merge(m.kur.grading, "grading");

  bool shapes = static_cast<int>(m.v_types.size()) == m.vdim &&
                m.ev.rows == m.vdim * m.vdim && m.ev.cols == m.e.dims[0];
  rep.require("fiber.shapes", shapes, "fiber action tensor has the wrong shape");
  if (!shapes) return rep;

  bool lie = true;
  for (int a = 0; a < m.e.dims[0] && lie; a++)
    for (int b = 0; b < m.e.dims[0] && lie; b++) {
      Vec br = m.e.bracket[0][0].row(a * m.e.dims[0] + b);
      Vec ua(m.e.dims[0]), ub(m.e.dims[0]);
      ua[a] = Scalar(1);
      ub[b] = Scalar(1);
      Matrix lhs = ev_of(m, br);
      Matrix rhs = sub(mul(ev_of(m, ua), ev_of(m, ub)), mul(ev_of(m, ub), ev_of(m, ua)));
      if (!(lhs == rhs)) lie = false;
    }
  rep.require("fiber.bracket", lie, "fiber action is not a Lie algebra map on degree 0");

  bool graded = true;
  for (int a = 0; a < m.e.dims[0] && graded; a++) {
    Bitype t = m.e.types.empty() ? Bitype{0, 0} : m.e.types[0][a];
    for (int i = 0; i < m.vdim && graded; i++)
      for (int j = 0; j < m.vdim; j++)
        if (!m.ev.at(i * m.vdim + j, a).is_zero() &&
            m.v_types[i] != detail::add_types(m.v_types[j], t)) {
          graded = false;
          break;
        }
  }
  rep.require("fiber.bigraded", graded, "fiber action does not respect the bigrading");
  return rep;
}

inline FormalityModel make_formality_model(const Dgla& e, const Splitting& s, int vdim,
                                           std::vector<Bitype> v_types, Matrix ev, int n) {
  FormalityModel m;
  m.e = e;
  m.s = s;
  m.vdim = vdim;
  m.v_types = std::move(v_types);
  m.ev = std::move(ev);
  m.kur = kuranishi(e, s, nullptr, n, true);
  for (auto& t : m.kur.var_types) m.h1_types.push_back(Bitype{-t[0], -t[1]});
  m.ring_types = detail::cone_monomial_types(m.kur.cone, m.kur.var_types);
  Report rep = validate_formality_model(m);
  if (!rep.ok()) throw model_error("formality model: " + rep.first_failure());
  return m;
}

// alpha[k]: dims[1] x ring.dims[k] for 1 <= k <= n; gamma[k] holds the
// potential solving D'D'' gamma = beta at each order (k >= 2)
struct ConnectionSeries {
  bool primed = true;
  std::vector<Matrix> alpha;
  std::vector<Matrix> gamma;
};

inline RingTensor series_tensor(const FormalityModel& m, const ConnectionSeries& c) {
  RingTensor x = rt_zero(m.e.dims[1], m.kur.cone.ring);
  for (int k = 1; k < static_cast<int>(c.alpha.size()) && k <= m.kur.cone.ring.n; k++)
    if (c.alpha[k].rows) x.c[k] = c.alpha[k];
  return x;
}

inline Matrix alpha_one(const FormalityModel& m) {
  Matrix a1 = transpose(m.kur.coh.h_basis[1]);
  if (!mul(m.e.d1[1], a1).is_zero() || !mul(m.e.d2[1], a1).is_zero())
    throw model_error("alpha_one: harmonic representatives are not closed");
  for (int i = 0; i < a1.rows; i++)
    for (int r = 0; r < a1.cols; r++)
      if (!a1.at(i, r).is_zero() &&
          detail::add_types(m.e.types[1][i], m.ring_types[1][r]) != (Bitype{0, 0}))
        throw model_error("alpha_one: tautological tensor is not of type (0,0)");
  return a1;
}

namespace detail {

// half bracket of the series with itself in m-degree k: the sum of the
// ordered composition products alpha_a alpha_b over a + b = k
inline Matrix series_product(const FormalityModel& m, const ConnectionSeries& c, int k) {
  RingTensor x = series_tensor(m, c);
  RingTensor full = tensor_bracket(m.e.bracket[1][1], m.e.dims[1], m.kur.cone.ring, x, x);
  return scale(Scalar(Rational(1, 2)), full.c[k]);
}

inline void verify_solvable_rhs(const FormalityModel& m, const Matrix& beta, const char* who) {
  if (!mul(m.e.d1[2], beta).is_zero() || !mul(m.e.d2[2], beta).is_zero())
    throw model_error(std::string(who) + ": right hand side is not closed for both differentials");
  for (int r = 0; r < beta.cols; r++) {
    Vec col(beta.rows);
    for (int i = 0; i < beta.rows; i++) col[i] = beta.at(i, r);
    std::optional<Vec> cls = class_coords(m.e, m.kur.coh, 2, col);
    if (!cls || !vec_is_zero(*cls))
      throw model_error(std::string(who) + ": right hand side is not cohomologous to zero");
  }
}

}  // namespace detail

inline ConnectionSeries alpha_recursion(const FormalityModel& m, int n) {
  const GradedArtinAlgebra& ring = m.kur.cone.ring;
  if (n < 1 || n > ring.n) throw std::invalid_argument("alpha_recursion: order out of range");
  ConnectionSeries c;
  c.primed = true;
  c.alpha.assign(n + 1, Matrix(0, 0));
  c.gamma.assign(n + 1, Matrix(0, 0));
  c.alpha[1] = alpha_one(m);
  Matrix dd = mul(m.e.d1[1], m.e.d2[0]);
  for (int k = 2; k <= n; k++) {
    Matrix b = detail::series_product(m, c, k);
    Matrix beta = k == 2 ? scale(Scalar(2), b) : b;
    detail::verify_solvable_rhs(m, beta, "alpha_recursion");
    std::optional<Matrix> gam = solve_columns(dd, beta);
    if (!gam) throw model_error("alpha_recursion: right hand side escapes the image of D'D''");
    c.gamma[k] = *gam;
    c.alpha[k] = mul(m.e.d1[0], *gam);
    if (k == 2) c.alpha[k] = scale(Scalar(Rational(1, 2)), c.alpha[k]);
    if (!add(mul(m.e.d[1], c.alpha[k]), b).is_zero())
      throw model_error("alpha_recursion: recursion identity failed at order " + std::to_string(k));
  }
  return c;
}

inline ConnectionSeries alpha_v_recursion(const FormalityModel& m, int n) {
  const GradedArtinAlgebra& ring = m.kur.cone.ring;
  if (n < 1 || n > ring.n) throw std::invalid_argument("alpha_v_recursion: order out of range");
  ConnectionSeries c;
  c.primed = false;
  c.alpha.assign(n + 1, Matrix(0, 0));
  c.gamma.assign(n + 1, Matrix(0, 0));
  c.alpha[1] = alpha_one(m);
  Matrix dd = mul(m.e.d1[1], m.e.d2[0]);
  for (int k = 2; k <= n; k++) {
    Matrix b = detail::series_product(m, c, k);
    Matrix beta = k == 2 ? scale(Scalar(2), b) : b;
    detail::verify_solvable_rhs(m, beta, "alpha_v_recursion");
    std::optional<Matrix> gam = solve_columns(dd, scale(Scalar(-1), beta));
    if (!gam) throw model_error("alpha_v_recursion: right hand side escapes the image of D'D''");
    c.gamma[k] = *gam;
    c.alpha[k] = mul(m.e.d2[0], *gam);
    if (k == 2) c.alpha[k] = scale(Scalar(Rational(1, 2)), c.alpha[k]);
    if (!add(mul(m.e.d1[1], c.alpha[k]), b).is_zero())
      throw model_error("alpha_v_recursion: recursion identity failed at order " + std::to_string(k));
  }
  return c;
}

// primed series: curvature of D + A'; v series: the D'-shifted identity
inline Report flatness_check(const FormalityModel& m, const ConnectionSeries& c) {
  const GradedArtinAlgebra& ring = m.kur.cone.ring;
  RingTensor x = series_tensor(m, c);
  RingTensor defect;
  if (c.primed) {
    defect = mc_defect(m.e, CoefficientRing{ring}, MCElement{x, std::nullopt});
  } else {
    RingTensor half = rt_scale(
        Scalar(Rational(1, 2)), tensor_bracket(m.e.bracket[1][1], m.e.dims[1], ring, x, x));
    defect = rt_add(apply_linear(m.e.d1[1], x), half);
  }
  Report rep;
  for (int k = 0; k <= ring.n; k++)
    rep.require("flat.degree." + std::to_string(k), defect.c[k].is_zero(),
                "curvature appears in m-degree " + std::to_string(k));
  return rep;
}

inline Report hodge_type_check(const FormalityModel& m, const ConnectionSeries& c) {
  Report rep;
  int min_p = 0, min_q = 0;
  for (int k = 1; k < static_cast<int>(c.alpha.size()); k++) {
    if (!c.alpha[k].rows) continue;
    Bitype want = c.primed ? Bitype{0, 1 - k} : Bitype{1 - k, 0};
    bool pure = true;
    std::string w;
    for (int i = 0; i < c.alpha[k].rows; i++)
      for (int r = 0; r < c.alpha[k].cols; r++) {
        if (c.alpha[k].at(i, r).is_zero()) continue;
        Bitype t = detail::add_types(m.e.types[1][i], m.ring_types[k][r]);
        min_p = std::min(min_p, t[0]);
        min_q = std::min(min_q, t[1] + k - 1);
        if (pure && t != want) {
          pure = false;
          w = "order " + std::to_string(k) + " has a component of type (" +
              std::to_string(t[0]) + "," + std::to_string(t[1]) + ")";
        }
      }
    rep.require("type." + std::to_string(k), pure, w);
  }
  if (c.primed)
    rep.require("transversal", min_p >= 0,
                "sF drops by " + std::to_string(-min_p) + " under the series");
  else
    rep.require("antitransversal", min_q >= 0,
                "sG drops by " + std::to_string(-min_q) + " under the series");
  return rep;
}

namespace detail {

// extend generator images multiplicatively along the surviving monomials
inline Matrix substitution_from_generators(const ConeRing& cone, const Matrix& nu) {
  const GradedArtinAlgebra& a = cone.ring;
  int total = a.total_dim();
  Matrix out(total, total);
  out.at(0, 0) = Scalar(1);
  for (int d = 1; d <= a.n; d++)
    for (int i = 0; i < a.dims[d]; i++) {
      const std::vector<int>& expo = cone.sym.monomials[d][cone.basis_monomial[d][i]];
      Vec img = alg_unit(a);
      for (int v = 0; v < static_cast<int>(expo.size()); v++)
        for (int k = 0; k < expo[v]; k++) img = alg_mul(a, img, nu.row(v));
      for (int t = 0; t < total; t++) out.at(t, a.offset(d) + i) = img[t];
    }
  return out;
}

inline RingTensor apply_substitution(const GradedArtinAlgebra& a, const Matrix& subst,
                                     const RingTensor& x) {
  RingTensor out = rt_zero(x.vdim, a);
  for (int k = 0; k < static_cast<int>(x.c.size()); k++)
    for (int i = 0; i < a.dims[k]; i++)
      for (int j = k; j <= a.n; j++)
        for (int r = 0; r < a.dims[j]; r++) {
          const Scalar& cf = subst.at(a.offset(j) + r, a.offset(k) + i);
          if (cf.is_zero()) continue;
          for (int v = 0; v < x.vdim; v++)
            if (!x.c[k].at(v, i).is_zero()) out.c[j].at(v, r) += cf * x.c[k].at(v, i);
        }
  return out;
}

}  // namespace detail

struct GaugeComparison {
  GaugeElement g;  // over E^0, supported in m-degrees >= 2
  Matrix subst;    // ring substitution on total coordinates, column action
  Report rep;
};

// finds exp(lambda) and a substitution fixing m/m^2 carrying the primed
// series to the v series; order 2 uses the stored potential directly
inline GaugeComparison gauge_compare(const FormalityModel& m, const ConnectionSeries& cp,
                                     const ConnectionSeries& cv, int n) {
  const ConeRing& cone = m.kur.cone;
  const GradedArtinAlgebra& ring = cone.ring;
  if (n < 1 || n > ring.n) throw std::invalid_argument("gauge_compare: order out of range");
  if (static_cast<int>(cp.alpha.size()) <= n || static_cast<int>(cv.alpha.size()) <= n)
    throw std::invalid_argument("gauge_compare: series shorter than the comparison order");
  if (!cp.primed || cv.primed)
    throw std::invalid_argument("gauge_compare: expects a primed series and a v series");

  GaugeComparison out;
  out.g.lambda = rt_zero(m.e.dims[0], ring);
  RingTensor xp = series_tensor(m, cp), xv = series_tensor(m, cv);
  if (!(xp.c[1] == xv.c[1]))
    throw std::invalid_argument("gauge_compare: series disagree at first order");
  for (int k = n + 1; k <= ring.n; k++) {
    xp.c[k] = Matrix(m.e.dims[1], ring.dims[k]);
    xv.c[k] = Matrix(m.e.dims[1], ring.dims[k]);
  }

  int b = m.kur.coh.h_dims[1];
  Matrix nu(b, ring.total_dim());
  for (int v = 0; v < b; v++) nu.at(v, ring.offset(1) + v) = Scalar(1);
  Matrix solver = hstack(transpose(m.kur.coh.h_basis[1]), scale(Scalar(-1), m.e.d[0]));

  bool solved = true;
  for (int k = 2; k <= n && solved; k++) {
    out.subst = detail::substitution_from_generators(cone, nu);
    RingTensor moved = detail::apply_substitution(ring, out.subst, xp);
    MCElement acted = gauge_act(m.e, CoefficientRing{ring}, out.g, MCElement{moved, std::nullopt});
    RingTensor delta = rt_sub(xv, acted.zeta);
    for (int j = 0; j < k; j++)
      if (!delta.c[j].is_zero()) throw std::logic_error("gauge_compare: lower order disturbed");

    bool done = false;
    if (k == 2 && static_cast<int>(cp.gamma.size()) > 2 && cp.gamma[2].rows) {
      Matrix cand = scale(Scalar(Rational(1, 2)), cp.gamma[2]);
      if (add(mul(m.e.d[0], cand), delta.c[2]).is_zero()) {
        out.g.lambda.c[2] = add(out.g.lambda.c[2], cand);
        done = true;
      }
    }
    if (!done) {
      std::optional<Matrix> sol = solve_columns(solver, delta.c[k]);
      if (!sol) {
        out.rep.require("order." + std::to_string(k), false,
                        "unsolvable defect at order " + std::to_string(k));
        solved = false;
        break;
      }
      for (int v = 0; v < b; v++)
        for (int r = 0; r < ring.dims[k]; r++) nu.at(v, ring.offset(k) + r) += sol->at(v, r);
      Matrix lk(m.e.dims[0], ring.dims[k]);
      for (int i = 0; i < m.e.dims[0]; i++)
        for (int r = 0; r < ring.dims[k]; r++) lk.at(i, r) = sol->at(b + i, r);
      out.g.lambda.c[k] = add(out.g.lambda.c[k], lk);
    }
    out.rep.require("order." + std::to_string(k), true, "");
  }

  out.subst = detail::substitution_from_generators(cone, nu);
  if (solved) {
    RingTensor moved = detail::apply_substitution(ring, out.subst, xp);
    MCElement acted = gauge_act(m.e, CoefficientRing{ring}, out.g, MCElement{moved, std::nullopt});
    out.rep.require("conjugation", rt_is_zero(rt_sub(xv, acted.zeta)),
                    "conjugated connection differs from the v series");
  }

  bool in_m2 = out.g.lambda.c[0].is_zero() && (ring.n < 1 || out.g.lambda.c[1].is_zero());
  out.rep.require("gauge.in.m2", in_m2, "gauge has a component below m^2");

  bool gr1 = true;
  for (int i = 0; i < ring.dims[1] && gr1; i++)
    for (int j = 0; j < ring.dims[1]; j++)
      if (!(out.subst.at(ring.offset(1) + i, ring.offset(1) + j) ==
            (i == j ? Scalar(1) : Scalar()))) {
        gr1 = false;
        break;
      }
  out.rep.require("phi.gr1", gr1, "substitution moves m/m^2");

  bool multi = true;
  int total = ring.total_dim();
  for (int i = 0; i < total && multi; i++)
    for (int j = i; j < total; j++) {
      Vec ei(total), ej(total);
      ei[i] = Scalar(1);
      ej[j] = Scalar(1);
      Vec lhs = matvec(out.subst, alg_mul(ring, ei, ej));
      Vec rhs = alg_mul(ring, matvec(out.subst, ei), matvec(out.subst, ej));
      if (!vec_is_zero(vec_sub(lhs, rhs))) {
        multi = false;
        break;
      }
    }
  out.rep.require("phi.automorphism", multi, "substitution is not multiplicative");
  return out;
}

namespace detail {

// multiplication by the ring basis element (deg, idx) on total coordinates
inline Matrix ring_mult_by(const GradedArtinAlgebra& a, int deg, int idx) {
  int total = a.total_dim();
  Matrix out(total, total);
  for (int d = 0; d + deg <= a.n; d++) {
    const Matrix& t = a.mult[deg][d];
    for (int j = 0; j < a.dims[d]; j++)
      for (int r = 0; r < a.dims[deg + d]; r++) {
        const Scalar& c = t.at(idx * a.dims[d] + j, r);
        if (!c.is_zero()) out.at(a.offset(deg + d) + r, a.offset(d) + j) += c;
      }
  }
  return out;
}

// action of an E^0 (x) m element on the fiber tensored with the ring;
// coordinate layout v * total + ring coordinate
inline Matrix fiber_operator(const FormalityModel& m, const RingTensor& x) {
  const GradedArtinAlgebra& a = m.kur.cone.ring;
  int total = a.total_dim();
  Matrix out(m.vdim * total, m.vdim * total);
  for (int k = 0; k < static_cast<int>(x.c.size()); k++)
    for (int e0 = 0; e0 < m.e.dims[0]; e0++)
      for (int r = 0; r < a.dims[k]; r++) {
        const Scalar& coeff = x.c[k].at(e0, r);
        if (coeff.is_zero()) continue;
        Matrix mv = ring_mult_by(a, k, r);
        for (int i = 0; i < m.vdim; i++)
          for (int j = 0; j < m.vdim; j++) {
            const Scalar& g = m.ev.at(i * m.vdim + j, e0);
            if (g.is_zero()) continue;
            for (int p = 0; p < total; p++)
              for (int q = 0; q < total; q++)
                if (!mv.at(p, q).is_zero())
                  out.at(i * total + p, j * total + q) += coeff * g * mv.at(p, q);
          }
      }
  return out;
}

inline Matrix nilpotent_exp(const Matrix& nmat) {
  Matrix out = Matrix::identity(nmat.rows), term = Matrix::identity(nmat.rows);
  for (int k = 1; k <= nmat.rows; k++) {
    term = scale(Scalar(Rational(1, k)), mul(term, nmat));
    if (term.is_zero()) break;
    out = add(out, term);
  }
  return out;
}

}  // namespace detail

// split filtrations on the fiber tensored with the ring, twisted by the
// supplied exponentials; verifies the unipotence precondition before twisting
inline Report fiber_vmhs_check(const FormalityModel& m, const ConnectionSeries& c,
                               const GaugeElement& f, const GaugeElement& g,
                               const GaugeElement& w) {
  const GradedArtinAlgebra& ring = m.kur.cone.ring;
  int total = ring.total_dim(), ndim = m.vdim * total;
  Report rep;
  rep.require("flat", flatness_check(m, c).ok(), "series is not flat");
  rep.require("types", hodge_type_check(m, c).ok(), "series has impure components");

  std::vector<Bitype> types(ndim);
  for (int v = 0; v < m.vdim; v++)
    for (int d = 0; d <= ring.n; d++)
      for (int r = 0; r < ring.dims[d]; r++)
        types[v * total + ring.offset(d) + r] =
            detail::add_types(m.v_types[v], m.ring_types[d][r]);

  TripleFiltered split;
  split.dim = ndim;
  detail::split_fg_from_types(types, split.f, split.g);
  std::set<int> weights;
  for (auto& t : types) weights.insert(t[0] + t[1]);
  for (int wt : weights) {
    std::vector<Vec> rows;
    for (int i = 0; i < ndim; i++)
      if (types[i][0] + types[i][1] <= wt) {
        Vec u(ndim);
        u[i] = Scalar(1);
        rows.push_back(u);
      }
    split.w[wt] = Subspace::span_rows(from_rows(rows, ndim));
  }

  auto twist_of = [&](const GaugeElement& x) {
    if (x.lambda.vdim != m.e.dims[0])
      throw std::invalid_argument("fiber_vmhs_check: twist is not over E^0");
    if (!rt_in_m(x.lambda))
      throw model_error("fiber_vmhs_check: twist has a degree zero part");
    Matrix u = detail::nilpotent_exp(scale(Scalar(-1), detail::fiber_operator(m, x.lambda)));
    Matrix shift = sub(u, Matrix::identity(ndim));
    for (auto& kv : split.w) {
      Subspace below = filt_inc_at(split.w, kv.first - 1, ndim);
      for (int r = 0; r < kv.second.dim(); r++)
        if (!below.contains(matvec(shift, kv.second.basis.row(r))))
          throw model_error("fiber_vmhs_check: twist is not unipotent along the weight filtration");
    }
    return u;
  };
  Matrix uf = twist_of(f), ug = twist_of(g), uw = twist_of(w);

  TripleFiltered tw;
  tw.dim = ndim;
  for (auto& kv : split.f) tw.f[kv.first] = Subspace::span_rows(mul(kv.second.basis, transpose(uf)));
  for (auto& kv : split.g) tw.g[kv.first] = Subspace::span_rows(mul(kv.second.basis, transpose(ug)));
  for (auto& kv : split.w) tw.w[kv.first] = Subspace::span_rows(mul(kv.second.basis, transpose(uw)));

  Report mrep = check_mhs(tw);
  rep.require("mhs", mrep.ok(), mrep.first_failure());

  bool dims_ok = true;
  for (auto& kv : split.w)
    if (filt_inc_at(tw.w, kv.first, ndim).dim() != kv.second.dim()) dims_ok = false;
  rep.require("grw.dims", dims_ok, "twists changed the weight graded dimensions");
  return rep;
}

}  // namespace gmdef
