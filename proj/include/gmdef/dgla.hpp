#pragma once
#include <array>
#include <optional>

#include "gmdef/artin.hpp"
#include "gmdef/matrix.hpp"
#include "gmdef/report.hpp"

namespace gmdef {

using Bitype = std::array<int, 2>;

// Finite-dimensional dgla supported in degrees 0..max_degree (at most 3).
// d[i] maps degree i to i+1 and acts on column vectors; d[max_degree] has
// zero rows. bracket[i][j] is a (dims[i]*dims[j]) x dims[i+j] table with row
// a*dims[j]+b holding [e^i_a, e^j_b]. Optional per-basis bigrading and a
// double differential with d = d1 + d2.
struct Dgla {
  int max_degree = 0;
  std::vector<int> dims;
  std::vector<Matrix> d;
  std::vector<std::vector<Matrix>> bracket;

  std::vector<std::vector<Bitype>> types;  // empty unless bigraded
  bool has_double = false;
  std::vector<Matrix> d1, d2;

  bool bigraded() const { return !types.empty(); }
  int dim(int i) const { return i >= 0 && i <= max_degree ? dims[i] : 0; }

  Vec bracket_basis(int i, int a, int j, int b) const {
    return bracket[i][j].row(a * dims[j] + b);
  }

  // [x, y] for x in L^i, y in L^j, result in L^{i+j} (zero vector if i+j
  // exceeds max_degree)
  Vec bracket_vec(int i, const Vec& x, int j, const Vec& y) const {
    if (i + j > max_degree) return Vec();
    Vec z(dims[i + j]);
    const Matrix& t = bracket[i][j];
    for (int a = 0; a < dims[i]; a++) {
      if (x[a].is_zero()) continue;
      for (int b = 0; b < dims[j]; b++) {
        if (y[b].is_zero()) continue;
        Scalar c = x[a] * y[b];
        int row = a * dims[j] + b;
        for (int r = 0; r < dims[i + j]; r++) {
          const Scalar& m = t.at(row, r);
          if (!m.is_zero()) z[r] += c * m;
        }
      }
    }
    return z;
  }

  // matrix of [x, -]: L^j -> L^{i+j} for x in L^i
  Matrix ad_matrix(int i, const Vec& x, int j) const {
    if (i + j > max_degree) return Matrix(0, dims[j]);
    Matrix m(dims[i + j], dims[j]);
    for (int b = 0; b < dims[j]; b++) {
      Vec col(dims[i + j]);
      for (int a = 0; a < dims[i]; a++) {
        if (x[a].is_zero()) continue;
        Vec br = bracket_basis(i, a, j, b);
        for (int r = 0; r < dims[i + j]; r++) col[r] += x[a] * br[r];
      }
      for (int r = 0; r < dims[i + j]; r++) m.at(r, b) = col[r];
    }
    return m;
  }
};

namespace detail {
inline bool shapes_ok(const Dgla& l, const std::vector<Matrix>& diff) {
  if (static_cast<int>(diff.size()) != l.max_degree + 1) return false;
  for (int i = 0; i <= l.max_degree; i++) {
    int target = i + 1 <= l.max_degree ? l.dims[i + 1] : 0;
    if (diff[i].rows != target || diff[i].cols != l.dims[i]) return false;
  }
  return true;
}

inline bool leibniz_holds(const Dgla& l, const std::vector<Matrix>& diff, std::string& witness) {
  for (int i = 0; i <= l.max_degree; i++)
    for (int j = 0; i + j + 1 <= l.max_degree; j++)
      for (int a = 0; a < l.dims[i]; a++)
        for (int b = 0; b < l.dims[j]; b++) {
          Vec lhs = matvec(diff[i + j], l.bracket_basis(i, a, j, b));
          Vec dxa(diff[i].rows);
          for (int r = 0; r < diff[i].rows; r++) dxa[r] = diff[i].at(r, a);
          Vec dxb(diff[j].rows);
          for (int r = 0; r < diff[j].rows; r++) dxb[r] = diff[j].at(r, b);
          Vec ea(l.dims[i]), eb(l.dims[j]);
          ea[a] = Scalar(1);
          eb[b] = Scalar(1);
          Vec rhs = l.bracket_vec(i + 1, dxa, j, eb);
          Vec second = l.bracket_vec(i, ea, j + 1, dxb);
          Scalar sign = (i % 2 == 0) ? Scalar(1) : Scalar(-1);
          for (std::size_t r = 0; r < rhs.size(); r++) rhs[r] += sign * second[r];
          if (!(lhs == rhs)) {
            witness = "degrees (" + std::to_string(i) + "," + std::to_string(j) +
                      ") basis (" + std::to_string(a) + "," + std::to_string(b) + ")";
            return false;
          }
        }
  return true;
}
}  // namespace detail

inline Report validate_dgla(const Dgla& l) {
  Report rep;
  bool shapes = l.max_degree >= 0 && l.max_degree <= 3 &&
                static_cast<int>(l.dims.size()) == l.max_degree + 1 &&
                detail::shapes_ok(l, l.d) &&
                static_cast<int>(l.bracket.size()) == l.max_degree + 1;
  for (int i = 0; i <= l.max_degree && shapes; i++) {
    shapes = static_cast<int>(l.bracket[i].size()) == l.max_degree + 1;
    for (int j = 0; i + j <= l.max_degree && shapes; j++)
      shapes = l.bracket[i][j].rows == l.dims[i] * l.dims[j] &&
               l.bracket[i][j].cols == l.dims[i + j];
  }
  if (l.has_double && shapes)
    shapes = detail::shapes_ok(l, l.d1) && detail::shapes_ok(l, l.d2);
  if (l.bigraded() && shapes) {
    shapes = static_cast<int>(l.types.size()) == l.max_degree + 1;
    for (int i = 0; i <= l.max_degree && shapes; i++)
      shapes = static_cast<int>(l.types[i].size()) == l.dims[i];
  }
  rep.require("shapes", shapes, "dimension or table shape mismatch");
  if (!shapes) return rep;

  bool dsq = true;
  std::string w;
  for (int i = 0; i + 1 <= l.max_degree; i++)
    if (!mul(l.d[i + 1], l.d[i]).is_zero()) {
      dsq = false;
      w = "d then d from degree " + std::to_string(i);
    }
  rep.require("d.squared", dsq, w);

  bool antisym = true;
  w.clear();
  for (int i = 0; i <= l.max_degree && antisym; i++)
    for (int j = i; i + j <= l.max_degree && antisym; j++)
      for (int a = 0; a < l.dims[i] && antisym; a++)
        for (int b = 0; b < l.dims[j] && antisym; b++) {
          Vec lhs = l.bracket_basis(i, a, j, b);
          Vec rhs = l.bracket_basis(j, b, i, a);
          Scalar sign = ((i * j) % 2 == 0) ? Scalar(-1) : Scalar(1);
          for (auto& s : rhs) s = s * sign;
          antisym = lhs == rhs;
          if (!antisym)
            w = "degrees (" + std::to_string(i) + "," + std::to_string(j) + ") basis (" +
                std::to_string(a) + "," + std::to_string(b) + ")";
        }
  rep.require("antisymmetry", antisym, w);

  bool jac = true;
  w.clear();
  for (int i = 0; i <= l.max_degree && jac; i++)
    for (int j = 0; i + j <= l.max_degree && jac; j++)
      for (int k = 0; i + j + k <= l.max_degree && jac; k++)
        for (int a = 0; a < l.dims[i] && jac; a++)
          for (int b = 0; b < l.dims[j] && jac; b++)
            for (int c = 0; c < l.dims[k] && jac; c++) {
              Vec ec(l.dims[k]);
              ec[c] = Scalar(1);
              Vec ea(l.dims[i]);
              ea[a] = Scalar(1);
              Vec eb(l.dims[j]);
              eb[b] = Scalar(1);
              // ad form: [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
              Vec lhs = l.bracket_vec(i, ea, j + k, l.bracket_basis(j, b, k, c));
              Vec t1 = l.bracket_vec(i + j, l.bracket_basis(i, a, j, b), k, ec);
              Vec t2 = l.bracket_vec(j, eb, i + k, l.bracket_basis(i, a, k, c));
              Scalar sign = ((i * j) % 2 == 0) ? Scalar(1) : Scalar(-1);
              Vec rhs(t1.size());
              for (std::size_t r = 0; r < rhs.size(); r++) rhs[r] = t1[r] + sign * t2[r];
              jac = lhs == rhs;
              if (!jac)
                w = "degrees (" + std::to_string(i) + "," + std::to_string(j) + "," +
                    std::to_string(k) + ") basis (" + std::to_string(a) + "," +
                    std::to_string(b) + "," + std::to_string(c) + ")";
            }
  rep.require("jacobi", jac, w);

  w.clear();
  bool leib = detail::leibniz_holds(l, l.d, w);
  rep.require("leibniz", leib, w);

  if (l.has_double) {
    bool sum_ok = true;
    for (int i = 0; i <= l.max_degree; i++)
      if (!(add(l.d1[i], l.d2[i]) == l.d[i])) sum_ok = false;
    rep.require("double.sum", sum_ok, "d != d1 + d2");
    bool sq = true;
    for (int i = 0; i + 1 <= l.max_degree; i++) {
      if (!mul(l.d1[i + 1], l.d1[i]).is_zero()) sq = false;
      if (!mul(l.d2[i + 1], l.d2[i]).is_zero()) sq = false;
      if (!add(mul(l.d1[i + 1], l.d2[i]), mul(l.d2[i + 1], l.d1[i])).is_zero()) sq = false;
    }
    rep.require("double.squares", sq, "d1^2, d2^2 or the anticommutator is nonzero");
    std::string w1, w2;
    rep.require("double.leibniz.d1", detail::leibniz_holds(l, l.d1, w1), w1);
    rep.require("double.leibniz.d2", detail::leibniz_holds(l, l.d2, w2), w2);
  }

  if (l.bigraded()) {
    bool br_types = true;
    w.clear();
    for (int i = 0; i <= l.max_degree && br_types; i++)
      for (int j = 0; i + j <= l.max_degree && br_types; j++)
        for (int a = 0; a < l.dims[i] && br_types; a++)
          for (int b = 0; b < l.dims[j] && br_types; b++) {
            Vec v = l.bracket_basis(i, a, j, b);
            Bitype want{l.types[i][a][0] + l.types[j][b][0],
                        l.types[i][a][1] + l.types[j][b][1]};
            for (int r = 0; r < l.dims[i + j]; r++)
              if (!v[r].is_zero() && !(l.types[i + j][r] == want)) {
                br_types = false;
                w = "bracket of (" + std::to_string(i) + "," + std::to_string(a) + ") x (" +
                    std::to_string(j) + "," + std::to_string(b) + ")";
              }
          }
    rep.require("bigrading.bracket", br_types, w);

    auto diff_type = [&](const std::vector<Matrix>& diff, int dp, int dq) {
      for (int i = 0; i + 1 <= l.max_degree; i++)
        for (int c = 0; c < l.dims[i]; c++)
          for (int r = 0; r < l.dims[i + 1]; r++)
            if (!diff[i].at(r, c).is_zero()) {
              if (l.types[i + 1][r][0] != l.types[i][c][0] + dp ||
                  l.types[i + 1][r][1] != l.types[i][c][1] + dq)
                return false;
            }
      return true;
    };
    if (l.has_double) {
      rep.require("bigrading.d1", diff_type(l.d1, 1, 0), "d1 is not of type (1,0)");
      rep.require("bigrading.d2", diff_type(l.d2, 0, 1), "d2 is not of type (0,1)");
    } else {
      bool dok = true;
      for (int i = 0; i + 1 <= l.max_degree && dok; i++)
        for (int c = 0; c < l.dims[i] && dok; c++)
          for (int r = 0; r < l.dims[i + 1] && dok; r++)
            if (!l.d[i].at(r, c).is_zero()) {
              bool t10 = l.types[i + 1][r][0] == l.types[i][c][0] + 1 &&
                         l.types[i + 1][r][1] == l.types[i][c][1];
              bool t01 = l.types[i + 1][r][0] == l.types[i][c][0] &&
                         l.types[i + 1][r][1] == l.types[i][c][1] + 1;
              dok = t10 || t01;
            }
      rep.require("bigrading.d", dok, "d has a component outside types (1,0) and (0,1)");
    }
  }
  return rep;
}

// Splitting delta: L^i -> L^{i-1}; delta[0] has zero rows. delta_g, when
// present, retracts the ambient Lie algebra g onto H^0 along the augmentation.
struct Splitting {
  std::vector<Matrix> delta;
  std::optional<Matrix> delta_g;
};

inline Subspace image_rows(const Matrix& m) {
  // column span of m as a row-space of the ambient target
  return Subspace::span_rows(transpose(m));
}

inline Subspace harmonic_space(const Dgla& l, const Splitting& s, int i) {
  Subspace kd = Subspace::span_rows(kernel_basis_rows(l.d[i]));
  Subspace kdelta = Subspace::span_rows(kernel_basis_rows(s.delta[i]));
  return intersect(kd, kdelta);
}

inline Report check_splitting(const Dgla& l, const Splitting& s) {
  Report rep;
  bool shapes = static_cast<int>(s.delta.size()) == l.max_degree + 1;
  for (int i = 0; i <= l.max_degree && shapes; i++) {
    int target = i >= 1 ? l.dims[i - 1] : 0;
    shapes = s.delta[i].rows == target && s.delta[i].cols == l.dims[i];
  }
  rep.require("shapes", shapes, "delta shape mismatch");
  if (!shapes) return rep;

  bool dsq = true;
  for (int i = 1; i <= l.max_degree; i++)
    if (i >= 1 && !mul(s.delta[i - 1], s.delta[i]).is_zero()) dsq = false;
  rep.require("delta.squared", dsq, "delta^2 != 0");

  bool dd = true, sd = true;
  for (int i = 0; i <= l.max_degree; i++) {
    if (i + 1 <= l.max_degree && !(mul(l.d[i], mul(s.delta[i + 1], l.d[i])) == l.d[i]))
      dd = false;
    if (i >= 1 && !(mul(s.delta[i], mul(l.d[i - 1], s.delta[i])) == s.delta[i])) sd = false;
  }
  rep.require("d.delta.d", dd, "d delta d != d");
  rep.require("delta.d.delta", sd, "delta d delta != delta");
  if (!rep.ok()) return rep;

  bool decomp = true;
  std::string w;
  for (int i = 0; i <= l.max_degree; i++) {
    Subspace imd = i >= 1 ? image_rows(l.d[i - 1]) : Subspace::zero(l.dims[i]);
    Subspace imdelta =
        i + 1 <= l.max_degree ? image_rows(s.delta[i + 1]) : Subspace::zero(l.dims[i]);
    Subspace harm = harmonic_space(l, s, i);
    bool ok = intersect(imd, imdelta).dim() == 0 && intersect(imd, harm).dim() == 0 &&
              intersect(imdelta, harm).dim() == 0 &&
              imd.dim() + imdelta.dim() + harm.dim() == l.dims[i];
    if (!ok) {
      decomp = false;
      w = "degree " + std::to_string(i);
    }
  }
  rep.require("decomposition", decomp, w);

  bool proj = true;
  for (int i = 0; i <= l.max_degree; i++) {
    Matrix ddelta = i >= 1 ? mul(l.d[i - 1], s.delta[i]) : Matrix(l.dims[i], l.dims[i]);
    Matrix deltad =
        i + 1 <= l.max_degree ? mul(s.delta[i + 1], l.d[i]) : Matrix(l.dims[i], l.dims[i]);
    Matrix hproj = sub(sub(Matrix::identity(l.dims[i]), ddelta), deltad);
    if (!(mul(ddelta, ddelta) == ddelta)) proj = false;
    if (!(mul(deltad, deltad) == deltad)) proj = false;
    if (!(mul(hproj, hproj) == hproj)) proj = false;
    Subspace himg = image_rows(hproj);
    if (!(himg == harmonic_space(l, s, i))) proj = false;
  }
  rep.require("projectors", proj, "projectors fail idempotence or image check");
  return rep;
}

// the unique splitting of a dgla with zero differential, and the base case
// for fixtures
inline Splitting zero_splitting(const Dgla& l) {
  Splitting s;
  s.delta.resize(l.max_degree + 1);
  for (int i = 0; i <= l.max_degree; i++)
    s.delta[i] = Matrix(i >= 1 ? l.dims[i - 1] : 0, l.dims[i]);
  return s;
}

// Harmonic projector P = id - d delta - delta d onto ker d cap ker delta.
inline Matrix harmonic_projector(const Dgla& l, const Splitting& s, int i) {
  Matrix p = Matrix::identity(l.dims[i]);
  if (i >= 1) p = sub(p, mul(l.d[i - 1], s.delta[i]));
  if (i + 1 <= l.max_degree) p = sub(p, mul(s.delta[i + 1], l.d[i]));
  return p;
}

struct Cohomology {
  std::vector<int> h_dims;
  std::vector<Matrix> h_basis;  // rows are representatives in L^i
};

inline Cohomology cohomology(const Dgla& l, const Splitting* s = nullptr) {
  Cohomology c;
  for (int i = 0; i <= l.max_degree; i++) {
    Subspace kd = Subspace::span_rows(kernel_basis_rows(l.d[i]));
    Matrix rep(0, l.dims[i]);
    if (s) {
      Subspace h = harmonic_space(l, *s, i);
      rep = h.basis;
    } else {
      Subspace imd = i >= 1 ? image_rows(l.d[i - 1]) : Subspace::zero(l.dims[i]);
      rep = complement_rows(imd, kd);
    }
    c.h_dims.push_back(rep.rows);
    c.h_basis.push_back(std::move(rep));
  }
  return c;
}

// coordinates of the class [v] in the chosen H^i basis; nullopt if v is not
// closed
inline std::optional<Vec> class_coords(const Dgla& l, const Cohomology& c, int i, const Vec& v) {
  if (!vec_is_zero(matvec(l.d[i], v))) return std::nullopt;
  Matrix a = transpose(c.h_basis[i]);
  if (i >= 1) a = hstack(a, l.d[i - 1]);
  std::optional<Vec> sol = solve_particular(a, v);
  if (!sol) return std::nullopt;
  Vec coords(c.h_dims[i]);
  for (int j = 0; j < c.h_dims[i]; j++) coords[j] = (*sol)[j];
  return coords;
}

struct DdbarResult {
  bool ok = true;
  int degree = -1;
  Vec witness;
};

inline DdbarResult check_ddbar(const Dgla& l) {
  if (!l.has_double) throw std::invalid_argument("check_ddbar: no double structure");
  DdbarResult res;
  for (int i = 0; i <= l.max_degree; i++) {
    Subspace k1 = Subspace::span_rows(kernel_basis_rows(l.d1[i]));
    Subspace k2 = Subspace::span_rows(kernel_basis_rows(l.d2[i]));
    Subspace im1 = i >= 1 ? image_rows(l.d1[i - 1]) : Subspace::zero(l.dims[i]);
    Subspace im2 = i >= 1 ? image_rows(l.d2[i - 1]) : Subspace::zero(l.dims[i]);
    Subspace lhs = intersect(intersect(k1, k2), sum(im1, im2));
    Subspace rhs = i >= 2 ? image_rows(mul(l.d1[i - 1], l.d2[i - 2])) : Subspace::zero(l.dims[i]);
    if (!(lhs == rhs)) {
      res.ok = false;
      res.degree = i;
      // pick a basis vector of the larger space outside the smaller one
      const Subspace& big = lhs.dim() >= rhs.dim() ? lhs : rhs;
      const Subspace& small = lhs.dim() >= rhs.dim() ? rhs : lhs;
      for (int r = 0; r < big.dim(); r++)
        if (!small.contains(big.basis.row(r))) {
          res.witness = big.basis.row(r);
          break;
        }
      return res;
    }
  }
  return res;
}

// Symmetric bilinear bracket on H^1 with values in H^2, rows indexed by pairs
// (a <= b) in the Sym^2 monomial order.
inline Matrix bracket_on_cohomology(const Dgla& l, const Cohomology& c) {
  int h1 = c.h_dims[1], h2 = l.max_degree >= 2 ? c.h_dims[2] : 0;
  Matrix b(sym2_dim(h1), h2);
  if (l.max_degree < 2) return b;
  for (int p = 0; p < h1; p++)
    for (int q = p; q < h1; q++) {
      Vec br = l.bracket_vec(1, c.h_basis[1].row(p), 1, c.h_basis[1].row(q));
      std::optional<Vec> cls = class_coords(l, c, 2, br);
      if (!cls) throw std::logic_error("bracket of closed forms is not closed");
      b.set_row(sym2_index(h1, p, q), *cls);
    }
  return b;
}

// Span of the quadrics cutting out the cone: one generator per H^2
// coordinate, with monomial coefficients read off from [u,u].
inline Subspace obstruction_quadric_span(const Matrix& b, int h1) {
  int h2 = b.cols;
  Matrix rows(h2, sym2_dim(h1));
  for (int h = 0; h < h2; h++)
    for (int p = 0; p < h1; p++)
      for (int q = p; q < h1; q++) {
        Scalar coeff = b.at(sym2_index(h1, p, q), h);
        if (p != q) coeff = coeff * Scalar(2);
        rows.at(h, sym2_index(h1, p, q)) = coeff;
      }
  return Subspace::span_rows(rows);
}

struct Augmentation {
  int g_dim = 0;
  Matrix g_bracket;  // (g_dim*g_dim) x g_dim, same row convention as Dgla
  Matrix eps;        // g_dim x dims[0], acts on column vectors
};

inline Vec g_bracket_vec(const Augmentation& a, const Vec& x, const Vec& y) {
  Vec z(a.g_dim);
  for (int p = 0; p < a.g_dim; p++) {
    if (x[p].is_zero()) continue;
    for (int q = 0; q < a.g_dim; q++) {
      if (y[q].is_zero()) continue;
      Scalar c = x[p] * y[q];
      for (int r = 0; r < a.g_dim; r++) {
        const Scalar& m = a.g_bracket.at(p * a.g_dim + q, r);
        if (!m.is_zero()) z[r] += c * m;
      }
    }
  }
  return z;
}

inline Report check_augmentation(const Dgla& l, const Augmentation& a, const Cohomology& c) {
  Report rep;
  bool shapes = a.g_bracket.rows == a.g_dim * a.g_dim && a.g_bracket.cols == a.g_dim &&
                a.eps.rows == a.g_dim && a.eps.cols == l.dims[0];
  rep.require("shapes", shapes, "augmentation shape mismatch");
  if (!shapes) return rep;

  bool anti = true;
  for (int p = 0; p < a.g_dim && anti; p++)
    for (int q = 0; q < a.g_dim && anti; q++) {
      Vec pq = a.g_bracket.row(p * a.g_dim + q);
      Vec qp = a.g_bracket.row(q * a.g_dim + p);
      for (auto& s : qp) s = -s;
      anti = pq == qp;
    }
  rep.require("g.antisymmetry", anti);

  bool jac = true;
  for (int p = 0; p < a.g_dim && jac; p++)
    for (int q = 0; q < a.g_dim && jac; q++)
      for (int r = 0; r < a.g_dim && jac; r++) {
        Vec ep(a.g_dim), eq(a.g_dim), er(a.g_dim);
        ep[p] = Scalar(1);
        eq[q] = Scalar(1);
        er[r] = Scalar(1);
        Vec lhs = g_bracket_vec(a, ep, g_bracket_vec(a, eq, er));
        Vec rhs = g_bracket_vec(a, g_bracket_vec(a, ep, eq), er);
        Vec t2 = g_bracket_vec(a, eq, g_bracket_vec(a, ep, er));
        for (int i = 0; i < a.g_dim; i++) rhs[i] += t2[i];
        jac = lhs == rhs;
      }
  rep.require("g.jacobi", jac);

  bool lie = true;
  for (int p = 0; p < l.dims[0] && lie; p++)
    for (int q = 0; q < l.dims[0] && lie; q++) {
      Vec ep(l.dims[0]), eq(l.dims[0]);
      ep[p] = Scalar(1);
      eq[q] = Scalar(1);
      Vec lhs = matvec(a.eps, l.bracket_basis(0, p, 0, q));
      Vec rhs = g_bracket_vec(a, matvec(a.eps, ep), matvec(a.eps, eq));
      lie = lhs == rhs;
    }
  rep.require("eps.lie_map", lie);

  Matrix eps_h0 = mul(a.eps, transpose(c.h_basis[0]));
  rep.require("eps.injective_on_h0", rank_of(eps_h0) == c.h_dims[0],
              "epsilon restricted to H^0 has a kernel");
  return rep;
}

// delta_g must retract the ambient g onto H^0 along eps.
inline Report check_delta_g(const Dgla& l, const Splitting& s, const Augmentation& a,
                            const Cohomology& c) {
  Report rep;
  bool shapes = s.delta_g.has_value() && s.delta_g->rows == c.h_dims[0] &&
                s.delta_g->cols == a.g_dim && a.eps.rows == a.g_dim &&
                a.eps.cols == l.dims[0];
  rep.require("shapes", shapes, "delta_g missing or mis-shaped");
  if (!shapes) return rep;
  Matrix eps_h0 = mul(a.eps, transpose(c.h_basis[0]));
  rep.require("retraction", mul(*s.delta_g, eps_h0) == Matrix::identity(c.h_dims[0]),
              "delta_g does not invert eps on H^0");
  return rep;
}

// Declared sub-dgla model: inclusion matrices per degree, checked to commute
// with the structure and to be a quasi-isomorphism.
struct ModelComparison {
  Report report;
  std::vector<Matrix> h_maps;  // induced H^i(sub) -> H^i(big) in the chosen bases
};

inline ModelComparison compare_models(const Dgla& sub, const Dgla& big,
                                      const std::vector<Matrix>& incl) {
  ModelComparison out;
  Report& rep = out.report;
  bool shapes = sub.max_degree == big.max_degree &&
                static_cast<int>(incl.size()) == sub.max_degree + 1;
  for (int i = 0; i <= sub.max_degree && shapes; i++)
    shapes = incl[i].rows == big.dims[i] && incl[i].cols == sub.dims[i];
  rep.require("shapes", shapes);
  if (!shapes) return out;

  bool inj = true;
  for (int i = 0; i <= sub.max_degree; i++)
    if (rank_of(incl[i]) != sub.dims[i]) inj = false;
  rep.require("injective", inj);

  bool chain = true;
  for (int i = 0; i + 1 <= sub.max_degree; i++)
    if (!(mul(incl[i + 1], sub.d[i]) == mul(big.d[i], incl[i]))) chain = false;
  rep.require("chain_map", chain);

  bool brmap = true;
  for (int i = 0; i <= sub.max_degree && brmap; i++)
    for (int j = 0; i + j <= sub.max_degree && brmap; j++)
      for (int p = 0; p < sub.dims[i] && brmap; p++)
        for (int q = 0; q < sub.dims[j] && brmap; q++) {
          Vec ep(sub.dims[i]), eq(sub.dims[j]);
          ep[p] = Scalar(1);
          eq[q] = Scalar(1);
          Vec lhs = matvec(incl[i + j], sub.bracket_basis(i, p, j, q));
          Vec rhs = big.bracket_vec(i, matvec(incl[i], ep), j, matvec(incl[j], eq));
          brmap = lhs == rhs;
        }
  rep.require("bracket_map", brmap);
  if (!rep.ok()) return out;

  Cohomology cs = cohomology(sub), cb = cohomology(big);
  bool qiso = true;
  for (int i = 0; i <= sub.max_degree; i++) {
    Matrix hmap(cb.h_dims[i], cs.h_dims[i]);
    bool ok = cs.h_dims[i] == cb.h_dims[i];
    for (int r = 0; r < cs.h_dims[i] && ok; r++) {
      Vec img = matvec(incl[i], cs.h_basis[i].row(r));
      std::optional<Vec> cls = class_coords(big, cb, i, img);
      if (!cls) {
        ok = false;
        break;
      }
      for (int c2 = 0; c2 < cb.h_dims[i]; c2++) hmap.at(c2, r) = (*cls)[c2];
    }
    if (ok && hmap.rows == hmap.cols && rank_of(hmap) != hmap.rows) ok = false;
    if (!ok) qiso = false;
    out.h_maps.push_back(std::move(hmap));
  }
  rep.require("quasi_isomorphism", qiso);
  return out;
}

}  // namespace gmdef
