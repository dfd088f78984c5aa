#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gmdef/artin.hpp"
#include "gmdef/connection.hpp"
#include "gmdef/group_cohomology.hpp"
#include "gmdef/mhs.hpp"

namespace gmdef {

using Json = nlohmann::ordered_json;

// Bad files, schema violations, unreadable paths. Distinct from model_error
// so the cli can map them to separate exit codes.
struct io_error : std::runtime_error {
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

namespace jio {

inline const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw io_error(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw io_error(path + "/" + key + ": missing");
  return *it;
}

inline int int_field(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_number_integer()) throw io_error(path + "/" + key + ": expected an integer");
  return v.get<int>();
}

inline Scalar scalar_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (!j.is_string()) throw io_error(path + ": expected a scalar string");
  try {
    return parse_scalar(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw io_error(path + ": " + e.what());
  }
}

inline Vec vec_from_json(const Json& j, int dim, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw io_error(path + ": expected an array of length " + std::to_string(dim));
  Vec v(dim);
  for (int i = 0; i < dim; i++) v[i] = scalar_from_json(j[i], path + "/" + std::to_string(i));
  return v;
}

// shape comes from context; zero rows serialize as []
inline Matrix matrix_from_json(const Json& j, int rows, int cols, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw io_error(path + ": expected " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (int r = 0; r < rows; r++) {
    Vec row = vec_from_json(j[r], cols, path + "/" + std::to_string(r));
    m.set_row(r, row);
  }
  return m;
}

// rows are free but columns are pinned (basis lists, relation matrices)
inline Matrix rows_from_json(const Json& j, int cols, const std::string& path) {
  if (!j.is_array()) throw io_error(path + ": expected an array of rows");
  return matrix_from_json(j, static_cast<int>(j.size()), cols, path);
}

inline Bitype bitype_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw io_error(path + ": expected a [p,q] pair");
  return Bitype{j[0].get<int>(), j[1].get<int>()};
}

inline std::vector<Bitype> bitypes_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) throw io_error(path + ": expected an array of [p,q] pairs");
  std::vector<Bitype> out;
  for (std::size_t i = 0; i < j.size(); i++)
    out.push_back(bitype_from_json(j[i], path + "/" + std::to_string(i)));
  return out;
}

inline Json vec_to_json(const Vec& v) {
  Json out = Json::array();
  for (const auto& s : v) out.push_back(scalar_string(s));
  return out;
}

inline Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (int r = 0; r < m.rows; r++) out.push_back(vec_to_json(m.row(r)));
  return out;
}

inline Json bitypes_to_json(const std::vector<Bitype>& ts) {
  Json out = Json::array();
  for (const auto& t : ts) out.push_back(Json::array({t[0], t[1]}));
  return out;
}

inline Json report_to_json(const Report& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    if (!c.witness.empty()) e["witness"] = c.witness;
    checks.push_back(e);
  }
  Json out;
  out["ok"] = rep.ok();
  out["checks"] = checks;
  return out;
}

}  // namespace jio

// ---------- input schemas ----------

struct GroupInput {
  Presentation pres;
  Representation rep;
  std::vector<Bitype> h1_types, h2_types;
};

inline GroupInput group_from_json(const Json& j) {
  GroupInput in;
  in.pres.gens = jio::int_field(j, "generators", "");
  if (in.pres.gens < 0) throw io_error("/generators: must be nonnegative");
  const Json& rels = jio::field(j, "relations", "");
  if (!rels.is_array()) throw io_error("/relations: expected an array");
  for (std::size_t r = 0; r < rels.size(); r++) {
    std::string path = "/relations/" + std::to_string(r);
    if (!rels[r].is_array()) throw io_error(path + ": expected an array of signed indices");
    Word w;
    for (const Json& x : rels[r]) {
      if (!x.is_number_integer()) throw io_error(path + ": letters are nonzero integers");
      int v = x.get<int>();
      if (v == 0 || v > in.pres.gens || v < -in.pres.gens)
        throw io_error(path + ": letter out of range");
      w.push_back(v);
    }
    in.pres.relations.push_back(w);
  }
  const Json& mats = jio::field(j, "matrices", "");
  if (!mats.is_array() || static_cast<int>(mats.size()) != in.pres.gens)
    throw io_error("/matrices: expected one matrix per generator");
  int n = -1;
  for (std::size_t g = 0; g < mats.size(); g++) {
    std::string path = "/matrices/" + std::to_string(g);
    if (!mats[g].is_array() || mats[g].empty()) throw io_error(path + ": expected a square matrix");
    if (n < 0) n = static_cast<int>(mats[g].size());
    in.rep.images.push_back(jio::matrix_from_json(mats[g], n, n, path));
  }
  if (j.contains("lie_subalgebra")) {
    if (n < 0) throw io_error("/lie_subalgebra: needs at least one generator matrix");
    Matrix rows = jio::rows_from_json(j["lie_subalgebra"], n * n, "/lie_subalgebra");
    in.rep.lie_subalgebra = Subspace::span_rows(rows);
  }
  if (j.contains("h1_types")) in.h1_types = jio::bitypes_from_json(j["h1_types"], "/h1_types");
  if (j.contains("h2_types")) in.h2_types = jio::bitypes_from_json(j["h2_types"], "/h2_types");
  return in;
}

struct DglaInput {
  Dgla dgla;
  Splitting splitting;
  bool has_splitting = false;
  int vdim = 1;
  std::vector<Bitype> v_types = {Bitype{0, 0}};
  Matrix ev = Matrix(1, 0);  // resized against dims[0] on parse
};

inline DglaInput dgla_from_json(const Json& j) {
  DglaInput in;
  Dgla& l = in.dgla;
  const Json& dims = jio::field(j, "dims", "");
  if (!dims.is_array() || dims.empty()) throw io_error("/dims: expected a nonempty array");
  for (const Json& d : dims) {
    if (!d.is_number_integer() || d.get<int>() < 0) throw io_error("/dims: nonnegative integers");
    l.dims.push_back(d.get<int>());
  }
  l.max_degree = static_cast<int>(l.dims.size()) - 1;
  int top = l.max_degree;

  auto read_d = [&](const char* key) {
    const Json& arr = jio::field(j, key, "");
    if (!arr.is_array() || static_cast<int>(arr.size()) != top + 1)
      throw io_error(std::string("/") + key + ": expected one matrix per degree");
    std::vector<Matrix> d(top + 1);
    for (int i = 0; i <= top; i++)
      d[i] = jio::matrix_from_json(arr[i], i + 1 <= top ? l.dims[i + 1] : 0, l.dims[i],
                                   std::string("/") + key + "/" + std::to_string(i));
    return d;
  };
  l.d = read_d("d");
  if (j.contains("d1") != j.contains("d2"))
    throw io_error("/d1: a double structure needs both d1 and d2");
  if (j.contains("d1")) {
    l.d1 = read_d("d1");
    l.d2 = read_d("d2");
    l.has_double = true;
  }

  l.bracket.assign(top + 1, std::vector<Matrix>(top + 1));
  for (int i = 0; i <= top; i++)
    for (int k = 0; i + k <= top; k++) l.bracket[i][k] = Matrix(l.dims[i] * l.dims[k], l.dims[i + k]);
  if (j.contains("bracket")) {
    const Json& br = j["bracket"];
    if (!br.is_array()) throw io_error("/bracket: expected an array of tables");
    for (std::size_t t = 0; t < br.size(); t++) {
      std::string path = "/bracket/" + std::to_string(t);
      int bi = jio::int_field(br[t], "i", path);
      int bk = jio::int_field(br[t], "j", path);
      if (bi < 0 || bk < 0 || bi + bk > top) throw io_error(path + ": degrees out of range");
      const Json& triples = jio::field(br[t], "triples", path);
      if (!triples.is_array()) throw io_error(path + "/triples: expected an array");
      for (std::size_t s = 0; s < triples.size(); s++) {
        std::string tp = path + "/triples/" + std::to_string(s);
        const Json& tr = triples[s];
        if (!tr.is_array() || tr.size() != 3) throw io_error(tp + ": expected [a, b, coeffs]");
        if (!tr[0].is_number_integer() || !tr[1].is_number_integer())
          throw io_error(tp + ": basis indices are integers");
        int a = tr[0].get<int>(), b = tr[1].get<int>();
        if (a < 0 || a >= l.dims[bi] || b < 0 || b >= l.dims[bk])
          throw io_error(tp + ": basis index out of range");
        Vec coeffs = jio::vec_from_json(tr[2], l.dims[bi + bk], tp + "/2");
        l.bracket[bi][bk].set_row(a * l.dims[bk] + b, coeffs);
      }
    }
  }

  if (j.contains("types")) {
    const Json& ts = j["types"];
    if (!ts.is_array() || static_cast<int>(ts.size()) != top + 1)
      throw io_error("/types: expected one list per degree");
    l.types.resize(top + 1);
    for (int i = 0; i <= top; i++) {
      l.types[i] = jio::bitypes_from_json(ts[i], "/types/" + std::to_string(i));
      if (static_cast<int>(l.types[i].size()) != l.dims[i])
        throw io_error("/types/" + std::to_string(i) + ": must label every basis vector");
    }
  }

  in.splitting = zero_splitting(l);
  if (j.contains("splitting")) {
    const Json& sp = j["splitting"];
    if (!sp.is_array() || static_cast<int>(sp.size()) != top + 1)
      throw io_error("/splitting: expected one matrix per degree");
    for (int i = 0; i <= top; i++)
      in.splitting.delta[i] =
          jio::matrix_from_json(sp[i], i >= 1 ? l.dims[i - 1] : 0, l.dims[i],
                                "/splitting/" + std::to_string(i));
    in.has_splitting = true;
  }

  in.ev = Matrix(1, l.dims[0]);
  if (j.contains("fiber")) {
    const Json& fb = j["fiber"];
    in.vdim = jio::int_field(fb, "dim", "/fiber");
    if (in.vdim <= 0) throw io_error("/fiber/dim: must be positive");
    in.v_types = jio::bitypes_from_json(jio::field(fb, "types", "/fiber"), "/fiber/types");
    if (static_cast<int>(in.v_types.size()) != in.vdim)
      throw io_error("/fiber/types: must label every fiber coordinate");
    in.ev = jio::matrix_from_json(jio::field(fb, "action", "/fiber"), in.vdim * in.vdim,
                                  l.dims[0], "/fiber/action");
  }
  return in;
}

inline GradedArtinAlgebra artin_from_json(const Json& j) {
  GradedArtinAlgebra a;
  const Json& dims = jio::field(j, "dims", "");
  if (!dims.is_array() || dims.empty()) throw io_error("/dims: expected a nonempty array");
  for (const Json& d : dims) {
    if (!d.is_number_integer() || d.get<int>() < 0) throw io_error("/dims: nonnegative integers");
    a.dims.push_back(d.get<int>());
  }
  a.n = static_cast<int>(a.dims.size()) - 1;
  const Json& mult = jio::field(j, "mult", "");
  if (!mult.is_array() || static_cast<int>(mult.size()) != a.n + 1)
    throw io_error("/mult: expected one row of tables per degree");
  a.mult.resize(a.n + 1);
  for (int p = 0; p <= a.n; p++) {
    std::string path = "/mult/" + std::to_string(p);
    if (!mult[p].is_array() || static_cast<int>(mult[p].size()) != a.n + 1 - p)
      throw io_error(path + ": expected tables for every degree pair");
    a.mult[p].resize(a.n + 1 - p);
    for (int q = 0; p + q <= a.n; q++)
      a.mult[p][q] = jio::matrix_from_json(mult[p][q], a.dims[p] * a.dims[q], a.dims[p + q],
                                           path + "/" + std::to_string(q));
  }
  return a;
}

inline FiltMap filt_from_json(const Json& j, int dim, const std::string& path) {
  if (!j.is_object()) throw io_error(path + ": expected an object keyed by filtration step");
  FiltMap out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    int key;
    try {
      key = std::stoi(it.key());
    } catch (const std::exception&) {
      throw io_error(path + "/" + it.key() + ": key must be an integer");
    }
    Matrix rows = jio::rows_from_json(it.value(), dim, path + "/" + it.key());
    out[key] = Subspace::span_rows(rows);
  }
  return out;
}

inline TripleFiltered mhs_from_json(const Json& j) {
  TripleFiltered v;
  v.dim = jio::int_field(j, "dim", "");
  if (v.dim < 0) throw io_error("/dim: must be nonnegative");
  v.w = filt_from_json(jio::field(j, "w", ""), v.dim, "/w");
  v.f = filt_from_json(jio::field(j, "f", ""), v.dim, "/f");
  v.g = filt_from_json(jio::field(j, "g", ""), v.dim, "/g");
  return v;
}

// ---------- output builders ----------

inline Json ring_to_json(const GradedArtinAlgebra& a) {
  Json out;
  out["n"] = a.n;
  out["dims"] = a.dims;
  out["total_dim"] = a.total_dim();
  Json mult = Json::array();
  for (int p = 0; p <= a.n; p++) {
    Json row = Json::array();
    for (int q = 0; p + q <= a.n; q++) row.push_back(jio::matrix_to_json(a.mult[p][q]));
    mult.push_back(row);
  }
  out["mult"] = mult;
  return out;
}

inline Json cone_to_json(const ConeRing& cone) {
  Json out;
  out["ring"] = ring_to_json(cone.ring);
  Json monos = Json::array();
  for (int k = 0; k <= cone.ring.n; k++) {
    Json level = Json::array();
    for (int i = 0; i < cone.ring.dims[k]; i++)
      level.push_back(cone.sym.monomials[k][cone.basis_monomial[k][i]]);
    monos.push_back(level);
  }
  out["monomials"] = monos;
  Json ideal = Json::array();
  for (const auto& s : cone.ideal) ideal.push_back(jio::matrix_to_json(s.basis));
  out["ideal"] = ideal;
  return out;
}

inline Json ring_tensor_to_json(const RingTensor& x) {
  Json out = Json::array();
  for (const auto& c : x.c) out.push_back(jio::matrix_to_json(c));
  return out;
}

inline Json series_to_json(const ConnectionSeries& c) {
  Json out;
  out["primed"] = c.primed;
  Json alphas = Json::object(), gammas = Json::object();
  for (int k = 1; k < static_cast<int>(c.alpha.size()); k++)
    if (c.alpha[k].rows) alphas[std::to_string(k)] = jio::matrix_to_json(c.alpha[k]);
  for (int k = 2; k < static_cast<int>(c.gamma.size()); k++)
    if (c.gamma[k].rows) gammas[std::to_string(k)] = jio::matrix_to_json(c.gamma[k]);
  out["alpha"] = alphas;
  out["gamma"] = gammas;
  return out;
}

inline Json filt_to_json(const FiltMap& f) {
  Json out = Json::object();
  for (const auto& kv : f) out[std::to_string(kv.first)] = jio::matrix_to_json(kv.second.basis);
  return out;
}

// ---------- file plumbing ----------

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error(path + ": cannot open");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw io_error(path + ": " + e.what());
  }
  return j;
}

inline void write_atomic(const std::string& path, const std::string& body) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw io_error(tmp + ": cannot open for writing");
    out << body;
    if (!out) throw io_error(tmp + ": write failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw io_error(path + ": rename failed");
}

}  // namespace gmdef
