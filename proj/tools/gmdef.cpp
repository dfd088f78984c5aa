#include <ctime>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gmdef/json_io.hpp"

namespace gmdef {
namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
  std::string input;
  int order = 2;
  bool respect_grading = false;
  std::string transversal = "hodge";
  bool deterministic = false;
  std::string out_dir = ".";
  std::string format = "json";
};

std::string iso_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// small scalars for the text rendering; matrices stay JSON-only
std::string text_body(const std::string& command, const Json& payload, const Report& rep,
                      const Options& o) {
  std::string s = "gmdef " + std::string(kVersion) + " " + command + "\n";
  if (!o.deterministic) s += "generated_at " + iso_now() + "\n";
  for (const auto& kv : payload.items()) {
    const Json& v = kv.value();
    bool flat = v.is_primitive() ||
                (v.is_array() && v.size() <= 24 &&
                 std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_number(); }));
    if (flat) s += kv.key() + " " + v.dump() + "\n";
  }
  s += rep.summary();
  s += rep.ok() ? "OK\n" : "FAIL\n";
  return s;
}

int emit(const Options& o, const std::string& command, const Json& payload, const Report& rep) {
  Json out;
  out["version"] = kVersion;
  out["command"] = command;
  if (!o.deterministic) out["generated_at"] = iso_now();
  for (const auto& kv : payload.items()) out[kv.key()] = kv.value();
  out["report"] = jio::report_to_json(rep);

  std::filesystem::create_directories(o.out_dir);
  std::string path = o.out_dir + "/" + command + (o.format == "json" ? ".json" : ".txt");
  std::string body = o.format == "json" ? out.dump(2) + "\n" : text_body(command, payload, rep, o);
  write_atomic(path, body);

  if (rep.ok()) {
    std::cout << "ok: " << path << "\n";
    return 0;
  }
  std::cout << "FAIL: " << rep.first_failure() << "\n" << "report: " << path << "\n";
  return 2;
}

std::string input_kind(const Json& j) {
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) throw io_error("/kind: expected a string");
    return j["kind"].get<std::string>();
  }
  if (j.contains("generators")) return "group";
  if (j.contains("mult")) return "artin";
  if (j.contains("w") && j.contains("f")) return "mhs";
  if (j.contains("dims")) return "dgla";
  throw io_error("/kind: cannot infer the input kind");
}

void expect_kind(const std::string& got, std::initializer_list<const char*> allowed) {
  for (const char* k : allowed)
    if (got == k) return;
  std::string msg = "/kind: '" + got + "' not usable here; expected one of";
  for (const char* k : allowed) msg += std::string(" ") + k;
  throw io_error(msg);
}

int cmd_cohomology(const Options& o) {
  Json j = load_json(o.input);
  expect_kind(input_kind(j), {"group"});
  GroupInput gi = group_from_json(j);
  Report rep = validate_rep(gi.pres, gi.rep);
  Json payload;
  payload["generators"] = gi.pres.gens;
  payload["relations"] = static_cast<int>(gi.pres.relations.size());
  if (rep.ok()) {
    RepContext ctx = rep_context(gi.pres, gi.rep);
    GroupCohomology coh = rep_cohomology(ctx);
    payload["module_dim"] = ctx.mdim;
    payload["h_dims"] = coh.h_dims;
    payload["euler"] = coh.h_dims[0] - coh.h_dims[1] + coh.h_dims[2];
    payload["h0"] = jio::matrix_to_json(coh.h0);
    payload["h1"] = jio::matrix_to_json(coh.h1);
    payload["h2"] = jio::matrix_to_json(coh.h2);
  }
  return emit(o, "cohomology", payload, rep);
}

// group inputs become the formal model on cohomology; dgla inputs are used
// directly with their splitting (zero splitting if omitted)
struct PreparedDgla {
  Dgla dgla;
  Splitting splitting;
  int vdim = 1;
  std::vector<Bitype> v_types = {Bitype{0, 0}};
  Matrix ev = Matrix(1, 0);
  Report pre;  // validation before any computation
};

PreparedDgla prepare_dgla(const Json& j) {
  PreparedDgla p;
  std::string kind = input_kind(j);
  expect_kind(kind, {"group", "dgla", "model"});
  if (kind == "group") {
    GroupInput gi = group_from_json(j);
    p.pre.merge(validate_rep(gi.pres, gi.rep), "rep");
    if (!p.pre.ok()) return p;
    RepContext ctx = rep_context(gi.pres, gi.rep);
    GroupCohomology coh = rep_cohomology(ctx);
    FormalPackage pkg = to_formal_dgla(ctx, coh, gi.h1_types, gi.h2_types);
    p.dgla = pkg.dgla;
    p.dgla.d1 = p.dgla.d;  // zero differential is trivially double
    p.dgla.d2 = p.dgla.d;
    p.dgla.has_double = true;
    p.splitting = zero_splitting(p.dgla);
    p.ev = Matrix(1, p.dgla.dims[0]);
  } else {
    DglaInput di = dgla_from_json(j);
    p.dgla = di.dgla;
    p.splitting = di.splitting;
    p.vdim = di.vdim;
    p.v_types = di.v_types;
    p.ev = di.ev;
  }
  p.pre.merge(validate_dgla(p.dgla), "dgla");
  p.pre.merge(check_splitting(p.dgla, p.splitting), "splitting");
  return p;
}

int cmd_cone(const Options& o) {
  Json j = load_json(o.input);
  PreparedDgla p = prepare_dgla(j);
  Report rep = p.pre;
  Json payload;
  if (!rep.ok()) return emit(o, "cone", payload, rep);

  KuranishiResult kr = kuranishi(p.dgla, p.splitting, nullptr, o.order, o.respect_grading);
  if (o.respect_grading) rep.merge(kr.grading, "grading");
  payload["order"] = o.order;
  payload["h_dims"] = kr.coh.h_dims;
  payload["cone"] = cone_to_json(kr.cone);
  Json gens = Json::array();
  for (const auto& s : kr.raw_generators.generators) gens.push_back(jio::matrix_to_json(s.basis));
  payload["obstruction_generators"] = gens;
  payload["universal_mc"] = ring_tensor_to_json(kr.universal);
  return emit(o, "cone", payload, rep);
}

int cmd_artin(const Options& o) {
  Json j = load_json(o.input);
  expect_kind(input_kind(j), {"artin"});
  GradedArtinAlgebra a = artin_from_json(j);
  Report rep = validate_algebra(a);
  Json payload;
  payload["dims"] = a.dims;
  payload["total_dim"] = a.total_dim();
  if (rep.ok()) {
    Json mk = Json::array();
    for (int k = 0; k <= a.n + 1; k++) mk.push_back(maximal_ideal_power(a, k).dim());
    payload["ideal_power_dims"] = mk;
  }
  return emit(o, "artin", payload, rep);
}

int cmd_mhs_check(const Options& o) {
  Json j = load_json(o.input);
  expect_kind(input_kind(j), {"mhs"});
  TripleFiltered v = mhs_from_json(j);
  Report rep = validate_filtrations(v);
  Json payload;
  payload["dim"] = v.dim;
  if (rep.ok()) {
    rep.merge(check_mhs(v));
    Json grw = Json::object();
    for (const auto& kv : v.w) {
      int below = filt_inc_at(v.w, kv.first - 1, v.dim).dim();
      grw[std::to_string(kv.first)] = kv.second.dim() - below;
    }
    payload["grw_dims"] = grw;
  }
  return emit(o, "mhs-check", payload, rep);
}

FormalityModel model_from_input(const Options& o, Report& pre) {
  Json j = load_json(o.input);
  PreparedDgla p = prepare_dgla(j);
  pre = p.pre;
  if (!pre.ok()) throw model_error(pre.first_failure());
  return make_formality_model(p.dgla, p.splitting, p.vdim, p.v_types, p.ev, o.order);
}

// expected pure type per order, read from a sidecar file:
// {"primed": {"2": [0,-1]}, "v": {"2": [-1,0]}}
Report file_type_check(const FormalityModel& m, const ConnectionSeries& c, const Json& spec,
                       const std::string& key) {
  Report rep;
  if (!spec.contains(key)) return rep;
  const Json& orders = spec[key];
  if (!orders.is_object()) throw io_error("transversal file: /" + key + " must be an object");
  for (const auto& kv : orders.items()) {
    int k;
    try {
      k = std::stoi(kv.key());
    } catch (const std::exception&) {
      throw io_error("transversal file: order keys must be integers");
    }
    if (k < 1 || k >= static_cast<int>(c.alpha.size()) || !c.alpha[k].rows) {
      rep.require("file.type." + kv.key(), false, "series has no term at this order");
      continue;
    }
    Bitype want = jio::bitype_from_json(kv.value(), "transversal file /" + key + "/" + kv.key());
    bool pure = true;
    std::string w;
    for (int i = 0; i < c.alpha[k].rows && pure; i++)
      for (int r = 0; r < c.alpha[k].cols; r++) {
        if (c.alpha[k].at(i, r).is_zero()) continue;
        Bitype t = detail::add_types(m.e.types[1][i], m.ring_types[k][r]);
        if (t != want) {
          pure = false;
          w = "component of type (" + std::to_string(t[0]) + "," + std::to_string(t[1]) + ")";
          break;
        }
      }
    rep.require("file.type." + kv.key(), pure, w);
  }
  return rep;
}

int cmd_mc(const Options& o) {
  Report pre;
  FormalityModel m = model_from_input(o, pre);
  ConnectionSeries cs = alpha_recursion(m, o.order);
  ConnectionSeries cv = alpha_v_recursion(m, o.order);
  Report rep = pre;
  rep.merge(flatness_check(m, cs), "primed");
  rep.merge(flatness_check(m, cv), "v");
  if (o.transversal == "hodge") {
    rep.merge(hodge_type_check(m, cs), "primed");
    rep.merge(hodge_type_check(m, cv), "v");
  } else if (o.transversal.rfind("file:", 0) == 0) {
    Json spec = load_json(o.transversal.substr(5));
    rep.merge(file_type_check(m, cs, spec, "primed"), "primed");
    rep.merge(file_type_check(m, cv, spec, "v"), "v");
  } else {
    throw io_error("--transversal: expected 'hodge' or 'file:PATH'");
  }
  Json payload;
  payload["order"] = o.order;
  payload["h_dims"] = m.kur.coh.h_dims;
  payload["ring_dims"] = m.kur.cone.ring.dims;
  payload["series"] = series_to_json(cs);
  payload["series_v"] = series_to_json(cv);
  return emit(o, "mc", payload, rep);
}

int cmd_compare_gauge(const Options& o) {
  Report pre;
  FormalityModel m = model_from_input(o, pre);
  ConnectionSeries cp = alpha_recursion(m, o.order);
  ConnectionSeries cv = alpha_v_recursion(m, o.order);
  GaugeComparison gc = gauge_compare(m, cp, cv, o.order);
  Report rep = pre;
  rep.merge(gc.rep);
  Json payload;
  payload["order"] = o.order;
  payload["gauge"] = ring_tensor_to_json(gc.g.lambda);
  payload["substitution"] = jio::matrix_to_json(gc.subst);
  return emit(o, "compare-gauge", payload, rep);
}

int cmd_vmhs(const Options& o) {
  Report pre;
  FormalityModel m = model_from_input(o, pre);
  ConnectionSeries cp = alpha_recursion(m, o.order);
  ConnectionSeries cv = alpha_v_recursion(m, o.order);
  GaugeComparison gc = gauge_compare(m, cp, cv, o.order);
  GaugeElement zero;
  zero.lambda = rt_zero(m.e.dims[0], m.kur.cone.ring);
  Report rep = pre;
  rep.merge(fiber_vmhs_check(m, cp, zero, zero, zero), "split");
  if (gc.rep.ok()) {
    rep.merge(fiber_vmhs_check(m, cp, gc.g, zero, zero), "transported");
  } else {
    rep.require("transported", false, gc.rep.first_failure());
  }
  Json payload;
  payload["order"] = o.order;
  payload["fiber_dim"] = m.vdim;
  payload["stalk_dim"] = m.vdim * m.kur.cone.ring.total_dim();
  payload["gauge"] = ring_tensor_to_json(gc.g.lambda);
  return emit(o, "vmhs", payload, rep);
}

int dispatch(const std::string& cmd, const Options& o) {
  try {
    if (cmd == "cohomology") return cmd_cohomology(o);
    if (cmd == "cone") return cmd_cone(o);
    if (cmd == "artin") return cmd_artin(o);
    if (cmd == "mhs-check") return cmd_mhs_check(o);
    if (cmd == "mc") return cmd_mc(o);
    if (cmd == "vmhs") return cmd_vmhs(o);
    if (cmd == "compare-gauge") return cmd_compare_gauge(o);
    std::cerr << "error: unknown command " << cmd << "\n";
    return 1;
  } catch (const io_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const model_error& e) {
    std::cerr << "model error: " << e.what() << "\n";
    Json payload;
    payload["error"] = e.what();
    try {
      emit(o, cmd, payload, [&] {
        Report r;
        r.require("model", false, e.what());
        return r;
      }());
    } catch (const std::exception&) {
    }
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace
}  // namespace gmdef

int main(int argc, char** argv) {
  CLI::App app{"formal deformation germs, obstruction cones and Hodge filtration checks"};
  app.require_subcommand(1);
  gmdef::Options o;

  auto add_common = [&](CLI::App* c, bool with_order) {
    c->add_option("--input", o.input, "input JSON path")->required();
    if (with_order) c->add_option("--order", o.order, "truncation order n")->check(CLI::NonNegativeNumber);
    c->add_flag("--deterministic", o.deterministic, "suppress timestamps for byte-stable output");
    c->add_option("--out", o.out_dir, "output directory (default .)");
    c->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "text"}));
    return c;
  };

  add_common(app.add_subcommand("cohomology", "presentation-complex cohomology at a representation"),
             false);
  CLI::App* cone = add_common(
      app.add_subcommand("cone", "kuranishi ring and obstruction ideal of the germ"), true);
  cone->add_flag("--respect-grading", o.respect_grading,
                 "track Hodge types through the obstruction calculus");
  add_common(app.add_subcommand("artin", "validate a graded Artin algebra and its ideal powers"),
             false);
  add_common(app.add_subcommand("mhs-check", "verify mixed Hodge conditions on filtration data"),
             false);
  CLI::App* mc = add_common(
      app.add_subcommand("mc", "flat connection series by the D'D'' recursion"), true);
  mc->add_option("--transversal", o.transversal,
                 "'hodge' for type bookkeeping or file:PATH with expected types per order");
  add_common(app.add_subcommand("vmhs", "mixed Hodge structure on the deformed stalk"), true);
  add_common(app.add_subcommand("compare-gauge", "gauge and substitution relating the two series"),
             true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return gmdef::dispatch(app.get_subcommands().front()->get_name(), o);
}
