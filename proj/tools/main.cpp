// Command-line front end. Talks to the library exclusively through the C API.
// Exit codes: 0 every check passed, 1 at least one check failed (the emitted
// report carries the witness), 2 configuration or runtime error.

#include <fmpos/fmpos.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

namespace {

using Json = nlohmann::ordered_json;

struct ToolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// RAII for the C API's char* outputs and opaque handles.
struct CStr {
  char* s = nullptr;
  ~CStr() { fmpos_string_free(s); }
  std::string str() const { return s ? std::string(s) : std::string(); }
};
struct SymbolHandle {
  fmpos_symbol* s = nullptr;
  ~SymbolHandle() { fmpos_symbol_destroy(s); }
};
struct FieldHandle {
  fmpos_field* f = nullptr;
  ~FieldHandle() { fmpos_field_destroy(f); }
};
struct ReportHandle {
  fmpos_report* r = nullptr;
  ~ReportHandle() { fmpos_report_destroy(r); }
};

void expect_ok(fmpos_status st, const std::string& what) {
  if (st != FMPOS_OK) throw ToolError(what + ": " + fmpos_last_error());
}

Json load_config(const std::string& path) {
  if (path.empty()) return Json();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ToolError("cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw ToolError("config parse (" + path + "): " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ToolError("cannot open output file '" + path + "'");
  out << text;
  if (!out.good()) throw ToolError("short write to '" + path + "'");
}

// JSON results go to stdout unless --out redirects them to a file.
void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text << "\n";
  else
    write_text(out_path, text + "\n");
}

// --grid n,N,L: dimension, samples per axis (power of two), box length.
Json grid_json(const std::vector<double>& g) {
  if (g.size() != 3) throw ToolError("--grid expects n,N,L");
  const int dim = static_cast<int>(g[0]);
  const int samples = static_cast<int>(g[1]);
  if (g[0] != dim || g[1] != samples)
    throw ToolError("--grid: n and N must be integers");
  return Json{{"dim", dim}, {"samples", samples}, {"length", g[2]}};
}

// Option values shared by the subcommands; each pairs with a count() check.
struct Flags {
  std::string config;
  std::string out;
  std::string csv;
  uint64_t seed = 1;
  bool has_seed = false;
  double tol = 0.0;
  bool has_tol = false;
  std::vector<double> grid;
};

// Config is either the symbol spec itself or {"symbol": ..., "plan": ...}.
void split_symbol_plan(const Json& cfg, Json& symbol, Json& plan) {
  if (!cfg.is_object())
    throw ToolError("config must be a JSON object carrying the symbol spec");
  if (cfg.contains("symbol")) {
    symbol = cfg.at("symbol");
    plan = cfg.contains("plan") ? cfg.at("plan") : Json();
  } else {
    symbol = cfg;
    plan = Json();
  }
}

Json plan_with_overrides(Json plan, const Flags& fl) {
  if (fl.has_seed || fl.has_tol) {
    if (plan.is_null()) plan = Json::object();
    if (!plan.is_object()) throw ToolError("plan must be a JSON object");
    if (fl.has_seed) plan["seed"] = fl.seed;
    if (fl.has_tol) plan["tol"] = fl.tol;
  }
  return plan;
}

int run_function_test(const std::string& cmd, bool conditional,
                      const Json& symbol, const Json& plan, const Flags& fl) {
  SymbolHandle s;
  expect_ok(fmpos_symbol_create(symbol.dump().c_str(), &s.s), cmd);
  std::string pj;
  if (!plan.is_null()) pj = plan.dump();
  int passed = 0;
  CStr verdict;
  const auto test = conditional ? fmpos_test_cpsd : fmpos_test_psd;
  expect_ok(test(s.s, pj.empty() ? nullptr : pj.c_str(), &passed, &verdict.s),
            cmd);
  Json out{{"version", fmpos_version()}, {"command", cmd},
           {"symbol", symbol},           {"plan", plan},
           {"passed", passed == 1},      {"verdict", Json::parse(verdict.str())}};
  emit(out.dump(2), fl.out);
  return passed ? 0 : 1;
}

int cmd_test(const std::string& cmd, bool conditional, const Flags& fl) {
  Json symbol, plan;
  split_symbol_plan(load_config(fl.config), symbol, plan);
  return run_function_test(cmd, conditional, symbol,
                           plan_with_overrides(std::move(plan), fl), fl);
}

// Builds the positive-definite symbol of an atomic measure and checks it.
int cmd_synth_bochner(const Flags& fl) {
  const Json cfg = load_config(fl.config);
  if (!cfg.is_object())
    throw ToolError("synth-bochner: config must carry the measure");
  const Json measure = cfg.contains("measure") ? cfg.at("measure") : cfg;
  const int m =
      measure.is_object() && measure.contains("m") ? measure.at("m").get<int>() : 1;
  const Json symbol{{"family", m > 1 ? "bochner-matrix" : "bochner"},
                    {"measure", measure}};
  const Json plan = plan_with_overrides(
      cfg.contains("plan") ? cfg.at("plan") : Json(), fl);
  return run_function_test("synth-bochner", false, symbol, plan, fl);
}

// Builds the canonical-form conditionally-positive symbol and checks it.
int cmd_synth_lk(const Flags& fl) {
  const Json cfg = load_config(fl.config);
  if (!cfg.is_object())
    throw ToolError("synth-lk: config must carry the canonical-form parameters");
  Json symbol = cfg.contains("lk") ? cfg.at("lk") : cfg;
  if (!symbol.is_object()) throw ToolError("synth-lk: parameters must be an object");
  symbol.erase("plan");
  symbol["family"] = "levy-khintchine";
  const Json plan = plan_with_overrides(
      cfg.contains("plan") ? cfg.at("plan") : Json(), fl);
  return run_function_test("synth-lk", true, symbol, plan, fl);
}

int cmd_apply(const Flags& fl) {
  const Json cfg = load_config(fl.config);
  if (!cfg.is_object() || !cfg.contains("symbol"))
    throw ToolError("apply: config must carry a symbol spec under \"symbol\"");
  const Json symbol = cfg.at("symbol");
  SymbolHandle s;
  expect_ok(fmpos_symbol_create(symbol.dump().c_str(), &s.s), "apply: symbol");
  int m = 0;
  expect_ok(fmpos_symbol_info(s.s, nullptr, &m, nullptr), "apply: symbol info");

  // Input comes from an MPLB container ({"field": {"load": path}}) or from a
  // field spec realized on --grid (default: seeded three-bump mixture).
  FieldHandle in;
  Json field = cfg.contains("field") ? cfg.at("field") : Json();
  if (field.is_object() && field.contains("load")) {
    expect_ok(fmpos_field_load(field.at("load").get<std::string>().c_str(), &in.f),
              "apply: field load");
  } else {
    Json g;
    if (!fl.grid.empty())
      g = grid_json(fl.grid);
    else if (cfg.contains("grid"))
      g = cfg.at("grid");
    else
      throw ToolError("apply: need --grid n,N,L or a \"grid\" object in the config");
    if (field.is_null())
      field = Json{{"kind", "bump-mixture"}, {"count", 3}, {"seed", fl.seed}};
    expect_ok(fmpos_field_create_from_spec(
                  field.dump().c_str(), g.at("dim").get<int>(),
                  g.at("samples").get<int>(), g.at("length").get<double>(), m,
                  &in.f),
              "apply: field");
  }

  // With --tol the run doubles as a positivity trial and drives the exit code.
  Json trial;
  int passed = 1;
  if (fl.has_tol) {
    CStr verdict;
    expect_ok(fmpos_positivity_trial(s.s, in.f, fl.tol, &passed, &verdict.s),
              "apply: positivity trial");
    trial = Json::parse(verdict.str());
  }

  FieldHandle result;
  expect_ok(fmpos_apply(s.s, in.f, &result.f), "apply");
  std::string saved;
  if (cfg.contains("field_out")) {
    saved = cfg.at("field_out").get<std::string>();
    expect_ok(fmpos_field_save(result.f, saved.c_str()), "apply: field save");
  }
  if (!fl.csv.empty()) {
    CStr csv;
    expect_ok(fmpos_field_csv(result.f, &csv.s), "apply: csv");
    write_text(fl.csv, csv.str());
  }

  long points = 0;
  int components = 0;
  expect_ok(fmpos_field_size(result.f, &points, &components), "apply: size");
  Json out{{"version", fmpos_version()},
           {"command", "apply"},
           {"symbol", symbol},
           {"field", field},
           {"points", points},
           {"components", components},
           {"trial", trial}};
  if (!saved.empty()) out["field_out"] = saved;
  emit(out.dump(2), fl.out);
  return passed ? 0 : 1;
}

int cmd_norms(const Flags& fl) {
  const Json cfg = load_config(fl.config);
  Json symbol = cfg.is_object() && cfg.contains("symbol") ? cfg.at("symbol") : cfg;
  if (symbol.is_null()) throw ToolError("norms: config must carry a symbol spec");
  SymbolHandle s;
  expect_ok(fmpos_symbol_create(symbol.dump().c_str(), &s.s), "norms: symbol");
  Json g;
  if (!fl.grid.empty())
    g = grid_json(fl.grid);
  else if (cfg.is_object() && cfg.contains("grid"))
    g = cfg.at("grid");
  else
    g = Json{{"dim", 1}, {"samples", 1024}, {"length", 40.0}};
  const int batch =
      cfg.is_object() && cfg.contains("batch") ? cfg.at("batch").get<int>() : 16;
  CStr rep;
  expect_ok(fmpos_norm_report(s.s, g.at("dim").get<int>(),
                              g.at("samples").get<int>(),
                              g.at("length").get<double>(), fl.seed, batch,
                              &rep.s),
            "norms");
  Json out{{"version", fmpos_version()},
           {"command", "norms"},
           {"symbol", symbol},
           {"grid", g},
           {"report", Json::parse(rep.str())}};
  emit(out.dump(2), fl.out);
  return 0;
}

// verify <scenario> and falsify share the harness path; shortcut flags patch
// the scenario params before defaults are merged in by the library.
int cmd_scenario(const std::string& kind, const Flags& fl,
                 const std::string& a_family, double b, bool has_b,
                 const std::vector<double>& t) {
  Json cfg = load_config(fl.config);
  if (cfg.is_null()) cfg = Json::object();
  if (!cfg.is_object()) throw ToolError("config must be a JSON object");
  cfg["kind"] = kind;
  if (fl.has_seed) cfg["seed"] = fl.seed;
  if (!fl.grid.empty()) cfg["grid"] = grid_json(fl.grid);
  const auto param = [&cfg](const std::string& key, Json v) {
    Json& p = cfg["params"];
    if (p.is_null()) p = Json::object();
    if (!p.is_object()) throw ToolError("config \"params\" must be an object");
    p[key] = std::move(v);
  };
  if (!a_family.empty()) param("a", Json{{"family", a_family}});
  if (has_b) param("b", b);
  if (!t.empty()) param("t", Json(t));
  if (fl.has_tol) param("trial_tol", fl.tol);

  ReportHandle rep;
  expect_ok(fmpos_scenario_run(cfg.dump().c_str(), &rep.r), kind);
  int passed = 0;
  expect_ok(fmpos_report_passed(rep.r, &passed), kind);
  CStr js;
  expect_ok(fmpos_report_json(rep.r, &js.s), kind);
  emit(js.str(), fl.out);
  if (!fl.csv.empty()) {
    CStr csv;
    expect_ok(fmpos_report_csv(rep.r, &csv.s), kind);
    write_text(fl.csv, csv.str());
  }
  return passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Positive Fourier multiplier toolkit: sampled positivity tests, symbol "
      "synthesis, a spectral multiplier engine, and a scenario harness."};
  app.require_subcommand(1);

  Flags fl;
  std::string scenario;
  std::string a_family;
  double b = 0.0;
  std::vector<double> t;

  const auto common = [&fl](CLI::App* sub, bool grid, bool tol, bool csv) {
    sub->add_option("--config", fl.config, "JSON config file");
    sub->add_option("--seed", fl.seed, "random stream seed");
    sub->add_option("--out", fl.out, "write the JSON result here instead of stdout");
    if (grid)
      sub->add_option("--grid", fl.grid, "grid as n,N,L")
          ->delimiter(',')
          ->expected(3);
    if (tol) sub->add_option("--tol", fl.tol, "tolerance override");
    if (csv) sub->add_option("--csv", fl.csv, "write a CSV summary here");
  };

  auto* tpsd = app.add_subcommand(
      "test-psd", "sampled positive-definiteness test of a symbol spec");
  common(tpsd, false, true, false);
  tpsd->get_option("--config")->required();

  auto* tcpsd = app.add_subcommand(
      "test-cpsd",
      "sampled conditional positive-definiteness test of a scalar symbol");
  common(tcpsd, false, true, false);
  tcpsd->get_option("--config")->required();

  auto* sboch = app.add_subcommand(
      "synth-bochner",
      "build the symbol of an atomic measure and test it for positivity");
  common(sboch, false, true, false);
  sboch->get_option("--config")->required();

  auto* slk = app.add_subcommand(
      "synth-lk",
      "build a canonical-form symbol and test it for conditional positivity");
  common(slk, false, true, false);
  slk->get_option("--config")->required();

  auto* apply = app.add_subcommand(
      "apply", "apply a symbol's multiplier to a field; --tol adds a "
               "positivity trial");
  common(apply, true, true, true);
  apply->get_option("--config")->required();

  auto* norms = app.add_subcommand(
      "norms", "kernel total variation, operator mass, and bound report");
  common(norms, true, false, false);
  norms->get_option("--config")->required();

  auto* verify = app.add_subcommand("verify", "run one scenario of the harness");
  verify->add_option("scenario", scenario, "scenario kind")->required();
  common(verify, true, true, true);
  verify->add_option("--a", a_family, "scalar symbol family for the a-slot");
  auto* bopt = verify->add_option("--b", b, "coupling constant");
  verify->add_option("--t", t, "time list")->delimiter(',');

  auto* falsify = app.add_subcommand(
      "falsify", "hunt for positivity violations of a non-definite symbol");
  common(falsify, true, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const CLI::App* active = app.get_subcommands().front();
  const auto given = [active](const std::string& name) {
    const CLI::Option* o = active->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  fl.has_seed = given("--seed");
  fl.has_tol = given("--tol");

  try {
    if (tpsd->parsed()) return cmd_test("test-psd", false, fl);
    if (tcpsd->parsed()) return cmd_test("test-cpsd", true, fl);
    if (sboch->parsed()) return cmd_synth_bochner(fl);
    if (slk->parsed()) return cmd_synth_lk(fl);
    if (apply->parsed()) return cmd_apply(fl);
    if (norms->parsed()) return cmd_norms(fl);
    if (verify->parsed())
      return cmd_scenario(scenario, fl, a_family, b, bopt->count() > 0, t);
    if (falsify->parsed())
      return cmd_scenario("falsify", fl, "", 0.0, false, {});
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
