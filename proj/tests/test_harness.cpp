#include <doctest.h>

#include "core/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

using namespace fmpos;

namespace {

Json strip_elapsed(Json j) {
  j.erase("elapsed_ms");
  return j;
}

const CheckRecord& check_named(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  FAIL("missing check ", name);
  static CheckRecord dummy;
  return dummy;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("scenario registry is closed and self-describing") {
  const auto kinds = scenario_kinds();
  CHECK(kinds.size() == 10);
  std::set<std::string> seen(kinds.begin(), kinds.end());
  CHECK(seen.size() == kinds.size());
  for (const auto& k : kinds) {
    const Json cfg = default_scenario_config(k);
    CHECK(cfg.at("kind").get<std::string>() == k);
    CHECK(cfg.at("version").get<int>() == 1);
    CHECK(cfg.at("seed").get<uint64_t>() == 1);
    CHECK(cfg.at("params").is_object());
  }
  CHECK_THROWS_AS(default_scenario_config("no-such-kind"), ToolkitError);
}

TEST_CASE("reports are byte-identical across repeated runs") {
  for (const char* kind : {"norm-suite", "schur-suite", "example-2-6"}) {
    const Json cfg{{"kind", kind}, {"seed", 11}};
    const Json a = strip_elapsed(run_scenario(cfg).to_json());
    const Json b = strip_elapsed(run_scenario(cfg).to_json());
    CHECK(a == b);
    CHECK(a.dump() == b.dump());
  }
}

TEST_CASE("report schema carries fixed top-level key order") {
  const Report r = run_scenario(Json{{"kind", "norm-suite"}});
  const Json j = r.to_json();
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> want{"version", "scenario", "checks", "seed",
                                      "grid",    "config",   "elapsed_ms"};
  CHECK(keys == want);
  CHECK(j.at("version").get<std::string>() == toolkit_version());
  for (const auto& c : j.at("checks")) {
    CHECK(c.contains("name"));
    CHECK(c.contains("passed"));
    CHECK(c.contains("value"));
    CHECK(c.contains("tol"));
    CHECK(c.contains("witness"));
  }
}

TEST_CASE("gridless scenarios report a null grid and reject one") {
  const Report r = run_scenario(Json{{"kind", "schur-suite"},
                                     {"params", Json{{"pairs", 20}}}});
  CHECK(r.grid.is_null());
  CHECK(r.passed());
  CHECK_THROWS_AS(
      run_scenario(Json{{"kind", "bochner-suite"},
                        {"grid", Json{{"dim", 1}, {"samples", 64}, {"length", 8.0}}}}),
      ToolkitError);
}

TEST_CASE("malformed configs are rejected as configuration errors") {
  const auto code_of = [](const Json& cfg) {
    try {
      run_scenario(cfg);
    } catch (const ToolkitError& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  CHECK(code_of(Json::array()) == ErrorCode::ConfigInvalid);
  CHECK(code_of(Json{{"seed", 1}}) == ErrorCode::ConfigInvalid);
  CHECK(code_of(Json{{"kind", "no-such"}}) == ErrorCode::ConfigInvalid);
  CHECK(code_of(Json{{"kind", "norm-suite"}, {"version", 2}}) ==
        ErrorCode::ConfigInvalid);
  CHECK(code_of(Json{{"kind", "norm-suite"}, {"seed", -3}}) ==
        ErrorCode::ConfigInvalid);
  CHECK(code_of(Json{{"kind", "norm-suite"}, {"params", 7}}) ==
        ErrorCode::ConfigInvalid);
  CHECK(code_of(Json{{"kind", "falsify"},
                     {"params", Json{{"symbol", Json{{"family", "exp-f0"},
                                                     {"a", Json{{"family", "constant"}}},
                                                     {"b", 1.0},
                                                     {"t", 1.0}}}}}}) ==
        ErrorCode::ConfigInvalid);
  CHECK(code_of(Json{{"kind", "example-2-6"},
                     {"grid", Json{{"dim", 1}, {"samples", 100}, {"length", 8.0}}}}) ==
        ErrorCode::ConfigInvalid);
}

TEST_CASE("config overrides merge into the defaults echo") {
  const Json cfg{{"kind", "example-2-6"},
                 {"seed", 5},
                 {"params", Json{{"mlak_sets", 2}, {"decomposition_sets", 2},
                                 {"x_samples", 3}}}};
  const Report r = run_scenario(cfg);
  CHECK(r.seed == 5);
  CHECK(r.config.at("seed").get<uint64_t>() == 5);
  CHECK(r.config.at("params").at("mlak_sets").get<int>() == 2);
  CHECK(r.config.at("params").at("b").get<double>() == 1.0);
  CHECK(check_named(r, "vector-conditionally-psd").series.size() == 2);
}

TEST_CASE("coupled-pair scenario passes with the decaying coefficient") {
  for (uint64_t seed : {1ull, 7ull}) {
    const Report r = run_scenario(Json{{"kind", "example-2-6"}, {"seed", seed}});
    CHECK(r.passed());
    CHECK(r.checks.size() == 8);
    const std::vector<std::string> want{
        "coefficient-conditionally-psd", "coupling-term-vanishes",
        "vector-conditionally-psd",      "closed-form-match",
        "factor-eigenvalues",            "semigroup-block-psd",
        "kronecker-decomposition",       "grid-positivity"};
    for (size_t i = 0; i < want.size(); ++i) CHECK(r.checks[i].name == want[i]);
  }
}

TEST_CASE("coupled-pair scenario fails honestly with a growing coefficient") {
  const Report r = run_scenario(
      Json{{"kind", "example-2-6"},
           {"params", Json{{"a", Json{{"family", "quadratic"}, {"dim", 1}}}}}});
  CHECK_FALSE(r.passed());

  const CheckRecord& cpsd = check_named(r, "coefficient-conditionally-psd");
  CHECK_FALSE(cpsd.passed);
  CHECK(cpsd.witness.at("type").get<std::string>() == "gram");
  CHECK(revalidate_witness(cpsd.witness));

  const CheckRecord& blk = check_named(r, "vector-conditionally-psd");
  CHECK_FALSE(blk.passed);
  CHECK(blk.witness.at("block").get<int>() == 2);
  CHECK(revalidate_witness(blk.witness));

  const CheckRecord& grid = check_named(r, "grid-positivity");
  CHECK_FALSE(grid.passed);
  CHECK(grid.witness.at("type").get<std::string>() == "error");
  CHECK(grid.witness.at("code").get<std::string>() == "UnboundedSymbol");
  CHECK(revalidate_witness(grid.witness));

  // Identities that do not rest on positivity still hold.
  CHECK(check_named(r, "coupling-term-vanishes").passed);
  CHECK(check_named(r, "closed-form-match").passed);
  CHECK(check_named(r, "factor-eigenvalues").passed);
}

TEST_CASE("falsification scenario finds and certifies violations") {
  const Report r = run_scenario(Json{{"kind", "falsify"}});
  CHECK_FALSE(r.passed());

  const CheckRecord& kc = check_named(r, "kernel-nonnegative");
  CHECK_FALSE(kc.passed);
  CHECK(kc.witness.at("type").get<std::string>() == "kernel");
  CHECK(kc.witness.at("min_real").get<double>() < 0.0);
  CHECK(revalidate_witness(kc.witness));

  const CheckRecord& fc = check_named(r, "mollified-positivity-grid");
  CHECK_FALSE(fc.passed);
  CHECK(fc.witness.at("type").get<std::string>() == "grid");
  CHECK(revalidate_witness(fc.witness));

  const CheckRecord& gc = check_named(r, "mollified-gram-psd");
  CHECK_FALSE(gc.passed);
  CHECK(gc.witness.at("type").get<std::string>() == "gram");
  CHECK(gc.witness.at("min_eigenvalue").get<double>() < 0.0);
  CHECK(revalidate_witness(gc.witness));
}

TEST_CASE("falsification scenario clears a genuinely positive symbol") {
  const Json cfg{{"kind", "falsify"},
                 {"params", Json{{"symbol", Json{{"family", "gaussian"},
                                                 {"dim", 1},
                                                 {"decay", 0.5}}}}}};
  const Report r = run_scenario(cfg);
  CHECK(r.passed());
}

TEST_CASE("witness revalidation rejects tampered and unknown records") {
  CHECK_THROWS_AS(revalidate_witness(Json{{"type", "no-such"}}), ToolkitError);
  CHECK_THROWS_AS(revalidate_witness(Json::array()), ToolkitError);

  const Report r = run_scenario(Json{{"kind", "falsify"}});
  Json w = check_named(r, "mollified-gram-psd").witness;
  w["min_eigenvalue"] = w.at("min_eigenvalue").get<double>() * 1000.0;
  CHECK_FALSE(revalidate_witness(w));
  Json k = check_named(r, "kernel-nonnegative").witness;
  k["min_real"] = -1.0;
  CHECK_FALSE(revalidate_witness(k));
}

TEST_CASE("csv export mirrors the per-trial series") {
  const Report r = run_scenario(Json{{"kind", "schur-suite"},
                                     {"params", Json{{"pairs", 7}}}});
  const std::string csv = r.to_csv();
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "check,trial,value,tolerance,passed");
  size_t rows = 0;
  for (const auto& c : r.checks) rows += std::max<size_t>(1, c.series.size());
  CHECK(static_cast<size_t>(count_lines(csv)) == rows + 1);
  std::string line;
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 4);
  }
}

TEST_CASE("report files round-trip through disk") {
  const Report r = run_scenario(Json{{"kind", "norm-suite"}, {"seed", 3}});
  const std::string jpath = "harness_report.json";
  const std::string cpath = "harness_report.csv";
  write_report_json(r, jpath);
  write_report_csv(r, cpath);
  std::ifstream jin(jpath);
  const Json back = Json::parse(jin);
  CHECK(back == r.to_json());
  std::ifstream cin_(cpath);
  std::stringstream buf;
  buf << cin_.rdbuf();
  CHECK(buf.str() == r.to_csv());
  std::remove(jpath.c_str());
  std::remove(cpath.c_str());
  CHECK_THROWS_AS(write_report_json(r, "no-such-dir/x.json"), ToolkitError);
}

TEST_CASE("json converters validate their inputs") {
  CHECK_THROWS_AS(grid_from_json(Json{{"dim", 1}, {"samples", 100}, {"length", 8.0}}),
                  ToolkitError);
  CHECK_THROWS_AS(grid_from_json(Json("grid")), ToolkitError);
  CHECK(grid_from_json(Json{{"dim", 2}, {"samples", 16}, {"length", 4.0}}).dim == 2);

  const SamplingPlan dp = plan_from_json(Json(), 42);
  CHECK(dp.seed == 42);
  CHECK(dp.trials == 50);
  const SamplingPlan p =
      plan_from_json(Json{{"trials", 3}, {"seed", 9}, {"radius", 2.0}}, 42);
  CHECK(p.trials == 3);
  CHECK(p.seed == 9);
  CHECK_THROWS_AS(plan_from_json(Json{{"trials", 0}}, 1), ToolkitError);
  CHECK_THROWS_AS(plan_from_json(Json{{"min_points", 5}, {"max_points", 2}}, 1),
                  ToolkitError);

  CHECK_THROWS_AS(measure_from_json(Json{{"dim", 1}, {"locations", Json::array()}}),
                  ToolkitError);
  const Json mspec{{"dim", 1},
                   {"m", 1},
                   {"locations", Json::array({Json::array({0.5})})},
                   {"weights", Json::array({0.7})}};
  const AtomicMeasure mu = measure_from_json(mspec);
  CHECK(mu.atoms() == 1);
  CHECK(measure_to_json(mu) == mspec);
}

TEST_CASE("symbol registry covers scalar and matrix families") {
  const RVector zero = RVector::Zero(1);
  CHECK(scalar_symbol_from_json(Json{{"family", "gaussian"}, {"dim", 1}})
            .eval(zero)
            .real() == doctest::Approx(1.0));
  CHECK(scalar_symbol_from_json(
            Json{{"family", "scaled"},
                 {"factor", 2.0},
                 {"inner", Json{{"family", "constant"}, {"dim", 1}, {"value", 3.0}}}})
            .eval(zero)
            .real() == doctest::Approx(6.0));
  const ScalarSymbol moll = scalar_symbol_from_json(
      Json{{"family", "mollified"},
           {"eps", 0.5},
           {"inner", Json{{"family", "constant"}, {"dim", 1}, {"value", 1.0}}}});
  CHECK(moll.bounded);
  CHECK(moll.eval(zero).real() > 0.0);

  const MatrixSymbol F = matrix_symbol_from_json(
      Json{{"family", "example-f0"},
           {"a", Json{{"family", "neg-quadratic"}, {"dim", 1}}},
           {"b", 0.5}});
  CHECK(F.m == 2);
  CHECK(F.eval(zero)(0, 1).real() == doctest::Approx(0.5));
  const ScalarSymbol e01 = scalar_symbol_from_json(
      Json{{"family", "entry"},
           {"j", 0},
           {"k", 1},
           {"inner", Json{{"family", "identity"}, {"dim", 1}, {"m", 2}}}});
  CHECK(e01.eval(zero) == Complex(0.0, 0.0));
  CHECK_THROWS_AS(scalar_symbol_from_json(Json{{"family", "no-such"}}),
                  ToolkitError);
  CHECK_THROWS_AS(matrix_symbol_from_json(Json{{"family", "gaussian"}}),
                  ToolkitError);
}

TEST_CASE("field specs build deterministic grid data") {
  const GridSpec g{1, 64, 8.0};
  const GridField a =
      field_from_json(Json{{"kind", "bump-mixture"}, {"count", 2}, {"seed", 4}}, g, 2);
  const GridField b =
      field_from_json(Json{{"kind", "bump-mixture"}, {"count", 2}, {"seed", 4}}, g, 2);
  CHECK(a.components == 2);
  for (int c = 0; c < 2; ++c)
    for (size_t i = 0; i < a.data[c].size(); ++i)
      CHECK(a.data[c][i] == b.data[c][i]);
  CHECK(field_min_real(a) >= 0.0);
  CHECK(field_max_abs(a) > 0.0);
  const GridField basis =
      field_from_json(Json{{"kind", "basis"}, {"eps", 1.0}, {"slot", 1}}, g, 2);
  CHECK(field_max_abs(basis) > 0.0);
  CHECK_THROWS_AS(field_from_json(Json{{"kind", "no-such"}}, g, 1), ToolkitError);
}
