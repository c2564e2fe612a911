#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fmpos/fmpos.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace {

using Json = nlohmann::json;

std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out(s);
  fmpos_string_free(s);
  return out;
}

struct SymbolHandle {
  fmpos_symbol* s = nullptr;
  explicit SymbolHandle(const char* spec) {
    REQUIRE(fmpos_symbol_create(spec, &s) == FMPOS_OK);
  }
  ~SymbolHandle() { fmpos_symbol_destroy(s); }
};

struct FieldHandle {
  fmpos_field* f = nullptr;
  ~FieldHandle() { fmpos_field_destroy(f); }
};

}  // namespace

TEST_CASE("version and error plumbing") {
  CHECK(std::string(fmpos_version()) == "0.1.0");
  fmpos_symbol* s = nullptr;
  CHECK(fmpos_symbol_create("{ not json", &s) == FMPOS_ERR_CONFIG_INVALID);
  CHECK(s == nullptr);
  CHECK(std::string(fmpos_last_error()).size() > 0);
  CHECK(fmpos_symbol_create(nullptr, &s) == FMPOS_ERR_CONFIG_INVALID);
  CHECK(fmpos_symbol_create("{\"family\":\"no-such\"}", &s) ==
        FMPOS_ERR_CONFIG_INVALID);
  CHECK(fmpos_symbol_info(nullptr, nullptr, nullptr, nullptr) ==
        FMPOS_ERR_BAD_HANDLE);
}

TEST_CASE("symbol create, info, eval") {
  SymbolHandle g("{\"family\":\"gaussian\",\"dim\":1,\"decay\":0.5}");
  int dim = 0, m = 0, bounded = 0;
  CHECK(fmpos_symbol_info(g.s, &dim, &m, &bounded) == FMPOS_OK);
  CHECK(dim == 1);
  CHECK(m == 1);
  CHECK(bounded == 1);
  const double x0 = 0.0;
  double re = -1.0, im = -1.0;
  CHECK(fmpos_symbol_eval(g.s, &x0, 1, &re, &im) == FMPOS_OK);
  CHECK(re == doctest::Approx(1.0));
  CHECK(im == doctest::Approx(0.0));
  const double x2 = 2.0;
  CHECK(fmpos_symbol_eval(g.s, &x2, 1, &re, nullptr) == FMPOS_OK);
  CHECK(re == doctest::Approx(std::exp(-2.0)));
  CHECK(fmpos_symbol_eval(g.s, &x2, 3, &re, &im) == FMPOS_ERR_DIMENSION_MISMATCH);

  SymbolHandle f0(
      "{\"family\":\"example-f0\",\"a\":{\"family\":\"neg-quadratic\",\"dim\":1},"
      "\"b\":0.25}");
  CHECK(fmpos_symbol_info(f0.s, &dim, &m, &bounded) == FMPOS_OK);
  CHECK(m == 2);
  double vre[4], vim[4];
  const double x1 = 1.0;
  CHECK(fmpos_symbol_eval(f0.s, &x1, 1, vre, vim) == FMPOS_OK);
  CHECK(vre[0] == doctest::Approx(-1.0));
  CHECK(vre[1] == doctest::Approx(0.25));
  CHECK(vre[3] == doctest::Approx(-1.0));
}

TEST_CASE("positivity tests through the boundary") {
  SymbolHandle g("{\"family\":\"gaussian\",\"dim\":1,\"decay\":0.5}");
  int passed = 0;
  char* verdict = nullptr;
  CHECK(fmpos_test_psd(g.s, "{\"trials\":10,\"seed\":3}", &passed, &verdict) ==
        FMPOS_OK);
  CHECK(passed == 1);
  const Json v = Json::parse(take(verdict));
  CHECK(v.at("passed").get<bool>());
  CHECK(v.at("kind").get<std::string>() == "none");

  SymbolHandle nq("{\"family\":\"neg-quadratic\",\"dim\":1}");
  CHECK(fmpos_test_cpsd(nq.s, nullptr, &passed, nullptr) == FMPOS_OK);
  CHECK(passed == 1);
  CHECK(fmpos_test_psd(nq.s, "{\"trials\":8,\"seed\":5}", &passed, &verdict) ==
        FMPOS_OK);
  CHECK(passed == 0);
  const Json w = Json::parse(take(verdict));
  CHECK_FALSE(w.at("passed").get<bool>());
  CHECK(w.contains("points"));

  SymbolHandle idm("{\"family\":\"identity\",\"dim\":1,\"m\":2}");
  CHECK(fmpos_test_cpsd(idm.s, nullptr, &passed, nullptr) ==
        FMPOS_ERR_INVALID_ARGUMENT);
  CHECK(fmpos_test_psd(idm.s, "{\"trials\":0}", &passed, nullptr) ==
        FMPOS_ERR_CONFIG_INVALID);
}

TEST_CASE("fields round-trip and validate") {
  FieldHandle h;
  CHECK(fmpos_field_create(1, 64, 8.0, 2, &h.f) == FMPOS_OK);
  long points = 0;
  int components = 0;
  CHECK(fmpos_field_size(h.f, &points, &components) == FMPOS_OK);
  CHECK(points == 64);
  CHECK(components == 2);
  std::vector<double> re(64), im(64);
  for (int i = 0; i < 64; ++i) {
    re[i] = 0.25 * i;
    im[i] = -1.0 + 0.5 * i;
  }
  CHECK(fmpos_field_write(h.f, 1, re.data(), im.data()) == FMPOS_OK);
  std::vector<double> re2(64, 0.0), im2(64, 0.0);
  CHECK(fmpos_field_read(h.f, 1, re2.data(), im2.data()) == FMPOS_OK);
  CHECK(re2 == re);
  CHECK(im2 == im);
  CHECK(fmpos_field_read(h.f, 0, re2.data(), nullptr) == FMPOS_OK);
  CHECK(re2[10] == 0.0);
  CHECK(fmpos_field_read(h.f, 2, re2.data(), nullptr) ==
        FMPOS_ERR_INVALID_ARGUMENT);

  fmpos_field* bad = nullptr;
  CHECK(fmpos_field_create(1, 100, 8.0, 1, &bad) == FMPOS_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);

  FieldHandle spec;
  CHECK(fmpos_field_create_from_spec(
            "{\"kind\":\"bump-mixture\",\"count\":2,\"seed\":4}", 1, 64, 8.0, 1,
            &spec.f) == FMPOS_OK);
  std::vector<double> sre(64);
  CHECK(fmpos_field_read(spec.f, 0, sre.data(), nullptr) == FMPOS_OK);
  double mx = 0.0;
  for (double v : sre) mx = std::max(mx, v);
  CHECK(mx > 0.0);
}

TEST_CASE("field container and csv through the boundary") {
  FieldHandle h;
  REQUIRE(fmpos_field_create_from_spec(
              "{\"kind\":\"bump-mixture\",\"count\":2,\"seed\":8}", 1, 128, 8.0,
              1, &h.f) == FMPOS_OK);
  CHECK(fmpos_field_save(h.f, "capi_field.mplb") == FMPOS_OK);
  FieldHandle back;
  CHECK(fmpos_field_load("capi_field.mplb", &back.f) == FMPOS_OK);
  std::vector<double> a(128), b(128);
  CHECK(fmpos_field_read(h.f, 0, a.data(), nullptr) == FMPOS_OK);
  CHECK(fmpos_field_read(back.f, 0, b.data(), nullptr) == FMPOS_OK);
  CHECK(a == b);
  std::remove("capi_field.mplb");
  fmpos_field* missing = nullptr;
  CHECK(fmpos_field_load("no-such.mplb", &missing) == FMPOS_ERR_IO);
  CHECK(missing == nullptr);
  char* csv = nullptr;
  CHECK(fmpos_field_csv(h.f, &csv) == FMPOS_OK);
  const std::string s = take(csv);
  CHECK(s.rfind("x,re0,im0\n", 0) == 0);
}

TEST_CASE("multiplier application and positivity trial") {
  SymbolHandle one(
      "{\"family\":\"scalar\",\"inner\":{\"family\":\"constant\",\"dim\":1,"
      "\"value\":1.0}}");
  FieldHandle in;
  CHECK(fmpos_field_create_from_spec(
            "{\"kind\":\"bump-mixture\",\"count\":3,\"seed\":9}", 1, 128, 16.0, 1,
            &in.f) == FMPOS_OK);
  FieldHandle out;
  CHECK(fmpos_apply(one.s, in.f, &out.f) == FMPOS_OK);
  std::vector<double> a(128), b(128);
  CHECK(fmpos_field_read(in.f, 0, a.data(), nullptr) == FMPOS_OK);
  CHECK(fmpos_field_read(out.f, 0, b.data(), nullptr) == FMPOS_OK);
  for (int i = 0; i < 128; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);

  int passed = 0;
  char* verdict = nullptr;
  SymbolHandle g(
      "{\"family\":\"scalar\",\"inner\":{\"family\":\"gaussian\",\"dim\":1,"
      "\"decay\":0.5}}");
  CHECK(fmpos_positivity_trial(g.s, in.f, 1e-8, &passed, &verdict) == FMPOS_OK);
  CHECK(passed == 1);
  const Json t = Json::parse(take(verdict));
  CHECK(t.at("min_real").get<double>() > -1e-8);

  SymbolHandle unbounded("{\"family\":\"quadratic\",\"dim\":1}");
  fmpos_field* o2 = nullptr;
  CHECK(fmpos_apply(unbounded.s, in.f, &o2) == FMPOS_ERR_UNBOUNDED_SYMBOL);
  CHECK(o2 == nullptr);

  SymbolHandle two("{\"family\":\"identity\",\"dim\":1,\"m\":2}");
  CHECK(fmpos_apply(two.s, in.f, &o2) == FMPOS_ERR_DIMENSION_MISMATCH);
}

TEST_CASE("norm report") {
  SymbolHandle g(
      "{\"family\":\"scalar\",\"inner\":{\"family\":\"gaussian\",\"dim\":1,"
      "\"decay\":0.5}}");
  char* rep = nullptr;
  CHECK(fmpos_norm_report(g.s, 1, 256, 16.0, 1, 20, &rep) == FMPOS_OK);
  const Json j = Json::parse(take(rep));
  CHECK(j.at("sup_symbol").get<double>() == doctest::Approx(1.0));
  CHECK(j.at("parseval_ratio").get<double>() <= 1.0 + 1e-8);
  CHECK(j.at("tv_estimate").get<double>() > 0.0);
  CHECK(j.at("kernel_mass").get<double>() > 0.0);
}

TEST_CASE("scenario harness through the boundary is deterministic") {
  fmpos_report* r1 = nullptr;
  fmpos_report* r2 = nullptr;
  const char* cfg = "{\"kind\":\"norm-suite\",\"seed\":6}";
  REQUIRE(fmpos_scenario_run(cfg, &r1) == FMPOS_OK);
  REQUIRE(fmpos_scenario_run(cfg, &r2) == FMPOS_OK);
  int p1 = 0, p2 = 0;
  CHECK(fmpos_report_passed(r1, &p1) == FMPOS_OK);
  CHECK(fmpos_report_passed(r2, &p2) == FMPOS_OK);
  CHECK(p1 == 1);
  CHECK(p2 == 1);
  char* j1 = nullptr;
  char* j2 = nullptr;
  CHECK(fmpos_report_json(r1, &j1) == FMPOS_OK);
  CHECK(fmpos_report_json(r2, &j2) == FMPOS_OK);
  Json a = Json::parse(take(j1));
  Json b = Json::parse(take(j2));
  a.erase("elapsed_ms");
  b.erase("elapsed_ms");
  CHECK(a.dump() == b.dump());
  char* csv = nullptr;
  CHECK(fmpos_report_csv(r1, &csv) == FMPOS_OK);
  CHECK(take(csv).rfind("check,trial,value,tolerance,passed\n", 0) == 0);
  fmpos_report_destroy(r1);
  fmpos_report_destroy(r2);

  fmpos_report* bad = nullptr;
  CHECK(fmpos_scenario_run("{\"kind\":\"no-such\"}", &bad) ==
        FMPOS_ERR_CONFIG_INVALID);
  CHECK(bad == nullptr);
  CHECK(fmpos_report_passed(nullptr, &p1) == FMPOS_ERR_BAD_HANDLE);
}

TEST_CASE("scenario failure reports stay well-formed") {
  fmpos_report* r = nullptr;
  REQUIRE(fmpos_scenario_run("{\"kind\":\"falsify\"}", &r) == FMPOS_OK);
  int passed = 1;
  CHECK(fmpos_report_passed(r, &passed) == FMPOS_OK);
  CHECK(passed == 0);
  char* j = nullptr;
  CHECK(fmpos_report_json(r, &j) == FMPOS_OK);
  const Json rep = Json::parse(take(j));
  bool any_witness = false;
  for (const auto& c : rep.at("checks"))
    if (!c.at("passed").get<bool>() && c.at("witness").is_object())
      any_witness = true;
  CHECK(any_witness);
  fmpos_report_destroy(r);
}
