// Acceptance gate: eight behavioral criteria, one verdict line each. A
// criterion fails on a wrong value, a missing witness, or a blown time
// budget; the process exits 1 if any line fails. All runs are seeded, so
// the gate is deterministic end to end.

#include "core/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace fmpos;

namespace {

constexpr uint64_t kSeed = 1;

Report run_kind(const std::string& kind, Json extra = Json()) {
  Json cfg{{"kind", kind}, {"seed", kSeed}};
  if (!extra.is_null())
    for (auto& [k, v] : extra.items()) cfg[k] = v;
  return run_scenario(cfg);
}

const CheckRecord* find_check(const Report& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return &c;
  return nullptr;
}

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += msg;
    }
  }
  void note(const std::string& msg) {
    if (!detail.empty()) detail += "; ";
    detail += msg;
  }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

void require_report(Verdict& v, const Report& rep) {
  for (const auto& c : rep.checks)
    v.require(c.passed, c.name + " failed at " + num(c.value));
}

// 1. Entrywise products of random PSD pairs stay PSD.
Verdict hadamard_product_closure() {
  Verdict v;
  const Report rep = run_kind("schur-suite");
  require_report(v, rep);
  const CheckRecord* r = find_check(rep, "hadamard-min-eig-ratio");
  v.require(r != nullptr, "ratio check missing");
  if (r) {
    v.require(static_cast<int>(r->series.size()) == 500, "expected 500 pairs");
    v.note("min-ratio=" + num(r->value));
  }
  return v;
}

// 2. Symbols synthesized from random nonnegative atomic measures pass the
//    sampled Gram, symmetry, and origin-bound tests.
Verdict measure_transform_positivity() {
  Verdict v;
  const Report rep = run_kind("bochner-suite");
  require_report(v, rep);
  const CheckRecord* g = find_check(rep, "grams-psd");
  v.require(g != nullptr, "gram check missing");
  if (g) {
    v.require(static_cast<int>(g->series.size()) == 100, "expected 100 measures");
    v.note("min-gram-eig=" + num(g->value));
  }
  return v;
}

// 3. Canonical-form symbols are conditionally PSD and their exponential
//    semigroup passes PSD and grid positivity trials.
Verdict canonical_semigroup_positivity() {
  Verdict v;
  require_report(v, run_kind("lk-suite"));
  return v;
}

// 4. Randomly synthesized matrix symbols preserve the nonnegative cone on the
//    grid and match the exact atomic-convolution oracle.
Verdict multiplier_positivity_forward() {
  Verdict v;
  const Report rep = run_kind("theorem-2-2");
  require_report(v, rep);
  const CheckRecord* t = find_check(rep, "grid-positivity");
  v.require(t != nullptr, "grid trial check missing");
  if (t) {
    v.require(static_cast<int>(t->series.size()) == 400, "expected 400 trials");
    v.note("min-trial=" + num(t->value));
  }
  const CheckRecord* o = find_check(rep, "convolution-oracle");
  v.require(o != nullptr, "oracle check missing");
  if (o) v.note("oracle-dev=" + num(o->value));
  return v;
}

// 5. The hunt on a non-definite bump symbol must find violations: a negative
//    kernel lobe, a concentrated-field violation beyond 1e-3 relative, and a
//    Gram eigenvalue at or below -1e-6; every witness must revalidate.
Verdict multiplier_falsification() {
  Verdict v;
  const Report rep = run_kind("falsify");
  v.require(!rep.passed(), "the bump symbol was not falsified");

  const CheckRecord* grid = find_check(rep, "mollified-positivity-grid");
  v.require(grid && !grid->passed, "grid probe found no violation");
  if (grid) {
    v.require(grid->value <= -1e-3,
              "grid violation too shallow: " + num(grid->value));
    v.note("grid-min=" + num(grid->value));
  }

  const CheckRecord* gram = find_check(rep, "mollified-gram-psd");
  v.require(gram && !gram->passed, "Gram probe found no violation");
  if (gram && gram->witness.is_object()) {
    const double eig = gram->witness.value("min_eigenvalue", 0.0);
    v.require(eig <= -1e-6, "Gram eigenvalue too shallow: " + num(eig));
    v.note("gram-eig=" + num(eig));
  }

  int witnesses = 0;
  for (const auto& c : rep.checks) {
    if (c.passed) continue;
    v.require(c.witness.is_object(), c.name + ": failure without witness");
    if (c.witness.is_object()) {
      v.require(revalidate_witness(c.witness),
                c.name + ": witness did not revalidate");
      ++witnesses;
    }
  }
  v.require(witnesses >= 3, "expected at least three standalone witnesses");
  return v;
}

// 6. The two-by-two block semigroup: closed form against the scaling-squaring
//    exponential at 1e-12 (relative to the factor scale) across the coupling
//    sweep, factor eigenvalues recovered at the same tolerance, and the full
//    default scenario green.
Verdict closed_form_block_semigroup() {
  Verdict v;
  double worst = 0.0;
  for (const double b : {0.0, 0.5, 1.0, 2.0}) {
    const Report rep = run_kind("example-2-6", Json{{"params", Json{{"b", b}}}});
    for (const auto& c : rep.checks)
      v.require(c.passed,
                "b=" + num(b) + ": " + c.name + " failed at " + num(c.value));
    if (const CheckRecord* cf = find_check(rep, "closed-form-match"))
      worst = std::max(worst, cf->value);
    if (const CheckRecord* fe = find_check(rep, "factor-eigenvalues"))
      worst = std::max(worst, fe->value);
  }
  v.note("max-dev=" + num(worst));
  return v;
}

// 7. Norm witnesses: transform roundtrip, Gaussian kernel total variation,
//    cos kernel mass, and the measured L2 contraction ratio.
Verdict kernel_norm_witnesses() {
  Verdict v;
  const Report rep = run_kind("norm-suite");
  require_report(v, rep);
  if (const CheckRecord* g = find_check(rep, "gaussian-kernel-tv"))
    v.note("gaussian-tv-dev=" + num(g->value));
  if (const CheckRecord* c = find_check(rep, "cos-kernel-mass"))
    v.note("cos-mass-dev=" + num(c->value));
  return v;
}

// 8. Re-running any scenario with the same seed reproduces the report byte
//    for byte once the timing field is dropped.
Verdict report_determinism() {
  Verdict v;
  for (const std::string& kind : scenario_kinds()) {
    Json a = run_scenario(Json{{"kind", kind}, {"seed", kSeed}}).to_json();
    Json b = run_scenario(Json{{"kind", kind}, {"seed", kSeed}}).to_json();
    a.erase("elapsed_ms");
    b.erase("elapsed_ms");
    v.require(a.dump() == b.dump(), kind + " is not reproducible");
  }
  return v;
}

struct Criterion {
  const char* name;
  double budget_seconds;
  Verdict (*run)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"hadamard-product-closure", 10.0, hadamard_product_closure},
      {"measure-transform-positivity", 30.0, measure_transform_positivity},
      {"canonical-semigroup-positivity", 60.0, canonical_semigroup_positivity},
      {"multiplier-positivity-forward", 60.0, multiplier_positivity_forward},
      {"multiplier-falsification", 30.0, multiplier_falsification},
      {"closed-form-block-semigroup", 30.0, closed_form_block_semigroup},
      {"kernel-norm-witnesses", 30.0, kernel_norm_witnesses},
      {"report-determinism", 5.0, report_determinism},
  };

  std::printf("acceptance gate, toolkit %s\n", toolkit_version());
  bool all_ok = true;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.ok = false;
      v.note(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed >= c.budget_seconds) {
      v.ok = false;
      v.note("over budget");
    }
    std::printf("[%d] %-32s %s  (%.2f s / %.0f s)%s%s\n", index, c.name,
                v.ok ? "PASS" : "FAIL", elapsed, c.budget_seconds,
                v.detail.empty() ? "" : "  ", v.detail.c_str());
    all_ok = all_ok && v.ok;
  }
  std::printf("acceptance: %s\n", all_ok ? "PASS" : "FAIL");
  return all_ok ? 0 : 1;
}
