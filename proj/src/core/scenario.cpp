#include "scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "grid.hpp"
#include "rng.hpp"

namespace fmpos {

const char* toolkit_version() { return "0.1.0"; }

namespace {

[[noreturn]] void bad_config(const std::string& what) {
  fail(ErrorCode::ConfigInvalid, what);
}

const Json& need(const Json& j, const char* key, const char* who) {
  if (!j.is_object() || !j.contains(key))
    bad_config(std::string(who) + ": missing required key '" + key + "'");
  return j.at(key);
}

// Absent key -> null; callers treat null as "use defaults".
Json sub(const Json& j, const char* key) {
  if (j.is_object() && j.contains(key)) return j.at(key);
  return Json();
}

double num_at(const Json& j, const char* key, const char* who) {
  const Json& v = need(j, key, who);
  if (!v.is_number())
    bad_config(std::string(who) + ": key '" + key + "' must be a number");
  return v.get<double>();
}

double num_or(const Json& j, const char* key, double def) {
  if (!j.is_object() || !j.contains(key)) return def;
  const Json& v = j.at(key);
  if (!v.is_number())
    bad_config(std::string("key '") + key + "' must be a number");
  return v.get<double>();
}

int int_at(const Json& j, const char* key, const char* who) {
  const Json& v = need(j, key, who);
  if (!v.is_number_integer())
    bad_config(std::string(who) + ": key '" + key + "' must be an integer");
  return v.get<int>();
}

int int_or(const Json& j, const char* key, int def) {
  if (!j.is_object() || !j.contains(key)) return def;
  const Json& v = j.at(key);
  if (!v.is_number_integer())
    bad_config(std::string("key '") + key + "' must be an integer");
  return v.get<int>();
}

std::string str_at(const Json& j, const char* key, const char* who) {
  const Json& v = need(j, key, who);
  if (!v.is_string())
    bad_config(std::string(who) + ": key '" + key + "' must be a string");
  return v.get<std::string>();
}

std::string str_or(const Json& j, const char* key, const std::string& def) {
  if (!j.is_object() || !j.contains(key)) return def;
  const Json& v = j.at(key);
  if (!v.is_string()) bad_config(std::string("key '") + key + "' must be a string");
  return v.get<std::string>();
}

bool bool_or(const Json& j, const char* key, bool def) {
  if (!j.is_object() || !j.contains(key)) return def;
  const Json& v = j.at(key);
  if (!v.is_boolean()) bad_config(std::string("key '") + key + "' must be a boolean");
  return v.get<bool>();
}

uint64_t seed_or(const Json& j, const char* key, uint64_t def) {
  if (!j.is_object() || !j.contains(key)) return def;
  const Json& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  if (v.is_number_integer() && v.get<int64_t>() >= 0)
    return static_cast<uint64_t>(v.get<int64_t>());
  bad_config(std::string("key '") + key + "' must be a nonnegative integer");
}

RVector rvec_from(const Json& v, const char* who) {
  if (!v.is_array() || v.empty())
    bad_config(std::string(who) + ": expected a nonempty array of numbers");
  RVector x(static_cast<int>(v.size()));
  for (int i = 0; i < x.size(); ++i) {
    if (!v[i].is_number())
      bad_config(std::string(who) + ": expected a nonempty array of numbers");
    x[i] = v[i].get<double>();
  }
  return x;
}

Complex cnum_from(const Json& v, const char* who) {
  if (v.is_number()) return Complex(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return Complex(v[0].get<double>(), v[1].get<double>());
  bad_config(std::string(who) + ": expected a number or an [re, im] pair");
}

std::vector<double> num_list(const Json& j, const char* key,
                             std::vector<double> def) {
  if (!j.is_object() || !j.contains(key)) return def;
  const Json& v = j.at(key);
  if (!v.is_array() || v.empty())
    bad_config(std::string("key '") + key + "' must be a nonempty array of numbers");
  std::vector<double> out;
  for (const auto& el : v) {
    if (!el.is_number())
      bad_config(std::string("key '") + key + "' must be a nonempty array of numbers");
    out.push_back(el.get<double>());
  }
  return out;
}

std::vector<int> int_list(const Json& j, const char* key, std::vector<int> def) {
  if (!j.is_object() || !j.contains(key)) return def;
  const Json& v = j.at(key);
  if (!v.is_array() || v.empty())
    bad_config(std::string("key '") + key + "' must be a nonempty array of integers");
  std::vector<int> out;
  for (const auto& el : v) {
    if (!el.is_number_integer())
      bad_config(std::string("key '") + key + "' must be a nonempty array of integers");
    out.push_back(el.get<int>());
  }
  return out;
}

Json rvec_json(const RVector& x) {
  Json a = Json::array();
  for (int i = 0; i < x.size(); ++i) a.push_back(x[i]);
  return a;
}

Json cnum_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json points_json(const PointSet& pts) {
  Json a = Json::array();
  for (const auto& p : pts.points) a.push_back(rvec_json(p));
  return a;
}

Json cvec_json(const CVector& c) {
  Json a = Json::array();
  for (int i = 0; i < c.size(); ++i) a.push_back(cnum_json(c[i]));
  return a;
}

PointSet points_from(const Json& v, const char* who) {
  if (!v.is_array() || v.empty())
    bad_config(std::string(who) + ": expected a nonempty array of points");
  PointSet ps;
  for (size_t i = 0; i < v.size(); ++i) {
    RVector x = rvec_from(v[i], who);
    if (i == 0)
      ps.dim = static_cast<int>(x.size());
    else if (static_cast<int>(x.size()) != ps.dim)
      bad_config(std::string(who) + ": points have mixed dimensions");
    ps.push_back(std::move(x));
  }
  return ps;
}

CVector cvec_from(const Json& v, const char* who) {
  if (!v.is_array() || v.empty())
    bad_config(std::string(who) + ": expected a nonempty coefficient array");
  CVector c(static_cast<int>(v.size()));
  for (int i = 0; i < c.size(); ++i) c[i] = cnum_from(v[i], who);
  return c;
}

CMatrix cmat_from(const Json& v, const char* who) {
  if (!v.is_array() || v.empty())
    bad_config(std::string(who) + ": expected an array of matrix rows");
  const int rows = static_cast<int>(v.size());
  int cols = -1;
  CMatrix M;
  for (int r = 0; r < rows; ++r) {
    const Json& row = v[r];
    if (!row.is_array() || row.empty())
      bad_config(std::string(who) + ": matrix rows must be nonempty arrays");
    if (cols < 0) {
      cols = static_cast<int>(row.size());
      M.resize(rows, cols);
    } else if (static_cast<int>(row.size()) != cols) {
      bad_config(std::string(who) + ": ragged matrix rows");
    }
    for (int c = 0; c < cols; ++c) M(r, c) = cnum_from(row[c], who);
  }
  return M;
}

Json weight_to_json(const CMatrix& W) {
  if (W.rows() == 1 && W.cols() == 1 && W(0, 0).imag() == 0.0)
    return Json(W(0, 0).real());
  Json re = Json::array();
  Json im = Json::array();
  for (int r = 0; r < W.rows(); ++r) {
    Json rrow = Json::array();
    Json irow = Json::array();
    for (int c = 0; c < W.cols(); ++c) {
      rrow.push_back(W(r, c).real());
      irow.push_back(W(r, c).imag());
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  return Json{{"re", re}, {"im", im}};
}

CMatrix weight_from_json(const Json& w, int m, const char* who) {
  if (w.is_number()) {
    if (m != 1)
      bad_config(std::string(who) + ": scalar weight on a matrix-valued measure");
    CMatrix W(1, 1);
    W(0, 0) = Complex(w.get<double>(), 0.0);
    return W;
  }
  CMatrix W;
  if (w.is_object()) {
    W = cmat_from(need(w, "re", who), who);
    if (w.contains("im") && !w.at("im").is_null()) {
      const CMatrix I = cmat_from(w.at("im"), who);
      if (I.rows() != W.rows() || I.cols() != W.cols())
        bad_config(std::string(who) + ": re and im parts differ in shape");
      for (int r = 0; r < W.rows(); ++r)
        for (int c = 0; c < W.cols(); ++c)
          W(r, c) = Complex(W(r, c).real(), I(r, c).real());
    }
  } else if (w.is_array()) {
    W = cmat_from(w, who);
  } else {
    bad_config(std::string(who) + ": weight must be a number, matrix, or {re, im}");
  }
  if (W.rows() != m || W.cols() != m)
    bad_config(std::string(who) + ": weight shape does not match m");
  return W;
}

// Stream-id helper: every random draw in a scenario is tied to a fixed salt
// so reports are reproducible and independent of evaluation order.
uint64_t sid(uint64_t a, uint64_t b, uint64_t c) {
  return (a << 40) ^ (b << 20) ^ c;
}

uint64_t derive(uint64_t seed, uint64_t salt) {
  return Rng::substream(seed, salt).next_u64();
}

// phihat_eps(|x|) times an inner symbol; the factor has its maximum modulus
// at the origin, so boundedness metadata carries over multiplicatively.
ScalarSymbol mollified_symbol(const ScalarSymbol& f, double eps, double plateau) {
  MollifierSpec ms;
  ms.dim = f.dim;
  ms.eps = eps;
  ms.plateau = plateau;
  auto phi = std::make_shared<Mollifier>(ms);
  ScalarSymbol out;
  out.dim = f.dim;
  out.continuous = f.continuous;
  if (f.bounded) {
    out.bounded = true;
    out.sup_bound = f.sup_bound * phi->transform_radial(0.0);
    out.re_bounded_above = true;
    out.re_upper = out.sup_bound;
  }
  out.provenance = "mollified(" + f.provenance + ")";
  auto inner = f.eval;
  out.eval = [inner, phi](const RVector& x) {
    return inner(x) * phi->transform_radial(x.norm());
  };
  return out;
}

std::string fmt_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Check assembly

CheckRecord new_check(std::string name, double tol) {
  CheckRecord c;
  c.name = std::move(name);
  c.tolerance = tol;
  return c;
}

double rel_floor(double scale) { return scale > 0.0 ? scale : 1.0; }

Json gram_witness_pts(const Json& sym, const PointSet& pts, const CVector& coeffs,
                      double min_eig, double tol, const char* constraint,
                      int block) {
  return Json{{"type", "gram"},          {"symbol", sym},
              {"constraint", constraint}, {"block", block},
              {"points", points_json(pts)}, {"coefficients", cvec_json(coeffs)},
              {"min_eigenvalue", min_eig}, {"tolerance", tol}};
}

Json point_witness(const Json& sym, const PsdVerdict& v) {
  return Json{{"type", "point"},
              {"symbol", sym},
              {"kind", failure_kind_name(v.kind)},
              {"x", rvec_json(v.point)},
              {"magnitude", v.witness_value},
              {"reference", v.witness_reference},
              {"deviation", -v.min_eigenvalue},
              {"detail", v.detail}};
}

Json verdict_witness(const Json& sym, const PsdVerdict& v, const char* constraint,
                     int block) {
  if (v.kind == FailureKind::NegativeEigenvalue)
    return gram_witness_pts(sym, v.points, v.coefficients, v.min_eigenvalue,
                            v.tolerance, constraint, block);
  return point_witness(sym, v);
}

Json grid_witness(const Json& sym, const Json& field_spec, const GridSpec& g,
                  const TrialVerdict& t) {
  return Json{{"type", "grid"},
              {"symbol", sym},
              {"field", field_spec},
              {"grid", grid_to_json(g)},
              {"component", t.witness_component},
              {"x", rvec_json(t.witness_x)},
              {"value", cnum_json(t.witness_value)},
              {"min_real", t.min_real},
              {"scale", t.scale}};
}

void fold_verdict(CheckRecord& c, const PsdVerdict& v, const Json& sym_spec,
                  const char* constraint, int block) {
  c.series.push_back(v.min_eigenvalue);
  c.value = c.series.size() == 1 ? v.min_eigenvalue
                                 : std::min(c.value, v.min_eigenvalue);
  c.tolerance = std::max(c.tolerance, v.tolerance);
  if (!v.passed && c.passed) {
    c.passed = false;
    c.witness = verdict_witness(sym_spec, v, constraint, block);
  }
}

void fold_trial(CheckRecord& c, const TrialVerdict& t, const Json& sym_spec,
                const Json& field_spec, const GridSpec& g) {
  const double s = rel_floor(t.scale);
  const double score = std::min(t.min_real / s, -(t.max_imag / s));
  c.series.push_back(score);
  c.value = c.series.size() == 1 ? score : std::min(c.value, score);
  if (!t.passed && c.passed) {
    c.passed = false;
    c.witness = grid_witness(sym_spec, field_spec, g, t);
  }
}

// Max-deviation fold: value is the worst (largest) deviation seen, failing
// once it exceeds the check tolerance.
void fold_deviation(CheckRecord& c, double dev, const Json& witness_if_fail) {
  c.series.push_back(dev);
  c.value = c.series.size() == 1 ? dev : std::max(c.value, dev);
  if (dev > c.tolerance && c.passed) {
    c.passed = false;
    c.witness = witness_if_fail;
  }
}

// ---------------------------------------------------------------------------
// Random ensembles. Generators emit JSON specs and materialize through the
// registry so every witness embeds a standalone re-runnable description.

CMatrix random_psd_weight(Rng& rng, int m) {
  CMatrix B(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) B(r, c) = Complex(rng.normal(), rng.normal());
  CMatrix W = B.adjoint() * B;
  W /= static_cast<double>(m);
  return W;
}

// a*ones + diag(d): positive semidefinite with nonnegative entries, so the
// matrix weight is admissible and every scalar entry is itself the weight of
// a nonnegative measure.
CMatrix random_entrywise_psd_weight(Rng& rng, int m) {
  const double a = rng.uniform(0.05, 0.8);
  CMatrix W = CMatrix::Constant(m, m, Complex(a, 0.0));
  for (int i = 0; i < m; ++i) W(i, i) += Complex(rng.uniform(0.0, 1.0), 0.0);
  return W;
}

Json measure_spec_json(int dim, int m, const Json& locs, const Json& ws) {
  return Json{{"dim", dim}, {"m", m}, {"locations", locs}, {"weights", ws}};
}

// Atoms restricted to the lattice step*k, |k| <= max_steps, so the discrete
// convolution oracle is exact (shifts commute with sampling).
Json random_bochner_matrix_spec(Rng& rng, int dim, int m, int min_atoms,
                                int max_atoms, double step, int max_steps,
                                bool entrywise) {
  const int count = rng.uniform_int(min_atoms, max_atoms);
  Json locs = Json::array();
  Json ws = Json::array();
  for (int i = 0; i < count; ++i) {
    Json y = Json::array();
    for (int d = 0; d < dim; ++d)
      y.push_back(step * rng.uniform_int(-max_steps, max_steps));
    locs.push_back(y);
    if (m == 1)
      ws.push_back(rng.uniform(0.05, 1.5));
    else
      ws.push_back(weight_to_json(entrywise ? random_entrywise_psd_weight(rng, m)
                                            : random_psd_weight(rng, m)));
  }
  return Json{{"family", m == 1 ? "bochner" : "bochner-matrix"},
              {"measure", measure_spec_json(dim, m, locs, ws)}};
}

Json random_measure_spec(Rng& rng, int dim, int m, int min_atoms, int max_atoms,
                         double box) {
  const int count = rng.uniform_int(min_atoms, max_atoms);
  Json locs = Json::array();
  Json ws = Json::array();
  for (int i = 0; i < count; ++i) {
    Json y = Json::array();
    for (int d = 0; d < dim; ++d) y.push_back(rng.uniform(-box, box));
    locs.push_back(y);
    if (m == 1)
      ws.push_back(rng.uniform(0.05, 1.5));
    else
      ws.push_back(weight_to_json(random_psd_weight(rng, m)));
  }
  return Json{{"family", m == 1 ? "bochner" : "bochner-matrix"},
              {"measure", measure_spec_json(dim, m, locs, ws)}};
}

// Canonical-form parameters with a strictly positive quadratic part, so the
// semigroup symbol decays fast enough for grid positivity to hold to
// roundoff on the default lattices.
Json random_lk_spec(Rng& rng, int dim, double min_quadratic, int max_jumps) {
  const double alpha = -rng.uniform(0.0, 0.5);
  Json beta = Json::array();
  for (int d = 0; d < dim; ++d) beta.push_back(rng.uniform(-1.0, 1.0));
  Json A = Json::array();
  for (int r = 0; r < dim; ++r) {
    Json row = Json::array();
    for (int c = 0; c < dim; ++c) {
      double v = (r == c) ? min_quadratic + std::pow(rng.uniform(0.0, 0.8), 2) : 0.0;
      row.push_back(v);
    }
    A.push_back(row);
  }
  Json spec{{"family", "levy-khintchine"}, {"dim", dim}, {"alpha", alpha},
            {"beta", beta},                {"A", A}};
  const int jumps = rng.uniform_int(0, max_jumps);
  if (jumps > 0) {
    Json locs = Json::array();
    Json ws = Json::array();
    for (int i = 0; i < jumps; ++i) {
      Json y = Json::array();
      for (int d = 0; d < dim; ++d) {
        const double mag = rng.uniform(0.25, 2.0);
        y.push_back(rng.uniform01() < 0.5 ? -mag : mag);
      }
      locs.push_back(y);
      ws.push_back(rng.uniform(0.05, 1.0));
    }
    spec["jumps"] = measure_spec_json(dim, 1, locs, ws);
  } else {
    spec["jumps"] = nullptr;
  }
  return spec;
}

Json mixture_spec(int count, uint64_t seed) {
  return Json{{"kind", "bump-mixture"}, {"count", count}, {"seed", seed}};
}

GridField bump_mixture_field(const GridSpec& g, int components, int count,
                             uint64_t seed) {
  const double h = spacing(g);
  const double lo = std::max(0.05, 8.0 * h);
  const double hi = 1.0;
  require(lo <= hi, ErrorCode::UnderResolved,
          "bump-mixture: grid too coarse for unit-scale bumps");
  GridField f = zero_field(g, components);
  const long total = total_points(g);
  for (int c = 0; c < components; ++c) {
    Rng rng = Rng::substream(seed, static_cast<uint64_t>(c) + 1);
    for (int b = 0; b < count; ++b) {
      MollifierSpec ms;
      ms.dim = g.dim;
      ms.eps = rng.uniform(lo, hi);
      ms.plateau = 0.5;
      Mollifier phi(ms);
      const double w = rng.uniform(0.2, 1.5);
      RVector center(g.dim);
      for (int d = 0; d < g.dim; ++d)
        center[d] = rng.uniform(-0.25 * g.length, 0.25 * g.length);
      for (long i = 0; i < total; ++i) {
        const RVector x = point_at(g, i);
        const double v = phi.value_radial((x - center).norm());
        if (v != 0.0) f.data[c][i] += w * v;
      }
    }
  }
  return f;
}

PointSet random_points(Rng& rng, int dim, int count, double radius) {
  PointSet ps;
  ps.dim = dim;
  for (int i = 0; i < count; ++i) {
    RVector x(dim);
    for (int d = 0; d < dim; ++d) x[d] = rng.uniform(-radius, radius);
    ps.push_back(std::move(x));
  }
  return ps;
}

double max_abs_entry(const CMatrix& M) { return M.cwiseAbs().maxCoeff(); }

// Deviation between the multiplier output and the direct atomic convolution,
// relative to max(1, |out|_inf).
double oracle_deviation(const MatrixSymbol& F, const AtomicMeasure& mu,
                        const GridField& f, GridField* out_keep = nullptr) {
  GridField via = apply_multiplier(F, f);
  GridField direct = convolve_atomic(f, mu);
  const double kc = std::pow(2.0 * M_PI, -0.5 * f.spec.dim);
  const double scale = std::max(1.0, field_max_abs(via));
  double worst = 0.0;
  for (int c = 0; c < via.components; ++c)
    for (size_t i = 0; i < via.data[c].size(); ++i)
      worst = std::max(worst, std::abs(via.data[c][i] - kc * direct.data[c][i]));
  if (out_keep) *out_keep = std::move(via);
  return worst / scale;
}

// ---------------------------------------------------------------------------
// Scenario runners

void run_theorem_2_2(const Json& params, const GridSpec& grid, uint64_t seed,
                     Report& rep) {
  const double trial_tol = num_or(params, "trial_tol", 1e-8);
  const double oracle_tol = num_or(params, "oracle_tol", 1e-8);
  const SamplingPlan entry_plan =
      plan_from_json(sub(params, "entry_plan"), derive(seed, 11));
  const int fields_per = int_or(params, "fields_per_symbol", 20);
  const int bumps = int_or(params, "bumps_per_field", 3);

  std::vector<Json> specs;
  if (params.contains("symbol") && !params.at("symbol").is_null()) {
    specs.push_back(params.at("symbol"));
  } else {
    const int count = int_or(params, "symbols", 20);
    const std::vector<int> mv = int_list(params, "m_values", {2, 3});
    const std::vector<int> atoms = int_list(params, "atoms", {1, 4});
    if (atoms.size() != 2 || atoms[0] < 1 || atoms[0] > atoms[1])
      bad_config("theorem-2-2: atoms must be an [lo, hi] range with lo >= 1");
    const double step = spacing(grid);
    const int max_steps = grid.samples / 8;
    for (int i = 0; i < count; ++i) {
      Rng rng = Rng::substream(seed, sid(1, static_cast<uint64_t>(i), 0));
      const int m = mv[static_cast<size_t>(i) % mv.size()];
      specs.push_back(random_bochner_matrix_spec(rng, grid.dim, m, atoms[0],
                                                 atoms[1], step, max_steps,
                                                 /*entrywise=*/true));
    }
  }

  CheckRecord entry_ck = new_check("entry-positivity", entry_plan.tol);
  CheckRecord trial_ck = new_check("grid-positivity", trial_tol);
  CheckRecord oracle_ck = new_check("convolution-oracle", oracle_tol);
  bool any_oracle = false;

  for (size_t si = 0; si < specs.size(); ++si) {
    const Json& spec = specs[si];
    const MatrixSymbol F = matrix_symbol_from_json(spec);
    for (int jj = 0; jj < F.m; ++jj)
      for (int kk = 0; kk < F.m; ++kk) {
        Json espec{{"family", "entry"}, {"j", jj}, {"k", kk}, {"inner", spec}};
        SamplingPlan p = entry_plan;
        p.seed = derive(seed, sid(2, si, static_cast<uint64_t>(jj * 16 + kk)));
        fold_verdict(entry_ck, test_psd_function(entry_symbol(F, jj, kk), p),
                     espec, "none", 1);
      }
    GridField f0;
    Json f0_spec;
    for (int fi = 0; fi < fields_per; ++fi) {
      const uint64_t fseed = derive(seed, sid(3, si, static_cast<uint64_t>(fi)));
      Json fspec = mixture_spec(bumps, fseed);
      GridField f = field_from_json(fspec, grid, F.m);
      fold_trial(trial_ck, positivity_trial(F, f, trial_tol), spec, fspec, grid);
      if (fi == 0) {
        f0 = std::move(f);
        f0_spec = fspec;
      }
    }
    if (str_or(spec, "family", "") == "bochner-matrix" && fields_per > 0) {
      const AtomicMeasure mu = measure_from_json(spec.at("measure"));
      const double dev = oracle_deviation(F, mu, f0);
      fold_deviation(oracle_ck, dev,
                     Json{{"type", "oracle"},
                          {"symbol", spec},
                          {"field", f0_spec},
                          {"grid", grid_to_json(grid)},
                          {"deviation", dev}});
      any_oracle = true;
    }
  }
  rep.checks.push_back(std::move(entry_ck));
  rep.checks.push_back(std::move(trial_ck));
  if (any_oracle) rep.checks.push_back(std::move(oracle_ck));

  // Approximate-identity probe: entry products with phihat_eps stay positive
  // definite, and the multiplier applied to the concentrating basis element
  // stays nonnegative, across a dyadic sweep of eps.
  const Json probe = sub(params, "probe");
  if (probe.is_object()) {
    const GridSpec pgrid =
        probe.contains("grid") ? grid_from_json(probe.at("grid")) : grid;
    const SamplingPlan pplan =
        plan_from_json(sub(probe, "plan"), derive(seed, 13));
    const std::vector<double> eps =
        num_list(probe, "eps", {0.5, 0.25, 0.125, 0.0625});
    const int probe_count =
        std::min<int>(int_or(probe, "symbols", 3), static_cast<int>(specs.size()));
    CheckRecord pg = new_check("probe-gram", pplan.tol);
    CheckRecord pf = new_check("probe-field", trial_tol);
    for (int si = 0; si < probe_count; ++si) {
      const Json& spec = specs[static_cast<size_t>(si)];
      const MatrixSymbol F = matrix_symbol_from_json(spec);
      for (size_t ei = 0; ei < eps.size(); ++ei) {
        const int pairs = F.m > 1 ? 2 : 1;
        for (int pi = 0; pi < pairs; ++pi) {
          const int jj = 0;
          const int kk = pi == 0 ? 0 : F.m - 1;
          Json espec{{"family", "entry"}, {"j", jj}, {"k", kk}, {"inner", spec}};
          Json pspec{{"family", "mollified"},
                     {"eps", eps[ei]},
                     {"plateau", 0.5},
                     {"inner", espec}};
          SamplingPlan p = pplan;
          p.seed = derive(seed, sid(4, static_cast<uint64_t>(si),
                                    ei * 8 + static_cast<uint64_t>(pi)));
          fold_verdict(pg, test_psd_function(scalar_symbol_from_json(pspec), p),
                       pspec, "none", 1);
        }
        Json fspec{{"kind", "basis"},
                   {"eps", eps[ei]},
                   {"plateau", 0.5},
                   {"slot", si % F.m}};
        GridField f = field_from_json(fspec, pgrid, F.m);
        fold_trial(pf, positivity_trial(F, f, trial_tol), spec, fspec, pgrid);
      }
    }
    rep.checks.push_back(std::move(pg));
    rep.checks.push_back(std::move(pf));
  }
}

void run_corollary_2_3(const Json& params, const GridSpec& grid, uint64_t seed,
                       Report& rep) {
  const int m = int_or(params, "m", 2);
  const Json& entries = need(params, "entries", "corollary-2-3 params");
  if (!entries.is_array() || static_cast<int>(entries.size()) != m * m)
    bad_config("corollary-2-3: entries must be an array of m*m canonical-form specs");
  const std::vector<double> ts = num_list(params, "t", {0.1, 1.0, 10.0});
  const double trial_tol = num_or(params, "trial_tol", 1e-8);
  const SamplingPlan cplan =
      plan_from_json(sub(params, "cpsd_plan"), derive(seed, 21));
  const SamplingPlan eplan =
      plan_from_json(sub(params, "entry_plan"), derive(seed, 22));
  const int fields_per = int_or(params, "fields_per_t", 5);
  const int bumps = int_or(params, "bumps_per_field", 3);

  Json Fspec{{"family", "lk-matrix"}, {"m", m}, {"entries", entries}};
  const MatrixSymbol F = matrix_symbol_from_json(Fspec);

  CheckRecord cpsd_ck = new_check("entries-conditionally-psd", cplan.tol);
  for (int e = 0; e < m * m; ++e) {
    Json espec = entries.at(static_cast<size_t>(e));
    if (!espec.contains("family")) espec["family"] = "levy-khintchine";
    SamplingPlan p = cplan;
    p.seed = derive(seed, sid(31, static_cast<uint64_t>(e), 0));
    fold_verdict(cpsd_ck, test_cpsd_function(scalar_symbol_from_json(espec), p),
                 espec, "sum-zero", 1);
  }
  rep.checks.push_back(std::move(cpsd_ck));

  CheckRecord psd_ck = new_check("semigroup-entry-psd", eplan.tol);
  CheckRecord grid_ck = new_check("grid-positivity", trial_tol);
  for (size_t ti = 0; ti < ts.size(); ++ti) {
    const double t = ts[ti];
    const MatrixSymbol Et = hadamard_exp(F, t);
    Json Etspec{{"family", "hadamard-exp"}, {"t", t}, {"inner", Fspec}};
    for (int e = 0; e < m * m; ++e) {
      const int jj = e / m;
      const int kk = e % m;
      Json espec{{"family", "entry"}, {"j", jj}, {"k", kk}, {"inner", Etspec}};
      SamplingPlan p = eplan;
      p.seed = derive(seed, sid(32, ti, static_cast<uint64_t>(e)));
      fold_verdict(psd_ck, test_psd_function(entry_symbol(Et, jj, kk), p), espec,
                   "none", 1);
    }
    for (int fi = 0; fi < fields_per; ++fi) {
      const uint64_t fs = derive(seed, sid(33, ti, static_cast<uint64_t>(fi)));
      Json fspec = mixture_spec(bumps, fs);
      fold_trial(grid_ck,
                 positivity_trial(Et, field_from_json(fspec, grid, m), trial_tol),
                 Etspec, fspec, grid);
    }
  }
  rep.checks.push_back(std::move(psd_ck));
  rep.checks.push_back(std::move(grid_ck));
}

void run_corollary_2_4(const Json& params, const GridSpec& grid, uint64_t seed,
                       Report& rep) {
  const int m = int_or(params, "m", 2);
  const Json& entries = need(params, "entries", "corollary-2-4 params");
  if (!entries.is_array() || static_cast<int>(entries.size()) != m)
    bad_config("corollary-2-4: entries must list one canonical-form spec per diagonal slot");
  const std::vector<double> ts = num_list(params, "t", {0.1, 1.0, 10.0});
  const double trial_tol = num_or(params, "trial_tol", 1e-8);
  const SamplingPlan cplan =
      plan_from_json(sub(params, "cpsd_plan"), derive(seed, 41));
  const SamplingPlan eplan =
      plan_from_json(sub(params, "entry_plan"), derive(seed, 42));
  const int fields_per = int_or(params, "fields_per_t", 3);
  const int bumps = int_or(params, "bumps_per_field", 3);
  const bool heat_oracle = bool_or(params, "heat_oracle", false);
  const double oracle_tol = num_or(params, "oracle_tol", 1e-6);

  std::vector<Json> especs;
  std::vector<LKParams> lks;
  for (int j = 0; j < m; ++j) {
    Json es = entries.at(static_cast<size_t>(j));
    if (!es.contains("family")) es["family"] = "levy-khintchine";
    especs.push_back(es);
    lks.push_back(lk_from_json(es));
  }

  CheckRecord cpsd_ck = new_check("entries-conditionally-psd", cplan.tol);
  for (int j = 0; j < m; ++j) {
    SamplingPlan p = cplan;
    p.seed = derive(seed, sid(43, static_cast<uint64_t>(j), 0));
    fold_verdict(cpsd_ck,
                 test_cpsd_function(scalar_symbol_from_json(especs[j]), p),
                 especs[j], "sum-zero", 1);
  }
  rep.checks.push_back(std::move(cpsd_ck));

  if (heat_oracle) {
    for (int j = 0; j < m; ++j) {
      const LKParams& p = lks[static_cast<size_t>(j)];
      const bool pure = p.dim == 1 && p.alpha == 0.0 && p.beta.cwiseAbs().maxCoeff() == 0.0 &&
                        p.nu.atoms() == 0 && p.A.rows() == 1 && p.A(0, 0).real() > 0.0 &&
                        p.A(0, 0).imag() == 0.0;
      if (!pure)
        bad_config("corollary-2-4: heat_oracle requires pure one-dimensional quadratic entries");
    }
  }

  CheckRecord psd_ck = new_check("semigroup-entry-psd", eplan.tol);
  CheckRecord grid_ck = new_check("grid-positivity", trial_tol);
  CheckRecord heat_ck = new_check("heat-kernel-oracle", oracle_tol);
  for (size_t ti = 0; ti < ts.size(); ++ti) {
    const double t = ts[ti];
    Json exp_entries = Json::array();
    for (int j = 0; j < m; ++j)
      exp_entries.push_back(
          Json{{"family", "exp"}, {"t", t}, {"inner", especs[j]}});
    Json Etspec{{"family", "diagonal"}, {"entries", exp_entries}};
    const MatrixSymbol Et = matrix_symbol_from_json(Etspec);
    for (int j = 0; j < m; ++j) {
      SamplingPlan p = eplan;
      p.seed = derive(seed, sid(44, ti, static_cast<uint64_t>(j)));
      fold_verdict(psd_ck, test_psd_function(entry_symbol(Et, j, j), p),
                   exp_entries.at(static_cast<size_t>(j)), "none", 1);
    }
    Json f0_spec;
    GridField f0;
    for (int fi = 0; fi < fields_per; ++fi) {
      const uint64_t fs = derive(seed, sid(45, ti, static_cast<uint64_t>(fi)));
      Json fspec = mixture_spec(bumps, fs);
      GridField f = field_from_json(fspec, grid, m);
      fold_trial(grid_ck, positivity_trial(Et, f, trial_tol), Etspec, fspec, grid);
      if (fi == 0) {
        f0 = std::move(f);
        f0_spec = fspec;
      }
    }
    if (heat_oracle && fields_per > 0) {
      // exp(-t a xi^2) acts as convolution with the Gaussian kernel
      // (4 pi t a)^{-1/2} exp(-z^2 / (4 t a)), periodized over the box.
      const GridField via = apply_multiplier(Et, f0);
      const long n = total_points(grid);
      const double h = spacing(grid);
      double worst = 0.0;
      for (int j = 0; j < m; ++j) {
        const double a = lks[static_cast<size_t>(j)].A(0, 0).real();
        const double denom = 4.0 * t * a;
        const double norm = 1.0 / std::sqrt(M_PI * denom);
        std::vector<double> K(static_cast<size_t>(n));
        for (long d = 0; d < n; ++d) {
          double acc = 0.0;
          for (int im = -3; im <= 3; ++im) {
            const double z = static_cast<double>(d) * h + im * grid.length;
            acc += norm * std::exp(-z * z / denom);
          }
          K[static_cast<size_t>(d)] = acc;
        }
        for (long i = 0; i < n; ++i) {
          Complex acc = 0.0;
          for (long q = 0; q < n; ++q) {
            long d = i - q;
            if (d < 0) d += n;
            acc += K[static_cast<size_t>(d)] * f0.data[j][q];
          }
          worst = std::max(worst, std::abs(via.data[j][i] - h * acc));
        }
      }
      const double dev = worst / std::max(1.0, field_max_abs(via));
      fold_deviation(heat_ck, dev,
                     Json{{"type", "oracle"},
                          {"symbol", Etspec},
                          {"field", f0_spec},
                          {"grid", grid_to_json(grid)},
                          {"deviation", dev}});
    }
  }
  rep.checks.push_back(std::move(psd_ck));
  rep.checks.push_back(std::move(grid_ck));
  if (heat_oracle) rep.checks.push_back(std::move(heat_ck));
}

void run_corollary_2_5(const Json& params, const GridSpec& grid, uint64_t seed,
                       Report& rep) {
  const Json& Fspec = need(params, "symbol", "corollary-2-5 params");
  const MatrixSymbol F = matrix_symbol_from_json(Fspec);
  if (!F.bounded)
    bad_config("corollary-2-5: the symbol must carry a finite norm bound");
  const std::vector<double> ts = num_list(params, "t", {0.1, 1.0, 2.0});
  const int terms = int_or(params, "series_terms", 30);
  const double series_tol = num_or(params, "series_tol", 1e-10);
  const int x_samples = int_or(params, "x_samples", 3);
  const double x_radius = num_or(params, "x_radius", 5.0);
  const double trial_tol = num_or(params, "trial_tol", 1e-8);
  const SamplingPlan eplan =
      plan_from_json(sub(params, "entry_plan"), derive(seed, 51));
  const int fields_per = int_or(params, "fields_per_t", 3);
  const int bumps = int_or(params, "bumps_per_field", 3);

  CheckRecord base_ck = new_check("entry-positivity", eplan.tol);
  for (int jj = 0; jj < F.m; ++jj)
    for (int kk = 0; kk < F.m; ++kk) {
      Json espec{{"family", "entry"}, {"j", jj}, {"k", kk}, {"inner", Fspec}};
      SamplingPlan p = eplan;
      p.seed = derive(seed, sid(52, static_cast<uint64_t>(jj), static_cast<uint64_t>(kk)));
      fold_verdict(base_ck, test_psd_function(entry_symbol(F, jj, kk), p), espec,
                   "none", 1);
    }
  rep.checks.push_back(std::move(base_ck));

  CheckRecord series_ck = new_check("exponential-series-match", series_tol);
  CheckRecord psd_ck = new_check("semigroup-entry-psd", eplan.tol);
  CheckRecord grid_ck = new_check("grid-positivity", trial_tol);
  for (size_t ti = 0; ti < ts.size(); ++ti) {
    const double t = ts[ti];
    for (int s = 0; s < x_samples; ++s) {
      Rng rng = Rng::substream(seed, sid(53, ti, static_cast<uint64_t>(s)));
      RVector x(F.dim);
      for (int d = 0; d < F.dim; ++d) x[d] = rng.uniform(-x_radius, x_radius);
      const CMatrix A = t * F.eval(x);
      const CMatrix E = expm(A);
      CMatrix S = CMatrix::Identity(F.m, F.m);
      CMatrix term = CMatrix::Identity(F.m, F.m);
      for (int p = 1; p <= terms; ++p) {
        term = (term * A) / static_cast<double>(p);
        S += term;
      }
      const double dev =
          max_abs_entry(E - S) / std::max(1.0, max_abs_entry(E));
      fold_deviation(series_ck, dev,
                     Json{{"type", "series"},
                          {"symbol", Fspec},
                          {"t", t},
                          {"x", rvec_json(x)},
                          {"terms", terms},
                          {"deviation", dev}});
    }
    Json Etspec{{"family", "matrix-exp"}, {"t", t}, {"inner", Fspec}};
    const MatrixSymbol Et = matrix_symbol_from_json(Etspec);
    for (int jj = 0; jj < F.m; ++jj)
      for (int kk = 0; kk < F.m; ++kk) {
        Json espec{{"family", "entry"}, {"j", jj}, {"k", kk}, {"inner", Etspec}};
        SamplingPlan p = eplan;
        p.seed = derive(seed, sid(54, ti, static_cast<uint64_t>(jj * 16 + kk)));
        fold_verdict(psd_ck, test_psd_function(entry_symbol(Et, jj, kk), p),
                     espec, "none", 1);
      }
    for (int fi = 0; fi < fields_per; ++fi) {
      const uint64_t fs = derive(seed, sid(55, ti, static_cast<uint64_t>(fi)));
      Json fspec = mixture_spec(bumps, fs);
      fold_trial(grid_ck,
                 positivity_trial(Et, field_from_json(fspec, grid, F.m), trial_tol),
                 Etspec, fspec, grid);
    }
  }
  rep.checks.push_back(std::move(series_ck));
  rep.checks.push_back(std::move(psd_ck));
  rep.checks.push_back(std::move(grid_ck));
}

void run_example_2_6(const Json& params, const GridSpec& grid, uint64_t seed,
                     Report& rep) {
  const Json& aspec = need(params, "a", "example-2-6 params");
  const double b = num_or(params, "b", 1.0);
  const std::vector<double> ts = num_list(params, "t", {0.1, 1.0, 10.0});
  const ScalarSymbol a = scalar_symbol_from_json(aspec);
  Json F0spec{{"family", "example-f0"}, {"a", aspec}, {"b", b}};
  const MatrixSymbol F0 = matrix_symbol_from_json(F0spec);

  const SamplingPlan cplan =
      plan_from_json(sub(params, "cpsd_plan"), derive(seed, 61));
  const SamplingPlan bplan =
      plan_from_json(sub(params, "block_plan"), derive(seed, 62));
  const double decomp_tol = num_or(params, "decomposition_tol", 1e-12);
  const double closed_tol = num_or(params, "closed_form_tol", 1e-12);
  const double factor_tol = num_or(params, "factor_tol", 1e-12);
  const double trial_tol = num_or(params, "trial_tol", 1e-8);

  // 1. The coefficient function is conditionally positive definite.
  CheckRecord c1 = new_check("coefficient-conditionally-psd", cplan.tol);
  fold_verdict(c1, test_cpsd_function(a, cplan), aspec, "sum-zero", 1);
  rep.checks.push_back(std::move(c1));

  // 2. Under block-sum-zero coefficients the coupling constant drops out of
  // the quadratic form, so the block form reduces to two copies of the
  // scalar form.
  CheckRecord c2 = new_check("coupling-term-vanishes", decomp_tol);
  const int decomp_sets = int_or(params, "decomposition_sets", 20);
  for (int i = 0; i < decomp_sets; ++i) {
    Rng rng = Rng::substream(seed, sid(63, static_cast<uint64_t>(i), 0));
    const int P = rng.uniform_int(2, 6);
    PointSet pts = random_points(rng, F0.dim, P, 4.0);
    CVector c(2 * P);
    for (int p = 0; p < 2 * P; ++p) c[p] = Complex(rng.normal(), rng.normal());
    Complex mean0 = 0.0, mean1 = 0.0;
    for (int p = 0; p < P; ++p) {
      mean0 += c[2 * p];
      mean1 += c[2 * p + 1];
    }
    mean0 /= static_cast<double>(P);
    mean1 /= static_cast<double>(P);
    for (int p = 0; p < P; ++p) {
      c[2 * p] -= mean0;
      c[2 * p + 1] -= mean1;
    }
    const CMatrix M0 = block_gram(F0, pts);
    const Complex blk = quadratic_form(M0, c);
    const CMatrix Ga = gram(a, pts);
    CVector c0(P), c1v(P);
    for (int p = 0; p < P; ++p) {
      c0[p] = c[2 * p];
      c1v[p] = c[2 * p + 1];
    }
    const Complex dec = quadratic_form(Ga, c0) + quadratic_form(Ga, c1v);
    const double dev =
        std::abs(blk - dec) / (1.0 + std::abs(blk) + std::abs(dec));
    fold_deviation(c2, dev,
                   Json{{"type", "decomposition"},
                        {"symbol", F0spec},
                        {"points", points_json(pts)},
                        {"coefficients", cvec_json(c)},
                        {"deviation", dev}});
  }
  rep.checks.push_back(std::move(c2));

  // 3. Vector-coefficient conditional positivity of the block Gram.
  CheckRecord c3 = new_check("vector-conditionally-psd", cplan.tol);
  const int mlak_sets = int_or(params, "mlak_sets", 10);
  for (int i = 0; i < mlak_sets; ++i) {
    Rng rng = Rng::substream(seed, sid(64, static_cast<uint64_t>(i), 0));
    const int P = rng.uniform_int(2, 8);
    PointSet pts = random_points(rng, F0.dim, P, 5.0);
    const CMatrix M = block_gram(F0, pts);
    const PsdVerdict v = is_cpsd_block(M, 2, cplan.tol);
    c3.series.push_back(v.min_eigenvalue);
    c3.value = c3.series.size() == 1 ? v.min_eigenvalue
                                     : std::min(c3.value, v.min_eigenvalue);
    c3.tolerance = std::max(c3.tolerance, v.tolerance);
    if (!v.passed && c3.passed) {
      c3.passed = false;
      c3.witness = gram_witness_pts(F0spec, pts, v.coefficients, v.min_eigenvalue,
                                    v.tolerance, "block-sum-zero", 2);
    }
  }
  rep.checks.push_back(std::move(c3));

  // 4. Closed form of the semigroup matches the matrix exponential.
  CheckRecord c4 = new_check("closed-form-match", closed_tol);
  const int x_samples = int_or(params, "x_samples", 100);
  const double x_radius = num_or(params, "x_radius", 3.0);
  for (size_t ti = 0; ti < ts.size(); ++ti) {
    const double t = ts[ti];
    const MatrixSymbol closed = exp_f0_closed_form(a, b, t);
    for (int s = 0; s < x_samples; ++s) {
      Rng rng = Rng::substream(seed, sid(65, ti, static_cast<uint64_t>(s)));
      RVector x(F0.dim);
      for (int d = 0; d < F0.dim; ++d) x[d] = rng.uniform(-x_radius, x_radius);
      const CMatrix e1 = closed.eval(x);
      const CMatrix e2 = expm(CMatrix(t * F0.eval(x)));
      const double scale = std::max(max_abs_entry(e1), 1e-300);
      const double dev = max_abs_entry(e1 - e2) / scale;
      fold_deviation(c4, dev,
                     Json{{"type", "closed-form"},
                          {"symbol", F0spec},
                          {"t", t},
                          {"x", rvec_json(x)},
                          {"deviation", dev}});
    }
  }
  rep.checks.push_back(std::move(c4));

  // 5. The constant coupling factor has eigenvalues e^{+tb} and e^{-tb},
  // recovered to machine precision relative to the factor norm e^{|tb|}.
  CheckRecord c5 = new_check("factor-eigenvalues", factor_tol);
  for (double t : ts) {
    const CMatrix C = exp_f0_factor(b, t);
    const double lo = (C(0, 0) - C(0, 1)).real();
    const double hi = (C(0, 0) + C(0, 1)).real();
    const double scale = std::exp(std::abs(t * b));
    const double dev = std::max(std::abs(hi - std::exp(t * b)),
                                std::abs(lo - std::exp(-t * b))) / scale;
    fold_deviation(c5, dev,
                   Json{{"type", "factor"}, {"b", b}, {"t", t}, {"deviation", dev}});
  }
  rep.checks.push_back(std::move(c5));

  // 6. Sampled block Grams of the semigroup are positive semidefinite.
  CheckRecord c6 = new_check("semigroup-block-psd", bplan.tol);
  for (size_t ti = 0; ti < ts.size(); ++ti) {
    const double t = ts[ti];
    Json cspec{{"family", "exp-f0"}, {"a", aspec}, {"b", b}, {"t", t}};
    SamplingPlan p = bplan;
    p.seed = derive(seed, sid(66, ti, 0));
    fold_verdict(c6, test_psd_function(exp_f0_closed_form(a, b, t), p), cspec,
                 "none", 2);
  }
  rep.checks.push_back(std::move(c6));

  // 7. The block Gram of the semigroup factors through the scalar Gram of
  // e^{t a} and the constant coupling matrix.
  CheckRecord c7 = new_check("kronecker-decomposition", decomp_tol);
  for (int i = 0; i < decomp_sets; ++i) {
    Rng rng = Rng::substream(seed, sid(67, static_cast<uint64_t>(i), 0));
    const double t = ts[static_cast<size_t>(i) % ts.size()];
    const int P = rng.uniform_int(2, 6);
    PointSet pts = random_points(rng, F0.dim, P, 4.0);
    CVector c(2 * P);
    for (int p = 0; p < 2 * P; ++p) c[p] = Complex(rng.normal(), rng.normal());
    const CMatrix M = block_gram(exp_f0_closed_form(a, b, t), pts);
    const Complex blk = quadratic_form(M, c);
    const CMatrix Ga = gram(exp_scalar(a, t), pts);
    CVector c0(P), c1v(P);
    for (int p = 0; p < P; ++p) {
      c0[p] = c[2 * p];
      c1v[p] = c[2 * p + 1];
    }
    const Complex dec =
        std::cosh(t * b) * (quadratic_form(Ga, c0) + quadratic_form(Ga, c1v)) +
        std::sinh(t * b) * (c0.dot(Ga * c1v) + c1v.dot(Ga * c0));
    const double dev =
        std::abs(blk - dec) / (1.0 + std::abs(blk) + std::abs(dec));
    fold_deviation(c7, dev,
                   Json{{"type", "decomposition"},
                        {"symbol", Json{{"family", "exp-f0"},
                                        {"a", aspec},
                                        {"b", b},
                                        {"t", t}}},
                        {"points", points_json(pts)},
                        {"coefficients", cvec_json(c)},
                        {"deviation", dev}});
  }
  rep.checks.push_back(std::move(c7));

  // 8. The semigroup multiplier preserves nonnegativity on the grid. An
  // unbounded coefficient makes the multiplier inadmissible; that is an
  // honest failure of this check, not a configuration error.
  CheckRecord c8 = new_check("grid-positivity", trial_tol);
  const int fields_per = int_or(params, "fields_per_t", 3);
  const int bumps = int_or(params, "bumps_per_field", 3);
  for (size_t ti = 0; ti < ts.size(); ++ti) {
    const double t = ts[ti];
    Json Etspec{{"family", "exp-f0"}, {"a", aspec}, {"b", b}, {"t", t}};
    try {
      const MatrixSymbol Et = matrix_symbol_from_json(Etspec);
      for (int fi = 0; fi < fields_per; ++fi) {
        const uint64_t fs = derive(seed, sid(68, ti, static_cast<uint64_t>(fi)));
        Json fspec = mixture_spec(bumps, fs);
        fold_trial(c8,
                   positivity_trial(Et, field_from_json(fspec, grid, 2), trial_tol),
                   Etspec, fspec, grid);
      }
    } catch (const ToolkitError& e) {
      if (e.code() != ErrorCode::UnboundedSymbol) throw;
      c8.value = std::min(c8.value, -1.0);
      if (c8.passed) {
        c8.passed = false;
        c8.witness = Json{{"type", "error"},
                          {"code", error_code_name(e.code())},
                          {"symbol", Etspec},
                          {"detail", e.what()}};
      }
    }
  }
  rep.checks.push_back(std::move(c8));
}

void run_bochner_suite(const Json& params, uint64_t seed, Report& rep) {
  const int count = int_or(params, "measures", 100);
  const std::vector<int> dims = int_list(params, "dims", {1, 2});
  const int max_atoms = int_or(params, "max_atoms", 5);
  const SamplingPlan plan = plan_from_json(sub(params, "plan"), derive(seed, 81));
  const double sym_tol = num_or(params, "symmetry_tol", 1e-12);
  const double bound_tol = num_or(params, "bound_tol", 1e-12);
  const int probe_points = int_or(params, "probe_points", 5);

  CheckRecord grams = new_check("grams-psd", plan.tol);
  CheckRecord sym = new_check("symmetry-deviation", sym_tol);
  CheckRecord bound = new_check("origin-bound-margin", bound_tol);

  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::substream(seed, sid(82, static_cast<uint64_t>(i), 0));
    const int dim = dims[static_cast<size_t>(i) % dims.size()];
    const int m = (i % 2 == 0) ? 1 : 2;
    const Json spec = random_measure_spec(rng, dim, m, 1, max_atoms, 3.0);
    SamplingPlan p = plan;
    p.seed = derive(seed, sid(83, static_cast<uint64_t>(i), 0));

    Rng probe = Rng::substream(seed, sid(84, static_cast<uint64_t>(i), 0));
    if (m == 1) {
      const ScalarSymbol F = scalar_symbol_from_json(spec);
      fold_verdict(grams, test_psd_function(F, p), spec, "none", 1);
      const double mag0 = std::abs(F.eval(RVector::Zero(dim)));
      for (int k = 0; k < probe_points; ++k) {
        RVector x(dim);
        for (int d = 0; d < dim; ++d) x[d] = probe.uniform(-6.0, 6.0);
        const Complex fx = F.eval(x);
        const double raw_sdev = std::abs(F.eval(-x) - std::conj(fx));
        fold_deviation(sym, raw_sdev / std::max(1.0, std::abs(fx)),
                       Json{{"type", "point"},
                            {"symbol", spec},
                            {"kind", failure_kind_name(FailureKind::SymmetryViolation)},
                            {"x", rvec_json(x)},
                            {"deviation", raw_sdev}});
        const double raw_margin = std::abs(fx) - mag0;
        fold_deviation(bound, raw_margin / std::max(1.0, mag0),
                       Json{{"type", "point"},
                            {"symbol", spec},
                            {"kind", failure_kind_name(FailureKind::BoundViolation)},
                            {"x", rvec_json(x)},
                            {"reference", mag0},
                            {"deviation", raw_margin}});
      }
    } else {
      const MatrixSymbol F = matrix_symbol_from_json(spec);
      fold_verdict(grams, test_psd_function(F, p), spec, "none", m);
      const double mag0 = F.eval(RVector::Zero(dim)).operatorNorm();
      for (int k = 0; k < probe_points; ++k) {
        RVector x(dim);
        for (int d = 0; d < dim; ++d) x[d] = probe.uniform(-6.0, 6.0);
        const CMatrix fx = F.eval(x);
        const double raw_sdev = max_abs_entry(F.eval(-x) - fx.adjoint());
        fold_deviation(sym, raw_sdev / std::max(1.0, max_abs_entry(fx)),
                       Json{{"type", "point"},
                            {"symbol", spec},
                            {"kind", failure_kind_name(FailureKind::SymmetryViolation)},
                            {"x", rvec_json(x)},
                            {"deviation", raw_sdev}});
        const double raw_margin = fx.operatorNorm() - mag0;
        fold_deviation(bound, raw_margin / std::max(1.0, mag0),
                       Json{{"type", "point"},
                            {"symbol", spec},
                            {"kind", failure_kind_name(FailureKind::BoundViolation)},
                            {"x", rvec_json(x)},
                            {"reference", mag0},
                            {"deviation", raw_margin}});
      }
    }
  }
  rep.checks.push_back(std::move(grams));
  rep.checks.push_back(std::move(sym));
  rep.checks.push_back(std::move(bound));
}

void run_lk_suite(const Json& params, const GridSpec& grid, uint64_t seed,
                  Report& rep) {
  const int count = int_or(params, "count", 10);
  const std::vector<double> ts = num_list(params, "t", {0.1, 1.0, 10.0});
  const double min_quadratic = num_or(params, "min_quadratic", 0.05);
  const int max_jumps = int_or(params, "max_jumps", 3);
  const double trial_tol = num_or(params, "trial_tol", 1e-8);
  const SamplingPlan cplan =
      plan_from_json(sub(params, "cpsd_plan"), derive(seed, 71));
  const SamplingPlan pplan =
      plan_from_json(sub(params, "psd_plan"), derive(seed, 72));
  const int bumps = int_or(params, "bumps_per_field", 3);

  std::vector<Json> specs;
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::substream(seed, sid(73, static_cast<uint64_t>(i), 0));
    specs.push_back(random_lk_spec(rng, grid.dim, min_quadratic, max_jumps));
  }

  CheckRecord cpsd_ck = new_check("conditionally-psd", cplan.tol);
  CheckRecord psd_ck = new_check("semigroup-psd", pplan.tol);
  CheckRecord grid_ck = new_check("grid-positivity", trial_tol);
  for (size_t i = 0; i < specs.size(); ++i) {
    const Json& spec = specs[i];
    const ScalarSymbol F = scalar_symbol_from_json(spec);
    SamplingPlan cp = cplan;
    cp.seed = derive(seed, sid(74, i, 0));
    fold_verdict(cpsd_ck, test_cpsd_function(F, cp), spec, "sum-zero", 1);
    for (size_t ti = 0; ti < ts.size(); ++ti) {
      const double t = ts[ti];
      Json espec{{"family", "exp"}, {"t", t}, {"inner", spec}};
      SamplingPlan pp = pplan;
      pp.seed = derive(seed, sid(75, i, ti));
      fold_verdict(psd_ck, test_psd_function(exp_scalar(F, t), pp), espec,
                   "none", 1);
      Json wspec{{"family", "scalar"}, {"inner", espec}};
      const MatrixSymbol E = matrix_symbol_from_json(wspec);
      const uint64_t fs = derive(seed, sid(76, i, ti));
      Json fspec = mixture_spec(bumps, fs);
      fold_trial(grid_ck,
                 positivity_trial(E, field_from_json(fspec, grid, 1), trial_tol),
                 wspec, fspec, grid);
    }
  }
  rep.checks.push_back(std::move(cpsd_ck));
  rep.checks.push_back(std::move(psd_ck));
  rep.checks.push_back(std::move(grid_ck));
}

void run_schur_suite(const Json& params, uint64_t seed, Report& rep) {
  const int pairs = int_or(params, "pairs", 500);
  const std::vector<int> sizes = int_list(params, "sizes", {2, 20});
  if (sizes.size() != 2 || sizes[0] < 1 || sizes[0] > sizes[1])
    bad_config("schur-suite: sizes must be an [lo, hi] range");
  const double ratio_tol = num_or(params, "ratio_tol", 1e-10);

  // Entrywise products of random positive semidefinite pairs stay positive
  // semidefinite; the margin is measured relative to the Frobenius norm.
  CheckRecord ratio_ck = new_check("hadamard-min-eig-ratio", ratio_tol);
  for (int i = 0; i < pairs; ++i) {
    Rng rng = Rng::substream(seed, sid(91, static_cast<uint64_t>(i), 0));
    const int n = rng.uniform_int(sizes[0], sizes[1]);
    const CMatrix A = random_psd_weight(rng, n);
    const CMatrix B = random_psd_weight(rng, n);
    const CMatrix H = hadamard(A, B);
    const double nrm = std::max(H.norm(), 1e-300);
    const double r = hermitian_min_eig(H) / nrm;
    ratio_ck.series.push_back(r);
    ratio_ck.value = ratio_ck.series.size() == 1 ? r : std::min(ratio_ck.value, r);
    if (r < -ratio_tol && ratio_ck.passed) {
      ratio_ck.passed = false;
      ratio_ck.witness =
          Json{{"type", "hadamard"}, {"size", n}, {"pair", i}, {"ratio", r}};
    }
  }
  rep.checks.push_back(std::move(ratio_ck));

  // Function-level closure: the entrywise exponential of an entrywise
  // positive definite bounded symbol has positive definite entries.
  const SamplingPlan eplan =
      plan_from_json(sub(params, "exp_plan"), derive(seed, 92));
  const double t = num_or(params, "exp_t", 1.0);
  Rng rng = Rng::substream(seed, sid(93, 0, 0));
  const Json base =
      random_bochner_matrix_spec(rng, 1, 2, 1, 3, 0.25, 8, /*entrywise=*/true);
  Json espec{{"family", "hadamard-exp"}, {"t", t}, {"inner", base}};
  const MatrixSymbol E = matrix_symbol_from_json(espec);
  CheckRecord exp_ck = new_check("hadamard-exp-entry-psd", eplan.tol);
  for (int jj = 0; jj < E.m; ++jj)
    for (int kk = 0; kk < E.m; ++kk) {
      Json entry{{"family", "entry"}, {"j", jj}, {"k", kk}, {"inner", espec}};
      SamplingPlan p = eplan;
      p.seed = derive(seed, sid(94, static_cast<uint64_t>(jj), static_cast<uint64_t>(kk)));
      fold_verdict(exp_ck, test_psd_function(entry_symbol(E, jj, kk), p), entry,
                   "none", 1);
    }
  rep.checks.push_back(std::move(exp_ck));
}

GridField random_complex_field(const GridSpec& g, int components, uint64_t seed) {
  GridField f = zero_field(g, components);
  for (int c = 0; c < components; ++c) {
    Rng rng = Rng::substream(seed, static_cast<uint64_t>(c) + 1);
    for (auto& v : f.data[c]) v = Complex(rng.normal(), rng.normal());
  }
  return f;
}

void run_norm_suite(const Json& params, const GridSpec& grid, uint64_t seed,
                    Report& rep) {
  const int fields = int_or(params, "fields", 5);

  CheckRecord rt = new_check("transform-roundtrip",
                             num_or(params, "roundtrip_tol", 1e-12));
  CheckRecord un = new_check("parseval-unitarity",
                             num_or(params, "unitarity_tol", 1e-12));
  for (int i = 0; i < fields; ++i) {
    const GridField f =
        random_complex_field(grid, 1, derive(seed, sid(101, static_cast<uint64_t>(i), 0)));
    const GridField fhat = dft_forward(f);
    const GridField back = dft_inverse(fhat);
    double worst = 0.0;
    for (size_t k = 0; k < f.data[0].size(); ++k)
      worst = std::max(worst, std::abs(back.data[0][k] - f.data[0][k]));
    const double rel = worst / rel_floor(field_max_abs(f));
    fold_deviation(rt, rel, Json{{"type", "roundtrip"}, {"field", i}, {"deviation", rel}});
    const double n_space = hilbert_norm(f);
    const double n_freq = dual_hilbert_norm(fhat);
    const double udev = std::abs(n_freq - n_space) / n_space;
    fold_deviation(un, udev,
                   Json{{"type", "unitarity"}, {"field", i}, {"deviation", udev}});
  }
  rep.checks.push_back(std::move(rt));
  rep.checks.push_back(std::move(un));

  // Kernel mass identities: a unit-decay Gaussian symbol integrates to
  // sqrt(2 pi) in raw kernel variation; a pure oscillation carries two atoms
  // of mass 1/2, i.e. unit operator mass, once its atoms sit on the lattice.
  {
    CheckRecord g = new_check("gaussian-kernel-tv", num_or(params, "gaussian_tol", 1e-4));
    const GridSpec ggrid = params.contains("gaussian_grid")
                               ? grid_from_json(params.at("gaussian_grid"))
                               : grid;
    const double decay = num_or(params, "gaussian_decay", 0.5);
    const KernelReport kr = kernel_and_tv(make_gaussian(1, decay), ggrid);
    const double dev = std::abs(kr.tv - std::sqrt(2.0 * M_PI));
    fold_deviation(g, dev,
                   Json{{"type", "kernel-mass"},
                        {"symbol", Json{{"family", "gaussian"}, {"dim", 1}, {"decay", decay}}},
                        {"grid", grid_to_json(ggrid)},
                        {"tv", kr.tv},
                        {"mass", kr.mass},
                        {"deviation", dev}});
    rep.checks.push_back(std::move(g));
  }
  {
    CheckRecord c = new_check("cos-kernel-mass", num_or(params, "cos_tol", 1e-6));
    const GridSpec cgrid = params.contains("cos_grid")
                               ? grid_from_json(params.at("cos_grid"))
                               : grid;
    RVector omega(1);
    omega << 1.0;
    const KernelReport kr = kernel_and_tv(make_cos(omega), cgrid);
    const double dev = std::abs(kr.mass - 1.0);
    fold_deviation(c, dev,
                   Json{{"type", "kernel-mass"},
                        {"symbol", Json{{"family", "cos"}, {"omega", Json::array({1.0})}}},
                        {"grid", grid_to_json(cgrid)},
                        {"tv", kr.tv},
                        {"mass", kr.mass},
                        {"deviation", dev}});
    rep.checks.push_back(std::move(c));
  }
  {
    CheckRecord d = new_check("flat-kernel-tv", num_or(params, "delta_tol", 1e-10));
    const double v = std::pow(2.0 * M_PI, -0.5);
    const KernelReport kr = kernel_and_tv(make_constant(1, Complex(v, 0.0)), grid);
    const double dev = std::abs(kr.tv - 1.0);
    fold_deviation(d, dev,
                   Json{{"type", "kernel-mass"},
                        {"symbol", Json{{"family", "constant"}, {"dim", 1}, {"value", v}}},
                        {"grid", grid_to_json(grid)},
                        {"tv", kr.tv},
                        {"mass", kr.mass},
                        {"deviation", dev}});
    rep.checks.push_back(std::move(d));
  }

  // L2 operator bound: for a diagonal symbol the lattice sup is the largest
  // scale factor and the measured ratio must not exceed it.
  {
    const GridSpec rgrid = params.contains("ratio_grid")
                               ? grid_from_json(params.at("ratio_grid"))
                               : grid;
    const std::vector<double> scales = num_list(params, "diag_scales", {1.0, 0.7});
    Json entries = Json::array();
    entries.push_back(Json{{"family", "scaled"},
                           {"factor", scales.at(0)},
                           {"inner", Json{{"family", "gaussian"}, {"dim", 1}, {"decay", 0.5}}}});
    entries.push_back(Json{{"family", "scaled"},
                           {"factor", scales.at(1)},
                           {"inner", Json{{"family", "cos"}, {"omega", Json::array({1.0})}}}});
    Json gspec{{"family", "diagonal"}, {"entries", entries}};
    const MatrixSymbol G = matrix_symbol_from_json(gspec);
    const MultiplierNormReport r =
        l2_norm_bound(G, rgrid, derive(seed, 102), int_or(params, "ratio_batch", 50));
    const double expected = *std::max_element(scales.begin(), scales.end());

    CheckRecord s = new_check("symbol-sup", num_or(params, "sup_tol", 1e-12));
    const double sdev = std::abs(r.sup_symbol - expected);
    fold_deviation(s, sdev,
                   Json{{"type", "norm-report"},
                        {"symbol", gspec},
                        {"grid", grid_to_json(rgrid)},
                        {"sup_symbol", r.sup_symbol},
                        {"expected", expected}});
    rep.checks.push_back(std::move(s));

    CheckRecord b = new_check("l2-contraction-ratio", num_or(params, "ratio_slack", 1e-8));
    const double excess = r.parseval_ratio - r.sup_symbol;
    fold_deviation(b, excess,
                   Json{{"type", "norm-report"},
                        {"symbol", gspec},
                        {"grid", grid_to_json(rgrid)},
                        {"parseval_ratio", r.parseval_ratio},
                        {"sup_symbol", r.sup_symbol}});
    rep.checks.push_back(std::move(b));
  }
}

void run_falsify(const Json& params, const GridSpec& grid, uint64_t seed,
                 Report& rep) {
  const Json& gspec = need(params, "symbol", "falsify params");
  if (gspec.is_object() && matrix_symbol_family(str_or(gspec, "family", "")))
    bad_config("falsify: expects a scalar symbol spec");
  const ScalarSymbol G = scalar_symbol_from_json(gspec);
  const std::vector<double> eps =
      num_list(params, "eps", {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625});
  const std::vector<double> ladder =
      num_list(params, "ladder_scales", {0.3, 0.45, 0.6, 0.75, 0.9});
  const SamplingPlan plan = plan_from_json(sub(params, "plan"), derive(seed, 111));
  const double kernel_tol = num_or(params, "kernel_tol", 1e-9);
  const double trial_tol = num_or(params, "trial_tol", 1e-8);

  // 1. Sign scan of the discrete convolution kernel.
  {
    CheckRecord kc = new_check("kernel-nonnegative", kernel_tol);
    const KernelReport kr = kernel_and_tv(G, grid);
    int comp = 0;
    long flat = 0;
    const double mn = field_min_real(kr.kernel, &comp, &flat);
    const double scale = field_max_abs(kr.kernel);
    const double rel = mn / rel_floor(scale);
    kc.series.push_back(rel);
    kc.value = rel;
    if (rel < -kernel_tol) {
      kc.passed = false;
      kc.witness = Json{{"type", "kernel"},
                        {"symbol", gspec},
                        {"grid", grid_to_json(grid)},
                        {"x", rvec_json(point_at(grid, flat))},
                        {"min_real", mn},
                        {"scale", scale}};
    }
    rep.checks.push_back(std::move(kc));
  }

  // 2. Multiplier output on the concentrating basis elements.
  {
    CheckRecord fc = new_check("mollified-positivity-grid", trial_tol);
    Json wspec{{"family", "scalar"}, {"inner", gspec}};
    const MatrixSymbol Gm = matrix_symbol_from_json(wspec);
    for (size_t ei = 0; ei < eps.size(); ++ei) {
      Json fspec{{"kind", "basis"}, {"eps", eps[ei]}, {"plateau", 0.5}, {"slot", 0}};
      const GridField f = field_from_json(fspec, grid, 1);
      fold_trial(fc, positivity_trial(Gm, f, trial_tol), wspec, fspec, grid);
    }
    rep.checks.push_back(std::move(fc));
  }

  // 3. Sampled Grams of the mollified products, on clustered ladder point
  // sets that straddle the shoulder of the symbol plus a randomized plan.
  {
    CheckRecord gc = new_check("mollified-gram-psd", plan.tol);
    const double base = num_or(gspec, "radius", 1.0);
    for (size_t ei = 0; ei < eps.size(); ++ei) {
      Json pspec{{"family", "mollified"},
                 {"eps", eps[ei]},
                 {"plateau", 0.5},
                 {"inner", gspec}};
      const ScalarSymbol H = scalar_symbol_from_json(pspec);
      for (double sc : ladder) {
        const double d = sc * base;
        PointSet pts;
        pts.dim = H.dim;
        for (int k = 0; k < 3; ++k) {
          RVector x = RVector::Zero(H.dim);
          x[0] = d * k;
          pts.push_back(std::move(x));
        }
        const PsdVerdict v = is_psd(gram(H, pts), plan.tol, plan.hsym_tol);
        gc.series.push_back(v.min_eigenvalue);
        gc.value = gc.series.size() == 1 ? v.min_eigenvalue
                                         : std::min(gc.value, v.min_eigenvalue);
        gc.tolerance = std::max(gc.tolerance, v.tolerance);
        if (!v.passed && gc.passed) {
          gc.passed = false;
          gc.witness = gram_witness_pts(pspec, pts, v.coefficients,
                                        v.min_eigenvalue, v.tolerance, "none", 1);
        }
      }
      SamplingPlan p = plan;
      p.seed = derive(seed, sid(112, ei, 0));
      fold_verdict(gc, test_psd_function(H, p), pspec, "none", 1);
    }
    rep.checks.push_back(std::move(gc));
  }
}

void merge_config(Json& base, const Json& over) {
  for (auto it = over.begin(); it != over.end(); ++it) {
    if (it.value().is_object() && base.contains(it.key()) &&
        base.at(it.key()).is_object())
      merge_config(base.at(it.key()), it.value());
    else
      base[it.key()] = it.value();
  }
}

bool scenario_is_gridless(const std::string& kind) {
  return kind == "bochner-suite" || kind == "schur-suite";
}

}  // namespace

// ---------------------------------------------------------------------------
// Public converters

GridSpec grid_from_json(const Json& j) {
  if (!j.is_object()) bad_config("grid: expected an object with dim, samples, length");
  GridSpec g;
  g.dim = int_at(j, "dim", "grid");
  g.samples = int_at(j, "samples", "grid");
  g.length = num_at(j, "length", "grid");
  try {
    validate_grid(g);
  } catch (const ToolkitError& e) {
    bad_config(std::string("grid: ") + e.what());
  }
  return g;
}

Json grid_to_json(const GridSpec& spec) {
  return Json{{"dim", spec.dim}, {"samples", spec.samples}, {"length", spec.length}};
}

SamplingPlan plan_from_json(const Json& j, uint64_t default_seed) {
  SamplingPlan p;
  p.seed = default_seed;
  if (j.is_null()) return p;
  if (!j.is_object()) bad_config("sampling plan: expected an object");
  p.trials = int_or(j, "trials", p.trials);
  p.min_points = int_or(j, "min_points", p.min_points);
  p.max_points = int_or(j, "max_points", p.max_points);
  p.radius = num_or(j, "radius", p.radius);
  p.seed = seed_or(j, "seed", p.seed);
  p.tol = num_or(j, "tol", p.tol);
  p.hsym_tol = num_or(j, "hsym_tol", p.hsym_tol);
  p.symmetry_tol = num_or(j, "symmetry_tol", p.symmetry_tol);
  p.bound_tol = num_or(j, "bound_tol", p.bound_tol);
  if (p.trials < 1 || p.min_points < 1 || p.min_points > p.max_points ||
      !(p.radius > 0.0) || !(p.tol >= 0.0))
    bad_config("sampling plan: trials >= 1, 1 <= min_points <= max_points, radius > 0 required");
  return p;
}

AtomicMeasure measure_from_json(const Json& j) {
  if (!j.is_object()) bad_config("measure: expected an object");
  AtomicMeasure mu;
  mu.dim = int_at(j, "dim", "measure");
  mu.m = int_or(j, "m", 1);
  const Json& locs = need(j, "locations", "measure");
  const Json& ws = need(j, "weights", "measure");
  if (!locs.is_array() || !ws.is_array() || locs.size() != ws.size())
    bad_config("measure: locations and weights must be arrays of equal length");
  for (size_t i = 0; i < locs.size(); ++i) {
    RVector y = rvec_from(locs[i], "measure location");
    if (static_cast<int>(y.size()) != mu.dim)
      bad_config("measure: location dimension mismatch");
    mu.locations.push_back(std::move(y));
    mu.weights.push_back(weight_from_json(ws[i], mu.m, "measure weight"));
  }
  validate_measure(mu);
  return mu;
}

Json measure_to_json(const AtomicMeasure& mu) {
  Json locs = Json::array();
  Json ws = Json::array();
  for (int i = 0; i < mu.atoms(); ++i) {
    locs.push_back(rvec_json(mu.locations[static_cast<size_t>(i)]));
    ws.push_back(weight_to_json(mu.weights[static_cast<size_t>(i)]));
  }
  return measure_spec_json(mu.dim, mu.m, locs, ws);
}

LKParams lk_from_json(const Json& j) {
  if (!j.is_object()) bad_config("canonical-form spec: expected an object");
  LKParams p;
  p.dim = int_or(j, "dim", 1);
  p.alpha = num_or(j, "alpha", 0.0);
  if (j.contains("beta") && !j.at("beta").is_null()) {
    p.beta = rvec_from(j.at("beta"), "beta");
    if (static_cast<int>(p.beta.size()) != p.dim)
      bad_config("canonical-form spec: beta dimension mismatch");
  } else {
    p.beta = RVector::Zero(p.dim);
  }
  if (j.contains("A") && !j.at("A").is_null()) {
    p.A = cmat_from(j.at("A"), "A");
    if (p.A.rows() != p.dim || p.A.cols() != p.dim)
      bad_config("canonical-form spec: A must be dim x dim");
  } else {
    p.A = CMatrix::Zero(p.dim, p.dim);
  }
  if (j.contains("jumps") && !j.at("jumps").is_null()) {
    p.nu = measure_from_json(j.at("jumps"));
    if (p.nu.m != 1) bad_config("canonical-form spec: jump measure must be scalar");
    if (p.nu.dim != p.dim) bad_config("canonical-form spec: jump dimension mismatch");
  } else {
    p.nu.dim = p.dim;
    p.nu.m = 1;
  }
  return p;
}

ScalarSymbol scalar_symbol_from_json(const Json& j) {
  if (!j.is_object()) bad_config("symbol spec: expected an object");
  const std::string fam = str_at(j, "family", "symbol spec");
  if (fam == "constant") {
    const Complex v = j.contains("value") ? cnum_from(j.at("value"), "constant symbol")
                                          : Complex(1.0, 0.0);
    return make_constant(int_or(j, "dim", 1), v);
  }
  if (fam == "gaussian")
    return make_gaussian(int_or(j, "dim", 1), num_or(j, "decay", 0.5));
  if (fam == "cos") return make_cos(rvec_from(need(j, "omega", "cos symbol"), "omega"));
  if (fam == "sin") return make_sin(rvec_from(need(j, "omega", "sin symbol"), "omega"));
  if (fam == "neg-quadratic") return make_neg_quadratic(int_or(j, "dim", 1));
  if (fam == "quadratic") return make_quadratic(int_or(j, "dim", 1));
  if (fam == "imag-linear")
    return make_imag_linear(rvec_from(need(j, "v", "imag-linear symbol"), "v"));
  if (fam == "bump")
    return make_bump(int_or(j, "dim", 1), num_or(j, "radius", 1.0),
                     num_or(j, "plateau", 0.5), num_or(j, "height", 1.0));
  if (fam == "bochner")
    return bochner_scalar(measure_from_json(need(j, "measure", "bochner symbol")));
  if (fam == "levy-khintchine") return levy_khintchine(lk_from_json(j));
  if (fam == "scaled")
    return scale_symbol(scalar_symbol_from_json(need(j, "inner", "scaled symbol")),
                        cnum_from(need(j, "factor", "scaled symbol"), "factor"));
  if (fam == "shifted")
    return add_constant(scalar_symbol_from_json(need(j, "inner", "shifted symbol")),
                        cnum_from(need(j, "offset", "shifted symbol"), "offset"));
  if (fam == "exp")
    return exp_scalar(scalar_symbol_from_json(need(j, "inner", "exp symbol")),
                      num_at(j, "t", "exp symbol"));
  if (fam == "mollified")
    return mollified_symbol(
        scalar_symbol_from_json(need(j, "inner", "mollified symbol")),
        num_at(j, "eps", "mollified symbol"), num_or(j, "plateau", 0.5));
  if (fam == "entry") {
    const MatrixSymbol F = matrix_symbol_from_json(need(j, "inner", "entry symbol"));
    const int jj = int_at(j, "j", "entry symbol");
    const int kk = int_at(j, "k", "entry symbol");
    if (jj < 0 || kk < 0 || jj >= F.m || kk >= F.m)
      bad_config("entry symbol: index out of range");
    return entry_symbol(F, jj, kk);
  }
  bad_config("unknown scalar symbol family '" + fam + "'");
}

MatrixSymbol matrix_symbol_from_json(const Json& j) {
  if (!j.is_object()) bad_config("symbol spec: expected an object");
  const std::string fam = str_at(j, "family", "symbol spec");
  if (fam == "entries") {
    const int m = int_at(j, "m", "entries symbol");
    const Json& es = need(j, "entries", "entries symbol");
    if (!es.is_array() || static_cast<int>(es.size()) != m * m)
      bad_config("entries symbol: need m*m entry specs");
    std::vector<ScalarSymbol> entries;
    for (const auto& e : es) entries.push_back(scalar_symbol_from_json(e));
    return matrix_from_entries(m, std::move(entries));
  }
  if (fam == "diagonal") {
    const Json& es = need(j, "entries", "diagonal symbol");
    if (!es.is_array() || es.empty())
      bad_config("diagonal symbol: need a nonempty entry list");
    std::vector<ScalarSymbol> entries;
    for (const auto& e : es) entries.push_back(scalar_symbol_from_json(e));
    return diagonal_from_entries(std::move(entries));
  }
  if (fam == "scalar")
    return matrix_from_scalar(scalar_symbol_from_json(need(j, "inner", "scalar wrapper")));
  if (fam == "identity")
    return identity_symbol(int_or(j, "dim", 1), int_or(j, "m", 1));
  if (fam == "bochner-matrix")
    return bochner_matrix(measure_from_json(need(j, "measure", "bochner-matrix symbol")));
  if (fam == "lk-matrix") {
    const int m = int_at(j, "m", "lk-matrix symbol");
    const Json& es = need(j, "entries", "lk-matrix symbol");
    if (!es.is_array() || static_cast<int>(es.size()) != m * m)
      bad_config("lk-matrix symbol: need m*m canonical-form specs");
    std::vector<LKParams> entries;
    for (const auto& e : es) entries.push_back(lk_from_json(e));
    return lk_matrix(m, entries);
  }
  if (fam == "example-f0")
    return example_f0(scalar_symbol_from_json(need(j, "a", "example-f0 symbol")),
                      num_at(j, "b", "example-f0 symbol"));
  if (fam == "exp-f0")
    return exp_f0_closed_form(
        scalar_symbol_from_json(need(j, "a", "exp-f0 symbol")),
        num_at(j, "b", "exp-f0 symbol"), num_at(j, "t", "exp-f0 symbol"));
  if (fam == "hadamard-exp")
    return hadamard_exp(matrix_symbol_from_json(need(j, "inner", "hadamard-exp symbol")),
                        num_at(j, "t", "hadamard-exp symbol"));
  if (fam == "matrix-exp")
    return matrix_exp(matrix_symbol_from_json(need(j, "inner", "matrix-exp symbol")),
                      num_at(j, "t", "matrix-exp symbol"));
  bad_config("unknown matrix symbol family '" + fam + "'");
}

bool matrix_symbol_family(const std::string& family) {
  return family == "entries" || family == "diagonal" || family == "scalar" ||
         family == "identity" || family == "bochner-matrix" ||
         family == "lk-matrix" || family == "example-f0" || family == "exp-f0" ||
         family == "hadamard-exp" || family == "matrix-exp";
}

GridField field_from_json(const Json& j, const GridSpec& grid, int components) {
  if (!j.is_object()) bad_config("field spec: expected an object");
  const std::string kind = str_at(j, "kind", "field spec");
  if (kind == "bump-mixture") {
    const int count = int_or(j, "count", 3);
    if (count < 1) bad_config("bump-mixture field: count must be >= 1");
    return bump_mixture_field(grid, components, count, seed_or(j, "seed", 1));
  }
  if (kind == "basis") {
    MollifierSpec ms;
    ms.dim = grid.dim;
    ms.eps = num_at(j, "eps", "basis field");
    ms.plateau = num_or(j, "plateau", 0.5);
    const Mollifier phi(ms);
    return basis_test_field(phi, int_or(j, "slot", 0), components, grid);
  }
  if (kind == "constant") {
    const double v = num_at(j, "value", "constant field");
    GridField f = zero_field(grid, components);
    for (int c = 0; c < components; ++c)
      for (auto& z : f.data[c]) z = Complex(v, 0.0);
    return f;
  }
  bad_config("unknown field kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Report plumbing

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

Json Report::to_json() const {
  Json cs = Json::array();
  for (const auto& c : checks) {
    Json jc{{"name", c.name},
            {"passed", c.passed},
            {"value", c.value},
            {"tol", c.tolerance},
            {"witness", c.witness}};
    if (!c.series.empty()) jc["series"] = c.series;
    cs.push_back(std::move(jc));
  }
  return Json{{"version", toolkit_version()},
              {"scenario", scenario},
              {"checks", cs},
              {"seed", seed},
              {"grid", grid},
              {"config", config},
              {"elapsed_ms", elapsed_ms}};
}

std::string Report::to_csv() const {
  std::ostringstream out;
  out << "check,trial,value,tolerance,passed\n";
  for (const auto& c : checks) {
    if (c.series.empty()) {
      out << c.name << ",," << fmt_num(c.value) << ',' << fmt_num(c.tolerance)
          << ',' << (c.passed ? 1 : 0) << '\n';
      continue;
    }
    for (size_t i = 0; i < c.series.size(); ++i)
      out << c.name << ',' << i << ',' << fmt_num(c.series[i]) << ','
          << fmt_num(c.tolerance) << ',' << (c.passed ? 1 : 0) << '\n';
  }
  return out.str();
}

void write_report_json(const Report& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open for writing: " + path);
  out << r.to_json().dump(2) << '\n';
  if (!out.good()) fail(ErrorCode::Io, "short write: " + path);
}

void write_report_csv(const Report& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open for writing: " + path);
  out << r.to_csv();
  if (!out.good()) fail(ErrorCode::Io, "short write: " + path);
}

// ---------------------------------------------------------------------------
// Scenario registry

std::vector<std::string> scenario_kinds() {
  return {"theorem-2-2",  "corollary-2-3", "corollary-2-4", "corollary-2-5",
          "example-2-6",  "bochner-suite", "lk-suite",      "schur-suite",
          "norm-suite",   "falsify"};
}

Json default_scenario_config(const std::string& kind) {
  const auto grid_json = [](int dim, int n, double len) {
    return Json{{"dim", dim}, {"samples", n}, {"length", len}};
  };
  const auto plan_json = [](int trials, int min_pts, int max_pts, double radius) {
    return Json{{"trials", trials},
                {"min_points", min_pts},
                {"max_points", max_pts},
                {"radius", radius}};
  };
  Json cfg{{"version", 1}, {"kind", kind}, {"seed", 1}};
  if (kind == "theorem-2-2") {
    cfg["grid"] = grid_json(1, 1024, 40.0);
    cfg["params"] = Json{
        {"symbol", nullptr},
        {"symbols", 20},
        {"m_values", Json::array({2, 3})},
        {"atoms", Json::array({1, 4})},
        {"fields_per_symbol", 20},
        {"bumps_per_field", 3},
        {"trial_tol", 1e-8},
        {"oracle_tol", 1e-8},
        {"entry_plan", plan_json(8, 2, 8, 8.0)},
        {"probe",
         Json{{"eps", Json::array({0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625})},
              {"symbols", 3},
              {"grid", grid_json(1, 8192, 20.0)},
              {"plan", plan_json(6, 2, 6, 6.0)}}}};
    return cfg;
  }
  if (kind == "corollary-2-3") {
    const Json diag{{"family", "levy-khintchine"}, {"dim", 1},
                    {"alpha", 0.0},
                    {"beta", Json::array({0.0})},
                    {"A", Json::array({Json::array({0.5})})},
                    {"jumps", nullptr}};
    const Json off{{"family", "levy-khintchine"}, {"dim", 1},
                   {"alpha", 0.0},
                   {"beta", Json::array({0.25})},
                   {"A", Json::array({Json::array({0.25})})},
                   {"jumps", measure_spec_json(1, 1, Json::array({Json::array({1.0})}),
                                               Json::array({0.4}))}};
    cfg["grid"] = grid_json(1, 2048, 40.0);
    cfg["params"] = Json{{"m", 2},
                         {"entries", Json::array({diag, off, off, diag})},
                         {"t", Json::array({0.1, 1.0, 10.0})},
                         {"trial_tol", 1e-8},
                         {"fields_per_t", 5},
                         {"bumps_per_field", 3},
                         {"cpsd_plan", plan_json(20, 2, 10, 5.0)},
                         {"entry_plan", plan_json(10, 2, 8, 5.0)}};
    return cfg;
  }
  if (kind == "corollary-2-4") {
    const auto heat = [](double a) {
      return Json{{"family", "levy-khintchine"}, {"dim", 1},
                  {"alpha", 0.0},
                  {"beta", Json::array({0.0})},
                  {"A", Json::array({Json::array({a})})},
                  {"jumps", nullptr}};
    };
    cfg["grid"] = grid_json(1, 1024, 40.0);
    cfg["params"] = Json{{"m", 2},
                         {"entries", Json::array({heat(1.0), heat(0.5)})},
                         {"t", Json::array({0.1, 1.0, 10.0})},
                         {"trial_tol", 1e-8},
                         {"heat_oracle", true},
                         {"oracle_tol", 1e-6},
                         {"fields_per_t", 3},
                         {"bumps_per_field", 3},
                         {"cpsd_plan", plan_json(20, 2, 10, 5.0)},
                         {"entry_plan", plan_json(10, 2, 8, 5.0)}};
    return cfg;
  }
  if (kind == "corollary-2-5") {
    const auto atom_measure = [](std::vector<std::pair<double, double>> atoms) {
      Json locs = Json::array();
      Json ws = Json::array();
      for (const auto& a : atoms) {
        locs.push_back(Json::array({a.first}));
        ws.push_back(a.second);
      }
      return Json{{"family", "bochner"}, {"measure", measure_spec_json(1, 1, locs, ws)}};
    };
    const Json g11 = atom_measure({{0.0, 0.6}, {1.0, 0.2}, {-1.0, 0.2}});
    const Json g12 = atom_measure({{0.5, 0.25}, {-0.5, 0.25}});
    const Json g22 = atom_measure({{0.0, 0.8}});
    cfg["grid"] = grid_json(1, 1024, 32.0);
    cfg["params"] = Json{{"symbol", Json{{"family", "entries"},
                                         {"m", 2},
                                         {"entries", Json::array({g11, g12, g12, g22})}}},
                         {"t", Json::array({0.1, 1.0, 2.0})},
                         {"series_terms", 30},
                         {"series_tol", 1e-10},
                         {"x_samples", 3},
                         {"x_radius", 5.0},
                         {"trial_tol", 1e-8},
                         {"fields_per_t", 3},
                         {"bumps_per_field", 3},
                         {"entry_plan", plan_json(8, 2, 8, 6.0)}};
    return cfg;
  }
  if (kind == "example-2-6") {
    cfg["grid"] = grid_json(1, 1024, 40.0);
    cfg["params"] = Json{{"a", Json{{"family", "neg-quadratic"}, {"dim", 1}}},
                         {"b", 1.0},
                         {"t", Json::array({0.1, 1.0, 10.0})},
                         {"x_samples", 100},
                         {"x_radius", 3.0},
                         {"closed_form_tol", 1e-12},
                         {"factor_tol", 1e-12},
                         {"decomposition_tol", 1e-12},
                         {"decomposition_sets", 20},
                         {"mlak_sets", 10},
                         {"trial_tol", 1e-8},
                         {"fields_per_t", 3},
                         {"bumps_per_field", 3},
                         {"cpsd_plan", plan_json(20, 2, 10, 5.0)},
                         {"block_plan", plan_json(10, 2, 6, 4.0)}};
    return cfg;
  }
  if (kind == "bochner-suite") {
    cfg["params"] = Json{{"measures", 100},
                         {"dims", Json::array({1, 2})},
                         {"max_atoms", 5},
                         {"probe_points", 5},
                         {"symmetry_tol", 1e-12},
                         {"bound_tol", 1e-12},
                         {"plan", plan_json(20, 2, 10, 6.0)}};
    return cfg;
  }
  if (kind == "lk-suite") {
    cfg["grid"] = grid_json(1, 2048, 40.0);
    cfg["params"] = Json{{"count", 10},
                         {"t", Json::array({0.1, 1.0, 10.0})},
                         {"min_quadratic", 0.05},
                         {"max_jumps", 3},
                         {"trial_tol", 1e-8},
                         {"bumps_per_field", 3},
                         {"cpsd_plan", plan_json(20, 2, 10, 5.0)},
                         {"psd_plan", plan_json(10, 2, 8, 5.0)}};
    return cfg;
  }
  if (kind == "schur-suite") {
    cfg["params"] = Json{{"pairs", 500},
                         {"sizes", Json::array({2, 20})},
                         {"ratio_tol", 1e-10},
                         {"exp_t", 1.0},
                         {"exp_plan", plan_json(10, 2, 8, 6.0)}};
    return cfg;
  }
  if (kind == "norm-suite") {
    cfg["grid"] = grid_json(1, 1024, 40.0);
    cfg["params"] = Json{{"fields", 5},
                         {"roundtrip_tol", 1e-12},
                         {"unitarity_tol", 1e-12},
                         {"gaussian_decay", 0.5},
                         {"gaussian_tol", 1e-4},
                         {"gaussian_grid", grid_json(1, 1024, 40.0)},
                         {"cos_tol", 1e-6},
                         {"cos_grid", grid_json(1, 1024, 32.0)},
                         {"delta_tol", 1e-10},
                         {"ratio_grid", grid_json(1, 256, 16.0)},
                         {"ratio_batch", 50},
                         {"ratio_slack", 1e-8},
                         {"sup_tol", 1e-12},
                         {"diag_scales", Json::array({1.0, 0.7})}};
    return cfg;
  }
  if (kind == "falsify") {
    cfg["grid"] = grid_json(1, 8192, 20.0);
    cfg["params"] = Json{
        {"symbol", Json{{"family", "bump"},
                        {"dim", 1},
                        {"radius", 1.0},
                        {"plateau", 0.5},
                        {"height", 1.0}}},
        {"eps", Json::array({0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625})},
        {"ladder_scales", Json::array({0.3, 0.45, 0.6, 0.75, 0.9})},
        {"kernel_tol", 1e-9},
        {"trial_tol", 1e-8},
        {"plan", plan_json(40, 2, 10, 2.5)}};
    return cfg;
  }
  bad_config("unknown scenario kind '" + kind + "'");
}

Report run_scenario(const Json& config) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!config.is_object()) bad_config("scenario config must be a JSON object");
  const std::string kind = str_at(config, "kind", "scenario config");
  Json cfg = default_scenario_config(kind);
  merge_config(cfg, config);
  const int version = int_or(cfg, "version", 1);
  if (version != 1)
    bad_config("unsupported config version " + std::to_string(version));
  const uint64_t seed = seed_or(cfg, "seed", 1);
  if (!cfg.at("params").is_object())
    bad_config("scenario config: params must be an object");
  const Json& params = cfg.at("params");

  Report rep;
  rep.scenario = kind;
  rep.seed = seed;
  rep.config = cfg;

  if (scenario_is_gridless(kind)) {
    if (cfg.contains("grid") && !cfg.at("grid").is_null())
      bad_config("scenario '" + kind + "' takes no grid");
    rep.grid = nullptr;
    if (kind == "bochner-suite")
      run_bochner_suite(params, seed, rep);
    else
      run_schur_suite(params, seed, rep);
  } else {
    const GridSpec grid = grid_from_json(need(cfg, "grid", "scenario config"));
    rep.grid = grid_to_json(grid);
    if (kind == "theorem-2-2")
      run_theorem_2_2(params, grid, seed, rep);
    else if (kind == "corollary-2-3")
      run_corollary_2_3(params, grid, seed, rep);
    else if (kind == "corollary-2-4")
      run_corollary_2_4(params, grid, seed, rep);
    else if (kind == "corollary-2-5")
      run_corollary_2_5(params, grid, seed, rep);
    else if (kind == "example-2-6")
      run_example_2_6(params, grid, seed, rep);
    else if (kind == "lk-suite")
      run_lk_suite(params, grid, seed, rep);
    else if (kind == "norm-suite")
      run_norm_suite(params, grid, seed, rep);
    else if (kind == "falsify")
      run_falsify(params, grid, seed, rep);
    else
      bad_config("unknown scenario kind '" + kind + "'");
  }

  const auto t1 = std::chrono::steady_clock::now();
  rep.elapsed_ms =
      std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0)
          .count();
  return rep;
}

// ---------------------------------------------------------------------------
// Witness revalidation: rebuild everything from the embedded specs and check
// that the recorded violation reproduces at half its stored magnitude.

bool revalidate_witness(const Json& w) {
  if (!w.is_object()) bad_config("witness must be an object");
  const std::string type = str_at(w, "type", "witness");

  if (type == "gram") {
    const Json& sspec = need(w, "symbol", "gram witness");
    const PointSet pts = points_from(need(w, "points", "gram witness"), "gram witness");
    const CVector c = cvec_from(need(w, "coefficients", "gram witness"), "gram witness");
    const int block = int_or(w, "block", 1);
    CMatrix M;
    if (block > 1)
      M = block_gram(matrix_symbol_from_json(sspec), pts);
    else
      M = gram(scalar_symbol_from_json(sspec), pts);
    if (M.rows() != c.size()) bad_config("gram witness: coefficient length mismatch");
    const double stored = num_at(w, "min_eigenvalue", "gram witness");
    const double n2 = c.squaredNorm();
    if (!(n2 > 0.0) || !(stored < 0.0)) return false;
    const double form = quadratic_form(M, c).real() / n2;
    return form <= 0.5 * stored;
  }

  if (type == "grid") {
    const MatrixSymbol F = matrix_symbol_from_json(need(w, "symbol", "grid witness"));
    const GridSpec g = grid_from_json(need(w, "grid", "grid witness"));
    const GridField f = field_from_json(need(w, "field", "grid witness"), g, F.m);
    const GridField out = apply_multiplier(F, f);
    const double stored = num_at(w, "min_real", "grid witness");
    if (!(stored < 0.0)) return false;
    return field_min_real(out) <= 0.5 * stored;
  }

  if (type == "point") {
    const Json& sspec = need(w, "symbol", "point witness");
    const RVector x = rvec_from(need(w, "x", "point witness"), "point witness");
    const std::string kind = str_at(w, "kind", "point witness");
    const double stored = num_at(w, "deviation", "point witness");
    if (!(stored > 0.0)) return false;
    const bool matrix = matrix_symbol_family(str_at(sspec, "family", "symbol spec"));
    double dev = 0.0;
    if (kind == failure_kind_name(FailureKind::SymmetryViolation)) {
      if (matrix) {
        const MatrixSymbol F = matrix_symbol_from_json(sspec);
        dev = max_abs_entry(F.eval(-x) - F.eval(x).adjoint());
      } else {
        const ScalarSymbol F = scalar_symbol_from_json(sspec);
        dev = std::abs(F.eval(-x) - std::conj(F.eval(x)));
      }
    } else if (kind == failure_kind_name(FailureKind::BoundViolation)) {
      const double ref = num_at(w, "reference", "point witness");
      if (matrix) {
        const MatrixSymbol F = matrix_symbol_from_json(sspec);
        dev = F.eval(x).operatorNorm() - ref;
      } else {
        const ScalarSymbol F = scalar_symbol_from_json(sspec);
        dev = std::abs(F.eval(x)) - ref;
      }
    } else {
      bad_config("point witness: unsupported kind '" + kind + "'");
    }
    return dev >= 0.5 * stored;
  }

  if (type == "kernel") {
    const ScalarSymbol G = scalar_symbol_from_json(need(w, "symbol", "kernel witness"));
    const GridSpec g = grid_from_json(need(w, "grid", "kernel witness"));
    const KernelReport kr = kernel_and_tv(G, g);
    const double stored = num_at(w, "min_real", "kernel witness");
    if (!(stored < 0.0)) return false;
    return field_min_real(kr.kernel) <= 0.5 * stored;
  }

  if (type == "error") {
    const std::string code = str_at(w, "code", "error witness");
    if (code != error_code_name(ErrorCode::UnboundedSymbol))
      bad_config("error witness: unsupported code '" + code + "'");
    const Json& sspec = need(w, "symbol", "error witness");
    if (matrix_symbol_family(str_at(sspec, "family", "symbol spec")))
      return !matrix_symbol_from_json(sspec).bounded;
    return !scalar_symbol_from_json(sspec).bounded;
  }

  bad_config("unknown witness type '" + type + "'");
}

}  // namespace fmpos
