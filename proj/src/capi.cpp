#include "fmpos/fmpos.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "core/scenario.hpp"

using namespace fmpos;

extern "C" {

struct fmpos_symbol {
  Json spec;
  bool matrix = false;
  ScalarSymbol scalar;  // populated when !matrix
  MatrixSymbol mat;     // always populated; scalars are wrapped with m = 1
};

struct fmpos_field {
  GridField f;
};

struct fmpos_report {
  Report r;
};

}  // extern "C"

namespace {

thread_local std::string g_last_error;

fmpos_status map_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return FMPOS_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return FMPOS_ERR_DIMENSION_MISMATCH;
    case ErrorCode::NonHermitian: return FMPOS_ERR_NON_HERMITIAN;
    case ErrorCode::NonFinite: return FMPOS_ERR_NON_FINITE;
    case ErrorCode::NegativeWeight: return FMPOS_ERR_NEGATIVE_WEIGHT;
    case ErrorCode::NonPsdWeight: return FMPOS_ERR_NON_PSD_WEIGHT;
    case ErrorCode::AtomAtOrigin: return FMPOS_ERR_ATOM_AT_ORIGIN;
    case ErrorCode::AtomOutOfBox: return FMPOS_ERR_ATOM_OUT_OF_BOX;
    case ErrorCode::UnderResolved: return FMPOS_ERR_UNDER_RESOLVED;
    case ErrorCode::UnboundedSymbol: return FMPOS_ERR_UNBOUNDED_SYMBOL;
    case ErrorCode::QuadratureFailure: return FMPOS_ERR_QUADRATURE_FAILURE;
    case ErrorCode::ConfigInvalid: return FMPOS_ERR_CONFIG_INVALID;
    case ErrorCode::Io: return FMPOS_ERR_IO;
    case ErrorCode::Internal: return FMPOS_ERR_INTERNAL;
  }
  return FMPOS_ERR_INTERNAL;
}

template <class Fn>
fmpos_status guarded(Fn&& fn) {
  try {
    fn();
    return FMPOS_OK;
  } catch (const ToolkitError& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FMPOS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return FMPOS_ERR_INTERNAL;
  }
}

fmpos_status arg_error(const char* what) {
  g_last_error = what;
  return FMPOS_ERR_INVALID_ARGUMENT;
}

fmpos_status handle_error(const char* what) {
  g_last_error = what;
  return FMPOS_ERR_BAD_HANDLE;
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  require(p != nullptr, ErrorCode::Internal, "out of memory");
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

Json parse_json(const char* text, const char* who) {
  require(text != nullptr, ErrorCode::ConfigInvalid,
          std::string(who) + ": null JSON text");
  try {
    return Json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::ConfigInvalid, std::string(who) + ": " + e.what());
  }
}

Json rvec_json(const RVector& x) {
  Json a = Json::array();
  for (int i = 0; i < x.size(); ++i) a.push_back(x[i]);
  return a;
}

Json verdict_to_json(const PsdVerdict& v) {
  Json w{{"passed", v.passed},
         {"kind", failure_kind_name(v.kind)},
         {"min_eigenvalue", v.min_eigenvalue},
         {"tolerance", v.tolerance},
         {"detail", v.detail}};
  if (!v.points.points.empty()) {
    Json pts = Json::array();
    for (const auto& p : v.points.points) pts.push_back(rvec_json(p));
    w["points"] = pts;
    Json cs = Json::array();
    for (int i = 0; i < v.coefficients.size(); ++i)
      cs.push_back(Json::array(
          {v.coefficients[i].real(), v.coefficients[i].imag()}));
    w["coefficients"] = cs;
  }
  if (v.kind == FailureKind::SymmetryViolation ||
      v.kind == FailureKind::BoundViolation) {
    w["x"] = rvec_json(v.point);
    w["magnitude"] = v.witness_value;
    w["reference"] = v.witness_reference;
  }
  return w;
}

Json trial_to_json(const TrialVerdict& t) {
  return Json{{"passed", t.passed},
              {"min_real", t.min_real},
              {"max_imag", t.max_imag},
              {"scale", t.scale},
              {"tolerance_abs", t.tolerance_abs},
              {"component", t.witness_component},
              {"x", rvec_json(t.witness_x)},
              {"value", Json::array({t.witness_value.real(),
                                     t.witness_value.imag()})}};
}

GridSpec grid_of(int dim, int samples, double length) {
  GridSpec g;
  g.dim = dim;
  g.samples = samples;
  g.length = length;
  validate_grid(g);
  return g;
}

}  // namespace

extern "C" {

const char* fmpos_version(void) { return toolkit_version(); }

const char* fmpos_last_error(void) { return g_last_error.c_str(); }

void fmpos_string_free(char* s) { std::free(s); }

fmpos_status fmpos_symbol_create(const char* spec_json, fmpos_symbol** out) {
  if (!out) return arg_error("fmpos_symbol_create: out is null");
  *out = nullptr;
  return guarded([&] {
    const Json spec = parse_json(spec_json, "symbol spec");
    require(spec.is_object() && spec.contains("family") &&
                spec.at("family").is_string(),
            ErrorCode::ConfigInvalid, "symbol spec: missing family");
    auto s = std::make_unique<fmpos_symbol>();
    s->spec = spec;
    s->matrix = matrix_symbol_family(spec.at("family").get<std::string>());
    if (s->matrix) {
      s->mat = matrix_symbol_from_json(spec);
    } else {
      s->scalar = scalar_symbol_from_json(spec);
      s->mat = matrix_from_scalar(s->scalar);
    }
    *out = s.release();
  });
}

fmpos_status fmpos_symbol_info(const fmpos_symbol* s, int* dim, int* m,
                               int* bounded) {
  if (!s) return handle_error("fmpos_symbol_info: null symbol");
  if (dim) *dim = s->mat.dim;
  if (m) *m = s->mat.m;
  if (bounded) *bounded = s->mat.bounded ? 1 : 0;
  return FMPOS_OK;
}

fmpos_status fmpos_symbol_eval(const fmpos_symbol* s, const double* x, int dim,
                               double* re, double* im) {
  if (!s) return handle_error("fmpos_symbol_eval: null symbol");
  if (!x || !re) return arg_error("fmpos_symbol_eval: x and re are required");
  return guarded([&] {
    require(dim == s->mat.dim, ErrorCode::DimensionMismatch,
            "fmpos_symbol_eval: point dimension mismatch");
    RVector xv(dim);
    for (int i = 0; i < dim; ++i) xv[i] = x[i];
    const CMatrix V = s->mat.eval(xv);
    for (int r = 0; r < s->mat.m; ++r)
      for (int c = 0; c < s->mat.m; ++c) {
        re[r * s->mat.m + c] = V(r, c).real();
        if (im) im[r * s->mat.m + c] = V(r, c).imag();
      }
  });
}

void fmpos_symbol_destroy(fmpos_symbol* s) { delete s; }

static fmpos_status run_psd_test(const fmpos_symbol* s, const char* plan_json,
                                 int* passed, char** verdict_json,
                                 bool conditional) {
  if (!s) return handle_error("positivity test: null symbol");
  if (!passed) return arg_error("positivity test: passed is required");
  return guarded([&] {
    const Json pj = plan_json ? parse_json(plan_json, "sampling plan") : Json();
    const SamplingPlan plan = plan_from_json(pj, 1);
    PsdVerdict v;
    if (conditional) {
      require(!s->matrix, ErrorCode::InvalidArgument,
              "fmpos_test_cpsd: requires a scalar symbol");
      v = test_cpsd_function(s->scalar, plan);
    } else {
      v = s->matrix ? test_psd_function(s->mat, plan)
                    : test_psd_function(s->scalar, plan);
    }
    *passed = v.passed ? 1 : 0;
    if (verdict_json) *verdict_json = dup_string(verdict_to_json(v).dump());
  });
}

fmpos_status fmpos_test_psd(const fmpos_symbol* s, const char* plan_json,
                            int* passed, char** verdict_json) {
  return run_psd_test(s, plan_json, passed, verdict_json, false);
}

fmpos_status fmpos_test_cpsd(const fmpos_symbol* s, const char* plan_json,
                             int* passed, char** verdict_json) {
  return run_psd_test(s, plan_json, passed, verdict_json, true);
}

fmpos_status fmpos_field_create(int dim, int samples, double length,
                                int components, fmpos_field** out) {
  if (!out) return arg_error("fmpos_field_create: out is null");
  *out = nullptr;
  return guarded([&] {
    require(components >= 1, ErrorCode::InvalidArgument,
            "fmpos_field_create: components must be >= 1");
    *out = new fmpos_field{zero_field(grid_of(dim, samples, length), components)};
  });
}

fmpos_status fmpos_field_create_from_spec(const char* field_json, int dim,
                                          int samples, double length,
                                          int components, fmpos_field** out) {
  if (!out) return arg_error("fmpos_field_create_from_spec: out is null");
  *out = nullptr;
  return guarded([&] {
    require(components >= 1, ErrorCode::InvalidArgument,
            "fmpos_field_create_from_spec: components must be >= 1");
    const Json spec = parse_json(field_json, "field spec");
    *out = new fmpos_field{
        field_from_json(spec, grid_of(dim, samples, length), components)};
  });
}

fmpos_status fmpos_field_size(const fmpos_field* f, long* points,
                              int* components) {
  if (!f) return handle_error("fmpos_field_size: null field");
  if (points) *points = total_points(f->f.spec);
  if (components) *components = f->f.components;
  return FMPOS_OK;
}

fmpos_status fmpos_field_read(const fmpos_field* f, int component, double* re,
                              double* im) {
  if (!f) return handle_error("fmpos_field_read: null field");
  if (!re) return arg_error("fmpos_field_read: re is required");
  if (component < 0 || component >= f->f.components)
    return arg_error("fmpos_field_read: component out of range");
  const auto& data = f->f.data[static_cast<size_t>(component)];
  for (size_t i = 0; i < data.size(); ++i) {
    re[i] = data[i].real();
    if (im) im[i] = data[i].imag();
  }
  return FMPOS_OK;
}

fmpos_status fmpos_field_write(fmpos_field* f, int component, const double* re,
                               const double* im) {
  if (!f) return handle_error("fmpos_field_write: null field");
  if (!re) return arg_error("fmpos_field_write: re is required");
  if (component < 0 || component >= f->f.components)
    return arg_error("fmpos_field_write: component out of range");
  auto& data = f->f.data[static_cast<size_t>(component)];
  for (size_t i = 0; i < data.size(); ++i)
    data[i] = Complex(re[i], im ? im[i] : 0.0);
  return FMPOS_OK;
}

fmpos_status fmpos_field_save(const fmpos_field* f, const char* path) {
  if (!f) return handle_error("fmpos_field_save: null field");
  if (!path) return arg_error("fmpos_field_save: path is null");
  return guarded([&] { write_field_mplb(f->f, path); });
}

fmpos_status fmpos_field_load(const char* path, fmpos_field** out) {
  if (!out) return arg_error("fmpos_field_load: out is null");
  *out = nullptr;
  if (!path) return arg_error("fmpos_field_load: path is null");
  return guarded([&] { *out = new fmpos_field{read_field_mplb(path)}; });
}

fmpos_status fmpos_field_csv(const fmpos_field* f, char** csv) {
  if (!f) return handle_error("fmpos_field_csv: null field");
  if (!csv) return arg_error("fmpos_field_csv: csv is null");
  *csv = nullptr;
  return guarded([&] { *csv = dup_string(field_csv_slice(f->f)); });
}

void fmpos_field_destroy(fmpos_field* f) { delete f; }

fmpos_status fmpos_apply(const fmpos_symbol* s, const fmpos_field* in,
                         fmpos_field** out) {
  if (!s || !in) return handle_error("fmpos_apply: null symbol or field");
  if (!out) return arg_error("fmpos_apply: out is null");
  *out = nullptr;
  return guarded([&] { *out = new fmpos_field{apply_multiplier(s->mat, in->f)}; });
}

fmpos_status fmpos_positivity_trial(const fmpos_symbol* s,
                                    const fmpos_field* in, double tol,
                                    int* passed, char** verdict_json) {
  if (!s || !in) return handle_error("fmpos_positivity_trial: null symbol or field");
  if (!passed) return arg_error("fmpos_positivity_trial: passed is required");
  return guarded([&] {
    const TrialVerdict t = positivity_trial(s->mat, in->f, tol);
    *passed = t.passed ? 1 : 0;
    if (verdict_json) *verdict_json = dup_string(trial_to_json(t).dump());
  });
}

fmpos_status fmpos_norm_report(const fmpos_symbol* s, int dim, int samples,
                               double length, uint64_t seed, int batch,
                               char** report_json) {
  if (!s) return handle_error("fmpos_norm_report: null symbol");
  if (!report_json) return arg_error("fmpos_norm_report: report_json is null");
  *report_json = nullptr;
  return guarded([&] {
    const GridSpec g = grid_of(dim, samples, length);
    const MultiplierNormReport r =
        l2_norm_bound(s->mat, g, seed, batch > 0 ? batch : 50);
    const Json j{{"tv_estimate", r.tv_estimate},
                 {"kernel_mass", r.kernel_mass},
                 {"sup_symbol", r.sup_symbol},
                 {"parseval_ratio", r.parseval_ratio}};
    *report_json = dup_string(j.dump());
  });
}

fmpos_status fmpos_scenario_run(const char* config_json, fmpos_report** out) {
  if (!out) return arg_error("fmpos_scenario_run: out is null");
  *out = nullptr;
  return guarded([&] {
    const Json cfg = parse_json(config_json, "scenario config");
    *out = new fmpos_report{run_scenario(cfg)};
  });
}

fmpos_status fmpos_report_passed(const fmpos_report* r, int* passed) {
  if (!r) return handle_error("fmpos_report_passed: null report");
  if (!passed) return arg_error("fmpos_report_passed: passed is null");
  *passed = r->r.passed() ? 1 : 0;
  return FMPOS_OK;
}

fmpos_status fmpos_report_json(const fmpos_report* r, char** json) {
  if (!r) return handle_error("fmpos_report_json: null report");
  if (!json) return arg_error("fmpos_report_json: json is null");
  *json = nullptr;
  return guarded([&] { *json = dup_string(r->r.to_json().dump(2)); });
}

fmpos_status fmpos_report_csv(const fmpos_report* r, char** csv) {
  if (!r) return handle_error("fmpos_report_csv: null report");
  if (!csv) return arg_error("fmpos_report_csv: csv is null");
  *csv = nullptr;
  return guarded([&] { *csv = dup_string(r->r.to_csv()); });
}

void fmpos_report_destroy(fmpos_report* r) { delete r; }

}  // extern "C"
