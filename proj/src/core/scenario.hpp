#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "engine.hpp"
#include "mollifier.hpp"
#include "psd.hpp"
#include "synth.hpp"
#include "types.hpp"

namespace fmpos {

// Ordered so report payloads are byte-stable across runs.
using Json = nlohmann::ordered_json;

const char* toolkit_version();

// One named measurement inside a scenario. `value` is the headline number
// (worst margin, max deviation), `tolerance` the threshold it was held to.
// `series` optionally keeps per-trial values for CSV export; `witness` is a
// self-contained JSON record that revalidate_witness can re-execute.
struct CheckRecord {
  std::string name;
  bool passed = true;
  double value = 0.0;
  double tolerance = 0.0;
  Json witness;
  std::vector<double> series;
};

struct Report {
  std::string scenario;
  uint64_t seed = 0;
  Json grid;    // null when the scenario never touches a grid
  Json config;  // resolved config echo: reruns need nothing else
  std::vector<CheckRecord> checks;
  double elapsed_ms = 0.0;

  bool passed() const;
  // Deterministic for a fixed config and seed except for elapsed_ms.
  Json to_json() const;
  std::string to_csv() const;
};

void write_report_json(const Report& r, const std::string& path);
void write_report_csv(const Report& r, const std::string& path);

// Config ingestion. Symbols, measures, grids, and sampling plans are plain
// JSON so configs stay portable; unknown families or malformed shapes throw
// ConfigInvalid.
GridSpec grid_from_json(const Json& j);
Json grid_to_json(const GridSpec& spec);
SamplingPlan plan_from_json(const Json& j, uint64_t default_seed);
AtomicMeasure measure_from_json(const Json& j);
Json measure_to_json(const AtomicMeasure& mu);
LKParams lk_from_json(const Json& j);
ScalarSymbol scalar_symbol_from_json(const Json& j);
MatrixSymbol matrix_symbol_from_json(const Json& j);
bool matrix_symbol_family(const std::string& family);

// Nonnegative test fields: {"kind":"bump-mixture","count":k,"seed":s},
// {"kind":"basis","eps":e,"slot":j}, or {"kind":"constant","value":v}.
GridField field_from_json(const Json& j, const GridSpec& grid, int components);

std::vector<std::string> scenario_kinds();
Json default_scenario_config(const std::string& kind);

// Runs one scenario config to a report. The config must carry version, kind,
// and seed; params are kind-specific and validated on entry.
Report run_scenario(const Json& config);

// Re-executes a failure witness standalone: returns true when the recorded
// violation reproduces (Gram eigenvalue still negative, grid minimum still
// below threshold, point deviation still present).
bool revalidate_witness(const Json& witness);

}  // namespace fmpos
