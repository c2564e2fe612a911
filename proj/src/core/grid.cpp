#include "grid.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

namespace fmpos {

namespace {

constexpr char kMagic[4] = {'M', 'P', 'L', 'B'};
constexpr uint32_t kVersion = 1;

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

// The container is defined little-endian; this implementation targets
// little-endian hosts and refuses to guess elsewhere.
static_assert(std::endian::native == std::endian::little,
              "field container I/O assumes a little-endian host");

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void validate_grid(const GridSpec& spec) {
  require(spec.dim >= 1 && spec.dim <= 3, ErrorCode::InvalidArgument,
          "grid: dim must be 1, 2, or 3");
  require(spec.samples >= 8 && is_power_of_two(spec.samples),
          ErrorCode::InvalidArgument, "grid: samples must be a power of two >= 8");
  require(std::isfinite(spec.length) && spec.length > 0.0, ErrorCode::InvalidArgument,
          "grid: length must be positive");
}

long total_points(const GridSpec& spec) {
  long t = 1;
  for (int d = 0; d < spec.dim; ++d) t *= spec.samples;
  return t;
}

void unflatten(const GridSpec& spec, long flat, int* idx) {
  for (int d = spec.dim - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % spec.samples);
    flat /= spec.samples;
  }
}

long flatten(const GridSpec& spec, const int* idx) {
  long flat = 0;
  for (int d = 0; d < spec.dim; ++d) flat = flat * spec.samples + idx[d];
  return flat;
}

RVector point_at(const GridSpec& spec, long flat) {
  int idx[3] = {0, 0, 0};
  unflatten(spec, flat, idx);
  RVector x(spec.dim);
  for (int d = 0; d < spec.dim; ++d) x(d) = coordinate(spec, idx[d]);
  return x;
}

RVector frequency_at(const GridSpec& spec, long flat) {
  int idx[3] = {0, 0, 0};
  unflatten(spec, flat, idx);
  RVector xi(spec.dim);
  for (int d = 0; d < spec.dim; ++d) xi(d) = frequency(spec, idx[d]);
  return xi;
}

GridField zero_field(const GridSpec& spec, int components) {
  validate_grid(spec);
  require(components >= 1, ErrorCode::InvalidArgument,
          "field: components must be >= 1");
  GridField f;
  f.spec = spec;
  f.components = components;
  f.data.assign(components, std::vector<Complex>(total_points(spec), Complex(0, 0)));
  return f;
}

double field_max_abs(const GridField& f) {
  double m = 0.0;
  for (const auto& comp : f.data)
    for (const Complex& v : comp) m = std::max(m, std::abs(v));
  return m;
}

double field_min_real(const GridField& f, int* component, long* flat) {
  double m = std::numeric_limits<double>::infinity();
  for (int c = 0; c < f.components; ++c)
    for (long i = 0; i < static_cast<long>(f.data[c].size()); ++i)
      if (f.data[c][i].real() < m) {
        m = f.data[c][i].real();
        if (component) *component = c;
        if (flat) *flat = i;
      }
  return m;
}

double field_max_imag_abs(const GridField& f) {
  double m = 0.0;
  for (const auto& comp : f.data)
    for (const Complex& v : comp) m = std::max(m, std::abs(v.imag()));
  return m;
}

void write_field(const GridField& f, const std::string& path) {
  validate_grid(f.spec);
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::Io, "write_field: cannot open " + path);
  out.write(kMagic, 4);
  put<uint32_t>(out, kVersion);
  put<uint32_t>(out, static_cast<uint32_t>(f.spec.dim));
  put<uint32_t>(out, static_cast<uint32_t>(f.components));
  put<uint32_t>(out, static_cast<uint32_t>(f.spec.samples));
  put<double>(out, f.spec.length);
  for (const auto& comp : f.data)
    for (const Complex& v : comp) {
      put<double>(out, v.real());
      put<double>(out, v.imag());
    }
  require(out.good(), ErrorCode::Io, "write_field: write failed for " + path);
}

GridField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::Io, "read_field: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  require(in.good() && std::memcmp(magic, kMagic, 4) == 0, ErrorCode::ConfigInvalid,
          "read_field: bad magic in " + path);
  const uint32_t version = get<uint32_t>(in);
  require(version == kVersion, ErrorCode::ConfigInvalid,
          "read_field: unsupported container version " + std::to_string(version));
  GridSpec spec;
  spec.dim = static_cast<int>(get<uint32_t>(in));
  const int components = static_cast<int>(get<uint32_t>(in));
  spec.samples = static_cast<int>(get<uint32_t>(in));
  spec.length = get<double>(in);
  require(in.good(), ErrorCode::ConfigInvalid, "read_field: truncated header");
  validate_grid(spec);
  require(components >= 1 && components <= 64, ErrorCode::ConfigInvalid,
          "read_field: implausible component count");
  GridField f = zero_field(spec, components);
  for (auto& comp : f.data)
    for (Complex& v : comp) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      v = Complex(re, im);
    }
  require(in.good(), ErrorCode::ConfigInvalid, "read_field: truncated payload");
  return f;
}

void export_csv_slice(const GridField& f, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::Io, "export_csv_slice: cannot open " + path);
  out << "x";
  for (int c = 0; c < f.components; ++c) out << ",re_" << c << ",im_" << c;
  out << "\n";
  out.precision(17);
  const int N = f.spec.samples;
  int idx[3] = {0, 0, 0};
  for (int d = 1; d < f.spec.dim; ++d) idx[d] = N / 2;
  for (int i = 0; i < N; ++i) {
    idx[0] = i;
    const long flat = flatten(f.spec, idx);
    out << coordinate(f.spec, i);
    for (int c = 0; c < f.components; ++c)
      out << "," << f.data[c][flat].real() << "," << f.data[c][flat].imag();
    out << "\n";
  }
  require(out.good(), ErrorCode::Io, "export_csv_slice: write failed");
}

}  // namespace fmpos
