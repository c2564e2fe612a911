#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "types.hpp"

namespace fmpos {

// Uniform periodic sampling lattice: `samples` points per axis on the box
// [-length/2, length/2)^dim, dim <= 3, samples a power of two >= 8. The dual
// lattice carries frequencies 2*pi*k/length, k = -samples/2 .. samples/2 - 1,
// stored in ascending order.
struct GridSpec {
  int dim = 1;
  int samples = 8;
  double length = 1.0;
};

void validate_grid(const GridSpec& spec);

inline double spacing(const GridSpec& s) { return s.length / s.samples; }
inline double freq_spacing(const GridSpec& s) { return 2.0 * M_PI / s.length; }

long total_points(const GridSpec& spec);

// Axis coordinate of index i: -L/2 + i*h. Frequency of slot s:
// (s - N/2) * 2*pi/L.
inline double coordinate(const GridSpec& s, int i) {
  return -0.5 * s.length + i * spacing(s);
}
inline double frequency(const GridSpec& s, int slot) {
  return (slot - s.samples / 2) * freq_spacing(s);
}

void unflatten(const GridSpec& spec, long flat, int* idx);
long flatten(const GridSpec& spec, const int* idx);

RVector point_at(const GridSpec& spec, long flat);      // spatial coordinates
RVector frequency_at(const GridSpec& spec, long flat);  // dual coordinates

// Complex multi-component samples on a grid; data[c] is the row-major flat
// array of component c. A field does not know whether it lives in space or
// frequency; the transform ops document which convention they expect.
struct GridField {
  GridSpec spec;
  int components = 1;
  std::vector<std::vector<Complex>> data;
};

GridField zero_field(const GridSpec& spec, int components);

double field_max_abs(const GridField& f);
double field_min_real(const GridField& f, int* component = nullptr,
                      long* flat = nullptr);
double field_max_imag_abs(const GridField& f);

// Flat binary container. Layout: magic "MPLB", u32 version, u32 dim, u32
// components, u32 samples, f64 length, then per component the row-major
// values as little-endian f64 pairs (re, im).
void write_field(const GridField& f, const std::string& path);
GridField read_field(const std::string& path);

// 1-D slice as CSV with header x,re_0,im_0,...: the full line for dim = 1,
// the axis-0 line through the box center otherwise.
void export_csv_slice(const GridField& f, const std::string& path);

}  // namespace fmpos
