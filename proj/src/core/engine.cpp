#include "engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "rng.hpp"

namespace fmpos {

namespace {

// Iterative radix-2 Cooley-Tukey with a per-call root table. Grid sizes are
// powers of two by construction (validate_grid), so no general-length
// machinery is needed.
void fft_inplace(std::vector<Complex>& a, int sign) {
  const size_t n = a.size();
  if (n <= 1) return;
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<Complex> roots(n / 2);
  const double base = sign * 2.0 * M_PI / static_cast<double>(n);
  for (size_t k = 0; k < n / 2; ++k)
    roots[k] = Complex(std::cos(base * k), std::sin(base * k));
  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t stride = n / len;
    for (size_t blk = 0; blk < n; blk += len) {
      for (size_t k = 0; k < len / 2; ++k) {
        const Complex w = roots[k * stride];
        const Complex u = a[blk + k];
        const Complex v = a[blk + k + len / 2] * w;
        a[blk + k] = u + v;
        a[blk + k + len / 2] = u - v;
      }
    }
  }
}

// FFT along every axis of a row-major cube with edge N.
void fft_axes(std::vector<Complex>& data, int dim, int N, int sign) {
  const long total = static_cast<long>(data.size());
  std::vector<Complex> line(N);
  for (int axis = 0; axis < dim; ++axis) {
    long stride = 1;
    for (int d = axis + 1; d < dim; ++d) stride *= N;
    const long lines = total / N;
    for (long l = 0; l < lines; ++l) {
      const long outer = l / stride;
      const long inner = l % stride;
      const long origin = outer * stride * N + inner;
      for (int j = 0; j < N; ++j) line[j] = data[origin + j * stride];
      fft_inplace(line, sign);
      for (int j = 0; j < N; ++j) data[origin + j * stride] = line[j];
    }
  }
}

// Parity of the multi-index sum. Centering both lattices at zero turns the
// DFT into the symmetric transform pair at the cost of these sign flips
// (e^{i pi j} factors); N/2 even makes the input and output flips identical.
int index_parity(const GridSpec& spec, long flat) {
  int parity = 0;
  for (int d = 0; d < spec.dim; ++d) {
    parity ^= static_cast<int>(flat % spec.samples) & 1;
    flat /= spec.samples;
  }
  return parity;
}

void apply_parity_signs(const GridSpec& spec, std::vector<Complex>& data) {
  for (long i = 0; i < static_cast<long>(data.size()); ++i)
    if (index_parity(spec, i)) data[i] = -data[i];
}

GridField transform_impl(const GridField& f, int sign, double scale) {
  validate_grid(f.spec);
  GridField out = f;
  for (auto& comp : out.data) {
    apply_parity_signs(out.spec, comp);
    fft_axes(comp, out.spec.dim, out.spec.samples, sign);
    apply_parity_signs(out.spec, comp);
    for (Complex& v : comp) v *= scale;
  }
  return out;
}

}  // namespace

GridField dft_forward(const GridField& f) {
  const double h = spacing(f.spec);
  const double scale =
      std::pow(2.0 * M_PI, -0.5 * f.spec.dim) * std::pow(h, f.spec.dim);
  return transform_impl(f, -1, scale);
}

GridField dft_inverse(const GridField& fhat) {
  const double dxi = freq_spacing(fhat.spec);
  const double scale =
      std::pow(2.0 * M_PI, -0.5 * fhat.spec.dim) * std::pow(dxi, fhat.spec.dim);
  return transform_impl(fhat, +1, scale);
}

GridField apply_multiplier(const MatrixSymbol& G, const GridField& f) {
  validate_grid(f.spec);
  require(G.dim == f.spec.dim, ErrorCode::DimensionMismatch,
          "apply_multiplier: symbol/grid dimension mismatch");
  require(G.m == f.components, ErrorCode::DimensionMismatch,
          "apply_multiplier: symbol order does not match component count");
  require(G.bounded && G.continuous, ErrorCode::UnboundedSymbol,
          "apply_multiplier: symbol must be bounded and continuous");

  GridField fhat = dft_forward(f);
  GridField ghat = zero_field(f.spec, f.components);
  const long total = total_points(f.spec);
  const int m = G.m;
  for (long i = 0; i < total; ++i) {
    const RVector xi = frequency_at(f.spec, i);
    const CMatrix M = G.eval(xi);
    for (int j = 0; j < m; ++j) {
      Complex acc(0.0, 0.0);
      for (int k = 0; k < m; ++k) acc += M(j, k) * fhat.data[k][i];
      ghat.data[j][i] = acc;
    }
  }
  return dft_inverse(ghat);
}

TrialVerdict positivity_trial(const MatrixSymbol& G, const GridField& f, double tol) {
  require(tol >= 0.0, ErrorCode::InvalidArgument, "positivity_trial: tol >= 0");
  TrialVerdict verdict;
  verdict.out = apply_multiplier(G, f);
  verdict.scale = field_max_abs(verdict.out);
  verdict.tolerance_abs = tol * verdict.scale;

  int comp = 0;
  long flat = 0;
  verdict.min_real = field_min_real(verdict.out, &comp, &flat);
  verdict.max_imag = field_max_imag_abs(verdict.out);
  const bool real_ok = verdict.min_real >= -verdict.tolerance_abs;
  const bool imag_ok = verdict.max_imag <= verdict.tolerance_abs;
  verdict.passed = real_ok && imag_ok;

  // Witness the most negative sample, or the worst imaginary leak when that
  // is the only failure mode.
  if (real_ok && !imag_ok) {
    double worst = -1.0;
    for (int c = 0; c < verdict.out.components; ++c)
      for (long i = 0; i < total_points(verdict.out.spec); ++i)
        if (std::abs(verdict.out.data[c][i].imag()) > worst) {
          worst = std::abs(verdict.out.data[c][i].imag());
          comp = c;
          flat = i;
        }
  }
  verdict.witness_component = comp;
  verdict.witness_x = point_at(verdict.out.spec, flat);
  verdict.witness_value = verdict.out.data[comp][flat];
  return verdict;
}

GridField convolve_atomic(const GridField& f, const AtomicMeasure& mu) {
  validate_grid(f.spec);
  validate_measure(mu);
  require(mu.dim == f.spec.dim, ErrorCode::DimensionMismatch,
          "convolve_atomic: measure/grid dimension mismatch");
  require(mu.m == 1 || mu.m == f.components, ErrorCode::DimensionMismatch,
          "convolve_atomic: measure order must be 1 or match components");
  const double half = 0.5 * f.spec.length;
  for (const auto& loc : mu.locations)
    for (int d = 0; d < mu.dim; ++d)
      require(loc(d) >= -half && loc(d) < half, ErrorCode::AtomOutOfBox,
              "convolve_atomic: atom outside the box");

  const double h = spacing(f.spec);
  const int N = f.spec.samples;
  const long total = total_points(f.spec);
  GridField out = zero_field(f.spec, f.components);

  // Separable shift with linear interpolation: for each axis, g(x) =
  // (1-frac) f(x - base*h) + frac f(x - (base+1)*h) realized on indices.
  std::vector<Complex> shifted(total), tmp(total);
  for (int atom = 0; atom < mu.atoms(); ++atom) {
    const RVector& y = mu.locations[atom];
    // Fractional lattice offsets per axis; snap near-integers so aligned
    // atoms are exact shifts rather than two-point interpolations.
    int base[3] = {0, 0, 0};
    double frac[3] = {0.0, 0.0, 0.0};
    for (int d = 0; d < mu.dim; ++d) {
      const double t = y(d) / h;
      double b = std::floor(t);
      double fr = t - b;
      if (std::abs(fr) < 1e-9) fr = 0.0;
      if (fr > 1.0 - 1e-9) {
        b += 1.0;
        fr = 0.0;
      }
      base[d] = static_cast<int>(b);
      frac[d] = fr;
    }

    for (int src = 0; src < f.components; ++src) {
      shifted = f.data[src];
      long stride = 1;
      for (int axis = f.spec.dim - 1; axis >= 0; --axis) {
        const int b = ((base[axis] % N) + N) % N;
        const double fr = frac[axis];
        const long lines = total / N;
        for (long l = 0; l < lines; ++l) {
          const long outer = l / stride;
          const long inner = l % stride;
          const long origin = outer * stride * N + inner;
          for (int j = 0; j < N; ++j) {
            const int j0 = (j - b + N) % N;
            if (fr == 0.0) {
              tmp[origin + j * stride] = shifted[origin + j0 * stride];
            } else {
              const int jm = (j0 - 1 + N) % N;
              tmp[origin + j * stride] = (1.0 - fr) * shifted[origin + j0 * stride] +
                                         fr * shifted[origin + jm * stride];
            }
          }
        }
        shifted.swap(tmp);
        stride *= N;
      }
      if (mu.m == 1) {
        const double w = mu.weights[atom](0, 0).real();
        for (long i = 0; i < total; ++i) out.data[src][i] += w * shifted[i];
      } else {
        for (int dst = 0; dst < f.components; ++dst) {
          const Complex w = mu.weights[atom](dst, src);
          if (w == Complex(0.0, 0.0)) continue;
          for (long i = 0; i < total; ++i) out.data[dst][i] += w * shifted[i];
        }
      }
    }
  }
  return out;
}

KernelReport kernel_and_tv(const ScalarSymbol& G, const GridSpec& spec) {
  validate_grid(spec);
  require(G.dim == spec.dim, ErrorCode::DimensionMismatch,
          "kernel_and_tv: symbol/grid dimension mismatch");
  require(G.bounded && G.continuous, ErrorCode::UnboundedSymbol,
          "kernel_and_tv: symbol must be bounded and continuous");
  GridField ghat = zero_field(spec, 1);
  const long total = total_points(spec);
  for (long i = 0; i < total; ++i) ghat.data[0][i] = G.eval(frequency_at(spec, i));
  KernelReport report;
  report.kernel = dft_inverse(ghat);
  const double cell = std::pow(spacing(spec), spec.dim);
  double acc = 0.0;
  for (const Complex& v : report.kernel.data[0]) acc += std::abs(v);
  report.tv = cell * acc;
  report.mass = std::pow(2.0 * M_PI, -0.5 * spec.dim) * report.tv;
  return report;
}

MultiplierNormReport l2_norm_bound(const MatrixSymbol& G, const GridSpec& spec,
                                   uint64_t seed, int batch) {
  validate_grid(spec);
  require(batch >= 1, ErrorCode::InvalidArgument, "l2_norm_bound: batch >= 1");
  require(G.dim == spec.dim, ErrorCode::DimensionMismatch,
          "l2_norm_bound: symbol/grid dimension mismatch");
  require(G.bounded && G.continuous, ErrorCode::UnboundedSymbol,
          "l2_norm_bound: symbol must be bounded and continuous");

  MultiplierNormReport report;
  const long total = total_points(spec);
  for (long i = 0; i < total; ++i) {
    const CMatrix M = G.eval(frequency_at(spec, i));
    report.sup_symbol = std::max(report.sup_symbol, M.operatorNorm());
  }
  for (int j = 0; j < G.m; ++j)
    for (int k = 0; k < G.m; ++k) {
      const KernelReport kr = kernel_and_tv(entry_symbol(G, j, k), spec);
      report.tv_estimate = std::max(report.tv_estimate, kr.tv);
      report.kernel_mass = std::max(report.kernel_mass, kr.mass);
    }

  for (int trial = 0; trial < batch; ++trial) {
    Rng rng = Rng::substream(seed, static_cast<uint64_t>(trial));
    GridField f = zero_field(spec, G.m);
    for (auto& comp : f.data)
      for (Complex& v : comp) v = Complex(rng.normal(), rng.normal());
    const double denom = hilbert_norm(f);
    if (denom == 0.0) continue;
    const GridField out = apply_multiplier(G, f);
    report.parseval_ratio = std::max(report.parseval_ratio, hilbert_norm(out) / denom);
  }
  return report;
}

double lp_vector_norm(const GridField& f, double p) {
  require(p >= 1.0 && std::isfinite(p), ErrorCode::InvalidArgument,
          "lp_vector_norm: p must be finite and >= 1");
  const double cell = std::pow(spacing(f.spec), f.spec.dim);
  double total = 0.0;
  for (const auto& comp : f.data) {
    double acc = 0.0;
    for (const Complex& v : comp) acc += std::pow(std::abs(v), p);
    total += std::pow(cell * acc, 1.0 / p);
  }
  return total;
}

double hilbert_norm(const GridField& f) {
  const double cell = std::pow(spacing(f.spec), f.spec.dim);
  double acc = 0.0;
  for (const auto& comp : f.data)
    for (const Complex& v : comp) acc += std::norm(v);
  return std::sqrt(cell * acc);
}

double dual_hilbert_norm(const GridField& fhat) {
  const double cell = std::pow(freq_spacing(fhat.spec), fhat.spec.dim);
  double acc = 0.0;
  for (const auto& comp : fhat.data)
    for (const Complex& v : comp) acc += std::norm(v);
  return std::sqrt(cell * acc);
}

namespace {

// Serialization assumes a little-endian host with IEEE f64, which covers
// every platform this builds on; the magic would still catch mixups.
void put_u32(std::ofstream& out, uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ofstream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

uint32_t get_u32(std::ifstream& in) {
  uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

double get_f64(std::ifstream& in) {
  double v = 0.0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

void write_field_mplb(const GridField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::Io,
          "write_field_mplb: cannot open " + path);
  out.write("MPLB", 4);
  put_u32(out, 1u);
  put_u32(out, static_cast<uint32_t>(f.spec.dim));
  put_u32(out, static_cast<uint32_t>(f.components));
  put_u32(out, static_cast<uint32_t>(f.spec.samples));
  put_f64(out, f.spec.length);
  for (const auto& comp : f.data)
    for (const Complex& v : comp) {
      put_f64(out, v.real());
      put_f64(out, v.imag());
    }
  require(out.good(), ErrorCode::Io, "write_field_mplb: short write to " + path);
}

GridField read_field_mplb(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::Io,
          "read_field_mplb: cannot open " + path);
  char magic[4] = {0, 0, 0, 0};
  in.read(magic, 4);
  require(in.good() && std::string(magic, 4) == "MPLB", ErrorCode::Io,
          "read_field_mplb: bad magic in " + path);
  const uint32_t version = get_u32(in);
  require(version == 1u, ErrorCode::Io,
          "read_field_mplb: unsupported container version");
  GridSpec spec;
  spec.dim = static_cast<int>(get_u32(in));
  const int components = static_cast<int>(get_u32(in));
  spec.samples = static_cast<int>(get_u32(in));
  spec.length = get_f64(in);
  require(in.good(), ErrorCode::Io, "read_field_mplb: truncated header");
  validate_grid(spec);
  require(components >= 1, ErrorCode::Io, "read_field_mplb: bad component count");
  GridField f = zero_field(spec, components);
  for (auto& comp : f.data)
    for (Complex& v : comp) {
      const double re = get_f64(in);
      const double im = get_f64(in);
      v = Complex(re, im);
    }
  require(in.good(), ErrorCode::Io, "read_field_mplb: truncated payload");
  return f;
}

std::string field_csv_slice(const GridField& f) {
  std::ostringstream out;
  out << "x";
  for (int c = 0; c < f.components; ++c) out << ",re" << c << ",im" << c;
  out << '\n';
  std::vector<int> idx(static_cast<size_t>(f.spec.dim), f.spec.samples / 2);
  out.setf(std::ios::scientific);
  out.precision(17);
  for (int i = 0; i < f.spec.samples; ++i) {
    idx[0] = i;
    const long flat = flatten(f.spec, idx.data());
    out << coordinate(f.spec, i);
    for (int c = 0; c < f.components; ++c) {
      const Complex v = f.data[c][static_cast<size_t>(flat)];
      out << ',' << v.real() << ',' << v.imag();
    }
    out << '\n';
  }
  return out.str();
}

void write_field_csv(const GridField& f, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::Io,
          "write_field_csv: cannot open " + path);
  out << field_csv_slice(f);
  require(out.good(), ErrorCode::Io, "write_field_csv: short write to " + path);
}

}  // namespace fmpos
