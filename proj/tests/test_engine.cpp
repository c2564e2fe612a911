#include <doctest.h>

#include "core/engine.hpp"
#include "core/rng.hpp"
#include "core/symbol.hpp"
#include "core/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

using namespace fmpos;

namespace {

RVector vec1(double v) {
  RVector x(1);
  x << v;
  return x;
}

constexpr double kSqrt2Pi = 2.5066282746310002;

GridField random_field(const GridSpec& spec, int components, uint64_t seed) {
  Rng rng(seed);
  GridField f = zero_field(spec, components);
  for (auto& comp : f.data)
    for (Complex& v : comp) v = Complex(rng.normal(), rng.normal());
  return f;
}

GridField sample_scalar(const GridSpec& spec,
                        const std::function<Complex(const RVector&)>& fn) {
  GridField f = zero_field(spec, 1);
  for (long i = 0; i < total_points(spec); ++i) f.data[0][i] = fn(point_at(spec, i));
  return f;
}

double max_dev(const GridField& a, const GridField& b) {
  double m = 0.0;
  for (int c = 0; c < a.components; ++c)
    for (long i = 0; i < total_points(a.spec); ++i)
      m = std::max(m, std::abs(a.data[c][i] - b.data[c][i]));
  return m;
}

ScalarSymbol phase_shift_symbol(double v) {
  ScalarSymbol s;
  s.dim = 1;
  s.continuous = true;
  s.bounded = true;
  s.sup_bound = 1.0;
  s.provenance = "test-shift";
  s.eval = [v](const RVector& xi) {
    return std::exp(Complex(0.0, -xi(0) * v));
  };
  return s;
}

}  // namespace

TEST_CASE("transform roundtrip is the identity") {
  for (int dim : {1, 2}) {
    GridSpec spec;
    spec.dim = dim;
    spec.samples = dim == 1 ? 256 : 32;
    spec.length = 10.0;
    GridField f = random_field(spec, 2, 17);
    GridField back = dft_inverse(dft_forward(f));
    CHECK(max_dev(f, back) < 1e-12 * field_max_abs(f));
  }
}

TEST_CASE("transform is unitary in the hilbert norm") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 128;
  spec.length = 6.0;
  GridField f = random_field(spec, 1, 3);
  GridField fhat = dft_forward(f);
  CHECK(dual_hilbert_norm(fhat) ==
        doctest::Approx(hilbert_norm(f)).epsilon(1e-12));
}

TEST_CASE("gaussian is self dual under the transform") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 1024;
  spec.length = 40.0;
  GridField f = sample_scalar(spec, [](const RVector& x) {
    return Complex(std::exp(-0.5 * x(0) * x(0)), 0.0);
  });
  GridField fhat = dft_forward(f);
  double worst = 0.0;
  for (long i = 0; i < total_points(spec); ++i) {
    const double xi = frequency_at(spec, i)(0);
    worst = std::max(worst,
                     std::abs(fhat.data[0][i] - Complex(std::exp(-0.5 * xi * xi), 0.0)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("transform of the constant field concentrates at zero frequency") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 1024;
  spec.length = 40.0;
  GridField f = sample_scalar(spec, [](const RVector&) { return Complex(1.0, 0.0); });
  GridField fhat = dft_forward(f);
  const long zero_slot = spec.samples / 2;
  // (2pi)^{-1/2} * h * N = (2pi)^{-1/2} * L
  CHECK(fhat.data[0][zero_slot].real() ==
        doctest::Approx(40.0 / kSqrt2Pi).epsilon(1e-12));
  double off = 0.0;
  for (long i = 0; i < total_points(spec); ++i)
    if (i != zero_slot) off = std::max(off, std::abs(fhat.data[0][i]));
  CHECK(off < 1e-10);
}

TEST_CASE("identity multiplier returns the field") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 256;
  spec.length = 12.0;
  GridField f = random_field(spec, 2, 5);
  GridField out = apply_multiplier(identity_symbol(1, 2), f);
  CHECK(max_dev(f, out) < 1e-12 * field_max_abs(f));
}

TEST_CASE("lattice-aligned phase shift is an exact circular shift") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 1024;
  spec.length = 40.0;  // h = 0.0390625, 1.25 = 32 h
  const double v = 1.25;
  GridField f = random_field(spec, 1, 11);
  GridField out =
      apply_multiplier(matrix_from_scalar(phase_shift_symbol(v)), f);
  const int shift = 32;
  const int N = spec.samples;
  double worst = 0.0;
  for (int j = 0; j < N; ++j) {
    const Complex want = f.data[0][(j - shift + N) % N];
    worst = std::max(worst, std::abs(out.data[0][j] - want));
  }
  CHECK(worst < 1e-11 * field_max_abs(f));
}

TEST_CASE("gaussian multiplier matches direct convolution quadrature") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 512;
  spec.length = 40.0;
  GridField f = sample_scalar(spec, [](const RVector& x) {
    const double u = x(0) - 1.0;
    return Complex(std::exp(-0.25 * u * u), 0.0);
  });
  ScalarSymbol g = make_gaussian(1, 0.5);  // symbol e^{-xi^2/2}
  GridField out = apply_multiplier(matrix_from_scalar(g), f);

  // independent oracle: out(x) = (2pi)^{-1/2} sum_y h exp(-(x-y)^2/2) f(y)
  // with minimum-image distance; both factors decay far below 1e-8 at L/2
  const double h = spacing(spec);
  const long N = total_points(spec);
  double worst = 0.0;
  for (long j = 0; j < N; j += 7) {
    const double x = coordinate(spec, static_cast<int>(j));
    Complex acc(0, 0);
    for (long k = 0; k < N; ++k) {
      double d = std::abs(x - coordinate(spec, static_cast<int>(k)));
      d = std::min(d, spec.length - d);
      acc += std::exp(-0.5 * d * d) * f.data[0][k];
    }
    acc *= h / kSqrt2Pi;
    worst = std::max(worst, std::abs(out.data[0][j] - acc));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("positivity trial verdicts") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 256;
  spec.length = 32.0;  // h = 1/8: the unit shift is lattice-aligned
  GridField f = sample_scalar(spec, [](const RVector& x) {
    return Complex(std::exp(-x(0) * x(0)), 0.0);
  });

  TrialVerdict ident = positivity_trial(identity_symbol(1, 1), f);
  CHECK(ident.passed);
  CHECK(ident.min_real >= -1e-14);

  // cos multiplier averages the two unit translates: stays nonnegative
  TrialVerdict avg =
      positivity_trial(matrix_from_scalar(make_cos(vec1(1.0))), f);
  CHECK(avg.passed);
  GridField want = zero_field(spec, 1);
  const int N = spec.samples;
  const int s = 8;  // 1.0 / h
  for (int j = 0; j < N; ++j)
    want.data[0][j] = 0.5 * (f.data[0][(j - s + N) % N].real() +
                             f.data[0][(j + s) % N].real());
  CHECK(max_dev(avg.out, want) < 1e-12);

  // sin multiplier produces a purely imaginary output: must fail
  TrialVerdict leak =
      positivity_trial(matrix_from_scalar(make_sin(vec1(1.0))), f);
  CHECK_FALSE(leak.passed);
  CHECK(leak.max_imag > leak.tolerance_abs);
}

TEST_CASE("unbounded symbols are rejected by the multiplier") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 64;
  spec.length = 8.0;
  GridField f = random_field(spec, 1, 2);
  CHECK_THROWS_AS(
      apply_multiplier(matrix_from_scalar(make_neg_quadratic(1)), f),
      ToolkitError);
}

TEST_CASE("atomic convolution: point mass at zero is the identity") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 128;
  spec.length = 16.0;
  GridField f = random_field(spec, 2, 23);
  AtomicMeasure mu = scalar_measure(1, {vec1(0.0)}, {1.0});
  GridField out = convolve_atomic(f, mu);
  CHECK(max_dev(f, out) == 0.0);
}

TEST_CASE("atomic convolution: lattice atoms shift exactly") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 256;
  spec.length = 32.0;
  GridField f = random_field(spec, 1, 29);
  AtomicMeasure mu = scalar_measure(1, {vec1(1.0), vec1(-1.0)}, {0.5, 0.5});
  GridField out = convolve_atomic(f, mu);
  const int N = spec.samples;
  const int s = 8;
  double worst = 0.0;
  for (int j = 0; j < N; ++j) {
    const Complex want =
        0.5 * (f.data[0][(j - s + N) % N] + f.data[0][(j + s) % N]);
    worst = std::max(worst, std::abs(out.data[0][j] - want));
  }
  CHECK(worst == 0.0);
}

TEST_CASE("atomic convolution agrees with its transform multiplier") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 256;
  spec.length = 32.0;
  // smooth field so the comparison is limited by roundoff, not band limits
  GridField f = sample_scalar(spec, [](const RVector& x) {
    return Complex(std::exp(-0.5 * x(0) * x(0)), 0.0);
  });
  AtomicMeasure mu =
      scalar_measure(1, {vec1(1.0), vec1(-2.0), vec1(0.5)}, {0.5, 0.25, 1.0});
  GridField direct = convolve_atomic(f, mu);
  // convolution by mu has multiplier (2pi)^{n/2} mu^hat
  ScalarSymbol g = scale_symbol(bochner_scalar(mu), Complex(kSqrt2Pi, 0.0));
  GridField viaG = apply_multiplier(matrix_from_scalar(g), f);
  CHECK(max_dev(direct, viaG) < 1e-10);
}

TEST_CASE("atomic convolution: off-lattice atoms preserve mass and sign") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 256;
  spec.length = 32.0;
  GridField f = sample_scalar(spec, [](const RVector& x) {
    return Complex(std::exp(-x(0) * x(0)), 0.0);
  });
  AtomicMeasure mu = scalar_measure(1, {vec1(0.7071067811865476)}, {2.0});
  GridField out = convolve_atomic(f, mu);
  double in_mass = 0.0, out_mass = 0.0, min_real = 0.0;
  for (long i = 0; i < total_points(spec); ++i) {
    in_mass += f.data[0][i].real();
    out_mass += out.data[0][i].real();
    min_real = std::min(min_real, out.data[0][i].real());
  }
  CHECK(out_mass == doctest::Approx(2.0 * in_mass).epsilon(1e-12));
  CHECK(min_real >= 0.0);

  AtomicMeasure far = scalar_measure(1, {vec1(100.0)}, {1.0});
  CHECK_THROWS_AS(convolve_atomic(f, far), ToolkitError);
}

TEST_CASE("matrix measure mixes components") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 64;
  spec.length = 8.0;
  GridField f = zero_field(spec, 2);
  for (long i = 0; i < total_points(spec); ++i) f.data[0][i] = Complex(1.0, 0.0);
  AtomicMeasure mu;
  mu.dim = 1;
  mu.m = 2;
  mu.locations = {vec1(0.0)};
  CMatrix w(2, 2);
  w << 1, 1, 1, 1;
  mu.weights = {w};
  GridField out = convolve_atomic(f, mu);
  // component 1 of out picks up component 0 of f through the off-diagonal
  CHECK(out.data[1][0].real() == doctest::Approx(1.0));
  CHECK(out.data[0][0].real() == doctest::Approx(1.0));
}

TEST_CASE("kernel total variation of pinned symbols") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 1024;
  spec.length = 40.0;

  // gaussian symbol: raw kernel mass integrates to sqrt(2pi)
  KernelReport gauss = kernel_and_tv(make_gaussian(1, 0.5), spec);
  CHECK(gauss.tv == doctest::Approx(kSqrt2Pi).epsilon(1e-6));
  CHECK(gauss.mass == doctest::Approx(1.0).epsilon(1e-6));

  // constant (2pi)^{-1/2}: kernel is a discrete delta with tv exactly 1
  KernelReport delta =
      kernel_and_tv(make_constant(1, Complex(1.0 / kSqrt2Pi, 0.0)), spec);
  CHECK(delta.tv == doctest::Approx(1.0).epsilon(1e-10));

  // cos with lattice-aligned unit translates: operator bound is exactly 1
  GridSpec spec32;
  spec32.dim = 1;
  spec32.samples = 1024;
  spec32.length = 32.0;
  KernelReport cosk = kernel_and_tv(make_cos(vec1(1.0)), spec32);
  CHECK(cosk.mass == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(cosk.tv == doctest::Approx(kSqrt2Pi).epsilon(1e-6));
}

TEST_CASE("multiplier norm report") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 256;
  spec.length = 16.0;

  MatrixSymbol cI = matrix_from_scalar(make_constant(1, Complex(-2.0, 0.0)));
  MultiplierNormReport r = l2_norm_bound(cI, spec, 12, 20);
  CHECK(r.sup_symbol == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.parseval_ratio == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.parseval_ratio <= r.sup_symbol + 1e-8);

  MatrixSymbol g = matrix_from_scalar(make_gaussian(1, 0.5));
  MultiplierNormReport rg = l2_norm_bound(g, spec, 12, 30);
  CHECK(rg.sup_symbol == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rg.parseval_ratio <= 1.0 + 1e-8);
  CHECK(rg.kernel_mass == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("l1 contraction under the kernel mass bound") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 512;
  spec.length = 40.0;
  GridField f = sample_scalar(spec, [](const RVector& x) {
    return Complex(std::exp(-x(0) * x(0)), 0.0);
  });
  ScalarSymbol g = make_gaussian(1, 0.5);
  KernelReport kr = kernel_and_tv(g, spec);
  GridField out = apply_multiplier(matrix_from_scalar(g), f);
  const double in1 = lp_vector_norm(f, 1.0);
  const double out1 = lp_vector_norm(out, 1.0);
  CHECK(out1 <= (kr.mass + 1e-8) * in1);
  // nonnegative kernel and field: the bound is attained
  CHECK(out1 == doctest::Approx(kr.mass * in1).epsilon(1e-8));
}

TEST_CASE("vector and hilbert norms") {
  GridSpec spec;
  spec.dim = 1;
  spec.samples = 8;
  spec.length = 8.0;  // h = 1
  GridField f = zero_field(spec, 2);
  f.data[0][0] = Complex(3.0, 0.0);
  f.data[0][1] = Complex(0.0, -4.0);
  f.data[1][2] = Complex(2.0, 0.0);
  // p = 1: (3 + 4) + 2
  CHECK(lp_vector_norm(f, 1.0) == doctest::Approx(9.0));
  // p = 2: sqrt(9+16) + 2
  CHECK(lp_vector_norm(f, 2.0) == doctest::Approx(7.0));
  CHECK(hilbert_norm(f) == doctest::Approx(std::sqrt(29.0)));
  CHECK_THROWS_AS(lp_vector_norm(f, 0.5), ToolkitError);
}

TEST_CASE("binary field container round-trips exactly") {
  GridSpec spec;
  spec.dim = 2;
  spec.samples = 8;
  spec.length = 4.0;
  GridField f = zero_field(spec, 2);
  Rng rng(5);
  for (auto& comp : f.data)
    for (Complex& v : comp) v = Complex(rng.normal(), rng.normal());

  const std::string path = "engine_field.mplb";
  write_field_mplb(f, path);
  const GridField back = read_field_mplb(path);
  CHECK(back.spec.dim == 2);
  CHECK(back.spec.samples == 8);
  CHECK(back.spec.length == 4.0);
  CHECK(back.components == 2);
  for (int c = 0; c < 2; ++c)
    for (size_t i = 0; i < f.data[c].size(); ++i)
      CHECK(back.data[c][i] == f.data[c][i]);
  std::remove(path.c_str());

  CHECK_THROWS_AS(read_field_mplb("no-such-file.mplb"), ToolkitError);
  std::ofstream junk("engine_junk.mplb", std::ios::binary);
  junk << "JUNKJUNKJUNK";
  junk.close();
  CHECK_THROWS_AS(read_field_mplb("engine_junk.mplb"), ToolkitError);
  std::remove("engine_junk.mplb");
}

TEST_CASE("csv slice walks axis 0 through the origin") {
  GridSpec spec;
  spec.dim = 2;
  spec.samples = 8;
  spec.length = 8.0;
  GridField f = zero_field(spec, 1);
  for (long i = 0; i < total_points(spec); ++i) {
    const RVector x = point_at(spec, i);
    f.data[0][i] = Complex(x(0), x(1));
  }
  const std::string csv = field_csv_slice(f);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,re0,im0");
  int rows = 0;
  bool origin_seen = false;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream row(line);
    std::string cx, cre, cim;
    std::getline(row, cx, ',');
    std::getline(row, cre, ',');
    std::getline(row, cim, ',');
    CHECK(std::stod(cx) == doctest::Approx(std::stod(cre)));
    CHECK(std::stod(cim) == doctest::Approx(0.0));  // slice fixes x1 = 0
    if (std::stod(cx) == 0.0) origin_seen = true;
  }
  CHECK(rows == 8);
  CHECK(origin_seen);
}
