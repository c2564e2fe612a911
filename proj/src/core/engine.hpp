#pragma once

#include <cstdint>

#include "grid.hpp"
#include "symbol.hpp"
#include "synth.hpp"
#include "types.hpp"

namespace fmpos {

// Discrete realization of the (2pi)^{-n/2} transform pair on a periodic
// grid:
//   forward:  hat(f)(xi_k) = (2pi)^{-n/2} h^n  sum_j f(x_j) e^{-i xi_k.x_j}
//   inverse:  f(x_j) = (2pi)^{-n/2} dxi^n sum_k hat(f)(xi_k) e^{+i xi_k.x_j}
// with h = L/N and dxi = 2pi/L; the pair is an exact mutual inverse. The
// frequency-domain field stores slots in ascending frequency order.
GridField dft_forward(const GridField& f);
GridField dft_inverse(const GridField& fhat);

// out = (G(xi) hat(f))-check: multiplies the spectrum by the symbol sampled
// on the dual lattice. Requires G bounded and continuous (UnboundedSymbol)
// and G.m == f.components.
GridField apply_multiplier(const MatrixSymbol& G, const GridField& f);

struct TrialVerdict {
  bool passed = true;
  double min_real = 0.0;      // most negative real part of any component
  double max_imag = 0.0;      // largest |imaginary part|
  double scale = 0.0;         // max |out|
  double tolerance_abs = 0.0; // tol * scale actually applied
  int witness_component = 0;
  RVector witness_x;
  Complex witness_value;
  GridField out;
};

// Applies G to a (nonnegative) field and checks the output stays real and
// nonnegative to within tol * max|out|.
TrialVerdict positivity_trial(const MatrixSymbol& G, const GridField& f,
                              double tol = 1e-8);

// sum_j W_j f(. - xi_j) with periodic wrap; off-lattice atom locations use
// separable linear interpolation (lattice-aligned atoms are exact shifts).
// A scalar measure acts componentwise; an m x m measure mixes components.
// Throws AtomOutOfBox when an atom leaves [-L/2, L/2)^n.
GridField convolve_atomic(const GridField& f, const AtomicMeasure& mu);

// The discrete convolution kernel K of the multiplier is (2pi)^{-n/2} times
// the inverse transform of the sampled symbol: out = h^n sum_y K(x-y) f(y).
// tv is the raw kernel total variation h^n sum |dft_inverse(G)|; mass is
// (2pi)^{-n/2} tv = h^n sum |K|, the L1 -> L1 operator bound (for a symbol
// that is the transform of a measure, the measure's total variation).
struct KernelReport {
  GridField kernel;    // inverse transform of the sampled symbol
  double tv = 0.0;     // h^n sum |kernel|
  double mass = 0.0;   // (2pi)^{-n/2} tv: L1 operator bound
};

KernelReport kernel_and_tv(const ScalarSymbol& G, const GridSpec& spec);

struct MultiplierNormReport {
  double tv_estimate = 0.0;    // max over entries of the kernel total variation
  double kernel_mass = 0.0;    // max over entries of the L1 operator bound
  double sup_symbol = 0.0;     // sup over the dual lattice of ||G(xi)||_2
  double parseval_ratio = 0.0; // max ||G f||_2 / ||f||_2 over a seeded batch
};

MultiplierNormReport l2_norm_bound(const MatrixSymbol& G, const GridSpec& spec,
                                   uint64_t seed = 1, int batch = 50);

// Flat binary field container: header = magic "MPLB", version u32 (1),
// n u32, m u32, N u32, L f64, all little-endian, then each component in
// row-major lattice order as interleaved f64 (re, im).
void write_field_mplb(const GridField& f, const std::string& path);
GridField read_field_mplb(const std::string& path);

// CSV of the 1-D slice along axis 0 through the origin of the other axes:
// header x,re0,im0,re1,im1,... and one row per lattice point on the line.
std::string field_csv_slice(const GridField& f);
void write_field_csv(const GridField& f, const std::string& path);

// Mixed vector norm: sum over components of the grid L^p norms,
// (h^n sum_x |f_c(x)|^p)^{1/p} summed over c. Requires p >= 1.
double lp_vector_norm(const GridField& f, double p);

// Euclidean L^2 norm sqrt(h^n sum_{c,x} |f_c(x)|^2) with the spatial cell.
// The transform pair is unitary between this norm and dual_hilbert_norm,
// which weights by the dual cell (2pi/L)^n instead:
// dual_hilbert_norm(dft_forward(f)) == hilbert_norm(f).
double hilbert_norm(const GridField& f);
double dual_hilbert_norm(const GridField& fhat);

}  // namespace fmpos
