#pragma once

#include <vector>

#include "psd.hpp"
#include "symbol.hpp"
#include "types.hpp"

namespace fmpos {

// Finite nonnegative atomic measure sum_j W_j * delta_{xi_j}. For m = 1 the
// weights are 1x1 matrices holding nonnegative reals; for m > 1 each weight
// must be Hermitian PSD. Locations live in R^dim.
struct AtomicMeasure {
  int dim = 1;
  int m = 1;
  std::vector<RVector> locations;
  std::vector<CMatrix> weights;

  int atoms() const { return static_cast<int>(locations.size()); }
};

AtomicMeasure scalar_measure(int dim, std::vector<RVector> locations,
                             std::vector<double> weights);

// Throws NegativeWeight / NonPsdWeight / DimensionMismatch / NonFinite.
void validate_measure(const AtomicMeasure& mu);

double total_mass(const AtomicMeasure& mu);  // sum of weights (operator norms)

// Transform of the measure under the (2pi)^{-n/2} e^{-i x.xi} convention:
// F(x) = (2pi)^{-n/2} sum_j w_j e^{-i(x.xi_j)}. The result is positive
// semidefinite by construction; sup |F| = F(0).
ScalarSymbol bochner_scalar(const AtomicMeasure& mu);
MatrixSymbol bochner_matrix(const AtomicMeasure& mu);

// Parameters of the canonical conditionally-positive form
//   F(x) = alpha + i(beta.x) - (x,Ax)
//        + sum_j w_j [e^{i(x.y_j)} - 1 - i(x.y_j)/(1+|y_j|^2)] (1+|y_j|^2)/|y_j|^2
// with A Hermitian PSD and nu a nonnegative scalar atomic measure with no
// atom at the origin.
struct LKParams {
  int dim = 1;
  double alpha = 0.0;
  RVector beta;
  CMatrix A;
  AtomicMeasure nu;
};

LKParams default_lk(int dim);  // alpha = 0, beta = 0, A = 0, empty nu

// Throws AtomAtOrigin (|y_j| <= 1e-14), NonPsdWeight (A), NegativeWeight.
ScalarSymbol levy_khintchine(const LKParams& p);

// m x m matrix symbol with independent canonical-form entries (row-major).
MatrixSymbol lk_matrix(int m, const std::vector<LKParams>& entries);

// Entrywise exponential: out_jk(x) = exp(t * F_jk(x)). Bounded when every
// entry's real part is bounded above and t >= 0.
MatrixSymbol hadamard_exp(const MatrixSymbol& F, double t);

// Scalar semigroup symbol e^{t F}.
ScalarSymbol exp_scalar(const ScalarSymbol& F, double t);

// Matrix exponential of a single matrix: scaling and squaring around a
// trace-shifted Taylor core; diagonal input is exponentiated exactly
// entrywise. Relative remainder of the truncated series is below 1e-14.
CMatrix expm(const CMatrix& A);

// Pointwise exp(t F(x)) as a symbol.
MatrixSymbol matrix_exp(const MatrixSymbol& F, double t);

// Two-component coupling example: F0(x) = [[a(x), b], [b, a(x)]] with a
// real-valued and b a real constant.
MatrixSymbol example_f0(const ScalarSymbol& a, double b);

// Closed form exp(t F0)(x) = e^{t a(x)} [[cosh(tb), sinh(tb)],
//                                         [sinh(tb), cosh(tb)]].
MatrixSymbol exp_f0_closed_form(const ScalarSymbol& a, double b, double t);

// The constant factor [[cosh(tb), sinh(tb)], [sinh(tb), cosh(tb)]].
CMatrix exp_f0_factor(double b, double t);

}  // namespace fmpos
