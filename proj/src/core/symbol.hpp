#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "types.hpp"

namespace fmpos {

// A scalar symbol is an immutable callable F: R^n -> C plus the metadata the
// rest of the toolkit needs to reason about it without evaluating limits:
// whether |F| is bounded (and by what), whether Re F is bounded above (the
// semigroup constructions only need the one-sided bound), and which
// constructor produced it. Evaluation must be thread-safe and side-effect
// free; every constructor in this toolkit captures by value.
struct ScalarSymbol {
  int dim = 1;
  bool continuous = true;
  bool bounded = false;
  double sup_bound = 0.0;  // valid when bounded: sup_x |F(x)| <= sup_bound
  bool re_bounded_above = false;
  double re_upper = 0.0;  // valid when re_bounded_above: Re F(x) <= re_upper
  std::string provenance = "unspecified";
  std::function<Complex(const RVector&)> eval;

  Complex operator()(const RVector& x) const { return eval(x); }
};

// Matrix-valued symbol F: R^n -> C^{m x m}. The bounds are in operator norm
// (sup_bound) and entrywise real part (re_upper), matching how the scalar and
// Hadamard constructions consume them.
struct MatrixSymbol {
  int dim = 1;
  int m = 1;
  bool continuous = true;
  bool bounded = false;
  double sup_bound = 0.0;
  bool re_bounded_above = false;
  double re_upper = 0.0;
  std::string provenance = "unspecified";
  std::function<CMatrix(const RVector&)> eval;

  CMatrix operator()(const RVector& x) const { return eval(x); }
};

inline void check_point_dim(int dim, const RVector& x, const char* who) {
  require(static_cast<int>(x.size()) == dim, ErrorCode::DimensionMismatch,
          std::string(who) + ": point dimension " + std::to_string(x.size()) +
              " does not match symbol dimension " + std::to_string(dim));
}

// Radial plateau-and-shoulder profile shared by the mollifier and the bump
// symbol family. Equals 1 on [0, plateau], decays smoothly to 0 at u = 1,
// vanishes beyond. Strictly decreasing on the shoulder.
inline double bump_profile(double u, double plateau) {
  u = std::abs(u);
  if (u <= plateau) return 1.0;
  if (u >= 1.0) return 0.0;
  const double s = (u - plateau) / (1.0 - plateau);
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

ScalarSymbol make_constant(int dim, Complex value);
ScalarSymbol make_gaussian(int dim, double decay);     // exp(-decay*|x|^2)
ScalarSymbol make_cos(const RVector& omega);           // cos(omega.x)
ScalarSymbol make_sin(const RVector& omega);           // sin(omega.x)
ScalarSymbol make_neg_quadratic(int dim);              // -|x|^2
ScalarSymbol make_quadratic(int dim);                  // +|x|^2
ScalarSymbol make_imag_linear(const RVector& v);       // i (v.x)
ScalarSymbol make_bump(int dim, double radius, double plateau, double height);

ScalarSymbol scale_symbol(const ScalarSymbol& f, Complex factor);
ScalarSymbol add_constant(const ScalarSymbol& f, Complex shift);

// Assemble an m x m matrix symbol from per-entry scalar symbols (row-major).
MatrixSymbol matrix_from_entries(int m, std::vector<ScalarSymbol> entries);
MatrixSymbol matrix_from_scalar(const ScalarSymbol& f);  // m = 1
MatrixSymbol diagonal_from_entries(std::vector<ScalarSymbol> entries);
MatrixSymbol identity_symbol(int dim, int m);

// Entry view (j,k) of a matrix symbol; metadata degrades conservatively.
ScalarSymbol entry_symbol(const MatrixSymbol& F, int j, int k);

}  // namespace fmpos
