#include "symbol.hpp"

#include <cmath>

namespace fmpos {

namespace {

ScalarSymbol base(int dim, std::string provenance) {
  ScalarSymbol s;
  s.dim = dim;
  s.provenance = std::move(provenance);
  return s;
}

}  // namespace

ScalarSymbol make_constant(int dim, Complex value) {
  ScalarSymbol s = base(dim, "builtin:constant");
  s.bounded = true;
  s.sup_bound = std::abs(value);
  s.re_bounded_above = true;
  s.re_upper = value.real();
  s.eval = [dim, value](const RVector& x) {
    check_point_dim(dim, x, "constant");
    return value;
  };
  return s;
}

ScalarSymbol make_gaussian(int dim, double decay) {
  require(decay >= 0.0, ErrorCode::InvalidArgument, "gaussian: decay must be >= 0");
  ScalarSymbol s = base(dim, "builtin:gaussian");
  s.bounded = true;
  s.sup_bound = 1.0;
  s.re_bounded_above = true;
  s.re_upper = 1.0;
  s.eval = [dim, decay](const RVector& x) {
    check_point_dim(dim, x, "gaussian");
    return Complex(std::exp(-decay * x.squaredNorm()), 0.0);
  };
  return s;
}

ScalarSymbol make_cos(const RVector& omega) {
  const int dim = static_cast<int>(omega.size());
  ScalarSymbol s = base(dim, "builtin:cos");
  s.bounded = true;
  s.sup_bound = 1.0;
  s.re_bounded_above = true;
  s.re_upper = 1.0;
  s.eval = [dim, omega](const RVector& x) {
    check_point_dim(dim, x, "cos");
    return Complex(std::cos(omega.dot(x)), 0.0);
  };
  return s;
}

ScalarSymbol make_sin(const RVector& omega) {
  const int dim = static_cast<int>(omega.size());
  ScalarSymbol s = base(dim, "builtin:sin");
  s.bounded = true;
  s.sup_bound = 1.0;
  s.re_bounded_above = true;
  s.re_upper = 1.0;
  s.eval = [dim, omega](const RVector& x) {
    check_point_dim(dim, x, "sin");
    return Complex(std::sin(omega.dot(x)), 0.0);
  };
  return s;
}

ScalarSymbol make_neg_quadratic(int dim) {
  ScalarSymbol s = base(dim, "builtin:neg-quadratic");
  s.bounded = false;
  s.re_bounded_above = true;
  s.re_upper = 0.0;
  s.eval = [dim](const RVector& x) {
    check_point_dim(dim, x, "neg-quadratic");
    return Complex(-x.squaredNorm(), 0.0);
  };
  return s;
}

ScalarSymbol make_quadratic(int dim) {
  ScalarSymbol s = base(dim, "builtin:quadratic");
  s.bounded = false;
  s.re_bounded_above = false;
  s.eval = [dim](const RVector& x) {
    check_point_dim(dim, x, "quadratic");
    return Complex(x.squaredNorm(), 0.0);
  };
  return s;
}

ScalarSymbol make_imag_linear(const RVector& v) {
  const int dim = static_cast<int>(v.size());
  ScalarSymbol s = base(dim, "builtin:imag-linear");
  s.bounded = false;
  s.re_bounded_above = true;
  s.re_upper = 0.0;
  s.eval = [dim, v](const RVector& x) {
    check_point_dim(dim, x, "imag-linear");
    return Complex(0.0, v.dot(x));
  };
  return s;
}

ScalarSymbol make_bump(int dim, double radius, double plateau, double height) {
  require(radius > 0.0, ErrorCode::InvalidArgument, "bump: radius must be > 0");
  require(plateau > 0.0 && plateau < 1.0, ErrorCode::InvalidArgument,
          "bump: plateau must lie in (0,1)");
  ScalarSymbol s = base(dim, "builtin:bump");
  s.bounded = true;
  s.sup_bound = std::abs(height);
  s.re_bounded_above = true;
  s.re_upper = std::max(height, 0.0);
  s.eval = [dim, radius, plateau, height](const RVector& x) {
    check_point_dim(dim, x, "bump");
    return Complex(height * bump_profile(x.norm() / radius, plateau), 0.0);
  };
  return s;
}

ScalarSymbol scale_symbol(const ScalarSymbol& f, Complex factor) {
  ScalarSymbol s = f;
  s.provenance = "scaled(" + f.provenance + ")";
  s.sup_bound = f.sup_bound * std::abs(factor);
  // A complex factor rotates values; only a nonnegative real factor
  // transports the one-sided real bound.
  if (factor.imag() == 0.0 && factor.real() >= 0.0 && f.re_bounded_above) {
    s.re_bounded_above = true;
    s.re_upper = f.re_upper * factor.real();
  } else {
    s.re_bounded_above = f.bounded;
    s.re_upper = f.bounded ? f.sup_bound * std::abs(factor) : 0.0;
  }
  auto inner = f.eval;
  s.eval = [inner, factor](const RVector& x) { return factor * inner(x); };
  return s;
}

ScalarSymbol add_constant(const ScalarSymbol& f, Complex shift) {
  ScalarSymbol s = f;
  s.provenance = "shifted(" + f.provenance + ")";
  if (f.bounded) s.sup_bound = f.sup_bound + std::abs(shift);
  if (f.re_bounded_above) s.re_upper = f.re_upper + shift.real();
  auto inner = f.eval;
  s.eval = [inner, shift](const RVector& x) { return inner(x) + shift; };
  return s;
}

MatrixSymbol matrix_from_entries(int m, std::vector<ScalarSymbol> entries) {
  require(m >= 1, ErrorCode::InvalidArgument, "matrix_from_entries: m must be >= 1");
  require(static_cast<int>(entries.size()) == m * m, ErrorCode::DimensionMismatch,
          "matrix_from_entries: expected m*m entries");
  const int dim = entries.front().dim;
  MatrixSymbol F;
  F.dim = dim;
  F.m = m;
  F.provenance = "entries";
  F.continuous = true;
  F.bounded = true;
  F.re_bounded_above = true;
  double entry_sup = 0.0;
  for (const auto& e : entries) {
    require(e.dim == dim, ErrorCode::DimensionMismatch,
            "matrix_from_entries: mixed entry dimensions");
    F.continuous = F.continuous && e.continuous;
    F.bounded = F.bounded && e.bounded;
    entry_sup = std::max(entry_sup, e.sup_bound);
    F.re_bounded_above = F.re_bounded_above && e.re_bounded_above;
    F.re_upper = std::max(F.re_upper, e.re_upper);
  }
  // Operator norm is at most m * (max entry magnitude).
  F.sup_bound = F.bounded ? m * entry_sup : 0.0;
  auto shared = std::make_shared<std::vector<ScalarSymbol>>(std::move(entries));
  F.eval = [m, dim, shared](const RVector& x) {
    check_point_dim(dim, x, "matrix_from_entries");
    CMatrix out(m, m);
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) out(j, k) = (*shared)[j * m + k].eval(x);
    return out;
  };
  return F;
}

MatrixSymbol matrix_from_scalar(const ScalarSymbol& f) {
  return matrix_from_entries(1, {f});
}

MatrixSymbol diagonal_from_entries(std::vector<ScalarSymbol> entries) {
  const int m = static_cast<int>(entries.size());
  require(m >= 1, ErrorCode::InvalidArgument, "diagonal_from_entries: empty diagonal");
  const int dim = entries.front().dim;
  std::vector<ScalarSymbol> grid(static_cast<size_t>(m) * m, make_constant(dim, 0.0));
  for (int j = 0; j < m; ++j) grid[j * m + j] = entries[j];
  MatrixSymbol F = matrix_from_entries(m, std::move(grid));
  F.provenance = "diagonal";
  return F;
}

MatrixSymbol identity_symbol(int dim, int m) {
  std::vector<ScalarSymbol> ones(static_cast<size_t>(m), make_constant(dim, 1.0));
  MatrixSymbol F = diagonal_from_entries(std::move(ones));
  F.provenance = "identity";
  F.sup_bound = 1.0;
  return F;
}

ScalarSymbol entry_symbol(const MatrixSymbol& F, int j, int k) {
  require(j >= 0 && j < F.m && k >= 0 && k < F.m, ErrorCode::InvalidArgument,
          "entry_symbol: index out of range");
  ScalarSymbol s;
  s.dim = F.dim;
  s.continuous = F.continuous;
  s.bounded = F.bounded;
  s.sup_bound = F.sup_bound;  // |F_jk(x)| <= ||F(x)||
  s.re_bounded_above = F.bounded;
  s.re_upper = F.sup_bound;
  s.provenance = F.provenance + "[" + std::to_string(j) + "," + std::to_string(k) + "]";
  auto inner = F.eval;
  s.eval = [inner, j, k](const RVector& x) { return inner(x)(j, k); };
  return s;
}

}  // namespace fmpos
