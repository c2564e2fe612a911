#include "mollifier.hpp"

#include <cmath>

namespace fmpos {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGaussOrder = 8;
constexpr double kGaussNode[kGaussOrder] = {
    -0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975362};
constexpr double kGaussWeight[kGaussOrder] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

// Panels on [0, 1]; 96 panels x 8 nodes resolve the shoulder and keep the
// oscillatory transform integrand at < 0.2 rad per panel for |k| up to ~150.
constexpr int kPanels = 96;

double unit_sphere_area(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
  }
  fail(ErrorCode::InvalidArgument, "mollifier: dim must be 1, 2, or 3");
}

double sinc(double u) { return std::abs(u) < 1e-8 ? 1.0 - u * u / 6.0 : std::sin(u) / u; }

}  // namespace

Mollifier::Mollifier(const MollifierSpec& spec) : spec_(spec) {
  require(spec.dim >= 1 && spec.dim <= 3, ErrorCode::InvalidArgument,
          "mollifier: dim must be 1, 2, or 3");
  require(spec.eps > 0.0 && spec.eps <= 1.0, ErrorCode::InvalidArgument,
          "mollifier: eps must lie in (0, 1]");
  require(spec.plateau > 0.0 && spec.plateau < 1.0, ErrorCode::InvalidArgument,
          "mollifier: plateau must lie in (0, 1)");

  nodes_.reserve(kPanels * kGaussOrder);
  weights_.reserve(kPanels * kGaussOrder);
  profile_.reserve(kPanels * kGaussOrder);
  const double width = 1.0 / kPanels;
  for (int p = 0; p < kPanels; ++p) {
    const double lo = p * width;
    for (int g = 0; g < kGaussOrder; ++g) {
      const double r = lo + 0.5 * width * (1.0 + kGaussNode[g]);
      nodes_.push_back(r);
      weights_.push_back(0.5 * width * kGaussWeight[g]);
      profile_.push_back(bump_profile(r, spec.plateau));
    }
  }

  // Unit integral over R^dim: c * area(S^{dim-1}) * int_0^1 profile r^{dim-1} dr = 1.
  double radial = 0.0;
  for (size_t i = 0; i < nodes_.size(); ++i)
    radial += weights_[i] * profile_[i] * std::pow(nodes_[i], spec.dim - 1);
  require(radial > 0.0 && std::isfinite(radial), ErrorCode::QuadratureFailure,
          "mollifier: radial mass quadrature failed");
  amplitude_ = 1.0 / (unit_sphere_area(spec.dim) * radial);
  if (spec.normalization == MollifierSpec::Normalization::UnitTransformLimit)
    amplitude_ *= std::pow(2.0 * M_PI, 0.5 * spec.dim);
}

double Mollifier::value_radial(double r) const {
  require(r >= 0.0, ErrorCode::InvalidArgument, "mollifier: radius must be >= 0");
  const double eps = spec_.eps;
  if (r >= eps) return 0.0;
  const double scale = amplitude_ / std::pow(eps, spec_.dim);
  return scale * bump_profile(r / eps, spec_.plateau);
}

double Mollifier::value(const RVector& x) const {
  check_point_dim(spec_.dim, x, "mollifier");
  return value_radial(x.norm());
}

// Radial transforms under hat(f)(xi) = (2pi)^{-n/2} int e^{-i xi.x} f(x) dx:
//   n=1: 2 (2pi)^{-1/2} int_0^1 phi(r) cos(kr) dr
//   n=2:               int_0^1 phi(r) J0(kr) r dr
//   n=3: (2pi)^{-1/2}  2 int_0^1 phi(r) sinc(kr) r^2 dr
// evaluated at k scaled by eps, since phi_eps^hat(xi) = phi^hat(eps xi).
double Mollifier::transform_radial(double k) const {
  require(std::isfinite(k), ErrorCode::NonFinite, "mollifier: non-finite frequency");
  const double ke = std::abs(k) * spec_.eps;
  double acc = 0.0;
  switch (spec_.dim) {
    case 1:
      for (size_t i = 0; i < nodes_.size(); ++i)
        acc += weights_[i] * profile_[i] * std::cos(ke * nodes_[i]);
      acc *= 2.0 / std::sqrt(2.0 * M_PI);
      break;
    case 2:
      for (size_t i = 0; i < nodes_.size(); ++i)
        acc += weights_[i] * profile_[i] * nodes_[i] *
               std::cyl_bessel_j(0.0, ke * nodes_[i]);
      break;
    case 3:
      for (size_t i = 0; i < nodes_.size(); ++i)
        acc += weights_[i] * profile_[i] * nodes_[i] * nodes_[i] *
               sinc(ke * nodes_[i]);
      acc *= 2.0 / std::sqrt(2.0 * M_PI);
      break;
  }
  return amplitude_ * acc;
}

double Mollifier::transform(const RVector& xi) const {
  check_point_dim(spec_.dim, xi, "mollifier");
  return transform_radial(xi.norm());
}

double Mollifier::transform_limit() const {
  if (spec_.normalization == MollifierSpec::Normalization::UnitTransformLimit)
    return 1.0;
  return std::pow(2.0 * M_PI, -0.5 * spec_.dim);
}

GridField basis_test_field(const Mollifier& phi, int slot, int components,
                           const GridSpec& spec) {
  validate_grid(spec);
  require(components >= 1 && slot >= 0 && slot < components, ErrorCode::InvalidArgument,
          "basis_test_field: slot out of range");
  require(phi.spec().dim == spec.dim, ErrorCode::DimensionMismatch,
          "basis_test_field: mollifier/grid dimension mismatch");
  const double eps = phi.spec().eps;
  const double h = spacing(spec);
  require(2.0 * eps / h >= 8.0, ErrorCode::UnderResolved,
          "basis_test_field: support spans fewer than 8 grid spacings");
  require(2.0 * eps <= spec.length, ErrorCode::InvalidArgument,
          "basis_test_field: support does not fit in the box");

  GridField f = zero_field(spec, components);
  const long total = total_points(spec);
  for (long i = 0; i < total; ++i) {
    const RVector x = point_at(spec, i);
    const double r = x.norm();
    if (r < eps) f.data[slot][i] = Complex(phi.value_radial(r), 0.0);
  }
  return f;
}

}  // namespace fmpos
