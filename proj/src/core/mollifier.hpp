#pragma once

#include <vector>

#include "grid.hpp"
#include "symbol.hpp"
#include "types.hpp"

namespace fmpos {

// Radial approximate-identity element phi_eps(x) = eps^-n phi(x/eps), where
// phi is 1's plateau-and-shoulder profile (bump_profile) scaled so that
// either the integral of phi is 1 (UnitIntegral) or its transform tends to 1
// at every fixed frequency as eps -> 0 (UnitTransformLimit). Under the
// (2pi)^{-n/2} transform convention the two differ by exactly that constant:
// with a unit integral, phi_eps^hat -> (2pi)^{-n/2}.
struct MollifierSpec {
  enum class Normalization { UnitIntegral, UnitTransformLimit };
  int dim = 1;
  double eps = 1.0;      // in (0, 1]
  double plateau = 0.5;  // in (0, 1)
  Normalization normalization = Normalization::UnitIntegral;
};

// Immutable after construction; the radial profile and its quadrature table
// are precomputed so evaluation and transform calls are read-only.
class Mollifier {
 public:
  explicit Mollifier(const MollifierSpec& spec);

  const MollifierSpec& spec() const { return spec_; }

  // phi_eps at a point / at radius r >= 0. Zero for r >= eps.
  double value(const RVector& x) const;
  double value_radial(double r) const;

  // phi_eps^hat(xi); real by radial symmetry. transform_radial takes |xi|.
  double transform(const RVector& xi) const;
  double transform_radial(double k) const;

  // lim_{eps -> 0} phi_eps^hat(xi) at fixed xi: (2pi)^{-dim/2} for
  // UnitIntegral, exactly 1 for UnitTransformLimit.
  double transform_limit() const;

  // Plateau height of phi (before the eps^-n concentration).
  double amplitude() const { return amplitude_; }

 private:
  MollifierSpec spec_;
  double amplitude_ = 0.0;
  // Composite Gauss-Legendre table for integrals of profile(r) * kernel(k r)
  // over [0, 1]; profile values are cached at the nodes.
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> profile_;
};

// m-component field on `spec` whose component `slot` samples phi_eps and all
// other components vanish. Requires the support to span at least 8 grid
// spacings (UnderResolved otherwise) and to fit inside the box.
GridField basis_test_field(const Mollifier& phi, int slot, int components,
                           const GridSpec& spec);

}  // namespace fmpos
