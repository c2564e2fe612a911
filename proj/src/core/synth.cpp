#include "synth.hpp"

#include <cmath>
#include <memory>

namespace fmpos {

namespace {

constexpr double kOriginTol = 1e-14;

double two_pi_pow(int dim, double exponent) {
  return std::pow(2.0 * M_PI, exponent * dim);
}

}  // namespace

AtomicMeasure scalar_measure(int dim, std::vector<RVector> locations,
                             std::vector<double> weights) {
  require(locations.size() == weights.size(), ErrorCode::DimensionMismatch,
          "scalar_measure: locations/weights size mismatch");
  AtomicMeasure mu;
  mu.dim = dim;
  mu.m = 1;
  mu.locations = std::move(locations);
  for (double w : weights) {
    CMatrix W(1, 1);
    W(0, 0) = w;
    mu.weights.push_back(std::move(W));
  }
  validate_measure(mu);
  return mu;
}

void validate_measure(const AtomicMeasure& mu) {
  require(mu.dim >= 1, ErrorCode::InvalidArgument, "measure: dim must be >= 1");
  require(mu.m >= 1, ErrorCode::InvalidArgument, "measure: m must be >= 1");
  require(mu.locations.size() == mu.weights.size(), ErrorCode::DimensionMismatch,
          "measure: locations/weights size mismatch");
  for (const auto& loc : mu.locations) {
    require(static_cast<int>(loc.size()) == mu.dim, ErrorCode::DimensionMismatch,
            "measure: atom location dimension mismatch");
    require(loc.allFinite(), ErrorCode::NonFinite, "measure: non-finite atom location");
  }
  for (const auto& W : mu.weights) {
    require(W.rows() == mu.m && W.cols() == mu.m, ErrorCode::DimensionMismatch,
            "measure: weight shape mismatch");
    require(all_finite(W), ErrorCode::NonFinite, "measure: non-finite weight");
    if (mu.m == 1) {
      require(std::abs(W(0, 0).imag()) == 0.0 && W(0, 0).real() >= 0.0,
              ErrorCode::NegativeWeight,
              "measure: scalar weights must be nonnegative reals");
    } else {
      const PsdVerdict v = is_psd(W, 1e-12);
      require(v.passed, ErrorCode::NonPsdWeight,
              "measure: matrix weight is not positive semidefinite (" +
                  std::string(failure_kind_name(v.kind)) + ")");
    }
  }
}

double total_mass(const AtomicMeasure& mu) {
  double mass = 0.0;
  for (const auto& W : mu.weights)
    mass += (mu.m == 1) ? W(0, 0).real() : W.operatorNorm();
  return mass;
}

ScalarSymbol bochner_scalar(const AtomicMeasure& mu) {
  require(mu.m == 1, ErrorCode::DimensionMismatch,
          "bochner_scalar: measure has matrix weights");
  validate_measure(mu);
  const double norm = two_pi_pow(mu.dim, -0.5);
  const double sup = norm * total_mass(mu);
  auto atoms = std::make_shared<AtomicMeasure>(mu);

  ScalarSymbol F;
  F.dim = mu.dim;
  F.provenance = "bochner";
  F.bounded = true;
  F.sup_bound = sup;
  F.re_bounded_above = true;
  F.re_upper = sup;
  F.eval = [atoms, norm](const RVector& x) {
    check_point_dim(atoms->dim, x, "bochner_scalar");
    Complex acc(0.0, 0.0);
    for (int j = 0; j < atoms->atoms(); ++j) {
      const double phase = -x.dot(atoms->locations[j]);
      acc += atoms->weights[j](0, 0) * Complex(std::cos(phase), std::sin(phase));
    }
    return norm * acc;
  };
  return F;
}

MatrixSymbol bochner_matrix(const AtomicMeasure& mu) {
  validate_measure(mu);
  const double norm = two_pi_pow(mu.dim, -0.5);
  double mass = 0.0;
  for (const auto& W : mu.weights) mass += W.operatorNorm();
  auto atoms = std::make_shared<AtomicMeasure>(mu);

  MatrixSymbol F;
  F.dim = mu.dim;
  F.m = mu.m;
  F.provenance = "bochner";
  F.bounded = true;
  F.sup_bound = norm * mass;
  F.re_bounded_above = true;
  F.re_upper = norm * mass;
  F.eval = [atoms, norm](const RVector& x) {
    check_point_dim(atoms->dim, x, "bochner_matrix");
    CMatrix acc = CMatrix::Zero(atoms->m, atoms->m);
    for (int j = 0; j < atoms->atoms(); ++j) {
      const double phase = -x.dot(atoms->locations[j]);
      acc += Complex(std::cos(phase), std::sin(phase)) * atoms->weights[j];
    }
    return CMatrix(norm * acc);
  };
  return F;
}

LKParams default_lk(int dim) {
  LKParams p;
  p.dim = dim;
  p.beta = RVector::Zero(dim);
  p.A = CMatrix::Zero(dim, dim);
  p.nu.dim = dim;
  p.nu.m = 1;
  return p;
}

ScalarSymbol levy_khintchine(const LKParams& p) {
  require(p.dim >= 1, ErrorCode::InvalidArgument, "levy_khintchine: dim >= 1");
  require(static_cast<int>(p.beta.size()) == p.dim, ErrorCode::DimensionMismatch,
          "levy_khintchine: beta dimension mismatch");
  require(p.A.rows() == p.dim && p.A.cols() == p.dim, ErrorCode::DimensionMismatch,
          "levy_khintchine: A shape mismatch");
  require(std::isfinite(p.alpha) && p.beta.allFinite() && all_finite(p.A),
          ErrorCode::NonFinite, "levy_khintchine: non-finite parameters");
  {
    const PsdVerdict v = is_psd(p.A, 1e-12);
    require(v.passed, ErrorCode::NonPsdWeight,
            "levy_khintchine: A must be Hermitian positive semidefinite");
  }
  require(p.nu.m == 1, ErrorCode::DimensionMismatch,
          "levy_khintchine: nu must carry scalar weights");
  require(p.nu.dim == p.dim, ErrorCode::DimensionMismatch,
          "levy_khintchine: nu dimension mismatch");
  validate_measure(p.nu);
  for (const auto& y : p.nu.locations)
    require(y.norm() > kOriginTol, ErrorCode::AtomAtOrigin,
            "levy_khintchine: nu must not charge the origin");

  auto params = std::make_shared<LKParams>(p);
  ScalarSymbol F;
  F.dim = p.dim;
  F.provenance = "levy-khintchine";
  F.bounded = false;
  F.re_bounded_above = true;
  F.re_upper = p.alpha;  // the quadratic and jump parts are dissipative
  F.eval = [params](const RVector& x) {
    check_point_dim(params->dim, x, "levy_khintchine");
    Complex acc(params->alpha, params->beta.dot(x));
    const CVector xc = x.cast<Complex>();
    acc -= (xc.adjoint() * params->A * xc)(0, 0).real();
    for (int j = 0; j < params->nu.atoms(); ++j) {
      const RVector& y = params->nu.locations[j];
      const double w = params->nu.weights[j](0, 0).real();
      const double dot = x.dot(y);
      const double y2 = y.squaredNorm();
      const Complex jump(std::cos(dot) - 1.0, std::sin(dot) - dot / (1.0 + y2));
      acc += w * jump * ((1.0 + y2) / y2);
    }
    return acc;
  };
  return F;
}

MatrixSymbol lk_matrix(int m, const std::vector<LKParams>& entries) {
  require(m >= 1, ErrorCode::InvalidArgument, "lk_matrix: m >= 1");
  require(static_cast<int>(entries.size()) == m * m, ErrorCode::DimensionMismatch,
          "lk_matrix: expected m*m parameter sets");
  std::vector<ScalarSymbol> scalars;
  scalars.reserve(entries.size());
  for (const auto& p : entries) scalars.push_back(levy_khintchine(p));
  MatrixSymbol F = matrix_from_entries(m, std::move(scalars));
  F.provenance = "lk-matrix";
  F.bounded = false;
  return F;
}

MatrixSymbol hadamard_exp(const MatrixSymbol& F, double t) {
  require(std::isfinite(t), ErrorCode::NonFinite, "hadamard_exp: t must be finite");
  MatrixSymbol out;
  out.dim = F.dim;
  out.m = F.m;
  out.provenance = "hadamard-exp(" + F.provenance + ")";
  out.continuous = F.continuous;
  if (F.re_bounded_above && t >= 0.0) {
    out.bounded = true;
    out.sup_bound = F.m * std::exp(t * F.re_upper);
    out.re_bounded_above = true;
    out.re_upper = std::exp(t * F.re_upper);
  }
  auto inner = F.eval;
  const int m = F.m;
  out.eval = [inner, t, m](const RVector& x) {
    const CMatrix v = inner(x);
    CMatrix out_m(m, m);
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) out_m(j, k) = std::exp(t * v(j, k));
    return out_m;
  };
  return out;
}

ScalarSymbol exp_scalar(const ScalarSymbol& F, double t) {
  require(std::isfinite(t), ErrorCode::NonFinite, "exp_scalar: t must be finite");
  ScalarSymbol out;
  out.dim = F.dim;
  out.provenance = "exp(" + F.provenance + ")";
  out.continuous = F.continuous;
  if (F.re_bounded_above && t >= 0.0) {
    out.bounded = true;
    out.sup_bound = std::exp(t * F.re_upper);
    out.re_bounded_above = true;
    out.re_upper = std::exp(t * F.re_upper);
  }
  auto inner = F.eval;
  out.eval = [inner, t](const RVector& x) { return std::exp(t * inner(x)); };
  return out;
}

CMatrix expm(const CMatrix& A) {
  require(A.rows() == A.cols(), ErrorCode::DimensionMismatch, "expm: square input");
  require(all_finite(A), ErrorCode::NonFinite, "expm: non-finite entries");
  const int m = static_cast<int>(A.rows());

  bool diagonal = true;
  for (int j = 0; j < m && diagonal; ++j)
    for (int k = 0; k < m; ++k)
      if (j != k && A(j, k) != Complex(0.0, 0.0)) {
        diagonal = false;
        break;
      }
  if (diagonal) {
    CMatrix out = CMatrix::Zero(m, m);
    for (int j = 0; j < m; ++j) out(j, j) = std::exp(A(j, j));
    return out;
  }

  // Shift out the mean diagonal: exp(A) = e^mu exp(A - mu I). This keeps the
  // squaring phase well scaled when the diagonal dominates (heat-type
  // symbols) and cannot hurt otherwise.
  const Complex mu = A.trace() / static_cast<double>(m);
  CMatrix B = A;
  for (int j = 0; j < m; ++j) B(j, j) -= mu;

  const double norm = B.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.25) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
    B /= std::pow(2.0, squarings);
  }

  // Taylor core at ||B|| <= 0.25: terms decay faster than 4^-k / k!, so the
  // truncation remainder is far below 1e-14 once terms fall under 1e-17.
  CMatrix sum = CMatrix::Identity(m, m);
  CMatrix term = CMatrix::Identity(m, m);
  for (int k = 1; k <= 40; ++k) {
    term = (term * B) / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-17 * sum.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return std::exp(mu) * sum;
}

MatrixSymbol matrix_exp(const MatrixSymbol& F, double t) {
  require(std::isfinite(t), ErrorCode::NonFinite, "matrix_exp: t must be finite");
  MatrixSymbol out;
  out.dim = F.dim;
  out.m = F.m;
  out.provenance = "matrix-exp(" + F.provenance + ")";
  out.continuous = F.continuous;
  if (F.bounded) {
    out.bounded = true;
    out.sup_bound = std::exp(std::abs(t) * F.sup_bound);
    out.re_bounded_above = true;
    out.re_upper = out.sup_bound;
  }
  auto inner = F.eval;
  out.eval = [inner, t](const RVector& x) { return expm(CMatrix(t * inner(x))); };
  return out;
}

MatrixSymbol example_f0(const ScalarSymbol& a, double b) {
  require(std::isfinite(b), ErrorCode::NonFinite, "example_f0: b must be finite");
  MatrixSymbol F;
  F.dim = a.dim;
  F.m = 2;
  F.provenance = "example-f0";
  F.continuous = a.continuous;
  F.bounded = a.bounded;
  F.sup_bound = a.bounded ? a.sup_bound + std::abs(b) : 0.0;
  F.re_bounded_above = a.re_bounded_above;
  F.re_upper = std::max(a.re_upper, b);
  auto av = a.eval;
  F.eval = [av, b](const RVector& x) {
    const Complex axv = av(x);
    CMatrix out(2, 2);
    out(0, 0) = axv;
    out(1, 1) = axv;
    out(0, 1) = b;
    out(1, 0) = b;
    return out;
  };
  return F;
}

CMatrix exp_f0_factor(double b, double t) {
  CMatrix f(2, 2);
  const double ch = std::cosh(t * b);
  const double sh = std::sinh(t * b);
  f(0, 0) = ch;
  f(1, 1) = ch;
  f(0, 1) = sh;
  f(1, 0) = sh;
  return f;
}

MatrixSymbol exp_f0_closed_form(const ScalarSymbol& a, double b, double t) {
  require(std::isfinite(b) && std::isfinite(t), ErrorCode::NonFinite,
          "exp_f0_closed_form: b, t must be finite");
  MatrixSymbol F;
  F.dim = a.dim;
  F.m = 2;
  F.provenance = "exp-f0";
  F.continuous = a.continuous;
  if (a.re_bounded_above && t >= 0.0) {
    F.bounded = true;
    F.sup_bound = std::exp(t * a.re_upper + std::abs(t * b));
    F.re_bounded_above = true;
    F.re_upper = F.sup_bound;
  }
  const CMatrix factor = exp_f0_factor(b, t);
  auto av = a.eval;
  F.eval = [av, factor, t](const RVector& x) {
    const Complex scale = std::exp(t * av(x));
    return CMatrix(scale * factor);
  };
  return F;
}

}  // namespace fmpos
