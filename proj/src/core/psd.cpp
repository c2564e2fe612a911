#include "psd.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "rng.hpp"

namespace fmpos {

namespace {

double max_abs(const CMatrix& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

double hermitian_deviation(const CMatrix& M) {
  return max_abs(M - M.adjoint());
}

struct EigResult {
  double min_eig = 0.0;
  double scale = 0.0;  // spectral radius of the Hermitian part
  CVector min_vec;
};

EigResult hermitian_eig(const CMatrix& M) {
  const CMatrix H = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(H);
  require(solver.info() == Eigen::Success, ErrorCode::Internal,
          "hermitian eigensolver did not converge");
  EigResult r;
  const auto& ev = solver.eigenvalues();
  r.min_eig = ev(0);
  r.scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  r.min_vec = solver.eigenvectors().col(0);
  return r;
}

// Double centering of P x P blocks of size m: subtracts block row and column
// means and adds back the grand mean. Algebraically Q M Q with
// Q = (I - ones ones^T / P) (x) I_m, but constant shifts cancel exactly.
CMatrix center_blocks(const CMatrix& M, int P, int m) {
  CMatrix row_mean = CMatrix::Zero(P * m, m);
  CMatrix col_mean = CMatrix::Zero(m, P * m);
  CMatrix grand = CMatrix::Zero(m, m);
  for (int p = 0; p < P; ++p) {
    for (int q = 0; q < P; ++q) {
      row_mean.block(p * m, 0, m, m) += M.block(p * m, q * m, m, m);
      col_mean.block(0, q * m, m, m) += M.block(p * m, q * m, m, m);
      grand += M.block(p * m, q * m, m, m);
    }
  }
  row_mean /= static_cast<double>(P);
  col_mean /= static_cast<double>(P);
  grand /= static_cast<double>(P) * static_cast<double>(P);
  CMatrix C(P * m, P * m);
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < P; ++q)
      C.block(p * m, q * m, m, m) = M.block(p * m, q * m, m, m) -
                                    row_mean.block(p * m, 0, m, m) -
                                    col_mean.block(0, q * m, m, m) + grand;
  return C;
}

PsdVerdict cpsd_impl(const CMatrix& M, int m, double tol, double hsym_tol) {
  require(M.rows() == M.cols(), ErrorCode::DimensionMismatch,
          "is_cpsd: matrix must be square");
  require(all_finite(M), ErrorCode::NonFinite, "is_cpsd: non-finite entries");
  require(m >= 1 && M.rows() % m == 0, ErrorCode::DimensionMismatch,
          "is_cpsd_block: size not divisible by block order");
  const double dev = hermitian_deviation(M);
  require(dev <= hsym_tol * std::max(1.0, max_abs(M)), ErrorCode::NonHermitian,
          "is_cpsd: input is not Hermitian (deviation " + std::to_string(dev) + ")");

  const int P = static_cast<int>(M.rows()) / m;
  const CMatrix C = center_blocks(M, P, m);
  const CMatrix H = 0.5 * (C + C.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(H);
  require(solver.info() == Eigen::Success, ErrorCode::Internal,
          "is_cpsd: eigensolver did not converge");

  // Trivial directions: ones/sqrt(P) (x) e_j. An eigenvector belongs to the
  // constrained complement unless it is essentially one of these.
  const double inv_sqrt_p = 1.0 / std::sqrt(static_cast<double>(P));
  double scale = 0.0;
  for (int i = 0; i < H.rows(); ++i)
    scale = std::max(scale, std::abs(solver.eigenvalues()(i)));

  bool found = false;
  double min_eig = 0.0;
  CVector min_vec;
  for (int i = 0; i < H.rows(); ++i) {
    const CVector v = solver.eigenvectors().col(i);
    double trivial_overlap_sq = 0.0;
    for (int j = 0; j < m; ++j) {
      Complex dot(0.0, 0.0);
      for (int p = 0; p < P; ++p) dot += std::conj(v(p * m + j)) * inv_sqrt_p;
      trivial_overlap_sq += std::norm(dot);
    }
    if (trivial_overlap_sq > 0.99 * 0.99) continue;
    if (!found || solver.eigenvalues()(i) < min_eig) {
      found = true;
      min_eig = solver.eigenvalues()(i);
      min_vec = v;
    }
  }

  PsdVerdict verdict;
  verdict.tolerance = tol * std::max(1.0, scale);
  if (!found) {
    // P = 1: the constraint admits only c = 0; vacuously positive.
    verdict.passed = true;
    verdict.min_eigenvalue = 0.0;
    return verdict;
  }
  verdict.min_eigenvalue = min_eig;
  verdict.passed = min_eig >= -verdict.tolerance;
  if (!verdict.passed) {
    verdict.kind = FailureKind::NegativeEigenvalue;
    verdict.coefficients = min_vec;
    verdict.witness_value = min_eig;
    verdict.detail = "constrained quadratic form attains " + std::to_string(min_eig);
  }
  return verdict;
}

}  // namespace

const char* failure_kind_name(FailureKind k) {
  switch (k) {
    case FailureKind::None: return "none";
    case FailureKind::NegativeEigenvalue: return "negative-eigenvalue";
    case FailureKind::SymmetryViolation: return "symmetry-violation";
    case FailureKind::BoundViolation: return "bound-violation";
  }
  return "unknown";
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::NonPsdWeight: return "NonPsdWeight";
    case ErrorCode::AtomAtOrigin: return "AtomAtOrigin";
    case ErrorCode::AtomOutOfBox: return "AtomOutOfBox";
    case ErrorCode::UnderResolved: return "UnderResolved";
    case ErrorCode::UnboundedSymbol: return "UnboundedSymbol";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

double hermitian_min_eig(const CMatrix& M, double hsym_tol) {
  require(M.rows() == M.cols(), ErrorCode::DimensionMismatch,
          "hermitian_min_eig: matrix must be square");
  require(all_finite(M), ErrorCode::NonFinite, "hermitian_min_eig: non-finite entries");
  const double dev = hermitian_deviation(M);
  require(dev <= hsym_tol * std::max(1.0, max_abs(M)), ErrorCode::NonHermitian,
          "hermitian_min_eig: input is not Hermitian (deviation " +
              std::to_string(dev) + ")");
  return hermitian_eig(M).min_eig;
}

PsdVerdict is_psd(const CMatrix& M, double tol, double hsym_tol) {
  require(M.rows() == M.cols(), ErrorCode::DimensionMismatch,
          "is_psd: matrix must be square");
  require(all_finite(M), ErrorCode::NonFinite, "is_psd: non-finite entries");
  PsdVerdict verdict;
  const double dev = hermitian_deviation(M);
  const double sym_threshold = hsym_tol * std::max(1.0, max_abs(M));
  if (dev > sym_threshold) {
    verdict.passed = false;
    verdict.kind = FailureKind::SymmetryViolation;
    verdict.min_eigenvalue = -dev;
    verdict.tolerance = sym_threshold;
    verdict.witness_value = dev;
    verdict.detail = "matrix is not Hermitian";
    return verdict;
  }
  const EigResult eig = hermitian_eig(M);
  verdict.min_eigenvalue = eig.min_eig;
  verdict.tolerance = tol * std::max(1.0, eig.scale);
  verdict.passed = eig.min_eig >= -verdict.tolerance;
  if (!verdict.passed) {
    verdict.kind = FailureKind::NegativeEigenvalue;
    verdict.coefficients = eig.min_vec;
    verdict.witness_value = eig.min_eig;
    verdict.detail = "negative eigenvalue";
  }
  return verdict;
}

PsdVerdict is_cpsd(const CMatrix& M, double tol, double hsym_tol) {
  return cpsd_impl(M, 1, tol, hsym_tol);
}

PsdVerdict is_cpsd_block(const CMatrix& M, int m, double tol, double hsym_tol) {
  return cpsd_impl(M, m, tol, hsym_tol);
}

CMatrix gram(const ScalarSymbol& F, const PointSet& pts) {
  require(pts.size() >= 1, ErrorCode::InvalidArgument, "gram: empty point set");
  require(pts.dim == F.dim, ErrorCode::DimensionMismatch,
          "gram: point dimension does not match symbol");
  const int P = pts.size();
  CMatrix M(P, P);
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < P; ++q) M(p, q) = F.eval(pts.points[p] - pts.points[q]);
  return M;
}

CMatrix block_gram(const MatrixSymbol& F, const PointSet& pts) {
  require(pts.size() >= 1, ErrorCode::InvalidArgument, "block_gram: empty point set");
  require(pts.dim == F.dim, ErrorCode::DimensionMismatch,
          "block_gram: point dimension does not match symbol");
  const int P = pts.size();
  const int m = F.m;
  CMatrix M(P * m, P * m);
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < P; ++q)
      M.block(p * m, q * m, m, m) = F.eval(pts.points[p] - pts.points[q]);
  return M;
}

CMatrix hadamard(const CMatrix& A, const CMatrix& B) {
  require(A.rows() == B.rows() && A.cols() == B.cols(), ErrorCode::DimensionMismatch,
          "hadamard: shapes differ");
  return A.cwiseProduct(B);
}

Complex quadratic_form(const CMatrix& M, const CVector& c) {
  require(M.rows() == M.cols() && M.rows() == c.size(), ErrorCode::DimensionMismatch,
          "quadratic_form: shapes differ");
  return (c.adjoint() * M * c)(0, 0);
}

namespace {

PointSet draw_points(Rng& rng, int dim, int count, double radius) {
  PointSet pts;
  pts.dim = dim;
  pts.points.reserve(count);
  for (int i = 0; i < count; ++i) {
    RVector x(dim);
    for (int d = 0; d < dim; ++d) x(d) = rng.uniform(-radius, radius);
    pts.points.push_back(std::move(x));
  }
  return pts;
}

// Shared per-trial driver. `check_trial` sees the trial's points and fills
// the verdict on failure; returning true continues the sweep.
template <typename CheckTrial>
PsdVerdict run_trials(int dim, const SamplingPlan& plan, CheckTrial&& check_trial) {
  require(plan.trials >= 1, ErrorCode::InvalidArgument, "sampling plan: trials >= 1");
  require(plan.min_points >= 1 && plan.max_points >= plan.min_points,
          ErrorCode::InvalidArgument, "sampling plan: bad point count range");
  require(plan.radius > 0.0, ErrorCode::InvalidArgument, "sampling plan: radius > 0");
  PsdVerdict verdict;
  verdict.tolerance = plan.tol;
  for (int trial = 0; trial < plan.trials; ++trial) {
    Rng rng = Rng::substream(plan.seed, static_cast<uint64_t>(trial));
    const int count = rng.uniform_int(plan.min_points, plan.max_points);
    PointSet pts = draw_points(rng, dim, count, plan.radius);
    if (!check_trial(pts, verdict)) return verdict;
  }
  return verdict;
}

template <typename SymDev, typename Magnitude>
bool symmetry_scan(const PointSet& pts, const SamplingPlan& plan, SymDev&& sym_dev,
                   Magnitude&& magnitude, PsdVerdict& verdict) {
  for (const RVector& x : pts.points) {
    const double dev = sym_dev(x);
    const double threshold = plan.symmetry_tol * std::max(1.0, magnitude(x));
    if (dev > threshold) {
      verdict.passed = false;
      verdict.kind = FailureKind::SymmetryViolation;
      verdict.min_eigenvalue = -dev;
      verdict.tolerance = threshold;
      verdict.point = x;
      verdict.witness_value = dev;
      verdict.detail = "F(-x) deviates from the conjugate of F(x)";
      return false;
    }
  }
  return true;
}

template <typename Magnitude>
bool bound_scan(const PointSet& pts, double ref_magnitude, const SamplingPlan& plan,
                Magnitude&& magnitude, const char* detail, PsdVerdict& verdict) {
  const double threshold = plan.bound_tol * std::max(1.0, ref_magnitude);
  for (const RVector& x : pts.points) {
    const double mag = magnitude(x);
    if (mag > ref_magnitude + threshold) {
      verdict.passed = false;
      verdict.kind = FailureKind::BoundViolation;
      verdict.min_eigenvalue = -(mag - ref_magnitude);
      verdict.tolerance = threshold;
      verdict.point = x;
      verdict.witness_value = mag;
      verdict.witness_reference = ref_magnitude;
      verdict.detail = detail;
      return false;
    }
  }
  return true;
}

// Fold a passing trial's Gram result into the running function verdict so the
// reported numbers stay meaningful: worst min eigenvalue, widest threshold.
void fold_gram_pass(const PsdVerdict& inner, PsdVerdict& out) {
  out.min_eigenvalue = std::min(out.min_eigenvalue, inner.min_eigenvalue);
  out.tolerance = std::max(out.tolerance, inner.tolerance);
}

void adopt_gram_failure(const PointSet& pts, const PsdVerdict& inner, PsdVerdict& out) {
  out.passed = false;
  out.kind = inner.kind;
  out.min_eigenvalue = inner.min_eigenvalue;
  out.tolerance = inner.tolerance;
  out.points = pts;
  out.coefficients = inner.coefficients;
  out.witness_value = inner.witness_value;
  out.detail = inner.detail;
}

}  // namespace

PsdVerdict test_psd_function(const ScalarSymbol& F, const SamplingPlan& plan) {
  const RVector zero = RVector::Zero(F.dim);
  const Complex f0 = F.eval(zero);
  require(std::isfinite(f0.real()) && std::isfinite(f0.imag()), ErrorCode::NonFinite,
          "test_psd_function: F(0) is not finite");
  const double ref = std::abs(f0);
  return run_trials(F.dim, plan, [&](const PointSet& pts, PsdVerdict& verdict) {
    auto sym_dev = [&](const RVector& x) {
      return std::abs(F.eval(-x) - std::conj(F.eval(x)));
    };
    auto magnitude = [&](const RVector& x) { return std::abs(F.eval(x)); };
    if (!symmetry_scan(pts, plan, sym_dev, magnitude, verdict)) return false;
    const CMatrix M = gram(F, pts);
    require(all_finite(M), ErrorCode::NonFinite, "test_psd_function: non-finite Gram");
    const PsdVerdict inner = is_psd(M, plan.tol, plan.hsym_tol);
    if (!inner.passed) {
      adopt_gram_failure(pts, inner, verdict);
      return false;
    }
    // necessary consequence of positivity: |F| peaks at the origin
    if (!bound_scan(pts, ref, plan, magnitude, "|F(x)| exceeds |F(0)|", verdict))
      return false;
    if (F.bounded &&
        !bound_scan(pts, F.sup_bound, plan, magnitude,
                    "|F(x)| exceeds the declared bound", verdict))
      return false;
    fold_gram_pass(inner, verdict);
    return true;
  });
}

PsdVerdict test_psd_function(const MatrixSymbol& F, const SamplingPlan& plan) {
  const RVector zero = RVector::Zero(F.dim);
  const CMatrix f0 = F.eval(zero);
  require(all_finite(f0), ErrorCode::NonFinite, "test_psd_function: F(0) is not finite");
  const double ref = f0.operatorNorm();
  return run_trials(F.dim, plan, [&](const PointSet& pts, PsdVerdict& verdict) {
    auto sym_dev = [&](const RVector& x) {
      const CMatrix a = F.eval(-x);
      const CMatrix b = F.eval(x);
      return (a - b.adjoint()).cwiseAbs().maxCoeff();
    };
    auto magnitude = [&](const RVector& x) { return F.eval(x).operatorNorm(); };
    if (!symmetry_scan(pts, plan, sym_dev, magnitude, verdict)) return false;
    const CMatrix M = block_gram(F, pts);
    require(all_finite(M), ErrorCode::NonFinite, "test_psd_function: non-finite Gram");
    const PsdVerdict inner = is_psd(M, plan.tol, plan.hsym_tol);
    if (!inner.passed) {
      adopt_gram_failure(pts, inner, verdict);
      return false;
    }
    if (!bound_scan(pts, ref, plan, magnitude, "||F(x)|| exceeds ||F(0)||", verdict))
      return false;
    if (F.bounded &&
        !bound_scan(pts, F.sup_bound, plan, magnitude,
                    "||F(x)|| exceeds the declared bound", verdict))
      return false;
    fold_gram_pass(inner, verdict);
    return true;
  });
}

PsdVerdict test_cpsd_function(const ScalarSymbol& F, const SamplingPlan& plan) {
  const RVector zero = RVector::Zero(F.dim);
  const Complex f0 = F.eval(zero);
  require(std::isfinite(f0.real()) && std::isfinite(f0.imag()), ErrorCode::NonFinite,
          "test_cpsd_function: F(0) is not finite");
  return run_trials(F.dim, plan, [&](const PointSet& pts, PsdVerdict& verdict) {
    auto sym_dev = [&](const RVector& x) {
      return std::abs(F.eval(-x) - std::conj(F.eval(x)));
    };
    auto magnitude = [&](const RVector& x) { return std::abs(F.eval(x)); };
    if (!symmetry_scan(pts, plan, sym_dev, magnitude, verdict)) return false;
    const CMatrix M = gram(F, pts);
    require(all_finite(M), ErrorCode::NonFinite, "test_cpsd_function: non-finite Gram");
    // The pointwise symmetry check does not cover all pairwise differences;
    // gate the Gram's Hermiticity here instead of letting is_cpsd throw.
    const double dev = (M - M.adjoint()).cwiseAbs().maxCoeff();
    const double sym_threshold =
        plan.hsym_tol * std::max(1.0, M.cwiseAbs().maxCoeff());
    if (dev > sym_threshold) {
      verdict.passed = false;
      verdict.kind = FailureKind::SymmetryViolation;
      verdict.min_eigenvalue = -dev;
      verdict.tolerance = sym_threshold;
      verdict.points = pts;
      verdict.witness_value = dev;
      verdict.detail = "sampled Gram is not Hermitian";
      return false;
    }
    const PsdVerdict inner = is_cpsd(M, plan.tol, plan.hsym_tol);
    if (!inner.passed) {
      adopt_gram_failure(pts, inner, verdict);
      return false;
    }
    fold_gram_pass(inner, verdict);
    return true;
  });
}

}  // namespace fmpos
