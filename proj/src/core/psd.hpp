#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "symbol.hpp"
#include "types.hpp"

namespace fmpos {

// How a verdict failed. SymmetryViolation is kept distinct from a negative
// eigenvalue: a function that is not conjugate-symmetric was never a
// candidate, and callers report it differently.
enum class FailureKind {
  None,
  NegativeEigenvalue,
  SymmetryViolation,
  BoundViolation,
};

const char* failure_kind_name(FailureKind k);

// Outcome of a positivity test. Invariant: passed <=> min_eigenvalue >=
// -tolerance, where tolerance is the effective absolute threshold that was
// applied. For symmetry/bound failures min_eigenvalue carries the negated
// deviation so the invariant holds for every kind.
struct PsdVerdict {
  bool passed = true;
  double min_eigenvalue = 0.0;
  double tolerance = 0.0;
  FailureKind kind = FailureKind::None;
  std::string detail;

  // Witness payload, populated on failure. For Gram failures: the sample
  // points and the coefficient vector achieving min_eigenvalue. For
  // symmetry/bound failures: the offending point and values.
  PointSet points;
  CVector coefficients;
  RVector point;
  double witness_value = 0.0;
  double witness_reference = 0.0;
};

// Randomized sampling policy for function-level tests. Every trial draws its
// point count uniformly in [min_points, max_points] and its points uniformly
// in [-radius, radius]^n from an independent substream of `seed`.
struct SamplingPlan {
  int trials = 50;
  int min_points = 2;
  int max_points = 12;
  double radius = 10.0;
  uint64_t seed = 1;
  double tol = 1e-9;           // relative PSD threshold
  double hsym_tol = 1e-10;     // Hermitian-deviation gate, relative
  double symmetry_tol = 1e-12; // F(-x) vs conj/adjoint F(x), relative
  double bound_tol = 1e-12;    // |F(x)| <= |F(0)| slack, relative
};

// Smallest eigenvalue of a Hermitian matrix. The input must be Hermitian to
// within hsym_tol * max|M|; the eigensolve runs on (M + M*)/2 so roundoff
// asymmetry cannot leak imaginary parts. Throws NonHermitian / NonFinite.
double hermitian_min_eig(const CMatrix& M, double hsym_tol = 1e-10);

// Positive semidefiniteness with a relative threshold:
// passed <=> Hermitian and min_eig >= -tol * max(1, spectral_scale).
// A non-Hermitian input yields a failed verdict (SymmetryViolation), not an
// exception; NonFinite still throws.
PsdVerdict is_psd(const CMatrix& M, double tol = 1e-9, double hsym_tol = 1e-10);

// Conditional positive semidefiniteness: the form is restricted to
// coefficient vectors with zero component sum. Implemented by double
// centering (equivalently Q M Q with Q = I - ones*ones^T/P) and discarding
// eigenmodes that lie in the trivial direction (overlap with the normalized
// all-ones vector > 0.99). Throws NonHermitian for asymmetric input.
PsdVerdict is_cpsd(const CMatrix& M, double tol = 1e-9, double hsym_tol = 1e-10);

// Block variant: M is (P*m) x (P*m) made of m x m blocks; the constraint is a
// zero BLOCK sum, i.e. coefficients in C^m summing to the zero vector. The
// trivial directions are ones (x) e_j, j = 1..m.
PsdVerdict is_cpsd_block(const CMatrix& M, int m, double tol = 1e-9,
                         double hsym_tol = 1e-10);

// Sampled Gram matrices: gram(F, pts)(p,q) = F(x_p - x_q); the block version
// places F(x_p - x_q) as the (p,q) block of an (P*m) x (P*m) matrix.
CMatrix gram(const ScalarSymbol& F, const PointSet& pts);
CMatrix block_gram(const MatrixSymbol& F, const PointSet& pts);

// Entrywise (Schur/Hadamard) product. Throws DimensionMismatch.
CMatrix hadamard(const CMatrix& A, const CMatrix& B);

// Randomized function-level positivity test: per trial checks conjugate
// symmetry F(-x) = conj F(x) (adjoint for matrices), the bound
// |F(x)| <= |F(0)| (operator norm for matrices), then the sampled Gram.
// Stops at the first failure and returns its witness.
PsdVerdict test_psd_function(const ScalarSymbol& F, const SamplingPlan& plan);
PsdVerdict test_psd_function(const MatrixSymbol& F, const SamplingPlan& plan);

// Conditional variant: symmetry precheck plus is_cpsd on sampled Grams. No
// boundedness requirement (conditionally positive functions may grow).
PsdVerdict test_cpsd_function(const ScalarSymbol& F, const SamplingPlan& plan);

// c* M c; used to revalidate witnesses independently of the eigensolver.
Complex quadratic_form(const CMatrix& M, const CVector& c);

}  // namespace fmpos
