#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fmpos {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// Stable error identifiers; the C API maps these to fmpos_status values,
// the CLI maps them to exit code 2 (configuration / usage errors) or a
// failure report (math errors carry verdicts, not exceptions).
enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NonHermitian,
  NonFinite,
  NegativeWeight,
  NonPsdWeight,
  AtomAtOrigin,
  AtomOutOfBox,
  UnderResolved,
  UnboundedSymbol,
  QuadratureFailure,
  ConfigInvalid,
  Io,
  Internal,
};

const char* error_code_name(ErrorCode code);

class ToolkitError : public std::runtime_error {
 public:
  ToolkitError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw ToolkitError(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

// Finite list of sample locations in R^n, one Eigen vector per point.
struct PointSet {
  int dim = 1;
  std::vector<RVector> points;

  int size() const { return static_cast<int>(points.size()); }
  void push_back(RVector p) { points.push_back(std::move(p)); }
};

inline PointSet make_points_1d(std::initializer_list<double> xs) {
  PointSet ps;
  ps.dim = 1;
  for (double x : xs) {
    RVector v(1);
    v << x;
    ps.points.push_back(v);
  }
  return ps;
}

inline bool all_finite(const CMatrix& m) {
  return m.allFinite();
}

}  // namespace fmpos
