#pragma once

// Finite-difference smoothing penalties and the dense symmetric kernels
// (Cholesky, generalized symmetric eigenproblem) used by every estimator.

#include <Eigen/Dense>

#include <string>
#include <string_view>

namespace gplda {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct DifferenceMatrix {
  Matrix entries;
  int order = 1;
  Index p = 0;
};

/// (p-1) x p operator with rows (-1, +1) on the band.
DifferenceMatrix build_first_difference(Index p);

/// (p-2) x p operator with rows (1, -2, 1) on the band.
DifferenceMatrix build_second_difference(Index p);

/// 5-point Laplacian on a rows x cols image flattened row-major. Neighbours
/// outside the image are replaced by the centre pixel (replicate boundary),
/// so constant images map to zero.
Matrix build_laplacian_stencil(Index rows, Index cols);

enum class PenaltyKind { FirstDiff, SecondDiff, Laplacian2D };

struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::FirstDiff;
  Index rows = 0;  // Laplacian2D only
  Index cols = 0;

  /// "d1", "d2" or "lap2d:RxC".
  std::string to_string() const;
  static PenaltySpec parse(std::string_view text);

  bool operator==(const PenaltySpec&) const = default;
};

struct SmoothingPenalty {
  Matrix omega;
  PenaltySpec spec;

  Index dim() const { return omega.rows(); }
};

/// Gram matrix M^T M of the operator selected by `spec`, for curves of
/// length p. For Laplacian2D, rows * cols must equal p.
SmoothingPenalty build_penalty(const PenaltySpec& spec, Index p);

/// Cholesky factor of a symmetric positive definite matrix. Throws
/// SingularMatrix when a pivot is non-positive or negligible relative to the
/// largest diagonal entry.
class SpdFactor {
 public:
  explicit SpdFactor(const Matrix& a);

  Matrix solve(const Matrix& b) const;
  Vector solve(const Vector& b) const;
  /// L^{-1} b, with A = L L^T.
  Matrix solve_lower(const Matrix& b) const;
  Matrix inverse() const;
  double log_det() const;
  Index dim() const { return llt_.rows(); }
  Matrix lower() const { return llt_.matrixL(); }

 private:
  Eigen::LLT<Matrix> llt_;
};

/// X with A X = B for symmetric positive definite A.
Matrix spd_solve(const Matrix& a, const Matrix& b);

struct GeneralizedEigen {
  Vector values;   // k, non-increasing
  Matrix vectors;  // p x k, column j pairs with values(j)
};

/// Top-k solutions of between * b = lambda * within * b. Each column is
/// scaled so b^T within b = 1 and signed so its largest-magnitude entry is
/// positive.
GeneralizedEigen generalized_eig_top(const Matrix& between, const Matrix& within, Index k);

/// Flips the sign of each column so that its largest-magnitude entry is
/// positive (first index wins on ties).
void fix_column_signs(Matrix& vectors);

/// 0.5 (A + A^T).
Matrix symmetrize(const Matrix& a);

}  // namespace gplda
