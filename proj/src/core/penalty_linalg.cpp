#include "gplda/penalty_linalg.hpp"

#include "gplda/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <charconv>
#include <cmath>

namespace gplda {

namespace {

// Pivots below this fraction of the largest diagonal entry are treated as
// rank deficiency; roundoff on an exactly singular Gram matrix lands near
// p * eps, far below it.
constexpr double kSingularPivot = 1e-12;

Index parse_positive(std::string_view text, std::string_view whole) {
  Index value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || value <= 0) {
    throw Error(ErrorCode::Parse, "bad penalty descriptor '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

DifferenceMatrix build_first_difference(Index p) {
  if (p < 2) {
    throw Error(ErrorCode::InvalidDimension,
                "first difference needs p >= 2, got " + std::to_string(p));
  }
  DifferenceMatrix d{Matrix::Zero(p - 1, p), 1, p};
  for (Index r = 0; r < p - 1; ++r) {
    d.entries(r, r) = -1.0;
    d.entries(r, r + 1) = 1.0;
  }
  return d;
}

DifferenceMatrix build_second_difference(Index p) {
  if (p < 3) {
    throw Error(ErrorCode::InvalidDimension,
                "second difference needs p >= 3, got " + std::to_string(p));
  }
  DifferenceMatrix d{Matrix::Zero(p - 2, p), 2, p};
  for (Index r = 0; r < p - 2; ++r) {
    d.entries(r, r) = 1.0;
    d.entries(r, r + 1) = -2.0;
    d.entries(r, r + 2) = 1.0;
  }
  return d;
}

Matrix build_laplacian_stencil(Index rows, Index cols) {
  if (rows < 1 || cols < 1) {
    throw Error(ErrorCode::InvalidDimension, "laplacian needs a non-empty image");
  }
  const Index p = rows * cols;
  Matrix lap = Matrix::Zero(p, p);
  auto at = [cols](Index r, Index c) { return r * cols + c; };
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const Index centre = at(r, c);
      const Index neighbours[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
      for (const auto& nb : neighbours) {
        const bool inside = nb[0] >= 0 && nb[0] < rows && nb[1] >= 0 && nb[1] < cols;
        // replicate: an outside neighbour reads the centre, cancelling one -1
        if (inside) {
          lap(centre, at(nb[0], nb[1])) += 1.0;
          lap(centre, centre) -= 1.0;
        }
      }
    }
  }
  return lap;
}

std::string PenaltySpec::to_string() const {
  switch (kind) {
    case PenaltyKind::FirstDiff:
      return "d1";
    case PenaltyKind::SecondDiff:
      return "d2";
    case PenaltyKind::Laplacian2D:
      return "lap2d:" + std::to_string(rows) + "x" + std::to_string(cols);
  }
  return "d1";
}

PenaltySpec PenaltySpec::parse(std::string_view text) {
  if (text == "d1") return {PenaltyKind::FirstDiff, 0, 0};
  if (text == "d2") return {PenaltyKind::SecondDiff, 0, 0};
  constexpr std::string_view prefix = "lap2d:";
  if (text.substr(0, prefix.size()) == prefix) {
    const auto dims = text.substr(prefix.size());
    const auto x = dims.find('x');
    if (x == std::string_view::npos) {
      throw Error(ErrorCode::Parse, "bad penalty descriptor '" + std::string(text) + "'");
    }
    return {PenaltyKind::Laplacian2D, parse_positive(dims.substr(0, x), text),
            parse_positive(dims.substr(x + 1), text)};
  }
  throw Error(ErrorCode::Parse, "unknown penalty '" + std::string(text) +
                                    "' (expected d1, d2 or lap2d:ROWSxCOLS)");
}

SmoothingPenalty build_penalty(const PenaltySpec& spec, Index p) {
  Matrix op;
  switch (spec.kind) {
    case PenaltyKind::FirstDiff:
      op = build_first_difference(p).entries;
      break;
    case PenaltyKind::SecondDiff:
      op = build_second_difference(p).entries;
      break;
    case PenaltyKind::Laplacian2D:
      if (spec.rows * spec.cols != p) {
        throw Error(ErrorCode::InvalidDimension,
                    "laplacian grid " + std::to_string(spec.rows) + "x" +
                        std::to_string(spec.cols) + " does not factor p=" + std::to_string(p));
      }
      op = build_laplacian_stencil(spec.rows, spec.cols);
      break;
  }
  Matrix omega = op.transpose() * op;
  return {symmetrize(omega), spec};
}

SpdFactor::SpdFactor(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "factorization needs a non-empty square matrix");
  }
  if (!a.allFinite()) {
    throw Error(ErrorCode::SingularMatrix, "matrix has non-finite entries");
  }
  llt_.compute(a);
  if (llt_.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularMatrix, "matrix is not positive definite");
  }
  const double scale = a.diagonal().cwiseAbs().maxCoeff();
  const Vector pivots = llt_.matrixLLT().diagonal().cwiseAbs2();
  if (!(pivots.minCoeff() > kSingularPivot * scale)) {
    throw Error(ErrorCode::SingularMatrix, "matrix is numerically singular");
  }
}

Matrix SpdFactor::solve(const Matrix& b) const { return llt_.solve(b); }

Vector SpdFactor::solve(const Vector& b) const { return llt_.solve(b); }

Matrix SpdFactor::solve_lower(const Matrix& b) const {
  return llt_.matrixL().solve(b);
}

Matrix SpdFactor::inverse() const {
  return symmetrize(llt_.solve(Matrix::Identity(dim(), dim())));
}

double SpdFactor::log_det() const {
  return 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

Matrix spd_solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "spd_solve: row count mismatch");
  }
  return SpdFactor(a).solve(b);
}

void fix_column_signs(Matrix& vectors) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    Index arg = 0;
    vectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, j) < 0) vectors.col(j) = -vectors.col(j);
  }
}

GeneralizedEigen generalized_eig_top(const Matrix& between, const Matrix& within, Index k) {
  const Index p = within.rows();
  if (between.rows() != p || between.cols() != p || within.cols() != p) {
    throw Error(ErrorCode::DimensionMismatch, "generalized eigenproblem: shape mismatch");
  }
  if (k < 1 || k > p) {
    throw Error(ErrorCode::InvalidInput,
                "requested " + std::to_string(k) + " directions in dimension " + std::to_string(p));
  }
  const SpdFactor factor(within);
  if (between.norm() <= 1e-12 * within.norm()) {
    throw Error(ErrorCode::DegenerateBetween, "between-class covariance is numerically zero");
  }

  // L^{-1} B L^{-T}
  const Matrix half = factor.solve_lower(between);
  const Matrix whitened = symmetrize(factor.solve_lower(half.transpose()));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(whitened);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericFailure, "symmetric eigensolver did not converge");
  }

  // eigenvalues ascend; take the tail in reverse
  GeneralizedEigen out{Vector(k), Matrix(p, k)};
  const Matrix lower = factor.lower();
  for (Index j = 0; j < k; ++j) {
    const Index src = p - 1 - j;
    out.values(j) = eig.eigenvalues()(src);
    out.vectors.col(j) = lower.transpose().triangularView<Eigen::Upper>().solve(
        eig.eigenvectors().col(src));
  }
  fix_column_signs(out.vectors);
  return out;
}

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

}  // namespace gplda
