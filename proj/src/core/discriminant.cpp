#include "gplda/discriminant.hpp"

#include "gplda/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace gplda {

namespace {

double default_ridge(const LabeledFunctionalDataset& data, double ridge_scale) {
  if (ridge_scale >= 0.0) return ridge_scale;
  return data.p() >= data.n() ? 1e-6 : 0.0;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::GPLDA: return "gplda";
    case Method::PDA: return "pda";
    case Method::MLE_LDA: return "mle";
    case Method::PCA_LDA: return "pca-lda";
  }
  return "gplda";
}

Method parse_method(std::string_view text) {
  for (Method m : {Method::GPLDA, Method::PDA, Method::MLE_LDA, Method::PCA_LDA}) {
    if (text == method_name(m)) return m;
  }
  throw Error(ErrorCode::Parse, "unknown method '" + std::string(text) +
                                    "' (expected gplda, pda, mle or pca-lda)");
}

std::string method_tag(Method m) {
  switch (m) {
    case Method::GPLDA: return "GPLDA";
    case Method::PDA: return "PDA";
    case Method::MLE_LDA: return "MLE_LDA";
    case Method::PCA_LDA: return "PCA_LDA";
  }
  return "GPLDA";
}

Method parse_method_tag(std::string_view text) {
  for (Method m : {Method::GPLDA, Method::PDA, Method::MLE_LDA, Method::PCA_LDA}) {
    if (text == method_tag(m)) return m;
  }
  throw Error(ErrorCode::Parse, "unknown method tag '" + std::string(text) + "'");
}

Matrix between_covariance(const Matrix& mu) {
  if (mu.rows() < 2) {
    throw Error(ErrorCode::InvalidInput, "between covariance needs at least two classes");
  }
  const Eigen::RowVectorXd centre = mu.colwise().mean();
  const Matrix dev = mu.rowwise() - centre;
  return symmetrize(dev.transpose() * dev);
}

DiscriminantModel fisher_model(Method method, const Matrix& mu, const Matrix& within,
                               std::vector<std::string> labels, Index k) {
  DiscriminantModel model;
  model.method = method;
  model.class_labels = std::move(labels);
  model.within_cov = within;

  const Index max_rank = mu.rows() - 1;
  if (k <= 0) {
    k = max_rank;
  } else if (k > max_rank) {
    model.warnings.push_back("requested k=" + std::to_string(k) + " clamped to c-1=" +
                             std::to_string(max_rank));
    k = max_rank;
  }
  k = std::min(k, mu.cols());
  const auto eig = generalized_eig_top(between_covariance(mu), within, k);
  model.directions = eig.vectors.transpose();
  model.projected_centroids = mu * eig.vectors;
  return model;
}

DiscriminantModel gplda_directions(const PosteriorState& state, std::vector<std::string> labels,
                                   Index k) {
  return fisher_model(Method::GPLDA, state.mu, state.sigma_w, std::move(labels), k);
}

DiscriminantModel pda_fit(const LabeledFunctionalDataset& data, const SmoothingPenalty& penalty,
                          double alpha, Index k, double jitter_scale) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::InvalidInput, "PDA alpha must be non-negative");
  if (penalty.dim() != data.p()) {
    throw Error(ErrorCode::DimensionMismatch, "penalty dimension does not match the curves");
  }
  Matrix within = data.pooled_scatter() + alpha * penalty.omega;
  if (jitter_scale > 0.0) {
    const Index p = data.p();
    within += jitter_scale * (within.trace() / static_cast<double>(p)) * Matrix::Identity(p, p);
  }
  auto model = fisher_model(Method::PDA, data.class_means(), within, data.label_names, k);
  model.penalty = penalty.spec;
  return model;
}

DiscriminantModel mle_lda_fit(const LabeledFunctionalDataset& data, Index k, double ridge_scale) {
  const double ridge = default_ridge(data, ridge_scale);
  Matrix within = data.pooled_scatter();
  if (ridge > 0.0) {
    const Index p = data.p();
    within += ridge * (within.trace() / static_cast<double>(p)) * Matrix::Identity(p, p);
  }
  return fisher_model(Method::MLE_LDA, data.class_means(), within, data.label_names, k);
}

DiscriminantModel pca_lda_fit(const LabeledFunctionalDataset& data, Index q, Index k,
                              double ridge_scale) {
  const Index p = data.p();
  if (q < 1 || q > std::min(data.n(), p)) {
    throw Error(ErrorCode::InvalidInput, "PCA components q must lie in [1, min(n, p)]");
  }
  const Eigen::RowVectorXd grand = data.y.colwise().mean();
  const Matrix centred = data.y.rowwise() - grand;
  const Matrix total = symmetrize(centred.transpose() * centred) / static_cast<double>(data.n());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(total);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericFailure, "PCA eigensolver did not converge");
  }
  Matrix basis = eig.eigenvectors().rightCols(q).rowwise().reverse();  // p x q, leading first
  fix_column_signs(basis);

  LabeledFunctionalDataset reduced = data;
  reduced.y = data.y * basis;
  const double ridge = default_ridge(data, ridge_scale);
  const auto inner = mle_lda_fit(reduced, k, ridge);

  DiscriminantModel model;
  model.method = Method::PCA_LDA;
  model.class_labels = data.label_names;
  model.warnings = inner.warnings;
  model.directions = inner.directions * basis.transpose();
  model.projected_centroids = inner.projected_centroids;
  // the q-space within covariance lifted back; directions stay orthonormal in it
  const Matrix lifted_ridge = inner.within_cov - reduced.pooled_scatter();
  model.within_cov = symmetrize(data.pooled_scatter() + basis * lifted_ridge * basis.transpose());
  return model;
}

Index predict(const DiscriminantModel& model, const Vector& curve) {
  if (curve.size() != model.p()) {
    throw Error(ErrorCode::DimensionMismatch, "curve has " + std::to_string(curve.size()) +
                                                  " points, model expects " +
                                                  std::to_string(model.p()));
  }
  const Vector z = model.directions * curve;
  Index best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < model.c(); ++i) {
    const double d = (model.projected_centroids.row(i).transpose() - z).squaredNorm();
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return best;
}

std::vector<Index> predict(const DiscriminantModel& model, const Matrix& curves) {
  if (curves.cols() != model.p()) {
    throw Error(ErrorCode::DimensionMismatch, "curves have " + std::to_string(curves.cols()) +
                                                  " points, model expects " +
                                                  std::to_string(model.p()));
  }
  std::vector<Index> out(static_cast<std::size_t>(curves.rows()));
  for (Index i = 0; i < curves.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = predict(model, Vector(curves.row(i).transpose()));
  }
  return out;
}

double error_rate(std::span<const Index> predicted, std::span<const Index> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::DimensionMismatch, "prediction and truth lengths differ");
  }
  if (predicted.empty()) return 0.0;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) wrong += predicted[i] != truth[i];
  return static_cast<double>(wrong) / static_cast<double>(predicted.size());
}

LabeledFunctionalDataset subset(const LabeledFunctionalDataset& data, std::span<const Index> rows) {
  LabeledFunctionalDataset out;
  out.y.resize(static_cast<Index>(rows.size()), data.p());
  out.label_names = data.label_names;
  out.class_counts.assign(data.label_names.size(), 0);
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Index r = rows[i];
    out.y.row(static_cast<Index>(i)) = data.y.row(r);
    const Index label = data.labels[static_cast<std::size_t>(r)];
    out.labels.push_back(label);
    ++out.class_counts[static_cast<std::size_t>(label)];
  }
  return out;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int e = -6; e <= 10; ++e) grid.push_back(std::pow(10.0, 0.5 * e));
  return grid;
}

double select_pda_alpha(const LabeledFunctionalDataset& data, const SmoothingPenalty& penalty,
                        std::span<const double> grid, int folds, double jitter_scale) {
  if (grid.empty()) throw Error(ErrorCode::InvalidInput, "empty PDA alpha grid");
  const Index smallest = *std::min_element(data.class_counts.begin(), data.class_counts.end());
  folds = static_cast<int>(std::min<Index>(folds, smallest));
  if (folds < 2) return grid.back();

  // fold of each row: its rank within its class, modulo folds
  std::vector<int> fold(static_cast<std::size_t>(data.n()));
  std::vector<Index> seen(data.label_names.size(), 0);
  for (Index i = 0; i < data.n(); ++i) {
    const auto label = static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)]);
    fold[static_cast<std::size_t>(i)] = static_cast<int>(seen[label]++ % folds);
  }

  std::vector<double> errors(grid.size(), 0.0);
  for (int f = 0; f < folds; ++f) {
    std::vector<Index> train_rows, valid_rows;
    for (Index i = 0; i < data.n(); ++i) {
      (fold[static_cast<std::size_t>(i)] == f ? valid_rows : train_rows).push_back(i);
    }
    const auto train = subset(data, train_rows);
    const auto valid = subset(data, valid_rows);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      try {
        const auto model = pda_fit(train, penalty, grid[g], 0, jitter_scale);
        const auto pred = predict(model, valid.y);
        errors[g] += error_rate(pred, valid.labels);
      } catch (const Error&) {
        errors[g] += 1.0;
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (errors[g] <= errors[best]) best = g;
  }
  return grid[best];
}

}  // namespace gplda
