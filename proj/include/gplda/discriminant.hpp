#pragma once

// Fisher discriminant directions from fitted parameters, the baseline
// estimators (PDA, plain LDA, PCA followed by LDA) and nearest-centroid
// classification in the whitened projected space.

#include "gplda/map_estimator.hpp"
#include "gplda/model.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gplda {

enum class Method { GPLDA, PDA, MLE_LDA, PCA_LDA };

/// "gplda", "pda", "mle", "pca-lda"
std::string method_name(Method m);
Method parse_method(std::string_view text);
/// "GPLDA", "PDA", "MLE_LDA", "PCA_LDA"
std::string method_tag(Method m);
Method parse_method_tag(std::string_view text);

struct DiscriminantModel {
  Method method = Method::GPLDA;
  Matrix directions;           // k x p, rows are within_cov-orthonormal
  Matrix projected_centroids;  // c x k
  std::vector<std::string> class_labels;
  Matrix within_cov;           // p x p
  std::optional<PenaltySpec> penalty;
  std::vector<std::string> warnings;

  Index k() const { return directions.rows(); }
  Index p() const { return directions.cols(); }
  Index c() const { return projected_centroids.rows(); }
};

/// sum_i (mu_i - mubar)(mu_i - mubar)^T with mubar the unweighted mean of the rows.
Matrix between_covariance(const Matrix& mu);

/// Builds a model from class means and a within covariance: directions from
/// the generalized eigenproblem, centroids are the projected means. k <= 0
/// selects c - 1; larger requests are clamped with a warning.
DiscriminantModel fisher_model(Method method, const Matrix& mu, const Matrix& within,
                               std::vector<std::string> labels, Index k);

DiscriminantModel gplda_directions(const PosteriorState& state,
                                   std::vector<std::string> labels, Index k);

/// Directions for between(ybar) against S_yy + alpha * Omega + jitter.
DiscriminantModel pda_fit(const LabeledFunctionalDataset& data, const SmoothingPenalty& penalty,
                          double alpha, Index k, double jitter_scale = 1e-8);

/// Classical Fisher directions from the maximum-likelihood means and pooled
/// scatter, with ridge_scale * (tr/p) * I added. A negative ridge_scale
/// selects the default (1e-6 when p >= n, else 0).
DiscriminantModel mle_lda_fit(const LabeledFunctionalDataset& data, Index k, double ridge_scale = -1.0);

/// Projects onto the top-q eigenvectors of the total covariance, fits plain
/// LDA there and maps the directions back to curve space.
DiscriminantModel pca_lda_fit(const LabeledFunctionalDataset& data, Index q, Index k,
                              double ridge_scale = -1.0);

/// 0-based class index of the nearest projected centroid; ties go to the
/// lowest index.
Index predict(const DiscriminantModel& model, const Vector& curve);
std::vector<Index> predict(const DiscriminantModel& model, const Matrix& curves);

double error_rate(std::span<const Index> predicted, std::span<const Index> truth);

/// Stratified K-fold choice of the PDA smoothing weight over `grid`. The
/// lowest mean validation error wins; ties go to the larger alpha.
double select_pda_alpha(const LabeledFunctionalDataset& data, const SmoothingPenalty& penalty,
                        std::span<const double> grid, int folds, double jitter_scale = 1e-8);

/// Default PDA search grid: 10^-3 .. 10^5 in half-decade steps.
std::vector<double> default_alpha_grid();

/// Keeps rows whose index is selected.
LabeledFunctionalDataset subset(const LabeledFunctionalDataset& data, std::span<const Index> rows);

}  // namespace gplda
