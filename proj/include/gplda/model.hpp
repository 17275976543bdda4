#pragma once

// Data model of the Gaussian-process discriminant: labelled curves, prior
// constants, the full unknown set and the unnormalized log-posterior.

#include "gplda/penalty_linalg.hpp"

#include <string>
#include <vector>

namespace gplda {

/// n curves of length p with class indices 0..c-1. `label_names[i]` is the
/// original label of class i; classes are numbered by first appearance.
struct LabeledFunctionalDataset {
  Matrix y;                   // n x p, one curve per row
  std::vector<Index> labels;  // n
  std::vector<std::string> label_names;
  std::vector<Index> class_counts;

  Index n() const { return y.rows(); }
  Index p() const { return y.cols(); }
  Index c() const { return static_cast<Index>(label_names.size()); }

  /// Class sample means, c x p.
  Matrix class_means() const;
  /// (1/n) sum over curves of (y - ybar_class)(y - ybar_class)^T.
  Matrix pooled_scatter() const;
};

/// Canonicalizes raw rows. Labels are remapped by first appearance. Rejects
/// ragged or non-finite rows (naming the 1-based row) and n < c + 1.
LabeledFunctionalDataset validate_dataset(const std::vector<std::vector<double>>& rows,
                                          const std::vector<std::string>& labels);

LabeledFunctionalDataset validate_dataset(const Matrix& y, const std::vector<std::string>& labels);

/// Gamma hyperprior constants for alpha1, alpha2 and 1/sigma^2, plus the
/// inverse-Wishart degree offset delta = nu - (p - 1).
struct HyperParams {
  double a1 = 1.0;
  double b1 = 20.0;
  double a2 = 1.0;
  double b2 = 100.0;
  double a3 = 1.0;
  double b3 = 1e-3;
  double delta = 2.0;

  double nu(Index p) const { return delta + static_cast<double>(p) - 1.0; }
  /// n / (n + nu + p + 1)
  double rho(Index n, Index p) const;
  void validate() const;

  bool operator==(const HyperParams&) const = default;
};

struct PosteriorState {
  Matrix x;        // n x p latent noise-free curves
  Matrix mu;       // c x p class mean functions
  Matrix sigma_w;  // p x p within-class covariance
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double sigma2 = 0.0;
};

struct FitConfig {
  int max_sweeps = 500;
  double rel_tol = 1e-6;
  double jitter_scale = 1e-8;
  SmoothingPenalty penalty;

  void validate() const;
};

/// The additive pieces of twice the log-posterior (normalizing constant 0).
struct LogPosteriorTerms {
  double data_fidelity = 0;        // -sum |y - x|^2 / sigma2
  double noise_precision = 0;      // n p ln(1/sigma2)
  double latent = 0;               // -sum (x-mu)' S^-1 (x-mu) - n ln|S|
  double mean_prior = 0;           // -alpha1 sum mu' O mu + c ln alpha1
  double covariance_prior = 0;     // -alpha2 tr(O S^-1) + p ln alpha2 - (nu+p+1) ln|S|
  double alpha1_hyperprior = 0;    // -2 b1 alpha1 + 2 (a1-1) ln alpha1
  double alpha2_hyperprior = 0;    // -2 b2 alpha2 + 2 (a2-1) ln alpha2
  double noise_hyperprior = 0;     // -2 b3/sigma2 + 2 (a3-1) ln(1/sigma2)

  double total() const;
};

LogPosteriorTerms log_posterior_terms(const PosteriorState& state,
                                      const LabeledFunctionalDataset& data,
                                      const HyperParams& hyper, const SmoothingPenalty& penalty);

/// Twice the log-posterior, up to the dropped constant.
double log_posterior(const PosteriorState& state, const LabeledFunctionalDataset& data,
                     const HyperParams& hyper, const SmoothingPenalty& penalty);

/// Throws DimensionMismatch when the state does not belong to `data`.
void check_state_shape(const PosteriorState& state, const LabeledFunctionalDataset& data);

/// Rows of `mu` expanded to one row per observation.
Matrix expand_means(const Matrix& mu, const std::vector<Index>& labels);

}  // namespace gplda
