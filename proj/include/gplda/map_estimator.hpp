#pragma once

// Closed-form block maximizers of the log-posterior and the backfitting loop
// that cycles through them.

#include "gplda/model.hpp"

#include <vector>

namespace gplda {

double update_alpha1(const Matrix& mu, const SmoothingPenalty& penalty, const HyperParams& hyper);
double update_alpha2(const Matrix& sigma_w, const SmoothingPenalty& penalty, const HyperParams& hyper);
/// (2 b3 + sum |y - x|^2) / (2 a3 + n p - 2), the exact maximizer of the
/// log-posterior in 1/sigma2.
double update_sigma2(const Matrix& x, const LabeledFunctionalDataset& data, const HyperParams& hyper);
/// Row-wise (S + sigma2 I)^{-1} (S y + sigma2 mu_class).
Matrix update_x(const LabeledFunctionalDataset& data, const Matrix& mu, const Matrix& sigma_w,
                double sigma2);
/// (I + alpha1/n_i S O)^{-1} xbar_i for each class.
Matrix update_mu(const Matrix& x, const LabeledFunctionalDataset& data, const Matrix& sigma_w,
                 double alpha1, const SmoothingPenalty& penalty);
/// rho S_xx + (rho/n) alpha2 O, symmetrized, plus jitter_scale (tr/p) I.
Matrix update_sigma_w(const Matrix& x, const Matrix& mu, const LabeledFunctionalDataset& data,
                      double alpha2, const SmoothingPenalty& penalty, const HyperParams& hyper,
                      double jitter_scale);

/// Adds jitter_scale * (tr(a)/p) * I.
Matrix add_jitter(const Matrix& a, double jitter_scale);

/// Gradient of twice the log-posterior with respect to every block. The
/// noise block is differentiated in the precision 1/sigma2.
struct LogPosteriorGradient {
  double alpha1 = 0;
  double alpha2 = 0;
  double precision = 0;
  Matrix x;        // n x p
  Matrix mu;       // c x p
  Matrix sigma_w;  // p x p, symmetric
};

LogPosteriorGradient log_posterior_gradient(const PosteriorState& state,
                                            const LabeledFunctionalDataset& data,
                                            const HyperParams& hyper,
                                            const SmoothingPenalty& penalty);

struct FirstOrderResiduals {
  double alpha1 = 0;
  double alpha2 = 0;
  double precision = 0;
  double x = 0;        // max over curves of the row norm
  double mu = 0;       // max over classes of the row norm
  double sigma_w = 0;  // Frobenius

  double max() const;
};

FirstOrderResiduals first_order_residuals(const PosteriorState& state,
                                          const LabeledFunctionalDataset& data,
                                          const HyperParams& hyper,
                                          const SmoothingPenalty& penalty);

struct FitTrace {
  int sweeps_run = 0;
  /// Entry 0 is the initial state, entry s the state after sweep s.
  std::vector<double> log_posterior_per_sweep;
  /// max block relative change of each sweep
  std::vector<double> max_change_per_sweep;
  FirstOrderResiduals final_residuals;
  bool converged = false;
};

struct FitResult {
  PosteriorState state;
  FitTrace trace;
};

/// Starting point of the backfitting loop: x = y, mu = class means,
/// alpha1 = a1/b1, alpha2 = a2/b2, sigma2 = tr(S_yy)/p and
/// Sigma_w = rho S_yy + (rho/n) alpha2 O + jitter.
PosteriorState initial_state(const LabeledFunctionalDataset& data, const HyperParams& hyper,
                             const FitConfig& config);

/// One backfitting sweep in the order alpha1, alpha2, sigma2, x, mu, Sigma_w.
PosteriorState sweep(const PosteriorState& state, const LabeledFunctionalDataset& data,
                     const HyperParams& hyper, const FitConfig& config);

/// max over blocks of |new - old| / |old| (Frobenius norms).
double max_relative_change(const PosteriorState& before, const PosteriorState& after);

FitResult fit(const LabeledFunctionalDataset& data, const HyperParams& hyper, const FitConfig& config);

/// Continues backfitting from `start` instead of the default initialization.
FitResult fit_from(const PosteriorState& start, const LabeledFunctionalDataset& data,
                   const HyperParams& hyper, const FitConfig& config);

}  // namespace gplda
