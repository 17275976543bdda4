#include "gplda/model.hpp"

#include "gplda/error.hpp"

#include <cmath>
#include <unordered_map>

namespace gplda {

Matrix LabeledFunctionalDataset::class_means() const {
  Matrix means = Matrix::Zero(c(), p());
  for (Index i = 0; i < n(); ++i) means.row(labels[i]) += y.row(i);
  for (Index k = 0; k < c(); ++k) means.row(k) /= static_cast<double>(class_counts[k]);
  return means;
}

Matrix LabeledFunctionalDataset::pooled_scatter() const {
  const Matrix centred = y - expand_means(class_means(), labels);
  return symmetrize(centred.transpose() * centred) / static_cast<double>(n());
}

LabeledFunctionalDataset validate_dataset(const std::vector<std::vector<double>>& rows,
                                          const std::vector<std::string>& labels) {
  if (rows.empty()) throw Error(ErrorCode::Validation, "dataset has no rows");
  const auto p = static_cast<Index>(rows.front().size());
  Matrix y(static_cast<Index>(rows.size()), p);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Index>(rows[i].size()) != p) {
      throw Error(ErrorCode::Validation, "row " + std::to_string(i + 1) + " has " +
                                             std::to_string(rows[i].size()) +
                                             " values, expected " + std::to_string(p));
    }
    for (Index j = 0; j < p; ++j) y(static_cast<Index>(i), j) = rows[i][j];
  }
  return validate_dataset(y, labels);
}

LabeledFunctionalDataset validate_dataset(const Matrix& y, const std::vector<std::string>& labels) {
  const Index n = y.rows();
  if (n == 0 || y.cols() == 0) throw Error(ErrorCode::Validation, "dataset is empty");
  if (static_cast<Index>(labels.size()) != n) {
    throw Error(ErrorCode::Validation, "got " + std::to_string(labels.size()) +
                                           " labels for " + std::to_string(n) + " rows");
  }
  LabeledFunctionalDataset data;
  data.y = y;
  data.labels.resize(static_cast<std::size_t>(n));
  std::unordered_map<std::string, Index> index_of;
  for (Index i = 0; i < n; ++i) {
    if (!y.row(i).allFinite()) {
      throw Error(ErrorCode::Validation, "row " + std::to_string(i + 1) + " has a non-finite value");
    }
    const auto& name = labels[static_cast<std::size_t>(i)];
    auto [it, inserted] = index_of.try_emplace(name, data.c());
    if (inserted) {
      data.label_names.push_back(name);
      data.class_counts.push_back(0);
    }
    data.labels[static_cast<std::size_t>(i)] = it->second;
    ++data.class_counts[static_cast<std::size_t>(it->second)];
  }
  for (Index k = 0; k < data.c(); ++k) {
    if (data.class_counts[static_cast<std::size_t>(k)] == 0) {
      throw Error(ErrorCode::Validation, "class '" + data.label_names[k] + "' is empty");
    }
  }
  if (n < data.c() + 1) {
    throw Error(ErrorCode::Validation, "need at least c+1=" + std::to_string(data.c() + 1) +
                                           " rows for " + std::to_string(data.c()) +
                                           " classes, got " + std::to_string(n));
  }
  return data;
}

double HyperParams::rho(Index n, Index p) const {
  const double nn = static_cast<double>(n);
  return nn / (nn + nu(p) + static_cast<double>(p) + 1.0);
}

void HyperParams::validate() const {
  const double values[] = {a1, b1, a2, b2, a3, b3, delta};
  const char* names[] = {"a1", "b1", "a2", "b2", "a3", "b3", "delta"};
  for (int i = 0; i < 7; ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw Error(ErrorCode::InvalidHyperparameter,
                  std::string("hyperparameter ") + names[i] + " must be a positive finite number");
    }
  }
}

void FitConfig::validate() const {
  if (max_sweeps < 1) throw Error(ErrorCode::Validation, "max_sweeps must be >= 1");
  if (!(rel_tol > 0.0)) throw Error(ErrorCode::Validation, "rel_tol must be > 0");
  if (!(jitter_scale > 0.0)) throw Error(ErrorCode::Validation, "jitter_scale must be > 0");
}

double LogPosteriorTerms::total() const {
  return data_fidelity + noise_precision + latent + mean_prior + covariance_prior +
         alpha1_hyperprior + alpha2_hyperprior + noise_hyperprior;
}

void check_state_shape(const PosteriorState& state, const LabeledFunctionalDataset& data) {
  const Index n = data.n();
  const Index p = data.p();
  if (state.x.rows() != n || state.x.cols() != p || state.mu.rows() != data.c() ||
      state.mu.cols() != p || state.sigma_w.rows() != p || state.sigma_w.cols() != p) {
    throw Error(ErrorCode::DimensionMismatch, "posterior state does not match the dataset");
  }
}

Matrix expand_means(const Matrix& mu, const std::vector<Index>& labels) {
  Matrix out(static_cast<Index>(labels.size()), mu.cols());
  for (std::size_t i = 0; i < labels.size(); ++i) out.row(static_cast<Index>(i)) = mu.row(labels[i]);
  return out;
}

LogPosteriorTerms log_posterior_terms(const PosteriorState& state,
                                      const LabeledFunctionalDataset& data,
                                      const HyperParams& hyper, const SmoothingPenalty& penalty) {
  check_state_shape(state, data);
  const Index p = data.p();
  if (penalty.dim() != p) throw Error(ErrorCode::DimensionMismatch, "penalty dimension mismatch");

  const double n = static_cast<double>(data.n());
  const double pd = static_cast<double>(p);
  const double c = static_cast<double>(data.c());
  const double precision = 1.0 / state.sigma2;
  const double log_precision = std::log(precision);

  const SpdFactor factor(state.sigma_w);
  const double log_det = factor.log_det();

  LogPosteriorTerms t;
  t.data_fidelity = -(data.y - state.x).squaredNorm() * precision;
  t.noise_precision = n * pd * log_precision;

  // sum of quadratic forms = |L^{-1} (x - mu)^T|_F^2
  const Matrix dev = state.x - expand_means(state.mu, data.labels);
  t.latent = -factor.solve_lower(dev.transpose()).squaredNorm() - n * log_det;

  const double roughness = (state.mu * penalty.omega).cwiseProduct(state.mu).sum();
  t.mean_prior = -state.alpha1 * roughness + c * std::log(state.alpha1);

  const double trace = factor.solve(penalty.omega).trace();
  t.covariance_prior = -state.alpha2 * trace + pd * std::log(state.alpha2) -
                       (hyper.nu(p) + pd + 1.0) * log_det;

  t.alpha1_hyperprior = -2.0 * hyper.b1 * state.alpha1 + 2.0 * (hyper.a1 - 1.0) * std::log(state.alpha1);
  t.alpha2_hyperprior = -2.0 * hyper.b2 * state.alpha2 + 2.0 * (hyper.a2 - 1.0) * std::log(state.alpha2);
  t.noise_hyperprior = -2.0 * hyper.b3 * precision + 2.0 * (hyper.a3 - 1.0) * log_precision;
  return t;
}

double log_posterior(const PosteriorState& state, const LabeledFunctionalDataset& data,
                     const HyperParams& hyper, const SmoothingPenalty& penalty) {
  return log_posterior_terms(state, data, hyper, penalty).total();
}

}  // namespace gplda
