#include "gplda/map_estimator.hpp"

#include "gplda/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gplda {

namespace {

Matrix scatter(const Matrix& x, const Matrix& mu, const std::vector<Index>& labels) {
  const Matrix dev = x - expand_means(mu, labels);
  return symmetrize(dev.transpose() * dev);
}

double relative_step(double step, double size) {
  if (step == 0.0) return 0.0;
  return size > 0.0 ? step / size : std::numeric_limits<double>::infinity();
}

double block_change(const Matrix& before, const Matrix& after) {
  return relative_step((after - before).norm(), before.norm());
}

double block_change(double before, double after) {
  return relative_step(std::abs(after - before), std::abs(before));
}

bool finite(const PosteriorState& s) {
  return s.x.allFinite() && s.mu.allFinite() && s.sigma_w.allFinite() &&
         std::isfinite(s.alpha1) && std::isfinite(s.alpha2) && std::isfinite(s.sigma2) &&
         s.alpha1 > 0 && s.alpha2 > 0 && s.sigma2 > 0;
}

}  // namespace

double update_alpha1(const Matrix& mu, const SmoothingPenalty& penalty, const HyperParams& hyper) {
  const double numerator = 2.0 * hyper.a1 + static_cast<double>(mu.rows()) - 2.0;
  if (!(numerator > 0.0)) {
    throw Error(ErrorCode::InvalidHyperparameter, "alpha1 update needs 2 a1 + c > 2");
  }
  const double roughness = (mu * penalty.omega).cwiseProduct(mu).sum();
  return numerator / (2.0 * hyper.b1 + roughness);
}

double update_alpha2(const Matrix& sigma_w, const SmoothingPenalty& penalty, const HyperParams& hyper) {
  const double numerator = 2.0 * hyper.a2 + static_cast<double>(sigma_w.rows()) - 2.0;
  if (!(numerator > 0.0)) {
    throw Error(ErrorCode::InvalidHyperparameter, "alpha2 update needs 2 a2 + p > 2");
  }
  const double trace = SpdFactor(sigma_w).solve(penalty.omega).trace();
  return numerator / (2.0 * hyper.b2 + trace);
}

double update_sigma2(const Matrix& x, const LabeledFunctionalDataset& data, const HyperParams& hyper) {
  if (x.rows() != data.n() || x.cols() != data.p()) {
    throw Error(ErrorCode::DimensionMismatch, "latent curves do not match the dataset");
  }
  const double denominator =
      2.0 * hyper.a3 + static_cast<double>(data.n()) * static_cast<double>(data.p()) - 2.0;
  if (!(denominator > 0.0)) {
    throw Error(ErrorCode::InvalidHyperparameter, "sigma2 update needs 2 a3 + n p > 2");
  }
  return (2.0 * hyper.b3 + (data.y - x).squaredNorm()) / denominator;
}

Matrix update_x(const LabeledFunctionalDataset& data, const Matrix& mu, const Matrix& sigma_w,
                double sigma2) {
  const Index p = data.p();
  if (sigma_w.rows() != p || mu.cols() != p) {
    throw Error(ErrorCode::DimensionMismatch, "update_x: shape mismatch");
  }
  if (sigma2 == 0.0) return data.y;
  const Matrix system = sigma_w + sigma2 * Matrix::Identity(p, p);
  const Matrix rhs = sigma_w * data.y.transpose() + sigma2 * expand_means(mu, data.labels).transpose();
  return SpdFactor(system).solve(rhs).transpose();
}

Matrix update_mu(const Matrix& x, const LabeledFunctionalDataset& data, const Matrix& sigma_w,
                 double alpha1, const SmoothingPenalty& penalty) {
  const Index p = data.p();
  Matrix sums = Matrix::Zero(data.c(), p);
  for (Index i = 0; i < data.n(); ++i) sums.row(data.labels[static_cast<std::size_t>(i)]) += x.row(i);

  const Matrix coupling = sigma_w * penalty.omega;
  Matrix mu(data.c(), p);
  for (Index k = 0; k < data.c(); ++k) {
    const double nk = static_cast<double>(data.class_counts[static_cast<std::size_t>(k)]);
    const Vector xbar = sums.row(k).transpose() / nk;
    const Matrix system = Matrix::Identity(p, p) + (alpha1 / nk) * coupling;
    Eigen::PartialPivLU<Matrix> lu(system);
    if (!(std::abs(lu.determinant()) > 0.0)) {
      throw Error(ErrorCode::SingularMatrix, "mean update system is singular");
    }
    mu.row(k) = lu.solve(xbar).transpose();
  }
  return mu;
}

Matrix add_jitter(const Matrix& a, double jitter_scale) {
  const Index p = a.rows();
  return a + jitter_scale * (a.trace() / static_cast<double>(p)) * Matrix::Identity(p, p);
}

Matrix update_sigma_w(const Matrix& x, const Matrix& mu, const LabeledFunctionalDataset& data,
                      double alpha2, const SmoothingPenalty& penalty, const HyperParams& hyper,
                      double jitter_scale) {
  if (x.rows() != data.n() || x.cols() != data.p() || mu.cols() != data.p()) {
    throw Error(ErrorCode::DimensionMismatch, "update_sigma_w: shape mismatch");
  }
  const double n = static_cast<double>(data.n());
  const double rho = hyper.rho(data.n(), data.p());
  const Matrix sxx = scatter(x, mu, data.labels) / n;
  return add_jitter(symmetrize(rho * sxx + (rho / n) * alpha2 * penalty.omega), jitter_scale);
}

LogPosteriorGradient log_posterior_gradient(const PosteriorState& state,
                                            const LabeledFunctionalDataset& data,
                                            const HyperParams& hyper,
                                            const SmoothingPenalty& penalty) {
  check_state_shape(state, data);
  const Index p = data.p();
  const double n = static_cast<double>(data.n());
  const double pd = static_cast<double>(p);
  const double c = static_cast<double>(data.c());
  const double precision = 1.0 / state.sigma2;
  const SpdFactor factor(state.sigma_w);
  const Matrix inv = factor.inverse();

  LogPosteriorGradient g;
  const double roughness = (state.mu * penalty.omega).cwiseProduct(state.mu).sum();
  g.alpha1 = -roughness + (c + 2.0 * hyper.a1 - 2.0) / state.alpha1 - 2.0 * hyper.b1;

  const double trace = (penalty.omega.cwiseProduct(inv)).sum();
  g.alpha2 = -trace + (pd + 2.0 * hyper.a2 - 2.0) / state.alpha2 - 2.0 * hyper.b2;

  const double residual = (data.y - state.x).squaredNorm();
  g.precision = -residual + (n * pd + 2.0 * hyper.a3 - 2.0) * state.sigma2 - 2.0 * hyper.b3;

  const Matrix dev = state.x - expand_means(state.mu, data.labels);
  const Matrix whitened_dev = dev * inv;  // rows S^{-1} (x - mu)
  g.x = -2.0 * precision * (state.x - data.y) - 2.0 * whitened_dev;

  g.mu = Matrix::Zero(data.c(), p);
  for (Index i = 0; i < data.n(); ++i) g.mu.row(data.labels[static_cast<std::size_t>(i)]) += whitened_dev.row(i);
  g.mu = 2.0 * g.mu - 2.0 * state.alpha1 * state.mu * penalty.omega;

  const Matrix spread = dev.transpose() * dev + state.alpha2 * penalty.omega;
  g.sigma_w = symmetrize(inv * spread * inv - (n + hyper.nu(p) + pd + 1.0) * inv);
  return g;
}

double FirstOrderResiduals::max() const {
  return std::max({alpha1, alpha2, precision, x, mu, sigma_w});
}

FirstOrderResiduals first_order_residuals(const PosteriorState& state,
                                          const LabeledFunctionalDataset& data,
                                          const HyperParams& hyper,
                                          const SmoothingPenalty& penalty) {
  const auto g = log_posterior_gradient(state, data, hyper, penalty);
  FirstOrderResiduals r;
  r.alpha1 = std::abs(g.alpha1);
  r.alpha2 = std::abs(g.alpha2);
  r.precision = std::abs(g.precision);
  r.x = g.x.rowwise().norm().maxCoeff();
  r.mu = g.mu.rowwise().norm().maxCoeff();
  r.sigma_w = g.sigma_w.norm();
  return r;
}

PosteriorState initial_state(const LabeledFunctionalDataset& data, const HyperParams& hyper,
                             const FitConfig& config) {
  const Index p = data.p();
  const double n = static_cast<double>(data.n());
  PosteriorState s;
  s.x = data.y;
  s.mu = data.class_means();
  s.alpha1 = hyper.a1 / hyper.b1;
  s.alpha2 = hyper.a2 / hyper.b2;
  const Matrix syy = data.pooled_scatter();
  s.sigma2 = syy.trace() / static_cast<double>(p);
  if (!(s.sigma2 > 0.0)) s.sigma2 = 1.0;
  const double rho = hyper.rho(data.n(), p);
  s.sigma_w = add_jitter(symmetrize(rho * syy + (rho / n) * s.alpha2 * config.penalty.omega),
                         config.jitter_scale);
  return s;
}

PosteriorState sweep(const PosteriorState& state, const LabeledFunctionalDataset& data,
                     const HyperParams& hyper, const FitConfig& config) {
  const auto& penalty = config.penalty;
  PosteriorState next = state;
  next.alpha1 = update_alpha1(next.mu, penalty, hyper);
  next.alpha2 = update_alpha2(next.sigma_w, penalty, hyper);
  next.sigma2 = update_sigma2(next.x, data, hyper);
  next.x = update_x(data, next.mu, next.sigma_w, next.sigma2);
  next.mu = update_mu(next.x, data, next.sigma_w, next.alpha1, penalty);
  next.sigma_w = update_sigma_w(next.x, next.mu, data, next.alpha2, penalty, hyper,
                                config.jitter_scale);
  return next;
}

double max_relative_change(const PosteriorState& before, const PosteriorState& after) {
  return std::max({block_change(before.alpha1, after.alpha1),
                   block_change(before.alpha2, after.alpha2),
                   block_change(before.sigma2, after.sigma2), block_change(before.x, after.x),
                   block_change(before.mu, after.mu), block_change(before.sigma_w, after.sigma_w)});
}

FitResult fit(const LabeledFunctionalDataset& data, const HyperParams& hyper, const FitConfig& config) {
  if (data.n() < data.c() + 1) {
    throw Error(ErrorCode::Validation, "need n >= c + 1 observations");
  }
  hyper.validate();
  config.validate();
  if (config.penalty.dim() != data.p()) {
    throw Error(ErrorCode::DimensionMismatch, "penalty dimension does not match the curves");
  }
  return fit_from(initial_state(data, hyper, config), data, hyper, config);
}

FitResult fit_from(const PosteriorState& start, const LabeledFunctionalDataset& data,
                   const HyperParams& hyper, const FitConfig& config) {
  check_state_shape(start, data);
  config.validate();
  FitResult result{start, {}};
  auto& trace = result.trace;
  trace.log_posterior_per_sweep.push_back(log_posterior(start, data, hyper, config.penalty));

  for (int s = 1; s <= config.max_sweeps; ++s) {
    PosteriorState next;
    double value = 0.0;
    try {
      next = sweep(result.state, data, hyper, config);
      if (!finite(next)) {
        throw NumericFailure(s, "state became non-finite at sweep " + std::to_string(s));
      }
      value = log_posterior(next, data, hyper, config.penalty);
    } catch (const NumericFailure&) {
      throw;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidHyperparameter) throw;
      throw NumericFailure(s, "sweep " + std::to_string(s) + ": " + e.what());
    }
    const double change = max_relative_change(result.state, next);
    result.state = std::move(next);
    trace.sweeps_run = s;
    trace.max_change_per_sweep.push_back(change);
    trace.log_posterior_per_sweep.push_back(value);
    if (change < config.rel_tol) {
      trace.converged = true;
      break;
    }
  }
  trace.final_residuals = first_order_residuals(result.state, data, hyper, config.penalty);
  return result;
}

}  // namespace gplda
