#include "gplda/pipeline.hpp"

namespace gplda {

TrainOutcome train_method(Method method, const LabeledFunctionalDataset& data,
                          const MethodSettings& settings) {
  TrainOutcome out;
  switch (method) {
    case Method::GPLDA: {
      FitConfig config;
      config.max_sweeps = settings.max_sweeps;
      config.rel_tol = settings.rel_tol;
      config.jitter_scale = settings.jitter_scale;
      config.penalty = build_penalty(settings.gplda_penalty, data.p());
      auto result = fit(data, settings.hyper, config);
      out.model = gplda_directions(result.state, data.label_names, settings.k);
      out.model.penalty = settings.gplda_penalty;
      out.trace = std::move(result.trace);
      break;
    }
    case Method::PDA: {
      const auto penalty = build_penalty(settings.pda_penalty, data.p());
      double alpha = 0.0;
      if (settings.pda_alpha) {
        alpha = *settings.pda_alpha;
      } else {
        const auto grid = default_alpha_grid();
        alpha = select_pda_alpha(data, penalty, grid, settings.pda_folds, settings.jitter_scale);
      }
      out.model = pda_fit(data, penalty, alpha, settings.k, settings.jitter_scale);
      out.pda_alpha = alpha;
      break;
    }
    case Method::MLE_LDA:
      out.model = mle_lda_fit(data, settings.k, settings.ridge_scale);
      break;
    case Method::PCA_LDA:
      out.model = pca_lda_fit(data, settings.pca_q, settings.k, settings.ridge_scale);
      break;
  }
  return out;
}

}  // namespace gplda
