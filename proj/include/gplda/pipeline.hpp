#pragma once

// One entry point that trains any of the four discriminant methods from a
// single settings bundle. Shared by the CLI and the benchmark harness.

#include "gplda/discriminant.hpp"

#include <optional>

namespace gplda {

struct MethodSettings {
  HyperParams hyper;
  int max_sweeps = 500;
  double rel_tol = 1e-6;
  double jitter_scale = 1e-8;
  PenaltySpec gplda_penalty{PenaltyKind::FirstDiff};
  PenaltySpec pda_penalty{PenaltyKind::SecondDiff};
  std::optional<double> pda_alpha;  // empty: cross-validated
  int pda_folds = 5;
  Index pca_q = 1;
  double ridge_scale = -1.0;  // negative: 1e-6 when p >= n, else 0
  Index k = 0;                // 0: c - 1

  bool operator==(const MethodSettings&) const = default;
};

struct TrainOutcome {
  DiscriminantModel model;
  std::optional<FitTrace> trace;  // GP-LDA only
  std::optional<double> pda_alpha;
};

TrainOutcome train_method(Method method, const LabeledFunctionalDataset& data,
                          const MethodSettings& settings);

}  // namespace gplda
