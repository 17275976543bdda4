#pragma once

// Run configuration as flat "key = value" text. Keys are dotted
// (hyper.a1, fit.rel_tol, ...); a "[section]" line prefixes the keys that
// follow it. '#' starts a comment. Doubles print at 17 significant digits
// so print -> parse is exact.

#include "gplda/sim_bench.hpp"

#include <string>
#include <vector>

namespace gplda {

struct RunConfig {
  Method method = Method::GPLDA;
  std::uint64_t seed = 1;
  MethodSettings settings;

  SimKind sim_which = SimKind::Sim1;
  Index sim_n_train = 50;
  Index sim_n_test = 200;
  double sim_noise_sd = -1.0;  // negative: simulation default

  std::vector<Method> bench_methods{Method::GPLDA, Method::PDA, Method::MLE_LDA, Method::PCA_LDA};
  std::vector<Index> bench_n_values{50, 200};
  int bench_reps = 30;
  int bench_threads = 1;

  bool has_header = false;
  std::string train_path;
  std::string data_path;
  std::string model_path;
  std::string out_path;

  /// Range checks on every numeric field.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

std::vector<std::string> config_keys();

void set_config_value(RunConfig& config, std::string_view key, std::string_view value);
std::string get_config_value(const RunConfig& config, std::string_view key);

std::string print_config(const RunConfig& config);
/// Applies the assignments in `text` on top of `base`.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path);

SimSpec sim_spec(const RunConfig& config);
BenchSpec bench_spec(const RunConfig& config);

}  // namespace gplda
