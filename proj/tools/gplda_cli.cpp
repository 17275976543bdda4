// Command-line driver: simulate, fit, predict and bench on top of the C API.

#include "gplda/gplda.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

struct Failure {
  int status;
  std::string message;
};

void check(int status) {
  if (status != GPLDA_OK) throw Failure{status, gplda_last_error()};
}

int exit_code(int status) {
  switch (status) {
    case GPLDA_ERR_NUMERIC:
    case GPLDA_ERR_SINGULAR:
    case GPLDA_ERR_DEGENERATE:
      return kExitNumeric;
    default:
      return kExitValidation;
  }
}

template <typename Fn>
std::string read_string(Fn&& fn) {
  size_t len = 0;
  int status = fn(nullptr, &len);
  if (status != GPLDA_ERR_INSUFFICIENT_BUFFER) check(status);
  std::string out(len, '\0');
  check(fn(out.data(), &len));
  out.resize(len - 1);
  return out;
}

template <typename T, int (*Destroy)(T)>
struct Handle {
  T h = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Destroy(h); }
};

using Config = Handle<gplda_config_t, gplda_config_destroy>;
using Dataset = Handle<gplda_dataset_t, gplda_dataset_destroy>;
using Model = Handle<gplda_model_t, gplda_model_destroy>;
using Prediction = Handle<gplda_prediction_t, gplda_prediction_destroy>;
using Report = Handle<gplda_report_t, gplda_report_destroy>;

struct Options {
  std::optional<std::string> config_path;
  std::optional<std::string> method;
  std::optional<std::string> penalty;
  std::optional<std::string> alpha;
  std::optional<long long> k;
  std::optional<unsigned long long> seed;
  std::optional<int> reps;
  std::optional<int> threads;
  std::optional<std::string> which;
  std::optional<long long> n_train;
  std::optional<long long> n_test;
  std::optional<std::string> train;
  std::optional<std::string> data;
  std::optional<std::string> model;
  std::optional<std::string> out;
  std::vector<std::string> sets;
  bool has_header = false;
  bool print_config = false;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--config", o.config_path, "key = value configuration file");
  app->add_option("--method", o.method, "gplda | pda | mle | pca-lda (bench: comma list)");
  app->add_option("--penalty", o.penalty, "d1 | d2 | lap2d:ROWSxCOLS for the selected method");
  app->add_option("--alpha", o.alpha, "PDA smoothing weight, or cv");
  app->add_option("--k", o.k, "number of discriminant directions (0: c-1)");
  app->add_option("--seed", o.seed, "base seed");
  app->add_option("--reps", o.reps, "benchmark replications");
  app->add_option("--threads", o.threads, "benchmark worker threads");
  app->add_option("--which", o.which, "sim1 | sim2");
  app->add_option("--n-train", o.n_train, "simulated training size");
  app->add_option("--n-test", o.n_test, "simulated test size");
  app->add_option("--train", o.train, "training CSV");
  app->add_option("--data", o.data, "CSV to classify");
  app->add_option("--model", o.model, "model file");
  app->add_option("--out", o.out, "output path");
  app->add_option("--set", o.sets, "extra KEY=VALUE assignment (repeatable)");
  app->add_flag("--has-header", o.has_header, "CSV files start with a header row");
  app->add_flag("--print-config", o.print_config, "print the effective configuration and exit");
}

void set(Config& cfg, const char* key, const std::string& value) {
  check(gplda_config_set(cfg.h, key, value.c_str()));
}

std::string get(Config& cfg, const char* key) {
  return read_string([&](char* buf, size_t* len) { return gplda_config_get(cfg.h, key, buf, len); });
}

void build_config(Config& cfg, const Options& o, bool bench) {
  if (o.config_path) {
    check(gplda_config_load(&cfg.h, o.config_path->c_str()));
  } else {
    check(gplda_config_init(&cfg.h));
  }
  for (const auto& assignment : o.sets) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw Failure{GPLDA_ERR_PARSE, "--set expects KEY=VALUE, got '" + assignment + "'"};
    set(cfg, assignment.substr(0, eq).c_str(), assignment.substr(eq + 1));
  }
  if (o.method) set(cfg, bench ? "bench.methods" : "method", *o.method);
  if (o.penalty) set(cfg, get(cfg, "method") == "pda" ? "pda.penalty" : "gplda.penalty", *o.penalty);
  if (o.alpha) set(cfg, "pda.alpha", *o.alpha);
  if (o.k) set(cfg, "k", std::to_string(*o.k));
  if (o.seed) set(cfg, "seed", std::to_string(*o.seed));
  if (o.reps) set(cfg, "bench.reps", std::to_string(*o.reps));
  if (o.threads) set(cfg, "bench.threads", std::to_string(*o.threads));
  if (o.which) set(cfg, "sim.which", *o.which);
  if (o.n_train) set(cfg, "sim.n_train", std::to_string(*o.n_train));
  if (o.n_test) set(cfg, "sim.n_test", std::to_string(*o.n_test));
  if (o.train) set(cfg, "io.train", *o.train);
  if (o.data) set(cfg, "io.data", *o.data);
  if (o.model) set(cfg, "io.model", *o.model);
  if (o.out) set(cfg, "io.out", *o.out);
  if (o.has_header) set(cfg, "data.has_header", "true");
  check(gplda_config_validate(cfg.h));
}

std::string require_path(Config& cfg, const char* key, const char* flag, bool must_exist) {
  const std::string path = get(cfg, key);
  if (path.empty()) throw Failure{GPLDA_ERR_VALIDATION, std::string("missing ") + flag + " (config key " + key + ")"};
  if (must_exist && !std::filesystem::exists(path)) {
    throw Failure{GPLDA_ERR_IO, std::string(flag) + " '" + path + "' does not exist"};
  }
  return path;
}

std::string with_suffix(const std::string& path, const std::string& from, const std::string& to) {
  if (path.size() >= from.size() && path.compare(path.size() - from.size(), from.size(), from) == 0) {
    return path.substr(0, path.size() - from.size()) + to;
  }
  return path + to;
}

void run_simulate(Config& cfg) {
  std::string prefix = get(cfg, "io.out");
  if (prefix.empty()) prefix = "sim";
  Dataset train, test;
  check(gplda_simulate(cfg.h, &train.h, &test.h));
  const std::string train_path = prefix + "_train.csv";
  const std::string test_path = prefix + "_test.csv";
  check(gplda_dataset_write_csv(train.h, train_path.c_str()));
  check(gplda_dataset_write_csv(test.h, test_path.c_str()));
  std::printf("wrote %s and %s\n", train_path.c_str(), test_path.c_str());
}

void run_fit(Config& cfg) {
  const std::string train_path = require_path(cfg, "io.train", "--train", true);
  const std::string out = require_path(cfg, "io.out", "--out", false);
  const bool header = get(cfg, "data.has_header") == "true";
  Dataset train;
  check(gplda_dataset_load_csv(&train.h, train_path.c_str(), header));
  Model model;
  check(gplda_model_fit(&model.h, cfg.h, train.h));
  check(gplda_model_save(model.h, out.c_str()));
  const std::string summary =
      read_string([&](char* buf, size_t* len) { return gplda_model_summary_json(model.h, buf, len); });
  const std::string summary_path = out + ".summary.json";
  FILE* f = std::fopen((summary_path + ".tmp").c_str(), "wb");
  if (!f || std::fwrite(summary.data(), 1, summary.size(), f) != summary.size() || std::fclose(f) != 0 ||
      std::rename((summary_path + ".tmp").c_str(), summary_path.c_str()) != 0) {
    throw Failure{GPLDA_ERR_IO, "cannot write '" + summary_path + "'"};
  }
  std::printf("wrote %s and %s\n", out.c_str(), summary_path.c_str());
}

void run_predict(Config& cfg) {
  const std::string model_path = require_path(cfg, "io.model", "--model", true);
  const std::string data_path = require_path(cfg, "io.data", "--data", true);
  const std::string out = get(cfg, "io.out");
  const bool header = get(cfg, "data.has_header") == "true";
  Model model;
  check(gplda_model_load(&model.h, model_path.c_str()));
  Prediction pred;
  check(gplda_model_predict_csv(model.h, data_path.c_str(), header, &pred.h));
  size_t n = 0;
  check(gplda_prediction_count(pred.h, &n));
  if (!out.empty()) {
    check(gplda_prediction_write_csv(pred.h, out.c_str()));
  } else {
    for (size_t i = 0; i < n; ++i) {
      const std::string label = read_string(
          [&](char* buf, size_t* len) { return gplda_prediction_label(pred.h, i, buf, len); });
      std::printf("%s\n", label.c_str());
    }
  }
  double rate = 0.0;
  int truth = 0;
  check(gplda_prediction_error_rate(pred.h, &rate, &truth));
  if (truth) std::printf("error_rate %.17g (%zu curves)\n", rate, n);
}

void run_bench(Config& cfg) {
  std::string out = get(cfg, "io.out");
  if (out.empty()) out = "bench.csv";
  const std::string json_path = with_suffix(out, ".csv", ".json");
  Report report;
  check(gplda_bench_run(cfg.h, &report.h));
  check(gplda_report_write(report.h, out.c_str(), json_path.c_str()));
  const std::string table =
      read_string([&](char* buf, size_t* len) { return gplda_report_csv(report.h, buf, len); });
  std::fputs(table.c_str(), stdout);
  std::printf("wrote %s and %s\n", out.c_str(), json_path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-process and baseline discriminants for functional data"};
  app.require_subcommand(0, 1);
  Options top;
  app.add_option("--config", top.config_path, "key = value configuration file");
  app.add_flag("--print-config", top.print_config, "print the effective configuration and exit");

  struct Command {
    const char* name;
    const char* help;
    void (*run)(Config&);
    bool bench;
  };
  const Command commands[] = {
      {"simulate", "write a simulated train/test pair to OUT_train.csv and OUT_test.csv", run_simulate, false},
      {"fit", "train a method on --train and write the model to --out", run_fit, false},
      {"predict", "classify --data with --model", run_predict, false},
      {"bench", "run the replicated simulation benchmark", run_bench, true},
  };
  std::vector<Options> options(std::size(commands));
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    auto* sub = app.add_subcommand(commands[i].name, commands[i].help);
    add_common(sub, options[i]);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::fputs(app.help().c_str(), stderr);
    return kExitValidation;
  }

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      Options& o = options[i];
      if (!o.config_path) o.config_path = top.config_path;
      Config cfg;
      build_config(cfg, o, commands[i].bench);
      if (o.print_config || top.print_config) {
        std::fputs(read_string([&](char* buf, size_t* len) { return gplda_config_print(cfg.h, buf, len); }).c_str(),
                   stdout);
        return kExitOk;
      }
      commands[i].run(cfg);
      return kExitOk;
    }
    if (top.print_config) {
      Config cfg;
      build_config(cfg, top, false);
      std::fputs(read_string([&](char* buf, size_t* len) { return gplda_config_print(cfg.h, buf, len); }).c_str(),
                 stdout);
      return kExitOk;
    }
    std::fputs(app.help().c_str(), stderr);
    return kExitValidation;
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s: %s\n", gplda_status_name(f.status), f.message.c_str());
    return exit_code(f.status);
  }
}
