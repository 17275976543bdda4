#include "gplda/gplda.h"

#include "gplda/config.hpp"
#include "gplda/csv.hpp"
#include "gplda/error.hpp"
#include "gplda/file_util.hpp"
#include "gplda/model_io.hpp"
#include "gplda/report_io.hpp"

#include <algorithm>
#include <cstring>
#include <memory>
#include <new>
#include <optional>

struct gplda_config_struct {
  gplda::RunConfig config;
};

struct gplda_dataset_struct {
  gplda::LabeledFunctionalDataset data;
};

struct gplda_model_struct {
  gplda::DiscriminantModel model;
  std::optional<std::string> summary;
};

struct gplda_prediction_struct {
  std::vector<std::string> predicted;
  std::vector<std::string> truth;  // empty when unlabelled
};

struct gplda_report_struct {
  gplda::BenchmarkReport report;
};

namespace {

thread_local std::string last_error;

int status_of(gplda::ErrorCode code) {
  using gplda::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidDimension: return GPLDA_ERR_DIMENSION;
    case ErrorCode::InvalidInput: return GPLDA_ERR_INVALID_INPUT;
    case ErrorCode::Validation: return GPLDA_ERR_VALIDATION;
    case ErrorCode::Parse: return GPLDA_ERR_PARSE;
    case ErrorCode::DimensionMismatch: return GPLDA_ERR_DIMENSION;
    case ErrorCode::SingularMatrix: return GPLDA_ERR_SINGULAR;
    case ErrorCode::DegenerateBetween: return GPLDA_ERR_DEGENERATE;
    case ErrorCode::InvalidHyperparameter: return GPLDA_ERR_HYPERPARAMETER;
    case ErrorCode::NumericFailure: return GPLDA_ERR_NUMERIC;
    case ErrorCode::Io: return GPLDA_ERR_IO;
  }
  return GPLDA_ERR_UNKNOWN;
}

int fail(int status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename F>
int guard(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const gplda::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(GPLDA_ERR_UNKNOWN, "out of memory");
  } catch (const std::exception& e) {
    return fail(GPLDA_ERR_UNKNOWN, e.what());
  } catch (...) {
    return fail(GPLDA_ERR_UNKNOWN, "unknown exception");
  }
}

#define GPLDA_REQUIRE(ptr) \
  if (!(ptr)) return fail(GPLDA_ERR_NULL_POINTER, #ptr " is null")

int write_string(const std::string& s, char* buf, size_t* len) {
  GPLDA_REQUIRE(len);
  const size_t needed = s.size() + 1;
  if (!buf || *len < needed) {
    *len = needed;
    return fail(GPLDA_ERR_INSUFFICIENT_BUFFER, "buffer needs " + std::to_string(needed) + " bytes");
  }
  std::memcpy(buf, s.c_str(), needed);
  *len = needed;
  return GPLDA_OK;
}

gplda::Matrix copy_rows(const double* values, size_t n, size_t p) {
  gplda::Matrix y(static_cast<gplda::Index>(n), static_cast<gplda::Index>(p));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < p; ++j) {
      y(static_cast<gplda::Index>(i), static_cast<gplda::Index>(j)) = values[i * p + j];
    }
  }
  return y;
}

gplda_prediction_t make_prediction(const gplda::DiscriminantModel& model, const gplda::Matrix& y) {
  auto pred = std::make_unique<gplda_prediction_struct>();
  for (gplda::Index cls : gplda::predict(model, y)) {
    pred->predicted.push_back(model.class_labels[static_cast<size_t>(cls)]);
  }
  return pred.release();
}

}  // namespace

extern "C" {

const char* gplda_version(void) { return "1.0.0"; }

const char* gplda_status_name(int status) {
  switch (status) {
    case GPLDA_OK: return "ok";
    case GPLDA_ERR_NULL_POINTER: return "null pointer";
    case GPLDA_ERR_INVALID_INPUT: return "invalid input";
    case GPLDA_ERR_VALIDATION: return "validation error";
    case GPLDA_ERR_PARSE: return "parse error";
    case GPLDA_ERR_DIMENSION: return "dimension error";
    case GPLDA_ERR_SINGULAR: return "singular matrix";
    case GPLDA_ERR_DEGENERATE: return "degenerate between-class covariance";
    case GPLDA_ERR_HYPERPARAMETER: return "invalid hyperparameter";
    case GPLDA_ERR_NUMERIC: return "numeric failure";
    case GPLDA_ERR_IO: return "i/o error";
    case GPLDA_ERR_INSUFFICIENT_BUFFER: return "insufficient buffer";
    case GPLDA_ERR_OUT_OF_RANGE: return "index out of range";
    default: return "unknown error";
  }
}

const char* gplda_last_error(void) { return last_error.c_str(); }

int gplda_config_init(gplda_config_t* out) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(out);
    *out = new gplda_config_struct{};
    return GPLDA_OK;
  });
}

int gplda_config_load(gplda_config_t* out, const char* path) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(out);
    GPLDA_REQUIRE(path);
    *out = new gplda_config_struct{gplda::load_config(path)};
    return GPLDA_OK;
  });
}

int gplda_config_parse(gplda_config_t* out, const char* text) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(out);
    GPLDA_REQUIRE(text);
    *out = new gplda_config_struct{gplda::parse_config(text)};
    return GPLDA_OK;
  });
}

int gplda_config_set(gplda_config_t config, const char* key, const char* value) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(config);
    GPLDA_REQUIRE(key);
    GPLDA_REQUIRE(value);
    gplda::RunConfig updated = config->config;
    gplda::set_config_value(updated, key, value);
    config->config = std::move(updated);
    return GPLDA_OK;
  });
}

int gplda_config_get(gplda_config_t config, const char* key, char* buf, size_t* len) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(config);
    GPLDA_REQUIRE(key);
    return write_string(gplda::get_config_value(config->config, key), buf, len);
  });
}

int gplda_config_print(gplda_config_t config, char* buf, size_t* len) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(config);
    return write_string(gplda::print_config(config->config), buf, len);
  });
}

int gplda_config_validate(gplda_config_t config) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(config);
    config->config.validate();
    return GPLDA_OK;
  });
}

int gplda_config_equal(gplda_config_t a, gplda_config_t b, int* equal) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(a);
    GPLDA_REQUIRE(b);
    GPLDA_REQUIRE(equal);
    *equal = a->config == b->config ? 1 : 0;
    return GPLDA_OK;
  });
}

int gplda_config_destroy(gplda_config_t config) {
  delete config;
  return GPLDA_OK;
}

int gplda_dataset_load_csv(gplda_dataset_t* out, const char* path, int has_header) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(out);
    GPLDA_REQUIRE(path);
    *out = new gplda_dataset_struct{gplda::load_csv(path, has_header != 0)};
    return GPLDA_OK;
  });
}

int gplda_dataset_from_arrays(gplda_dataset_t* out, const double* values, size_t n, size_t p,
                              const char* const* labels) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(out);
    GPLDA_REQUIRE(values);
    GPLDA_REQUIRE(labels);
    std::vector<std::string> names;
    for (size_t i = 0; i < n; ++i) {
      if (!labels[i]) return fail(GPLDA_ERR_NULL_POINTER, "label " + std::to_string(i) + " is null");
      names.emplace_back(labels[i]);
    }
    *out = new gplda_dataset_struct{gplda::validate_dataset(copy_rows(values, n, p), names)};
    return GPLDA_OK;
  });
}

int gplda_dataset_shape(gplda_dataset_t data, size_t* n, size_t* p, size_t* c) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(data);
    if (n) *n = static_cast<size_t>(data->data.n());
    if (p) *p = static_cast<size_t>(data->data.p());
    if (c) *c = static_cast<size_t>(data->data.c());
    return GPLDA_OK;
  });
}

int gplda_dataset_values(gplda_dataset_t data, double* out, size_t count) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(data);
    GPLDA_REQUIRE(out);
    const auto& y = data->data.y;
    if (count < static_cast<size_t>(y.size())) return fail(GPLDA_ERR_INSUFFICIENT_BUFFER, "need n*p doubles");
    for (gplda::Index i = 0; i < y.rows(); ++i) {
      for (gplda::Index j = 0; j < y.cols(); ++j) *out++ = y(i, j);
    }
    return GPLDA_OK;
  });
}

int gplda_dataset_write_csv(gplda_dataset_t data, const char* path) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(data);
    GPLDA_REQUIRE(path);
    gplda::write_csv(path, data->data);
    return GPLDA_OK;
  });
}

int gplda_dataset_destroy(gplda_dataset_t data) {
  delete data;
  return GPLDA_OK;
}

int gplda_simulate(gplda_config_t config, gplda_dataset_t* train, gplda_dataset_t* test) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(config);
    GPLDA_REQUIRE(train);
    GPLDA_REQUIRE(test);
    auto sim = gplda::generate(gplda::sim_spec(config->config));
    auto tr = std::make_unique<gplda_dataset_struct>(gplda_dataset_struct{std::move(sim.train)});
    *test = new gplda_dataset_struct{std::move(sim.test)};
    *train = tr.release();
    return GPLDA_OK;
  });
}

int gplda_model_fit(gplda_model_t* out, gplda_config_t config, gplda_dataset_t train) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(out);
    GPLDA_REQUIRE(config);
    GPLDA_REQUIRE(train);
    const auto& cfg = config->config;
    cfg.validate();
    auto outcome = gplda::train_method(cfg.method, train->data, cfg.settings);
    const auto pred = gplda::predict(outcome.model, train->data.y);
    const double err = gplda::error_rate(pred, train->data.labels);
    std::string summary = gplda::format_fit_summary(outcome, train->data, err);
    *out = new gplda_model_struct{std::move(outcome.model), std::move(summary)};
    return GPLDA_OK;
  });
}

int gplda_model_save(gplda_model_t model, const char* path) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(model);
    GPLDA_REQUIRE(path);
    gplda::save_model(path, model->model);
    return GPLDA_OK;
  });
}

int gplda_model_load(gplda_model_t* out, const char* path) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(out);
    GPLDA_REQUIRE(path);
    *out = new gplda_model_struct{gplda::load_model(path), std::nullopt};
    return GPLDA_OK;
  });
}

int gplda_model_shape(gplda_model_t model, size_t* k, size_t* p, size_t* c) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(model);
    if (k) *k = static_cast<size_t>(model->model.k());
    if (p) *p = static_cast<size_t>(model->model.p());
    if (c) *c = static_cast<size_t>(model->model.c());
    return GPLDA_OK;
  });
}

int gplda_model_directions(gplda_model_t model, double* out, size_t count) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(model);
    GPLDA_REQUIRE(out);
    const auto& d = model->model.directions;
    if (count < static_cast<size_t>(d.size())) return fail(GPLDA_ERR_INSUFFICIENT_BUFFER, "need k*p doubles");
    for (gplda::Index i = 0; i < d.rows(); ++i) {
      for (gplda::Index j = 0; j < d.cols(); ++j) *out++ = d(i, j);
    }
    return GPLDA_OK;
  });
}

int gplda_model_summary_json(gplda_model_t model, char* buf, size_t* len) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(model);
    if (!model->summary) return fail(GPLDA_ERR_INVALID_INPUT, "model was loaded, not fitted");
    return write_string(*model->summary, buf, len);
  });
}

int gplda_model_equal(gplda_model_t a, gplda_model_t b, int* equal) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(a);
    GPLDA_REQUIRE(b);
    GPLDA_REQUIRE(equal);
    const auto& x = a->model;
    const auto& y = b->model;
    *equal = x.method == y.method && x.class_labels == y.class_labels && x.penalty == y.penalty &&
             x.directions == y.directions && x.projected_centroids == y.projected_centroids &&
             x.within_cov == y.within_cov;
    return GPLDA_OK;
  });
}

int gplda_model_destroy(gplda_model_t model) {
  delete model;
  return GPLDA_OK;
}

int gplda_model_predict(gplda_model_t model, const double* values, size_t n, size_t p,
                        gplda_prediction_t* out) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(model);
    GPLDA_REQUIRE(values);
    GPLDA_REQUIRE(out);
    *out = make_prediction(model->model, copy_rows(values, n, p));
    return GPLDA_OK;
  });
}

int gplda_model_predict_csv(gplda_model_t model, const char* path, int has_header,
                            gplda_prediction_t* out) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(model);
    GPLDA_REQUIRE(path);
    GPLDA_REQUIRE(out);
    auto table = gplda::read_curve_table(path, has_header != 0);
    std::unique_ptr<gplda_prediction_struct> pred(make_prediction(model->model, table.y));
    if (gplda::has_truth(table)) pred->truth = std::move(table.labels);
    *out = pred.release();
    return GPLDA_OK;
  });
}

int gplda_prediction_count(gplda_prediction_t pred, size_t* n) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(pred);
    GPLDA_REQUIRE(n);
    *n = pred->predicted.size();
    return GPLDA_OK;
  });
}

int gplda_prediction_label(gplda_prediction_t pred, size_t i, char* buf, size_t* len) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(pred);
    if (i >= pred->predicted.size()) return fail(GPLDA_ERR_OUT_OF_RANGE, "prediction index out of range");
    return write_string(pred->predicted[i], buf, len);
  });
}

int gplda_prediction_error_rate(gplda_prediction_t pred, double* rate, int* has_truth) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(pred);
    GPLDA_REQUIRE(rate);
    *rate = 0.0;
    if (has_truth) *has_truth = pred->truth.empty() ? 0 : 1;
    if (pred->truth.empty() || pred->predicted.empty()) return GPLDA_OK;
    size_t wrong = 0;
    for (size_t i = 0; i < pred->predicted.size(); ++i) wrong += pred->predicted[i] != pred->truth[i];
    *rate = static_cast<double>(wrong) / static_cast<double>(pred->predicted.size());
    return GPLDA_OK;
  });
}

int gplda_prediction_write_csv(gplda_prediction_t pred, const char* path) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(pred);
    GPLDA_REQUIRE(path);
    const bool truth = !pred->truth.empty();
    std::string out = truth ? "row,predicted,truth\n" : "row,predicted\n";
    for (size_t i = 0; i < pred->predicted.size(); ++i) {
      out += std::to_string(i + 1) + "," + gplda::csv_field(pred->predicted[i]);
      if (truth) out += "," + gplda::csv_field(pred->truth[i]);
      out += "\n";
    }
    gplda::write_file_atomic(path, out);
    return GPLDA_OK;
  });
}

int gplda_prediction_destroy(gplda_prediction_t pred) {
  delete pred;
  return GPLDA_OK;
}

int gplda_bench_run(gplda_config_t config, gplda_report_t* out) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(config);
    GPLDA_REQUIRE(out);
    config->config.validate();
    *out = new gplda_report_struct{gplda::run_benchmark(gplda::bench_spec(config->config))};
    return GPLDA_OK;
  });
}

int gplda_report_write(gplda_report_t report, const char* csv_path, const char* json_path) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(report);
    gplda::write_report(report->report, csv_path ? csv_path : "", json_path ? json_path : "");
    return GPLDA_OK;
  });
}

int gplda_report_csv(gplda_report_t report, char* buf, size_t* len) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(report);
    return write_string(gplda::format_report_csv(report->report), buf, len);
  });
}

int gplda_report_json(gplda_report_t report, char* buf, size_t* len) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(report);
    return write_string(gplda::format_report_json(report->report), buf, len);
  });
}

int gplda_report_cell_count(gplda_report_t report, size_t* count) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(report);
    GPLDA_REQUIRE(count);
    *count = report->report.cells.size();
    return GPLDA_OK;
  });
}

int gplda_report_cell(gplda_report_t report, size_t i, char* method, size_t* method_len,
                      size_t* n, double* mean_pct, double* std_pct, int* failures,
                      double* seconds) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(report);
    if (i >= report->report.cells.size()) return fail(GPLDA_ERR_OUT_OF_RANGE, "cell index out of range");
    const auto& cell = report->report.cells[i];
    if (n) *n = static_cast<size_t>(cell.n);
    if (mean_pct) *mean_pct = cell.mean_pct;
    if (std_pct) *std_pct = cell.std_pct;
    if (failures) *failures = cell.failures;
    if (seconds) *seconds = cell.seconds;
    if (method_len) return write_string(gplda::method_name(cell.method), method, method_len);
    return GPLDA_OK;
  });
}

int gplda_report_cell_replications(gplda_report_t report, size_t i, double* out, size_t count) {
  return guard([&]() -> int {
    GPLDA_REQUIRE(report);
    GPLDA_REQUIRE(out);
    if (i >= report->report.cells.size()) return fail(GPLDA_ERR_OUT_OF_RANGE, "cell index out of range");
    const auto& reps = report->report.cells[i].replication_pct;
    if (count < reps.size()) return fail(GPLDA_ERR_INSUFFICIENT_BUFFER, "need one double per replication");
    std::copy(reps.begin(), reps.end(), out);
    return GPLDA_OK;
  });
}

int gplda_report_destroy(gplda_report_t report) {
  delete report;
  return GPLDA_OK;
}

}  // extern "C"
