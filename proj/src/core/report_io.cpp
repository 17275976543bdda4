#include "gplda/report_io.hpp"

#include "gplda/file_util.hpp"

#include <json.hpp>

namespace gplda {

namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json residuals_json(const FirstOrderResiduals& r) {
  return {{"alpha1", r.alpha1}, {"alpha2", r.alpha2}, {"precision", r.precision},
          {"x", r.x},           {"mu", r.mu},         {"sigma_w", r.sigma_w}};
}

}  // namespace

std::string format_report_csv(const BenchmarkReport& report) {
  std::string out = "method,N,mean_pct,std_pct,failures,seconds\n";
  for (const auto& cell : report.cells) {
    out += method_name(cell.method) + "," + std::to_string(cell.n) + "," +
           format_double(cell.mean_pct) + "," + format_double(cell.std_pct) + "," +
           std::to_string(cell.failures) + "," + format_double(cell.seconds) + "\n";
  }
  return out;
}

std::string format_report_json(const BenchmarkReport& report) {
  json cells = json::array();
  for (const auto& cell : report.cells) {
    json reps = json::array();
    json failures = json::array();
    for (std::size_t r = 0; r < cell.replication_pct.size(); ++r) {
      reps.push_back(number(cell.replication_pct[r]));
      if (!cell.failure_messages[r].empty()) {
        failures.push_back({{"replication", r}, {"message", cell.failure_messages[r]}});
      }
    }
    cells.push_back({{"method", method_name(cell.method)},
                     {"N", cell.n},
                     {"mean_pct", number(cell.mean_pct)},
                     {"std_pct", number(cell.std_pct)},
                     {"failures", cell.failures},
                     {"seconds", cell.seconds},
                     {"replication_pct", reps},
                     {"failure_messages", failures}});
  }
  json doc = {{"simulation", sim_name(report.which)},
              {"replications", report.reps},
              {"base_seed", report.base_seed},
              {"seeds", report.seeds},
              {"cells", cells}};
  return doc.dump(2) + "\n";
}

void write_report(const BenchmarkReport& report, const std::string& csv_path,
                  const std::string& json_path) {
  if (!csv_path.empty()) write_file_atomic(csv_path, format_report_csv(report));
  if (!json_path.empty()) write_file_atomic(json_path, format_report_json(report));
}

std::string format_fit_summary(const TrainOutcome& outcome, const LabeledFunctionalDataset& data,
                               double training_error) {
  const auto& model = outcome.model;
  json doc = {{"method", method_name(model.method)},
              {"n", data.n()},
              {"p", data.p()},
              {"classes", model.class_labels},
              {"k", model.k()},
              {"training_error", training_error},
              {"warnings", model.warnings}};
  if (model.penalty) doc["penalty"] = model.penalty->to_string();
  if (outcome.pda_alpha) doc["pda_alpha"] = *outcome.pda_alpha;
  if (outcome.trace) {
    const auto& t = *outcome.trace;
    json lp = json::array();
    for (double v : t.log_posterior_per_sweep) lp.push_back(number(v));
    json change = json::array();
    for (double v : t.max_change_per_sweep) change.push_back(number(v));
    doc["trace"] = {{"sweeps_run", t.sweeps_run},
                    {"converged", t.converged},
                    {"log_posterior_per_sweep", lp},
                    {"max_change_per_sweep", change},
                    {"final_residuals", residuals_json(t.final_residuals)}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace gplda
