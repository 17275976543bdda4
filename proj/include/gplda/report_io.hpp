#pragma once

// Benchmark tables and JSON summaries.

#include "gplda/sim_bench.hpp"

#include <string>

namespace gplda {

/// Header "method,N,mean_pct,std_pct,failures,seconds", one row per cell.
std::string format_report_csv(const BenchmarkReport& report);
/// Everything in the table plus seeds, per-replication errors and failure
/// messages.
std::string format_report_json(const BenchmarkReport& report);

void write_report(const BenchmarkReport& report, const std::string& csv_path,
                  const std::string& json_path);

/// Fit diagnostics: method, shapes, selected PDA alpha, warnings and (for
/// GP-LDA) the backfitting trace.
std::string format_fit_summary(const TrainOutcome& outcome, const LabeledFunctionalDataset& data,
                               double training_error);

}  // namespace gplda
