#pragma once

// Curve tables as comma-separated text: first column the label, the rest
// the sampled curve. Row and column numbers in errors are 1-based and count
// physical lines of the file, header included.

#include "gplda/model.hpp"

#include <string>
#include <vector>

namespace gplda {

struct CurveTable {
  Matrix y;
  std::vector<std::string> labels;  // verbatim, may be empty or "?"
};

/// Splits one CSV record. Double-quoted fields may contain commas and ""
/// escapes; surrounding blanks of unquoted fields are dropped.
std::vector<std::string> split_csv_line(std::string_view line);

CurveTable parse_curve_table(std::string_view text, bool has_header);
CurveTable read_curve_table(const std::string& path, bool has_header);

/// Labelled training table; delegates to validate_dataset.
LabeledFunctionalDataset load_csv(const std::string& path, bool has_header);
LabeledFunctionalDataset parse_csv(std::string_view text, bool has_header);

/// True when every label is non-empty and not "?".
bool has_truth(const CurveTable& table);

/// label,v1,...,vp per row, no header, values at 17 significant digits.
std::string format_csv(const Matrix& y, const std::vector<std::string>& labels);
std::string format_csv(const LabeledFunctionalDataset& data);
void write_csv(const std::string& path, const LabeledFunctionalDataset& data);

/// Quotes a field when it holds a comma, quote or line break.
std::string csv_field(std::string_view text);

}  // namespace gplda
