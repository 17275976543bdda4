#include "gplda/csv.hpp"

#include "gplda/error.hpp"
#include "gplda/file_util.hpp"

namespace gplda {

namespace {

std::string location(std::size_t line, std::size_t column) {
  return "row " + std::to_string(line) + " column " + std::to_string(column);
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"' && trim(field).empty()) {
      field.clear();
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(was_quoted ? field : std::string(trim(field)));
      field.clear();
      was_quoted = false;
    } else {
      field += ch;
    }
  }
  if (quoted) throw Error(ErrorCode::Parse, "unterminated quoted field");
  fields.push_back(was_quoted ? field : std::string(trim(field)));
  return fields;
}

CurveTable parse_curve_table(std::string_view text, bool has_header) {
  CurveTable table;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool header_pending = has_header;
  while (!text.empty()) {
    const std::size_t cut = text.find('\n');
    std::string_view line = text.substr(0, cut);
    text = cut == std::string_view::npos ? std::string_view() : text.substr(cut + 1);
    ++line_no;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<std::string> fields;
    try {
      fields = split_csv_line(line);
    } catch (const Error& e) {
      throw Error(ErrorCode::Parse, "row " + std::to_string(line_no) + ": " + e.what());
    }
    if (fields.size() < 2) {
      throw Error(ErrorCode::Parse, "row " + std::to_string(line_no) +
                                        ": expected a label followed by curve values");
    }
    if (width == 0) {
      width = fields.size();
    } else if (fields.size() != width) {
      throw Error(ErrorCode::Parse, location(line_no, std::min(fields.size(), width) + 1) +
                                        ": row has " + std::to_string(fields.size()) +
                                        " columns, expected " + std::to_string(width));
    }
    std::vector<double> values(fields.size() - 1);
    for (std::size_t j = 1; j < fields.size(); ++j) {
      values[j - 1] = parse_double(fields[j], location(line_no, j + 1));
    }
    table.labels.push_back(std::move(fields[0]));
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw Error(ErrorCode::Parse, "no data rows");
  table.y.resize(static_cast<Index>(rows.size()), static_cast<Index>(width - 1));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      table.y(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return table;
}

CurveTable read_curve_table(const std::string& path, bool has_header) {
  const std::string text = read_file(path);
  try {
    return parse_curve_table(text, has_header);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

LabeledFunctionalDataset parse_csv(std::string_view text, bool has_header) {
  auto table = parse_curve_table(text, has_header);
  return validate_dataset(table.y, table.labels);
}

LabeledFunctionalDataset load_csv(const std::string& path, bool has_header) {
  auto table = read_curve_table(path, has_header);
  try {
    return validate_dataset(table.y, table.labels);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

bool has_truth(const CurveTable& table) {
  for (const auto& label : table.labels) {
    if (label.empty() || label == "?") return false;
  }
  return true;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos && trim(text) == text) {
    return std::string(text);
  }
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string format_csv(const Matrix& y, const std::vector<std::string>& labels) {
  if (static_cast<Index>(labels.size()) != y.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "one label per curve required");
  }
  std::string out;
  for (Index i = 0; i < y.rows(); ++i) {
    out += csv_field(labels[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < y.cols(); ++j) {
      out += ',';
      out += format_double(y(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string format_csv(const LabeledFunctionalDataset& data) {
  std::vector<std::string> labels;
  labels.reserve(data.labels.size());
  for (Index label : data.labels) labels.push_back(data.label_names[static_cast<std::size_t>(label)]);
  return format_csv(data.y, labels);
}

void write_csv(const std::string& path, const LabeledFunctionalDataset& data) {
  write_file_atomic(path, format_csv(data));
}

}  // namespace gplda
