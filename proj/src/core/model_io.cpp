#include "gplda/model_io.hpp"

#include "gplda/error.hpp"
#include "gplda/file_util.hpp"

namespace gplda {

namespace {

constexpr std::string_view kMagic = "gplda-model 1";

void append_matrix(std::string& out, std::string_view name, const Matrix& m) {
  out += std::string(name) + " " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::string_view line() {
    while (!text_.empty()) {
      const std::size_t cut = text_.find('\n');
      std::string_view l = text_.substr(0, cut);
      text_ = cut == std::string_view::npos ? std::string_view() : text_.substr(cut + 1);
      ++line_no_;
      if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
      if (!trim(l).empty()) return l;
    }
    fail("unexpected end of file");
  }

  /// The text after "<key> " on the next line.
  std::string_view keyed(std::string_view key) {
    const std::string_view l = line();
    if (l.substr(0, key.size()) != key || (l.size() > key.size() && l[key.size()] != ' ')) {
      fail("expected '" + std::string(key) + "'");
    }
    return l.size() > key.size() ? l.substr(key.size() + 1) : std::string_view();
  }

  Index count(std::string_view text) {
    const long long v = parse_integer(text, where());
    if (v < 0) fail("negative size");
    return static_cast<Index>(v);
  }

  Matrix matrix(std::string_view name, Index rows, Index cols) {
    const std::string_view header = keyed(name);
    const std::size_t gap = header.find(' ');
    if (gap == std::string_view::npos) fail("expected '" + std::string(name) + " ROWS COLS'");
    if (count(header.substr(0, gap)) != rows || count(header.substr(gap + 1)) != cols) {
      fail(std::string(name) + " has the wrong shape");
    }
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      std::string_view l = trim(line());
      for (Index j = 0; j < cols; ++j) {
        const std::size_t cut = l.find(' ');
        const std::string_view token = l.substr(0, cut);
        if (token.empty()) fail(std::string(name) + " row is too short");
        m(i, j) = parse_double(token, where());
        l = cut == std::string_view::npos ? std::string_view() : trim(l.substr(cut + 1));
      }
      if (!l.empty()) fail(std::string(name) + " row is too long");
    }
    return m;
  }

  std::string where() const { return "model line " + std::to_string(line_no_); }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorCode::Parse, where() + ": " + message);
  }

 private:
  std::string_view text_;
  std::size_t line_no_ = 0;
};

}  // namespace

std::string format_model(const DiscriminantModel& model) {
  std::string out(kMagic);
  out += "\nmethod " + method_tag(model.method) + "\n";
  out += "penalty " + (model.penalty ? model.penalty->to_string() : std::string("none")) + "\n";
  out += "p " + std::to_string(model.p()) + "\n";
  out += "k " + std::to_string(model.k()) + "\n";
  out += "classes " + std::to_string(model.c()) + "\n";
  for (const auto& label : model.class_labels) {
    if (label.find_first_of("\r\n") != std::string::npos) {
      throw Error(ErrorCode::InvalidInput, "class labels containing line breaks cannot be saved");
    }
    out += "label " + label + "\n";
  }
  append_matrix(out, "directions", model.directions);
  append_matrix(out, "centroids", model.projected_centroids);
  append_matrix(out, "within_cov", model.within_cov);
  out += "end\n";
  return out;
}

DiscriminantModel parse_model(std::string_view text) {
  Reader in(text);
  if (trim(in.line()) != kMagic) in.fail("not a model file");
  DiscriminantModel model;
  model.method = parse_method_tag(trim(in.keyed("method")));
  const std::string_view penalty = trim(in.keyed("penalty"));
  if (penalty != "none") model.penalty = PenaltySpec::parse(penalty);
  const Index p = in.count(in.keyed("p"));
  const Index k = in.count(in.keyed("k"));
  const Index c = in.count(in.keyed("classes"));
  for (Index i = 0; i < c; ++i) model.class_labels.emplace_back(in.keyed("label"));
  model.directions = in.matrix("directions", k, p);
  model.projected_centroids = in.matrix("centroids", c, k);
  model.within_cov = in.matrix("within_cov", p, p);
  if (trim(in.line()) != "end") in.fail("expected 'end'");
  return model;
}

void save_model(const std::string& path, const DiscriminantModel& model) {
  write_file_atomic(path, format_model(model));
}

DiscriminantModel load_model(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_model(text);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

}  // namespace gplda
