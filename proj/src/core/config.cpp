#include "gplda/config.hpp"

#include "gplda/error.hpp"
#include "gplda/file_util.hpp"

#include <functional>
#include <limits>

namespace gplda {

namespace {

struct Field {
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

std::string what_of(std::string_view key) { return "config key '" + std::string(key) + "'"; }

double as_double(std::string_view key, std::string_view v) {
  return parse_double(v, what_of(key));
}

long long as_integer(std::string_view key, std::string_view v) {
  return parse_integer(v, what_of(key));
}

bool as_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::Parse, what_of(key) + ": expected true or false");
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  while (true) {
    const std::size_t cut = v.find(',');
    const std::string_view item = trim(v.substr(0, cut));
    if (!item.empty()) out.push_back(item);
    if (cut == std::string_view::npos) break;
    v = v.substr(cut + 1);
  }
  return out;
}

template <typename T, typename Fmt>
std::string join(const std::vector<T>& items, Fmt&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += fmt(items[i]);
  }
  return out;
}

#define GPLDA_DOUBLE(name, member)                                                    \
  Field {                                                                             \
    name, [](const RunConfig& c) { return format_double(c.member); },                 \
        [](RunConfig& c, std::string_view v) { c.member = as_double(name, v); }       \
  }
#define GPLDA_INT(name, member, type)                                                 \
  Field {                                                                             \
    name, [](const RunConfig& c) { return std::to_string(c.member); },                \
        [](RunConfig& c, std::string_view v) {                                        \
          c.member = static_cast<type>(as_integer(name, v));                          \
        }                                                                             \
  }
#define GPLDA_STRING(name, member)                                                    \
  Field {                                                                             \
    name, [](const RunConfig& c) { return c.member; },                                \
        [](RunConfig& c, std::string_view v) { c.member = std::string(v); }           \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"method", [](const RunConfig& c) { return method_name(c.method); },
       [](RunConfig& c, std::string_view v) { c.method = parse_method(v); }},
      GPLDA_INT("k", settings.k, Index),
      {"seed", [](const RunConfig& c) { return std::to_string(c.seed); },
       [](RunConfig& c, std::string_view v) {
         const long long s = as_integer("seed", v);
         if (s < 0) throw Error(ErrorCode::Parse, "config key 'seed': must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      GPLDA_DOUBLE("hyper.a1", settings.hyper.a1),
      GPLDA_DOUBLE("hyper.b1", settings.hyper.b1),
      GPLDA_DOUBLE("hyper.a2", settings.hyper.a2),
      GPLDA_DOUBLE("hyper.b2", settings.hyper.b2),
      GPLDA_DOUBLE("hyper.a3", settings.hyper.a3),
      GPLDA_DOUBLE("hyper.b3", settings.hyper.b3),
      GPLDA_DOUBLE("hyper.delta", settings.hyper.delta),
      GPLDA_INT("fit.max_sweeps", settings.max_sweeps, int),
      GPLDA_DOUBLE("fit.rel_tol", settings.rel_tol),
      GPLDA_DOUBLE("fit.jitter_scale", settings.jitter_scale),
      {"gplda.penalty", [](const RunConfig& c) { return c.settings.gplda_penalty.to_string(); },
       [](RunConfig& c, std::string_view v) { c.settings.gplda_penalty = PenaltySpec::parse(v); }},
      {"pda.penalty", [](const RunConfig& c) { return c.settings.pda_penalty.to_string(); },
       [](RunConfig& c, std::string_view v) { c.settings.pda_penalty = PenaltySpec::parse(v); }},
      {"pda.alpha",
       [](const RunConfig& c) {
         return c.settings.pda_alpha ? format_double(*c.settings.pda_alpha) : std::string("cv");
       },
       [](RunConfig& c, std::string_view v) {
         if (v == "cv") {
           c.settings.pda_alpha.reset();
         } else {
           c.settings.pda_alpha = as_double("pda.alpha", v);
         }
       }},
      GPLDA_INT("pda.cv_folds", settings.pda_folds, int),
      {"mle.ridge",
       [](const RunConfig& c) {
         return c.settings.ridge_scale < 0.0 ? std::string("auto")
                                             : format_double(c.settings.ridge_scale);
       },
       [](RunConfig& c, std::string_view v) {
         c.settings.ridge_scale = v == "auto" ? -1.0 : as_double("mle.ridge", v);
         if (v != "auto" && c.settings.ridge_scale < 0.0) {
           throw Error(ErrorCode::Parse, "config key 'mle.ridge': must be auto or >= 0");
         }
       }},
      GPLDA_INT("pca_lda.q", settings.pca_q, Index),
      {"sim.which", [](const RunConfig& c) { return sim_name(c.sim_which); },
       [](RunConfig& c, std::string_view v) { c.sim_which = parse_sim(v); }},
      GPLDA_INT("sim.n_train", sim_n_train, Index),
      GPLDA_INT("sim.n_test", sim_n_test, Index),
      {"sim.noise_sd",
       [](const RunConfig& c) {
         return c.sim_noise_sd < 0.0 ? std::string("default") : format_double(c.sim_noise_sd);
       },
       [](RunConfig& c, std::string_view v) {
         c.sim_noise_sd = v == "default" ? -1.0 : as_double("sim.noise_sd", v);
         if (v != "default" && c.sim_noise_sd < 0.0) {
           throw Error(ErrorCode::Parse, "config key 'sim.noise_sd': must be default or >= 0");
         }
       }},
      {"bench.methods",
       [](const RunConfig& c) { return join(c.bench_methods, method_name); },
       [](RunConfig& c, std::string_view v) {
         c.bench_methods.clear();
         for (auto item : split_list(v)) c.bench_methods.push_back(parse_method(item));
       }},
      {"bench.n_values",
       [](const RunConfig& c) {
         return join(c.bench_n_values, [](Index n) { return std::to_string(n); });
       },
       [](RunConfig& c, std::string_view v) {
         c.bench_n_values.clear();
         for (auto item : split_list(v)) {
           c.bench_n_values.push_back(static_cast<Index>(as_integer("bench.n_values", item)));
         }
       }},
      GPLDA_INT("bench.reps", bench_reps, int),
      GPLDA_INT("bench.threads", bench_threads, int),
      {"data.has_header", [](const RunConfig& c) { return std::string(c.has_header ? "true" : "false"); },
       [](RunConfig& c, std::string_view v) { c.has_header = as_bool("data.has_header", v); }},
      GPLDA_STRING("io.train", train_path),
      GPLDA_STRING("io.data", data_path),
      GPLDA_STRING("io.model", model_path),
      GPLDA_STRING("io.out", out_path),
  };
  return table;
}

#undef GPLDA_DOUBLE
#undef GPLDA_INT
#undef GPLDA_STRING

const Field& field(std::string_view key) {
  for (const auto& f : fields()) {
    if (key == f.key) return f;
  }
  throw Error(ErrorCode::Parse, "unknown config key '" + std::string(key) + "'");
}

std::string_view unquote(std::string_view v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::Validation, message);
}

}  // namespace

void RunConfig::validate() const {
  settings.hyper.validate();
  require(settings.max_sweeps >= 1, "fit.max_sweeps must be at least 1");
  require(settings.rel_tol > 0.0, "fit.rel_tol must be positive");
  require(settings.jitter_scale > 0.0, "fit.jitter_scale must be positive");
  require(settings.k >= 0, "k must be non-negative (0 selects c-1)");
  require(!settings.pda_alpha || *settings.pda_alpha >= 0.0, "pda.alpha must be cv or >= 0");
  require(settings.pda_folds >= 2, "pda.cv_folds must be at least 2");
  require(settings.pca_q >= 1, "pca_lda.q must be at least 1");
  require(sim_n_train >= 2 && sim_n_train % 2 == 0, "sim.n_train must be even and >= 2");
  require(sim_n_test >= 2 && sim_n_test % 2 == 0, "sim.n_test must be even and >= 2");
  require(!bench_methods.empty(), "bench.methods must name at least one method");
  require(!bench_n_values.empty(), "bench.n_values must list at least one N");
  for (Index n : bench_n_values) require(n >= 2 && n % 2 == 0, "bench.n_values must be even and >= 2");
  require(bench_reps >= 1, "bench.reps must be at least 1");
  require(bench_threads >= 1, "bench.threads must be at least 1");
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.emplace_back(f.key);
  return keys;
}

void set_config_value(RunConfig& config, std::string_view key, std::string_view value) {
  field(trim(key)).set(config, unquote(trim(value)));
}

std::string get_config_value(const RunConfig& config, std::string_view key) {
  return field(trim(key)).get(config);
}

std::string print_config(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    const std::string_view key = f.key;
    const std::size_t dot = key.find('.');
    const std::string group(dot == std::string_view::npos ? "" : key.substr(0, dot));
    if (!out.empty() && group != section) out += '\n';
    section = group;
    std::string value = f.get(config);
    if (value.empty() || value.find_first_of("#\"") != std::string::npos || trim(value) != value) {
      value = "\"" + value + "\"";
    }
    out += std::string(key) + " = " + value + "\n";
  }
  return out;
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t cut = text.find('\n');
    std::string_view line = text.substr(0, cut);
    text = cut == std::string_view::npos ? std::string_view() : text.substr(cut + 1);
    ++line_no;

    // a '#' outside double quotes starts a comment
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::Parse, where + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::Parse, where + "expected key = value");
    std::string key(trim(line.substr(0, eq)));
    if (!section.empty()) key = section + "." + key;
    try {
      set_config_value(base, key, line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(e.code(), where + e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_config(text);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

SimSpec sim_spec(const RunConfig& config) {
  return {config.sim_which, config.sim_n_train, config.sim_n_test, config.seed, config.sim_noise_sd};
}

BenchSpec bench_spec(const RunConfig& config) {
  BenchSpec spec;
  spec.which = config.sim_which;
  spec.methods = config.bench_methods;
  spec.n_values = config.bench_n_values;
  spec.n_test = config.sim_n_test;
  spec.noise_sd = config.sim_noise_sd;
  spec.reps = config.bench_reps;
  spec.base_seed = config.seed;
  spec.threads = config.bench_threads;
  spec.settings = config.settings;
  return spec;
}

}  // namespace gplda
