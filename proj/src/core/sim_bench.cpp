#include "gplda/sim_bench.hpp"

#include "gplda/error.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace gplda {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::vector<std::string> balanced_labels(Index n) {
  std::vector<std::string> labels(static_cast<std::size_t>(n), "2");
  for (Index i = 0; i < n / 2; ++i) labels[static_cast<std::size_t>(i)] = "1";
  return labels;
}

double noise_sd(const SimSpec& spec, double fallback) {
  return spec.noise_sd >= 0.0 ? spec.noise_sd : fallback;
}

template <typename CurveFn>
LabeledFunctionalDataset draw(Index n, const Vector& grid, CounterRng rng, CurveFn&& curve) {
  Matrix y(n, grid.size());
  for (Index i = 0; i < n; ++i) {
    const int cls = i < n / 2 ? 1 : 2;
    y.row(i) = curve(cls, rng).transpose();
  }
  return validate_dataset(y, balanced_labels(n));
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t role)
    : key_(mix64(mix64(mix64(seed) + stream) + role)) {}

std::uint64_t CounterRng::mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::next() { return mix64(key_ + (++counter_) * kGolden); }

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::string sim_name(SimKind kind) { return kind == SimKind::Sim1 ? "sim1" : "sim2"; }

SimKind parse_sim(std::string_view text) {
  if (text == "sim1") return SimKind::Sim1;
  if (text == "sim2") return SimKind::Sim2;
  throw Error(ErrorCode::Parse, "unknown simulation '" + std::string(text) + "' (sim1 or sim2)");
}

void SimSpec::validate() const {
  if (n_train < 4 || n_train % 2 != 0 || n_test < 4 || n_test % 2 != 0) {
    throw Error(ErrorCode::Validation, "simulation sizes must be even and at least 4");
  }
}

double bump(double t) { return std::max(6.0 - std::abs(t - 11.0), 0.0); }

Vector sim1_grid() {
  Vector t(101);
  for (Index k = 0; k < 101; ++k) t(k) = 1.0 + 20.0 * static_cast<double>(k) / 100.0;
  return t;
}

Vector sim2_grid() {
  Vector t(100);
  for (Index k = 0; k < 100; ++k) t(k) = static_cast<double>(k) / 99.0;
  return t;
}

SimData gen_sim1(const SimSpec& spec) {
  spec.validate();
  const Vector t = sim1_grid();
  const Vector h1 = t.unaryExpr([](double v) { return bump(v); });
  const Vector h2 = t.unaryExpr([](double v) { return bump(v - 4.0); });
  const Vector h3 = t.unaryExpr([](double v) { return bump(v + 4.0); });
  const double sd = noise_sd(spec, 1.0);
  auto curve = [&](int cls, CounterRng& rng) {
    const double u = rng.uniform();
    Vector x = u * h1 + (1.0 - u) * (cls == 1 ? h2 : h3);
    for (Index k = 0; k < x.size(); ++k) x(k) += sd * rng.normal();
    return x;
  };
  return {draw(spec.n_train, t, CounterRng(spec.seed, 0, CounterRng::Train), curve),
          draw(spec.n_test, t, CounterRng(spec.seed, 0, CounterRng::Test), curve), t};
}

SimData gen_sim2(const SimSpec& spec) {
  spec.validate();
  const Vector t = sim2_grid();
  const Vector mean_shift = t.unaryExpr([](double v) { return std::sin(2.0 * std::numbers::pi * v) / 4.0; });
  const Vector common = t.unaryExpr([](double v) { return std::sin(4.0 * std::numbers::pi * v); });
  const double sd = noise_sd(spec, std::sqrt(0.1));
  auto curve = [&](int cls, CounterRng& rng) {
    const double z = rng.normal();
    Vector x = z * common;
    if (cls == 1) x += mean_shift;
    for (Index k = 0; k < x.size(); ++k) x(k) += sd * rng.normal();
    return x;
  };
  return {draw(spec.n_train, t, CounterRng(spec.seed, 0, CounterRng::Train), curve),
          draw(spec.n_test, t, CounterRng(spec.seed, 0, CounterRng::Test), curve), t};
}

SimData generate(const SimSpec& spec) {
  return spec.which == SimKind::Sim1 ? gen_sim1(spec) : gen_sim2(spec);
}

const BenchmarkCell* BenchmarkReport::find(Method method, Index n) const {
  for (const auto& cell : cells) {
    if (cell.method == method && cell.n == n) return &cell;
  }
  return nullptr;
}

void summarize(BenchmarkCell& cell) {
  double sum = 0.0;
  int count = 0;
  for (double v : cell.replication_pct) {
    if (std::isfinite(v)) {
      sum += v;
      ++count;
    }
  }
  if (count == 0) {
    cell.mean_pct = std::numeric_limits<double>::quiet_NaN();
    cell.std_pct = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  cell.mean_pct = sum / count;
  double ss = 0.0;
  for (double v : cell.replication_pct) {
    if (std::isfinite(v)) ss += (v - cell.mean_pct) * (v - cell.mean_pct);
  }
  cell.std_pct = count > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
}

BenchmarkReport run_benchmark(const BenchSpec& spec) {
  if (spec.reps < 1) throw Error(ErrorCode::Validation, "benchmark needs at least one replication");
  if (spec.methods.empty() || spec.n_values.empty()) {
    throw Error(ErrorCode::Validation, "benchmark needs at least one method and one N");
  }
  BenchmarkReport report;
  report.which = spec.which;
  report.reps = spec.reps;
  report.base_seed = spec.base_seed;
  for (int r = 0; r < spec.reps; ++r) report.seeds.push_back(spec.base_seed + static_cast<std::uint64_t>(r));

  const std::size_t n_methods = spec.methods.size();
  const auto reps = static_cast<std::size_t>(spec.reps);
  for (Index n : spec.n_values) {
    for (Method m : spec.methods) {
      BenchmarkCell cell;
      cell.method = m;
      cell.n = n;
      cell.replication_pct.assign(reps, std::numeric_limits<double>::quiet_NaN());
      cell.failure_messages.assign(reps, std::string());
      report.cells.push_back(std::move(cell));
    }
  }
  std::vector<double> seconds(report.cells.size() * reps, 0.0);

  // one unit = (N index, replication); every unit writes only its own slots
  const std::size_t units = spec.n_values.size() * reps;
  auto run_unit = [&](std::size_t unit) {
    const std::size_t ni = unit / reps;
    const std::size_t r = unit % reps;
    SimSpec sim{spec.which, spec.n_values[ni], spec.n_test, report.seeds[r], spec.noise_sd};
    const SimData data = generate(sim);
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      const std::size_t ci = ni * n_methods + mi;
      auto& cell = report.cells[ci];
      const auto start = std::chrono::steady_clock::now();
      try {
        const auto outcome = train_method(cell.method, data.train, spec.settings);
        const auto pred = predict(outcome.model, data.test.y);
        cell.replication_pct[r] = 100.0 * error_rate(pred, data.test.labels);
      } catch (const Error& e) {
        cell.failure_messages[r] = e.what();
      }
      seconds[ci * reps + r] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };

  const int workers = std::max(1, std::min<int>(spec.threads, static_cast<int>(units)));
  if (workers == 1) {
    for (std::size_t u = 0; u < units; ++u) run_unit(u);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t u = next++; u < units; u = next++) run_unit(u);
      });
    }
  }

  for (std::size_t ci = 0; ci < report.cells.size(); ++ci) {
    auto& cell = report.cells[ci];
    for (std::size_t r = 0; r < reps; ++r) {
      cell.seconds += seconds[ci * reps + r];
      if (!std::isfinite(cell.replication_pct[r])) ++cell.failures;
    }
    summarize(cell);
  }
  return report;
}

}  // namespace gplda
