// Acceptance checks 1-9. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Pass criterion numbers as arguments to
// run a subset.

#include "gplda/config.hpp"
#include "gplda/csv.hpp"
#include "gplda/file_util.hpp"
#include "gplda/map_estimator.hpp"
#include "gplda/model_io.hpp"
#include "gplda/report_io.hpp"
#include "gplda/sim_bench.hpp"

#include "../unit/support.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>

using namespace gplda;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [" << what << "]";
    }
  }
};

int bench_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// ----------------------------------------------------------- reproduction

struct SimRun {
  BenchmarkReport report;
  double seconds = 0.0;
};

SimRun run_sim(SimKind which, std::vector<Method> methods, std::vector<Index> n_values) {
  BenchSpec spec;
  spec.which = which;
  spec.methods = std::move(methods);
  spec.n_values = std::move(n_values);
  spec.reps = 30;
  spec.base_seed = 1;
  spec.threads = bench_threads();
  const auto start = std::chrono::steady_clock::now();
  SimRun run{run_benchmark(spec), 0.0};
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

const SimRun& reproduction_run(SimKind which) {
  static std::map<SimKind, SimRun> runs;
  if (!runs.count(which)) {
    runs[which] = which == SimKind::Sim1
                      ? run_sim(SimKind::Sim1, {Method::GPLDA, Method::PDA}, {50, 200})
                      : run_sim(SimKind::Sim2, {Method::GPLDA, Method::PDA, Method::PCA_LDA}, {20});
  }
  return runs[which];
}

void in_band(Verdict& v, const BenchmarkCell* cell, double lo, double hi, const std::string& name) {
  v.detail << " " << name << "=" << pct(cell->mean_pct) << "+-" << pct(cell->std_pct);
  v.require(cell->failures == 0, name + " had failed replications");
  v.require(cell->mean_pct >= lo && cell->mean_pct <= hi, name + " outside [" + pct(lo) + ", " + pct(hi) + "]");
}

Verdict criterion1() {
  Verdict v;
  const auto& run = reproduction_run(SimKind::Sim1);
  in_band(v, run.report.find(Method::GPLDA, 50), 2.7, 5.7, "gplda@50");
  in_band(v, run.report.find(Method::GPLDA, 200), 1.6, 3.8, "gplda@200");
  in_band(v, run.report.find(Method::PDA, 50), 3.0, 6.5, "pda@50");
  v.detail << " runtime=" << pct(run.seconds) << "s";
  v.require(run.seconds < 600.0, "runtime over 10 minutes");
  return v;
}

Verdict criterion2() {
  Verdict v;
  const auto& run = reproduction_run(SimKind::Sim2);
  const auto* gp = run.report.find(Method::GPLDA, 20);
  const auto* pca = run.report.find(Method::PCA_LDA, 20);
  in_band(v, gp, 37.0, 47.0, "gplda@20");
  v.detail << " pca-lda@20=" << pct(pca->mean_pct) << "+-" << pct(pca->std_pct);
  v.require(pca->mean_pct >= 45.0, "pca-lda mean below 45");
  int below = 0;
  for (std::size_t r = 0; r < gp->replication_pct.size(); ++r) {
    below += gp->replication_pct[r] < pca->replication_pct[r];
  }
  v.detail << " gplda<pca in " << below << "/30";
  v.require(below >= 27, "gplda below pca-lda in fewer than 27 replications");
  v.detail << " runtime=" << pct(run.seconds) << "s";
  v.require(run.seconds < 600.0, "runtime over 10 minutes");
  return v;
}

Verdict criterion3() {
  Verdict v;
  for (SimKind which : {SimKind::Sim1, SimKind::Sim2}) {
    const auto& run = reproduction_run(which);
    for (const auto& cell : run.report.cells) {
      if (cell.method != Method::GPLDA) continue;
      const auto* pda = run.report.find(Method::PDA, cell.n);
      const std::string tag = sim_name(which) + "@" + std::to_string(cell.n);
      v.detail << " " << tag << ": gplda " << pct(cell.mean_pct) << " vs pda " << pct(pda->mean_pct);
      v.require(cell.mean_pct <= pda->mean_pct + 1.0, tag + " gplda above pda + 1");
    }
  }
  return v;
}

// ----------------------------------------------------------- fixed points

struct SmallProblem {
  LabeledFunctionalDataset data;
  SmoothingPenalty penalty;
};

/// c in {2, 3}, n in 10..40, p in 8..32, drawn uniformly.
std::vector<SmallProblem> small_problems() {
  std::mt19937_64 rng(2024);
  std::vector<SmallProblem> out;
  for (int d = 0; d < 20; ++d) {
    const int c = test::uniform_int(rng, 2, 3);
    const Index n = test::uniform_int(rng, 10, 40);
    const Index p = test::uniform_int(rng, 8, 32);
    auto data = test::random_dataset(rng, n, p, c);
    out.push_back({std::move(data), build_penalty({PenaltyKind::FirstDiff}, p)});
  }
  return out;
}

const std::vector<FitResult>& small_fits() {
  static const std::vector<FitResult> fits = [] {
    std::vector<FitResult> out;
    for (const auto& prob : small_problems()) {
      FitConfig cfg;
      cfg.penalty = prob.penalty;
      out.push_back(fit(prob.data, HyperParams{}, cfg));
    }
    return out;
  }();
  return fits;
}

double relative(const Matrix& now, const Matrix& before) {
  return (now - before).norm() / std::max(before.norm(), 1e-300);
}

double relative(double now, double before) { return std::abs(now - before) / std::max(std::abs(before), 1e-300); }

Verdict criterion4() {
  Verdict v;
  const auto problems = small_problems();
  const auto& fits = small_fits();
  const HyperParams h;
  int passed = 0;
  for (std::size_t d = 0; d < problems.size(); ++d) {
    const auto& data = problems[d].data;
    const auto& pen = problems[d].penalty;
    const auto& s = fits[d].state;
    const double lp = log_posterior(s, data, h, pen);
    const auto res = first_order_residuals(s, data, h, pen);

    const double jitter = FitConfig{}.jitter_scale;
    const double change = std::max(
        {relative(update_alpha1(s.mu, pen, h), s.alpha1), relative(update_alpha2(s.sigma_w, pen, h), s.alpha2),
         relative(update_sigma2(s.x, data, h), s.sigma2), relative(update_x(data, s.mu, s.sigma_w, s.sigma2), s.x),
         relative(update_mu(s.x, data, s.sigma_w, s.alpha1, pen), s.mu),
         relative(update_sigma_w(s.x, s.mu, data, s.alpha2, pen, h, jitter), s.sigma_w)});

    const bool ok = fits[d].trace.converged && fits[d].trace.sweeps_run <= 500 &&
                    res.max() <= 1e-5 * (1.0 + std::abs(lp)) && change <= 1e-6;
    passed += ok;
    if (!ok) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "#%zu c=%ld n=%ld p=%ld residual %.2g (limit %.2g) reapply %.2g", d,
                    static_cast<long>(data.c()), static_cast<long>(data.n()), static_cast<long>(data.p()), res.max(),
                    1e-5 * (1.0 + std::abs(lp)), change);
      v.require(false, buf);
    }
  }
  v.detail << " " << passed << "/20 datasets";
  return v;
}

Verdict criterion5() {
  Verdict v;
  const auto& fits = small_fits();
  int passed = 0;
  double worst = 0.0;
  for (std::size_t d = 0; d < fits.size(); ++d) {
    const auto& seq = fits[d].trace.log_posterior_per_sweep;
    bool ok = true;
    for (std::size_t s = 1; s < seq.size(); ++s) {
      const double drop = (seq[s - 1] - seq[s]) / std::max(std::abs(seq[s - 1]), 1e-300);
      worst = std::max(worst, drop);
      if (drop > 1e-9) ok = false;
    }
    passed += ok;
    if (!ok) v.require(false, "dataset #" + std::to_string(d) + " decreased");
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, " %d/20 datasets, largest relative drop %.2g", passed, worst);
  v.detail << buf;
  return v;
}

// ----------------------------------------------------------- gradients

Verdict criterion6() {
  Verdict v;
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Index p = test::uniform_int(rng, 3, 8);
    const int c = test::uniform_int(rng, 2, 3);
    const auto data = test::random_dataset(rng, test::uniform_int(rng, 8, 14), p, c);
    const HyperParams h;
    const auto pen = build_penalty({PenaltyKind::SecondDiff}, p);
    PosteriorState s;
    s.x = data.y + 0.5 * test::random_matrix(rng, data.n(), p);
    s.mu = data.class_means() + 0.3 * test::random_matrix(rng, data.c(), p);
    s.sigma_w = test::random_spd(rng, p);
    s.alpha1 = u(rng);
    s.alpha2 = u(rng);
    s.sigma2 = u(rng);

    const auto g = log_posterior_gradient(s, data, h, pen);
    auto fd = [&](const std::function<void(PosteriorState&, double)>& mutate, double step) {
      auto plus = s, minus = s;
      mutate(plus, step);
      mutate(minus, -step);
      return (log_posterior(plus, data, h, pen) - log_posterior(minus, data, h, pen)) / (2 * step);
    };
    Matrix gx(data.n(), p), gmu(data.c(), p), gs(p, p);
    for (Index i = 0; i < data.n(); ++i)
      for (Index j = 0; j < p; ++j) gx(i, j) = fd([&](PosteriorState& m, double e) { m.x(i, j) += e; }, 1e-5);
    for (Index i = 0; i < data.c(); ++i)
      for (Index j = 0; j < p; ++j) gmu(i, j) = fd([&](PosteriorState& m, double e) { m.mu(i, j) += e; }, 1e-5);
    for (Index i = 0; i < p; ++i) {
      for (Index j = i; j < p; ++j) {
        const double d = fd(
            [&](PosteriorState& m, double e) {
              m.sigma_w(i, j) += e;
              if (i != j) m.sigma_w(j, i) += e;
            },
            1e-6);
        gs(i, j) = gs(j, i) = i == j ? d : d / 2.0;
      }
    }
    const double errors[] = {
        relative(g.alpha1, fd([](PosteriorState& m, double e) { m.alpha1 += e; }, 1e-6)),
        relative(g.alpha2, fd([](PosteriorState& m, double e) { m.alpha2 += e; }, 1e-6)),
        relative(g.precision, fd([&](PosteriorState& m, double e) { m.sigma2 = 1.0 / (1.0 / s.sigma2 + e); }, 1e-6)),
        relative(g.x, gx),
        relative(g.mu, gmu),
        relative(g.sigma_w, gs),
    };
    for (double e : errors) worst = std::max(worst, e);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, " largest block relative error %.2g over 10 states", worst);
  v.detail << buf;
  v.require(worst <= 1e-4, "finite differences disagree");
  return v;
}

// ----------------------------------------------------------- PDA special case

Verdict criterion7() {
  Verdict v;
  std::mt19937_64 rng(707);
  double worst_generic = 0.0, worst_mle = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Index p = test::uniform_int(rng, 4, 12);
    const int c = test::uniform_int(rng, 2, 4);
    const auto data = test::random_dataset(rng, 3 * p + c, p, c);
    const auto pen = build_penalty({trial % 2 ? PenaltyKind::SecondDiff : PenaltyKind::FirstDiff}, p);
    const double alpha = std::exp(std::uniform_real_distribution<double>(-4, 4)(rng));
    const auto pda = pda_fit(data, pen, alpha, 0, 0.0);
    const auto generic = generalized_eig_top(between_covariance(data.class_means()),
                                             data.pooled_scatter() + alpha * pen.omega, c - 1);
    worst_generic = std::max(worst_generic, test::max_abs(pda.directions - generic.vectors.transpose()));
    const auto zero = pda_fit(data, pen, 0.0, 0, 0.0);
    const auto mle = mle_lda_fit(data, 0, 0.0);
    worst_mle = std::max(worst_mle, test::max_abs(zero.directions - mle.directions));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, " max |pda - generic| %.2g, max |pda(0) - mle| %.2g", worst_generic, worst_mle);
  v.detail << buf;
  v.require(worst_generic <= 1e-8, "pda differs from the generic solver");
  v.require(worst_mle <= 1e-8, "pda at alpha 0 differs from mle");
  return v;
}

// ----------------------------------------------------------- linear algebra

Verdict criterion8() {
  Verdict v;
  std::mt19937_64 rng(808);
  int cases = 0, failed = 0;
  auto expect = [&](bool ok) {
    ++cases;
    failed += !ok;
  };
  for (int t = 0; t < 250; ++t) {
    const Index p = test::uniform_int(rng, 3, 40);
    // difference operators annihilate constants (and lines for the second order)
    const Vector ones = Vector::Ones(p);
    const Vector line = Vector::LinSpaced(p, 0.0, 1.0);
    const auto d1 = build_first_difference(p), d2 = build_second_difference(p);
    expect(test::max_abs(d1.entries * ones) == 0.0);
    expect(test::max_abs(d2.entries * ones) == 0.0);
    expect(test::max_abs(d2.entries * line) <= 1e-12);
    // penalties are symmetric PSD with the expected null space
    for (auto kind : {PenaltyKind::FirstDiff, PenaltyKind::SecondDiff}) {
      const auto pen = build_penalty({kind}, p);
      Eigen::SelfAdjointEigenSolver<Matrix> es(pen.omega);
      expect(test::max_abs(pen.omega - pen.omega.transpose()) == 0.0);
      expect(es.eigenvalues().minCoeff() >= -1e-10);
      expect(test::max_abs(pen.omega * ones) <= 1e-12);
    }
    const Index rows = test::uniform_int(rng, 2, 6), cols = test::uniform_int(rng, 2, 6);
    const auto lap = build_penalty({PenaltyKind::Laplacian2D, rows, cols}, rows * cols);
    Eigen::SelfAdjointEigenSolver<Matrix> les(lap.omega);
    expect(les.eigenvalues().minCoeff() >= -1e-10);
    expect(test::max_abs(lap.omega * Vector::Ones(rows * cols)) <= 1e-12);

    // generalized eigenproblem
    const Index q = std::min<Index>(p, 12);
    const Index rank = test::uniform_int(rng, 1, static_cast<int>(std::min<Index>(q, 4)));
    const Matrix b = test::random_psd(rng, q, rank);
    const Matrix w = test::random_spd(rng, q);
    const auto eig = generalized_eig_top(b, w, rank);
    const Matrix resid = b * eig.vectors - w * eig.vectors * eig.values.asDiagonal();
    expect(test::max_abs(resid) <= 1e-8 * (1.0 + b.norm()));
    expect(test::max_abs(eig.vectors.transpose() * w * eig.vectors - Matrix::Identity(rank, rank)) <= 1e-8);
    for (Index j = 1; j < rank; ++j) expect(eig.values(j) <= eig.values(j - 1));
    // invariance: scaling B leaves the vectors, scaling W rescales them
    const double s = std::exp(std::uniform_real_distribution<double>(-3, 3)(rng));
    const auto scaled_b = generalized_eig_top(s * b, w, rank);
    const auto scaled_w = generalized_eig_top(b, s * w, rank);
    const double tol = 1e-6 * (1.0 + test::max_abs(eig.vectors));
    const bool well_separated = [&] {
      for (Index j = 1; j < rank; ++j)
        if (eig.values(j - 1) - eig.values(j) < 1e-6 * eig.values(0)) return false;
      return true;
    }();
    if (well_separated) {
      expect(test::max_abs(scaled_b.vectors - eig.vectors) <= tol);
      expect(test::max_abs(std::sqrt(s) * scaled_w.vectors - eig.vectors) <= tol);
    }
  }
  v.detail << " " << (cases - failed) << "/" << cases << " property checks over 250 random cases";
  v.require(failed == 0, std::to_string(failed) + " checks failed");
  return v;
}

// ----------------------------------------------------------- determinism

Verdict criterion9() {
  Verdict v;
  SimSpec sim{SimKind::Sim1, 50, 200, 7};
  const auto a = generate(sim), b = generate(sim);
  v.require(format_csv(a.train) == format_csv(b.train) && format_csv(a.test) == format_csv(b.test),
            "simulate differs");

  MethodSettings settings;
  for (Method m : {Method::GPLDA, Method::PDA, Method::MLE_LDA, Method::PCA_LDA}) {
    const auto first = train_method(m, a.train, settings).model;
    const auto second = train_method(m, a.train, settings).model;
    v.require(format_model(first) == format_model(second), method_name(m) + " fit differs");
    const auto back = parse_model(format_model(first));
    v.require(back.directions == first.directions && back.projected_centroids == first.projected_centroids &&
                  back.within_cov == first.within_cov && back.class_labels == first.class_labels,
              method_name(m) + " model round-trip not exact");
    v.require(predict(back, a.test.y) == predict(first, a.test.y), method_name(m) + " predictions differ");
  }

  BenchSpec spec;
  spec.n_values = {20, 40};
  spec.n_test = 60;
  spec.reps = 3;
  spec.settings.max_sweeps = 100;
  auto strip = [](const BenchmarkReport& r) {
    std::string out;
    for (const auto& cell : r.cells) {
      out += method_name(cell.method) + std::to_string(cell.n) + format_double(cell.mean_pct) +
             format_double(cell.std_pct) + std::to_string(cell.failures);
      for (double e : cell.replication_pct) out += "," + format_double(e);
      out += "\n";
    }
    return out;
  };
  const auto serial = run_benchmark(spec);
  spec.threads = 3;
  const auto parallel = run_benchmark(spec);
  v.require(strip(serial) == strip(parallel), "bench differs between runs");

  RunConfig config;
  v.require(parse_config(print_config(config)) == config, "default config round-trip");
  set_config_value(config, "method", "pca-lda");
  set_config_value(config, "hyper.b3", "0.30000000000000004");
  set_config_value(config, "pda.alpha", "0.1");
  set_config_value(config, "bench.methods", "pda,gplda");
  v.require(parse_config(print_config(config)) == config, "modified config round-trip");
  v.detail << " simulate, fit (4 methods), bench (1 vs 3 threads), model and config round-trips";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"Sim1 reproduction", criterion1},
      {"Sim2 reproduction", criterion2},
      {"GP-LDA <= PDA + 1 point", criterion3},
      {"fixed points", criterion4},
      {"monotone ascent", criterion5},
      {"gradient oracle", criterion6},
      {"PDA special case", criterion7},
      {"linear-algebra properties", criterion8},
      {"determinism and round-trips", criterion9},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(number)) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " threw: " << e.what();
    }
    failures += !v.pass;
    std::printf("%s %d %s:%s\n", v.pass ? "PASS" : "FAIL", number, criteria[i].first.c_str(), v.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
