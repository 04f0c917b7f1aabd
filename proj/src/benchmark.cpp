#include "sis/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

#include "sis/errors.hpp"
#include "sis/parallel.hpp"

namespace sis {

std::size_t minimum_model_size(std::span<const double> utilities,
                               std::span<const std::size_t> true_set) {
  if (true_set.empty()) throw ArgumentError("true set is empty");
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i : true_set) {
    if (i >= utilities.size()) {
      throw ArgumentError("true-set index " + std::to_string(i) +
                          " is out of range");
    }
    worst = std::min(worst, utilities[i]);
  }
  return static_cast<std::size_t>(std::count_if(
      utilities.begin(), utilities.end(), [&](double u) { return u >= worst; }));
}

double quantile_linear(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw ArgumentError("quantile of an empty sample");
  const double pos = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

RobustSummary median_and_rsd(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("summary of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  RobustSummary s;
  const std::size_t m = v.size();
  s.median = m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
  s.q25 = quantile_linear(v, 0.25);
  s.q75 = quantile_linear(v, 0.75);
  s.rsd = (s.q75 - s.q25) / 1.34;
  return s;
}

namespace {

constexpr Eigen::Index kDenseEigenLimit = 2000;

double largest_eigenvalue(const Eigen::MatrixXd& sym) {
  if (sym.rows() <= kDenseEigenLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym,
                                                          Eigen::EigenvaluesOnly);
    return solver.eigenvalues().maxCoeff();
  }
  // Power iteration on the positive semidefinite matrix.
  Eigen::VectorXd v = Eigen::VectorXd::Ones(sym.rows()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXd w = sym * v;
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (std::abs(next - lambda) <= 1e-8 * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

Eigen::MatrixXd centered(const Eigen::MatrixXd& X) {
  if (X.rows() < 2) throw ArgumentError("sample covariance needs n >= 2");
  return X.rowwise() - X.colwise().mean();
}

}  // namespace

double max_eigen_sample_cov(const Eigen::MatrixXd& X) {
  if (X.rows() <= X.cols()) {
    const Eigen::MatrixXd Xc = centered(X);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(X.rows(), X.rows());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(Xc);
    gram = gram.selfadjointView<Eigen::Lower>();
    return largest_eigenvalue(gram) / static_cast<double>(X.rows() - 1);
  }
  return max_eigen_sample_cov_direct(X);
}

double max_eigen_sample_cov_direct(const Eigen::MatrixXd& X) {
  const Eigen::MatrixXd Xc = centered(X);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(X.cols(), X.cols());
  cov.selfadjointView<Eigen::Lower>().rankUpdate(Xc.transpose());
  cov = cov.selfadjointView<Eigen::Lower>();
  return largest_eigenvalue(cov) / static_cast<double>(X.rows() - 1);
}

namespace {

struct GlmEval {
  double f = std::numeric_limits<double>::infinity();
  Eigen::VectorXd grad;
  Eigen::MatrixXd info;
};

// Mean objective, gradient and observed information of the GLM on
// design Z (intercept column included).
GlmEval glm_evaluate(const Eigen::MatrixXd& Z, std::span<const double> y,
                     Family family, const Eigen::VectorXd& coef) {
  GlmEval out;
  const Eigen::VectorXd eta = Z * coef;
  const auto n = Z.rows();
  Eigen::VectorXd resid(n), weight(n);
  double f = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = eta[i];
    if (family == Family::poisson && t > kPoissonThetaMax) return out;
    f += cumulant(family, t) - y[static_cast<std::size_t>(i)] * t;
    resid[i] = mean_function(family, t) - y[static_cast<std::size_t>(i)];
    weight[i] = variance_function(family, t);
  }
  const double inv = 1.0 / static_cast<double>(n);
  out.f = f * inv;
  out.grad = Z.transpose() * resid * inv;
  out.info = Z.transpose() * weight.asDiagonal() * Z * inv;
  return out;
}

}  // namespace

OracleFit oracle_fit(const Eigen::MatrixXd& X_true, std::span<const double> y,
                     Family family, const FitOptions& opts) {
  opts.validate();
  const auto n = X_true.rows();
  const auto k = X_true.cols();
  if (static_cast<std::size_t>(n) != y.size()) {
    throw ArgumentError("oracle design rows do not match response length");
  }
  if (k < 1) throw ArgumentError("oracle design has no columns");
  if (n <= k + 1) throw ArgumentError("oracle fit needs n > s + 1");
  check_support(family, y);

  Eigen::MatrixXd Z(n, k + 1);
  Z.col(0).setOnes();
  Z.rightCols(k) = X_true;

  const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(k + 1);
  coef[0] = canonical_link(family, ybar);

  const double bound = opts.param_bound;
  const double slack = 4.0 * std::numeric_limits<double>::epsilon();
  GlmEval ev = glm_evaluate(Z, y, family, coef);
  OracleFit fit;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    if (ev.grad.lpNorm<Eigen::Infinity>() <= opts.grad_tol) break;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(ev.info);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) break;
    const Eigen::VectorXd dir = ldlt.solve(-ev.grad);
    bool accepted = false;
    double step = 1.0;
    for (int h = 0; h <= opts.step_halvings; ++h, step *= 0.5) {
      const Eigen::VectorXd cand = (coef + step * dir).cwiseMax(-bound).cwiseMin(bound);
      GlmEval trial = glm_evaluate(Z, y, family, cand);
      if (trial.f <= ev.f + slack * std::max(1.0, std::abs(ev.f))) {
        coef = cand;
        ev = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }

  fit.coef = coef;
  fit.iterations = iter;
  fit.converged = std::isfinite(ev.f) &&
                  ev.grad.lpNorm<Eigen::Infinity>() <= opts.grad_tol &&
                  coef.cwiseAbs().maxCoeff() < bound;
  // Covariance = (n * mean information)^{-1}, times the residual variance
  // for the gaussian family.
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(ev.info * static_cast<double>(n));
  Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(k + 1, k + 1));
  if (family == Family::gaussian) {
    const Eigen::VectorXd r =
        Eigen::Map<const Eigen::VectorXd>(y.data(), n) - Z * coef;
    cov *= r.squaredNorm() / static_cast<double>(n - k - 1);
  }
  fit.se = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  fit.t = coef.cwiseQuotient(fit.se);
  fit.min_abs_t = fit.t.tail(k).cwiseAbs().minCoeff();
  if (!std::isfinite(fit.min_abs_t)) fit.converged = false;
  return fit;
}

double oracle_min_tstat(const Eigen::MatrixXd& X_true,
                        std::span<const double> y, Family family,
                        const FitOptions& opts) {
  const OracleFit fit = oracle_fit(X_true, y, family, opts);
  if (!fit.converged) {
    throw ConvergenceError("oracle model fit did not converge after " +
                           std::to_string(fit.iterations) + " iterations");
  }
  return fit.min_abs_t;
}

namespace {

std::vector<std::size_t> support_of(const SimSetting& setting) {
  std::vector<std::size_t> support(setting.s);
  std::iota(support.begin(), support.end(), std::size_t{0});
  return support;
}

struct ReplicationOutcome {
  bool ok = false;
  std::string reason;
  std::vector<StudyRecord> records;
  double agreement = 0.0;
};

}  // namespace

StudyResult run_study(const SimSetting& setting, std::size_t n_reps,
                      std::uint64_t base_seed, const StudyOptions& options) {
  setting.validate();
  if (n_reps < 1) throw ArgumentError("n_reps must be at least 1");
  if (options.methods.empty()) throw ArgumentError("no screening method requested");
  options.fit.validate();

  const int workers = resolve_workers(options.workers);
  // Parallelize over replications when there are enough of them, otherwise
  // over columns inside each replication. Either way results are placed by
  // index, so the output does not depend on the split.
  const bool outer = n_reps >= static_cast<std::size_t>(workers);
  const int inner_workers = outer ? 1 : workers;
  const auto support = support_of(setting);

  std::vector<ReplicationOutcome> outcomes(n_reps);
  std::mutex sink_mutex;
  parallel_for(n_reps, outer ? workers : 1, [&](std::size_t r) {
    const auto started = std::chrono::steady_clock::now();
    ReplicationOutcome& out = outcomes[r];
    try {
      SimulatedData data = simulate(setting, replication_seed(base_seed, r));
      ScreenOptions so;
      so.family = setting.family;
      so.fit = options.fit;
      so.standardize = true;
      so.workers = inner_workers;
      const Screening sc = screen(data.X, data.y, so);
      const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - started)
                               .count();
      for (Method m : options.methods) {
        StudyRecord rec;
        rec.replication = r;
        rec.method = m;
        rec.mms = minimum_model_size(sc.result(m).utilities, support);
        rec.runtime_ms = options.timing ? elapsed : 0;
        out.records.push_back(rec);
      }
      out.agreement = sc.rank_agreement;
      out.ok = true;
    } catch (const Error& e) {
      out.reason = e.what();
    }
    if (options.sink && out.ok) {
      std::lock_guard lock(sink_mutex);
      for (const auto& rec : out.records) options.sink(rec);
    }
  });

  StudyResult result;
  std::vector<double> agreements;
  for (std::size_t r = 0; r < n_reps; ++r) {
    if (!outcomes[r].ok) {
      result.failures.push_back({r, outcomes[r].reason});
      continue;
    }
    agreements.push_back(outcomes[r].agreement);
    for (const auto& rec : outcomes[r].records) result.records.push_back(rec);
  }
  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const StudyRecord& a, const StudyRecord& b) {
                     if (a.replication != b.replication) return a.replication < b.replication;
                     return static_cast<int>(a.method) < static_cast<int>(b.method);
                   });
  for (Method m : options.methods) {
    StudySummary s;
    s.method = m;
    s.setting = setting;
    s.skipped = result.failures.size();
    std::vector<double> mms;
    for (const auto& rec : result.records) {
      if (rec.method == m) mms.push_back(static_cast<double>(rec.mms));
    }
    s.n_reps = mms.size();
    if (!mms.empty()) {
      const RobustSummary rs = median_and_rsd(mms);
      s.mmms = rs.median;
      s.rsd = rs.rsd;
    } else {
      s.mmms = std::numeric_limits<double>::quiet_NaN();
      s.rsd = std::numeric_limits<double>::quiet_NaN();
    }
    result.summaries.push_back(s);
  }
  if (!agreements.empty()) {
    result.rank_agreement = median_and_rsd(agreements).median;
  }
  return result;
}

EigenStudy run_eigen_study(const SimSetting& setting, std::size_t n_reps,
                           std::uint64_t base_seed, int workers) {
  if (setting.n < 2) throw ArgumentError("n must be at least 2");
  if (n_reps < 1) throw ArgumentError("n_reps must be at least 1");
  EigenStudy study;
  study.records.resize(n_reps);
  parallel_for(n_reps, workers, [&](std::size_t r) {
    const Eigen::MatrixXd X = generate_design(setting, replication_seed(base_seed, r));
    study.records[r] = {r, max_eigen_sample_cov(X)};
  });
  std::vector<double> values;
  for (const auto& rec : study.records) values.push_back(rec.lambda_max);
  study.summary = median_and_rsd(values);
  return study;
}

TStatStudy run_tstat_study(const SimSetting& setting, std::size_t n_reps,
                           std::uint64_t base_seed, int workers,
                           const FitOptions& fit) {
  setting.validate();
  if (n_reps < 1) throw ArgumentError("n_reps must be at least 1");
  const auto beta = setting.beta_pattern.expand(setting.s);
  TStatStudy study;
  study.records.resize(n_reps);
  parallel_for(n_reps, workers, [&](std::size_t r) {
    const std::uint64_t seed = replication_seed(base_seed, r);
    const Eigen::MatrixXd X = generate_design_prefix(setting, seed, setting.s);
    Rng rng(stream_seed(seed, kResponseStream));
    const auto y = gen_response(X, beta, setting.family, rng);
    TStatRecord rec;
    rec.replication = r;
    try {
      const OracleFit of = oracle_fit(X, y, setting.family, fit);
      rec.converged = of.converged;
      rec.min_abs_t = of.min_abs_t;
    } catch (const Error&) {
      rec.converged = false;
      rec.min_abs_t = std::numeric_limits<double>::quiet_NaN();
    }
    study.records[r] = rec;
  });
  std::vector<double> values;
  for (const auto& rec : study.records) {
    if (rec.converged) {
      values.push_back(rec.min_abs_t);
    } else {
      ++study.failed;
    }
  }
  if (!values.empty()) study.summary = median_and_rsd(values);
  return study;
}

}  // namespace sis
