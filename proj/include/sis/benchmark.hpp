#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sis/data_gen.hpp"
#include "sis/marginal_fit.hpp"
#include "sis/screening.hpp"

namespace sis {

/// Size of the smallest utility-threshold set containing every index of
/// true_set: |{j : u_j >= min_{i in true_set} u_i}|. Ties count against
/// the screener.
std::size_t minimum_model_size(std::span<const double> utilities,
                               std::span<const std::size_t> true_set);

struct RobustSummary {
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  /// (q75 - q25) / 1.34.
  double rsd = 0.0;
};

/// Linear-interpolation quantile at position (m-1)*prob of the sorted
/// sample (the "type 7" convention).
double quantile_linear(std::span<const double> sorted, double prob);

RobustSummary median_and_rsd(std::span<const double> values);

/// Largest eigenvalue of the sample covariance (divisor n-1). Uses the
/// n x n Gram matrix of the centered rows when p > n.
double max_eigen_sample_cov(const Eigen::MatrixXd& X);

/// Same quantity from the p x p covariance matrix regardless of shape.
double max_eigen_sample_cov_direct(const Eigen::MatrixXd& X);

struct OracleFit {
  /// Intercept first, then one slope per column.
  Eigen::VectorXd coef;
  Eigen::VectorXd se;
  Eigen::VectorXd t;
  bool converged = false;
  int iterations = 0;
  /// min over the slopes of |t|.
  double min_abs_t = 0.0;
};

/// Full GLM on (1, X_true) by damped Newton. Standard errors come from the
/// inverse observed information; the gaussian family scales it by the
/// residual variance RSS / (n - s - 1), so t matches least squares.
OracleFit oracle_fit(const Eigen::MatrixXd& X_true, std::span<const double> y,
                     Family family, const FitOptions& opts = {});

/// oracle_fit(...).min_abs_t; throws ConvergenceError when the fit fails.
double oracle_min_tstat(const Eigen::MatrixXd& X_true,
                        std::span<const double> y, Family family,
                        const FitOptions& opts = {});

struct StudyRecord {
  std::size_t replication = 0;
  Method method = Method::mmle;
  std::size_t mms = 0;
  std::int64_t runtime_ms = 0;

  bool operator==(const StudyRecord&) const = default;
};

struct StudySummary {
  Method method = Method::mmle;
  double mmms = 0.0;
  double rsd = 0.0;
  std::size_t n_reps = 0;
  std::size_t skipped = 0;
  SimSetting setting;
};

struct FailedReplication {
  std::size_t replication = 0;
  std::string reason;
};

struct StudyOptions {
  std::vector<Method> methods{Method::mmle, Method::mlr};
  FitOptions fit;
  int workers = 0;
  /// Record wall-clock time per replication; off gives runtime_ms = 0.
  bool timing = true;
  /// Called under a lock as each replication's records complete.
  std::function<void(const StudyRecord&)> sink;
};

struct StudyResult {
  /// Sorted by (replication, method).
  std::vector<StudyRecord> records;
  /// One per requested method, in request order.
  std::vector<StudySummary> summaries;
  std::vector<FailedReplication> failures;
  /// Median Spearman agreement between mmle and mlr utilities.
  double rank_agreement = 0.0;
};

/// Replicated screening study. Replication r uses
/// replication_seed(base_seed, r); both methods share one fit vector.
StudyResult run_study(const SimSetting& setting, std::size_t n_reps,
                      std::uint64_t base_seed, const StudyOptions& options = {});

struct EigenRecord {
  std::size_t replication = 0;
  double lambda_max = 0.0;
};

struct EigenStudy {
  std::vector<EigenRecord> records;
  RobustSummary summary;
};

EigenStudy run_eigen_study(const SimSetting& setting, std::size_t n_reps,
                           std::uint64_t base_seed, int workers = 0);

struct TStatRecord {
  std::size_t replication = 0;
  double min_abs_t = 0.0;
  bool converged = false;
};

struct TStatStudy {
  std::vector<TStatRecord> records;
  /// Over converged replications only.
  RobustSummary summary;
  std::size_t failed = 0;
};

/// Oracle-model minimum |t| per replication. Only the s support columns
/// are generated; they match the full design bitwise.
TStatStudy run_tstat_study(const SimSetting& setting, std::size_t n_reps,
                           std::uint64_t base_seed, int workers = 0,
                           const FitOptions& fit = {});

}  // namespace sis
