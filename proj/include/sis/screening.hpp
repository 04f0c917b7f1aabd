#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "sis/exp_family.hpp"
#include "sis/marginal_fit.hpp"

namespace sis {

/// mmle ranks by |beta_j|; mlr by the drop in mean negative log-likelihood
/// from the intercept-only model to the marginal model of feature j.
enum class Method { mmle, mlr };

std::string_view to_string(Method method);
Method parse_method(std::string_view token);

using IndexSet = std::vector<std::size_t>;

struct ColumnScaling {
  double mean = 0.0;
  /// Root mean square of the centered column (divisor n).
  double scale = 1.0;
  bool degenerate = false;
};

struct Standardization {
  std::vector<ColumnScaling> columns;
};

enum class DegeneratePolicy {
  /// Throw DegenerateFeatureError naming the first constant column.
  error,
  /// Leave constant columns untouched and mark them degenerate.
  keep
};

/// Centers each column and scales it to unit mean square.
Standardization standardize_columns_inplace(
    Eigen::MatrixXd& X, DegeneratePolicy policy = DegeneratePolicy::error);

struct StandardizedMatrix {
  Eigen::MatrixXd matrix;
  Standardization scaling;
};

StandardizedMatrix standardize_columns(const Eigen::MatrixXd& X);

/// Inverse of standardize_columns_inplace.
void restore_columns_inplace(Eigen::MatrixXd& X, const Standardization& s);

struct ScreeningResult {
  std::vector<double> utilities;
  /// Feature indices by descending utility; ties by ascending index.
  std::vector<std::size_t> ranking;
  Method method = Method::mmle;
  /// Columns whose fit did not converge, ascending.
  IndexSet flagged;
};

std::vector<double> mmle_utilities(std::span<const MarginalFit> fits);

/// intercept_negloglik - fit.neg_loglik, floored at 0. Degenerate columns
/// score exactly 0.
std::vector<double> mlr_utilities(std::span<const MarginalFit> fits,
                                  double intercept_negloglik);

std::vector<std::size_t> rank_features(std::span<const double> utilities);

ScreeningResult make_screening_result(std::span<const MarginalFit> fits,
                                      Method method,
                                      double intercept_negloglik);

/// {j : u_j >= gamma}, ascending.
IndexSet select_by_threshold(const ScreeningResult& result, double gamma);

/// First d entries of the ranking. Throws ArgumentError unless 1 <= d <= p.
IndexSet select_top_d(const ScreeningResult& result, std::size_t d);

/// ceil(n / log n), clamped to [1, p].
std::size_t default_selection_size(std::size_t n, std::size_t p);

/// Spearman rank correlation with mid-ranks for ties.
double spearman_correlation(std::span<const double> a,
                            std::span<const double> b);

struct ScreenOptions {
  Family family = Family::gaussian;
  FitOptions fit;
  bool standardize = true;
  int workers = 1;
};

/// Everything one screening pass produces. Both utilities come from the
/// same vector of marginal fits.
struct Screening {
  Standardization scaling;
  std::vector<MarginalFit> fits;
  double intercept_negloglik = 0.0;
  ScreeningResult mmle;
  ScreeningResult mlr;
  /// Spearman correlation between the mmle and mlr utilities.
  double rank_agreement = 0.0;

  const ScreeningResult& result(Method method) const {
    return method == Method::mmle ? mmle : mlr;
  }
};

/// Standardizes X in place (constant columns kept and flagged), fits every
/// marginal model once and derives both utility vectors.
Screening screen(Eigen::MatrixXd& X, std::span<const double> y,
                 const ScreenOptions& options);

}  // namespace sis
