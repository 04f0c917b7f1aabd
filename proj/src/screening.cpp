#include "sis/screening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sis/errors.hpp"

namespace sis {

std::string_view to_string(Method method) {
  return method == Method::mmle ? "mmle" : "mlr";
}

Method parse_method(std::string_view token) {
  if (token == "mmle") return Method::mmle;
  if (token == "mlr") return Method::mlr;
  throw ArgumentError("unknown method '" + std::string(token) +
                      "' (expected mmle or mlr)");
}

Standardization standardize_columns_inplace(Eigen::MatrixXd& X,
                                            DegeneratePolicy policy) {
  Standardization out;
  out.columns.resize(static_cast<std::size_t>(X.cols()));
  const double n = static_cast<double>(X.rows());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    auto col = X.col(j);
    ColumnScaling& s = out.columns[static_cast<std::size_t>(j)];
    if (X.rows() == 0 || col.maxCoeff() == col.minCoeff()) {
      if (policy == DegeneratePolicy::error) {
        throw DegenerateFeatureError(
            "column " + std::to_string(j) + " is constant", static_cast<long>(j));
      }
      s.degenerate = true;
      continue;
    }
    s.mean = col.sum() / n;
    col.array() -= s.mean;
    s.scale = std::sqrt(col.squaredNorm() / n);
    col /= s.scale;
  }
  return out;
}

StandardizedMatrix standardize_columns(const Eigen::MatrixXd& X) {
  StandardizedMatrix out{X, {}};
  out.scaling = standardize_columns_inplace(out.matrix, DegeneratePolicy::error);
  return out;
}

void restore_columns_inplace(Eigen::MatrixXd& X, const Standardization& s) {
  if (s.columns.size() != static_cast<std::size_t>(X.cols())) {
    throw ArgumentError("standardization record does not match column count");
  }
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const ColumnScaling& c = s.columns[static_cast<std::size_t>(j)];
    if (c.degenerate) continue;
    X.col(j) = (X.col(j) * c.scale).array() + c.mean;
  }
}

std::vector<double> mmle_utilities(std::span<const MarginalFit> fits) {
  std::vector<double> u(fits.size());
  for (std::size_t j = 0; j < fits.size(); ++j) u[j] = std::abs(fits[j].beta);
  return u;
}

std::vector<double> mlr_utilities(std::span<const MarginalFit> fits,
                                  double intercept_negloglik) {
  std::vector<double> u(fits.size());
  for (std::size_t j = 0; j < fits.size(); ++j) {
    if (fits[j].degenerate) continue;
    u[j] = std::max(0.0, intercept_negloglik - fits[j].neg_loglik);
  }
  return u;
}

std::vector<std::size_t> rank_features(std::span<const double> utilities) {
  std::vector<std::size_t> order(utilities.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // NaN sorts last.
  auto key = [&](std::size_t j) {
    const double u = utilities[j];
    return std::isnan(u) ? -std::numeric_limits<double>::infinity() : u;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return key(a) > key(b);
  });
  return order;
}

ScreeningResult make_screening_result(std::span<const MarginalFit> fits,
                                      Method method,
                                      double intercept_negloglik) {
  if (fits.empty()) throw ArgumentError("no marginal fits to screen");
  ScreeningResult r;
  r.method = method;
  r.utilities = method == Method::mmle
                    ? mmle_utilities(fits)
                    : mlr_utilities(fits, intercept_negloglik);
  r.ranking = rank_features(r.utilities);
  for (std::size_t j = 0; j < fits.size(); ++j) {
    if (!fits[j].converged) r.flagged.push_back(j);
  }
  return r;
}

IndexSet select_by_threshold(const ScreeningResult& result, double gamma) {
  if (!(gamma >= 0.0)) throw ArgumentError("threshold must be nonnegative");
  IndexSet out;
  for (std::size_t j = 0; j < result.utilities.size(); ++j) {
    if (result.utilities[j] >= gamma) out.push_back(j);
  }
  return out;
}

IndexSet select_top_d(const ScreeningResult& result, std::size_t d) {
  if (d < 1 || d > result.ranking.size()) {
    throw ArgumentError("selection size " + std::to_string(d) +
                        " is outside [1, " +
                        std::to_string(result.ranking.size()) + "]");
  }
  return IndexSet(result.ranking.begin(),
                  result.ranking.begin() + static_cast<std::ptrdiff_t>(d));
}

std::size_t default_selection_size(std::size_t n, std::size_t p) {
  std::size_t d = 1;
  if (n >= 2) {
    d = static_cast<std::size_t>(
        std::ceil(static_cast<double>(n) / std::log(static_cast<double>(n))));
  }
  return std::clamp<std::size_t>(d, 1, std::max<std::size_t>(p, 1));
}

namespace {

std::vector<double> mid_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t k = i;
    while (k + 1 < order.size() && v[order[k + 1]] == v[order[i]]) ++k;
    const double r = 0.5 * static_cast<double>(i + k) + 1.0;
    for (std::size_t m = i; m <= k; ++m) ranks[order[m]] = r;
    i = k + 1;
  }
  return ranks;
}

}  // namespace

double spearman_correlation(std::span<const double> a,
                            std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw ArgumentError("spearman correlation needs two equal-length vectors");
  }
  const auto ra = mid_ranks(a);
  const auto rb = mid_ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double da = ra[i] - mean, db = rb[i] - mean;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

Screening screen(Eigen::MatrixXd& X, std::span<const double> y,
                 const ScreenOptions& options) {
  Screening out;
  if (options.standardize) {
    out.scaling = standardize_columns_inplace(X, DegeneratePolicy::keep);
  } else {
    out.scaling.columns.resize(static_cast<std::size_t>(X.cols()));
  }
  out.intercept_negloglik = intercept_neg_loglik(y, options.family);
  out.fits = fit_marginal_all(X, y, options.family, options.fit, options.workers);
  out.mmle = make_screening_result(out.fits, Method::mmle, out.intercept_negloglik);
  out.mlr = make_screening_result(out.fits, Method::mlr, out.intercept_negloglik);
  out.rank_agreement = out.fits.size() >= 2
                           ? spearman_correlation(out.mmle.utilities, out.mlr.utilities)
                           : 1.0;
  return out;
}

}  // namespace sis
