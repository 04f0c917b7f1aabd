#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "sis/exp_family.hpp"

namespace sis {

struct FitOptions {
  double grad_tol = 1e-8;
  int max_iter = 100;
  /// Half-width B of the box [-B, B]^2 the iterates are kept in.
  double param_bound = 1e4;
  int step_halvings = 30;
  /// Gaussian fits use the least-squares closed form unless this is off.
  bool gaussian_closed_form = true;

  /// Throws ArgumentError when an option is out of range.
  void validate() const;
};

/// Result of the componentwise regression of y on (1, x_j).
struct MarginalFit {
  double beta0 = 0.0;
  double beta = 0.0;
  /// Mean negative log-likelihood at (beta0, beta).
  double neg_loglik = 0.0;
  bool converged = false;
  bool hit_bound = false;
  int iterations = 0;
  /// Set by fit_marginal_all when the column was constant.
  bool degenerate = false;
};

/// Minimizer of the mean negative log-likelihood of the intercept-only
/// model: canonical_link(mean(y)). Throws BoundaryError when mean(y) sits
/// on the boundary of the mean range, DomainError for out-of-support y.
double fit_intercept(std::span<const double> y, Family family);

/// Mean negative log-likelihood of the intercept-only fit.
double intercept_neg_loglik(std::span<const double> y, Family family);

/// (1/n) sum_i l(beta0 + beta*x_i, y_i), evaluated with the exp_family
/// primitives. Used for diagnostics; the fitter has its own fused kernels.
double empirical_neg_loglik(std::span<const double> x,
                            std::span<const double> y, Family family,
                            double beta0, double beta);

/// Damped Newton fit of the two-parameter marginal model. Throws
/// DegenerateFeatureError for constant x, DomainError for y outside the
/// family support, ArgumentError for mismatched or too-short inputs.
/// Non-convergence is reported through `converged`, not thrown.
MarginalFit fit_marginal(std::span<const double> x, std::span<const double> y,
                         Family family, const FitOptions& opts = {});

/// fit_marginal for every column of X. A constant column yields a fit with
/// degenerate = true, converged = false, beta = 0 and the intercept-only
/// objective. Output is independent of the worker count.
std::vector<MarginalFit> fit_marginal_all(const Eigen::MatrixXd& X,
                                          std::span<const double> y,
                                          Family family,
                                          const FitOptions& opts = {},
                                          int workers = 1);

}  // namespace sis
