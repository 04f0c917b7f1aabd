#include "sis/exp_family.hpp"

#include <cmath>
#include <limits>

#include "sis/errors.hpp"

namespace sis {

namespace {

void check_finite(double theta) {
  if (!std::isfinite(theta)) {
    throw ArgumentError("natural parameter must be finite");
  }
}

double poisson_exp(double theta) {
  if (theta > kPoissonThetaMax) {
    throw SaturationError("poisson natural parameter " + std::to_string(theta) +
                          " exceeds saturation limit " +
                          std::to_string(kPoissonThetaMax));
  }
  return std::exp(theta);
}

// 1 / (1 + e^{-theta}) without overflow for either sign.
double logistic(double theta) {
  if (theta >= 0.0) {
    return 1.0 / (1.0 + std::exp(-theta));
  }
  const double e = std::exp(theta);
  return e / (1.0 + e);
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::gaussian:
      return "gaussian";
    case Family::bernoulli:
      return "bernoulli";
    case Family::poisson:
      return "poisson";
  }
  return "unknown";
}

Family parse_family(std::string_view token) {
  if (token == "gaussian") return Family::gaussian;
  if (token == "bernoulli") return Family::bernoulli;
  if (token == "poisson") return Family::poisson;
  throw ArgumentError("unknown family '" + std::string(token) +
                      "' (expected gaussian, bernoulli or poisson)");
}

double cumulant(Family family, double theta) {
  check_finite(theta);
  switch (family) {
    case Family::gaussian:
      return 0.5 * theta * theta;
    case Family::bernoulli:
      return std::max(theta, 0.0) + std::log1p(std::exp(-std::abs(theta)));
    case Family::poisson:
      return poisson_exp(theta);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double mean_function(Family family, double theta) {
  check_finite(theta);
  switch (family) {
    case Family::gaussian:
      return theta;
    case Family::bernoulli:
      return logistic(theta);
    case Family::poisson:
      return poisson_exp(theta);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double variance_function(Family family, double theta) {
  check_finite(theta);
  switch (family) {
    case Family::gaussian:
      return 1.0;
    case Family::bernoulli: {
      // p(1-p) = e^{-|t|} / (1 + e^{-|t|})^2, symmetric in theta.
      const double e = std::exp(-std::abs(theta));
      const double d = 1.0 + e;
      return e / (d * d);
    }
    case Family::poisson:
      return poisson_exp(theta);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double canonical_link(Family family, double mu) {
  if (!std::isfinite(mu)) {
    throw BoundaryError("mean must be finite");
  }
  switch (family) {
    case Family::gaussian:
      return mu;
    case Family::bernoulli:
      if (mu <= 0.0 || mu >= 1.0) {
        throw BoundaryError("bernoulli mean " + std::to_string(mu) +
                            " is outside (0, 1)");
      }
      return std::log(mu) - std::log1p(-mu);
    case Family::poisson:
      if (mu <= 0.0) {
        throw BoundaryError("poisson mean " + std::to_string(mu) +
                            " is not positive");
      }
      return std::log(mu);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

bool in_support(Family family, double y) {
  switch (family) {
    case Family::gaussian:
      return std::isfinite(y);
    case Family::bernoulli:
      return y == 0.0 || y == 1.0;
    case Family::poisson:
      return std::isfinite(y) && y >= 0.0 && y == std::floor(y);
  }
  return false;
}

void check_support(Family family, std::span<const double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!in_support(family, y[i])) {
      throw DomainError("response value " + std::to_string(y[i]) + " at row " +
                        std::to_string(i) + " is outside the " +
                        std::string(to_string(family)) + " support");
    }
  }
}

double neg_loglik(Family family, double theta, double y) {
  if (!in_support(family, y)) {
    throw DomainError("response value " + std::to_string(y) +
                      " is outside the " + std::string(to_string(family)) +
                      " support");
  }
  return cumulant(family, theta) - y * theta;
}

}  // namespace sis
