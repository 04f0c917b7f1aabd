#pragma once

#include <span>
#include <string>
#include <string_view>

namespace sis {

/// Canonical one-parameter exponential families with unit dispersion:
/// density exp{y*theta - b(theta) + c(y)}.
enum class Family { gaussian, bernoulli, poisson };

/// Poisson natural parameters above this value raise SaturationError.
inline constexpr double kPoissonThetaMax = 700.0;

std::string_view to_string(Family family);

/// Parses "gaussian" | "bernoulli" | "poisson"; throws ArgumentError.
Family parse_family(std::string_view token);

/// b(theta).
double cumulant(Family family, double theta);

/// b'(theta), the mean response.
double mean_function(Family family, double theta);

/// b''(theta), the variance function.
double variance_function(Family family, double theta);

/// (b')^{-1}(mu). Throws BoundaryError when mu is outside the open range
/// of b' (bernoulli: (0,1); poisson: (0,inf)).
double canonical_link(Family family, double mu);

/// b(theta) - y*theta. The log c(y) term is dropped since every quantity
/// built on this is a difference taken at fixed y.
double neg_loglik(Family family, double theta, double y);

bool in_support(Family family, double y);

/// Throws DomainError naming the first offending index.
void check_support(Family family, std::span<const double> y);

}  // namespace sis
