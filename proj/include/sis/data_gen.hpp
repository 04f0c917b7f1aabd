#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sis/exp_family.hpp"
#include "sis/rng.hpp"

namespace sis {

/// Covariate designs of the simulation study.
///   s1: X_j = (e_j + a e) / sqrt(1 + a^2), common a for j < q.
///   s2: as s1 with a_j ~ N(a, 1) i.i.d. for j < q.
///   s3: p-50 i.i.d. N(0,1) columns, then 50 columns correlated with the
///       first s through an alternating-sign sum.
enum class Design { s1, s2, s3 };

std::string_view to_string(Design design);
Design parse_design(std::string_view token);

/// Slope pattern such as "(1,1.3,1)" (literal) or "(3,4,...)" (repeating).
/// A repeating pattern is extended with the shortest period consistent with
/// the listed values, so "(1,-1,...)" alternates and "(1,1.3,1,...)" repeats
/// (1,1.3).
struct BetaPattern {
  std::vector<double> values;
  bool repeating = false;

  /// Accepts ASCII or Unicode minus and "..." or U+2026; parentheses
  /// and a trailing transpose mark ("^T" or U+1D40) optional. Throws ArgumentError on anything else.
  static BetaPattern parse(std::string_view text);
  std::string to_string() const;
  /// First s coefficients. Throws ArgumentError when a literal pattern does
  /// not have exactly s values.
  std::vector<double> expand(std::size_t s) const;

  bool operator==(const BetaPattern&) const = default;
};

struct SimSetting {
  Design design = Design::s1;
  std::size_t n = 100;
  std::size_t p = 1000;
  /// Correlated block size (s1/s2).
  std::size_t q = 15;
  /// s1: common correlation in the block; s2: expected correlation.
  double rho = 0.0;
  /// Size of the true support {0, ..., s-1}.
  std::size_t s = 3;
  BetaPattern beta_pattern{{1.0, 1.3, 1.0}, false};
  Family family = Family::bernoulli;
  std::uint64_t seed = 1;

  /// Throws ArgumentError when the setting violates its invariants.
  void validate() const;
  bool operator==(const SimSetting&) const = default;
};

/// Stream ids used inside one replication. Column j draws its base variate
/// from stream j + 1.
inline constexpr std::uint64_t kFactorStream = 0;
inline constexpr std::uint64_t kLoadingStream = std::uint64_t{1} << 62;
inline constexpr std::uint64_t kResponseStream = (std::uint64_t{1} << 62) + 1;

/// Mixture component N(1, 0.5) is read with variance 0.5; the equal-weight
/// mixture with N(-1, 1) has mean 0 and variance 1.75.
inline constexpr double kMixtureVariance = 1.75;

Eigen::MatrixXd gen_s1(const SimSetting& setting, std::uint64_t rep_seed);
Eigen::MatrixXd gen_s2(const SimSetting& setting, std::uint64_t rep_seed);
/// Needs 0 <= s <= 24 and p - 50 >= s.
Eigen::MatrixXd gen_s3(const SimSetting& setting, std::uint64_t rep_seed);

/// Dispatches on setting.design.
Eigen::MatrixXd generate_design(const SimSetting& setting,
                                std::uint64_t rep_seed);

/// First `columns` columns of generate_design, bitwise identical to the
/// corresponding block of the full matrix.
Eigen::MatrixXd generate_design_prefix(const SimSetting& setting,
                                       std::uint64_t rep_seed,
                                       std::size_t columns);

/// (E[A / sqrt(1 + A^2)])^2 for A ~ N(a, 1), by a 200001-point trapezoid rule.
double s2_expected_correlation(double a);

/// Root a >= 0 of s2_expected_correlation(a) = rho, by bisection. Throws
/// ArgumentError when rho is outside [0, 1) or unreachable.
double s2_loading_mean(double rho);

/// Length-p coefficient vector with the first s entries from the pattern.
std::vector<double> beta_pattern(std::size_t s, const BetaPattern& pattern,
                                 std::size_t p);

/// Draws y given the linear predictor X * beta_star (intercept 0).
std::vector<double> gen_response(const Eigen::MatrixXd& X,
                                 std::span<const double> beta_star,
                                 Family family, Rng& rng);

struct SimulatedData {
  Eigen::MatrixXd X;
  std::vector<double> y;
  std::vector<double> beta_star;
};

/// One replication: covariates, coefficients and response. With
/// `empirical_standardize` the columns are re-standardized to sample mean 0
/// and unit mean square before the response is drawn.
SimulatedData simulate(const SimSetting& setting, std::uint64_t rep_seed,
                       bool empirical_standardize = false);

}  // namespace sis
