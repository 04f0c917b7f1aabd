#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sis/errors.hpp"
#include "sis/marginal_fit.hpp"

using namespace sis;

namespace {

oracle::Kind kind_of(Family f) {
  switch (f) {
    case Family::gaussian:
      return oracle::Kind::gaussian;
    case Family::bernoulli:
      return oracle::Kind::bernoulli;
    case Family::poisson:
      return oracle::Kind::poisson;
  }
  return oracle::Kind::gaussian;
}

struct Instance {
  std::vector<double> x;
  std::vector<double> y;
};

// x ~ N(0,1), y from the family with linear predictor b0 + b1 x. Keeps
// drawing until the response is off the boundary of the mean range.
Instance random_instance(Family f, std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> coef(-1.5, 1.5);
  for (;;) {
    Instance in;
    const double b0 = coef(gen) * 0.5, b1 = coef(gen);
    bool pos = false, zero = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = z(gen);
      const double t = b0 + b1 * x;
      double y = 0.0;
      if (f == Family::gaussian) {
        y = t + z(gen);
      } else if (f == Family::bernoulli) {
        y = std::bernoulli_distribution(1.0 / (1.0 + std::exp(-t)))(gen) ? 1.0 : 0.0;
      } else {
        y = static_cast<double>(std::poisson_distribution<int>(std::exp(t))(gen));
      }
      pos = pos || y > 0.0;
      zero = zero || y == 0.0;
      in.x.push_back(x);
      in.y.push_back(y);
    }
    if (f == Family::gaussian || (pos && (zero || f == Family::poisson))) return in;
  }
}

}  // namespace

TEST_SUITE("marginal_fit") {
  TEST_CASE("intercept-only examples") {
    CHECK(fit_intercept(std::vector<double>{0, 1, 1, 0}, Family::bernoulli) == doctest::Approx(0.0));
    CHECK(fit_intercept(std::vector<double>{1.0, 4.0}, Family::gaussian) == doctest::Approx(2.5));
    CHECK(fit_intercept(std::vector<double>{1, 1, 1, 1}, Family::poisson) == doctest::Approx(0.0));
    CHECK_THROWS_AS(fit_intercept(std::vector<double>{0, 0, 0}, Family::bernoulli), BoundaryError);
    CHECK_THROWS_AS(fit_intercept(std::vector<double>{1, 1}, Family::bernoulli), BoundaryError);
    CHECK_THROWS_AS(fit_intercept(std::vector<double>{0, 0}, Family::poisson), BoundaryError);
  }

  TEST_CASE("gaussian perfect fit") {
    const std::vector<double> x{-1, 0, 1}, y{-1, 0, 1};
    const MarginalFit fit = fit_marginal(x, y, Family::gaussian);
    CHECK(fit.beta0 == doctest::Approx(0.0));
    CHECK(fit.beta == doctest::Approx(1.0));
    CHECK(fit.converged);
  }

  TEST_CASE("response outside the support is a domain error") {
    const std::vector<double> x{-1, 0, 1}, y{2, 2, 2};
    CHECK_THROWS_AS(fit_marginal(x, y, Family::bernoulli), DomainError);
  }

  TEST_CASE("constant feature and bad inputs") {
    const std::vector<double> x{3, 3, 3}, y{0, 1, 0};
    CHECK_THROWS_AS(fit_marginal(x, y, Family::bernoulli), DegenerateFeatureError);
    CHECK_THROWS_AS(fit_marginal(std::vector<double>{1.0}, std::vector<double>{1.0}, Family::gaussian),
                    ArgumentError);
    CHECK_THROWS_AS(fit_marginal(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}, Family::gaussian),
                    ArgumentError);
    FitOptions bad;
    bad.param_bound = 0.0;
    CHECK_THROWS_AS(fit_marginal(std::vector<double>{1, 2}, std::vector<double>{1, 2}, Family::gaussian, bad),
                    ArgumentError);
  }

  TEST_CASE("separated logistic toy matches the grid oracle") {
    const std::vector<double> x{-2, -1, 0, 1, 2}, y{0, 0, 1, 1, 1};
    FitOptions opts;
    opts.param_bound = 10.0;
    const MarginalFit fit = fit_marginal(x, y, Family::bernoulli, opts);
    const auto ref = oracle::grid_minimizer(oracle::Kind::bernoulli, x, y, 10.0);
    CHECK(std::abs(fit.beta0 - ref.b0) <= 2e-3);
    CHECK(std::abs(fit.beta - ref.b1) <= 2e-3);
    CHECK(fit.hit_bound);
  }

  TEST_CASE("Newton agrees with the grid oracle on random instances") {
    std::mt19937_64 gen(21);
    FitOptions opts;
    opts.param_bound = 10.0;
    for (Family f : {Family::bernoulli, Family::poisson}) {
      for (int k = 0; k < 6; ++k) {
        const auto in = random_instance(f, 20 + 5 * k, gen);
        const MarginalFit fit = fit_marginal(in.x, in.y, f, opts);
        const auto ref = oracle::grid_minimizer(kind_of(f), in.x, in.y, 10.0);
        CHECK(std::abs(fit.beta0 - ref.b0) <= 2e-3);
        CHECK(std::abs(fit.beta - ref.b1) <= 2e-3);
      }
    }
  }

  TEST_CASE("gradient vanishes at converged fits") {
    std::mt19937_64 gen(22);
    for (Family f : {Family::gaussian, Family::bernoulli, Family::poisson}) {
      for (int k = 0; k < 50; ++k) {
        const auto in = random_instance(f, 30 + 10 * (k % 10), gen);
        const MarginalFit fit = fit_marginal(in.x, in.y, f);
        if (!fit.converged) continue;
        const auto kk = kind_of(f);
        CHECK(std::abs(oracle::score0(kk, in.x, in.y, fit.beta0, fit.beta)) <= 1e-8);
        CHECK(std::abs(oracle::score1(kk, in.x, in.y, fit.beta0, fit.beta)) <= 1e-8);
      }
    }
  }

  TEST_CASE("marginal fit never does worse than the intercept-only model") {
    std::mt19937_64 gen(23);
    for (Family f : {Family::gaussian, Family::bernoulli, Family::poisson}) {
      for (int k = 0; k < 50; ++k) {
        const auto in = random_instance(f, 10 + 7 * (k % 12), gen);
        const MarginalFit fit = fit_marginal(in.x, in.y, f);
        const double null_nll = intercept_neg_loglik(in.y, f);
        CHECK(fit.neg_loglik <= null_nll + 1e-12);
        CHECK(null_nll - fit.neg_loglik >= -1e-10);
        CHECK(std::abs(fit.beta0) <= 1e4);
        CHECK(std::abs(fit.beta) <= 1e4);
        CHECK(fit.neg_loglik == doctest::Approx(empirical_neg_loglik(in.x, in.y, f, fit.beta0, fit.beta)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("gaussian closed form matches forced Newton") {
    std::mt19937_64 gen(24);
    FitOptions newton;
    newton.gaussian_closed_form = false;
    for (int k = 0; k < 50; ++k) {
      const auto in = random_instance(Family::gaussian, 20 + k, gen);
      const MarginalFit a = fit_marginal(in.x, in.y, Family::gaussian);
      const MarginalFit b = fit_marginal(in.x, in.y, Family::gaussian, newton);
      CHECK(b.converged);
      CHECK(std::abs(a.beta0 - b.beta0) <= 1e-8);
      CHECK(std::abs(a.beta - b.beta) <= 1e-8);
    }
  }

  TEST_CASE("complete separation stops on the box") {
    std::mt19937_64 gen(25);
    std::normal_distribution<double> z;
    for (int k = 0; k < 20; ++k) {
      std::vector<double> x(30), y(30);
      for (auto& v : x) v = z(gen);
      std::sort(x.begin(), x.end());
      const std::size_t cut = 10 + static_cast<std::size_t>(k) / 2;
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = (i >= cut) == (k % 2 == 0) ? 1.0 : 0.0;
      const double threshold = 0.5 * (x[cut - 1] + x[cut]);
      const MarginalFit fit = fit_marginal(x, y, Family::bernoulli);
      CHECK(fit.hit_bound);
      CHECK(std::isfinite(fit.neg_loglik));
      CHECK((fit.beta > 0) == (k % 2 == 0));
      // With the class boundary inside [-1, 1] the slope is the binding
      // coordinate; further out the intercept binds first.
      if (std::abs(threshold) < 1.0) CHECK(std::abs(fit.beta) == doctest::Approx(1e4));
    }
  }

  TEST_CASE("poisson with all counts at one extreme stops on the box") {
    const std::vector<double> x{-1, -0.5, 0, 0.5, 1}, y{0, 0, 0, 0, 3};
    const MarginalFit fit = fit_marginal(x, y, Family::poisson);
    CHECK(fit.hit_bound);
    CHECK(std::isfinite(fit.neg_loglik));
    CHECK(fit.beta > 0);
  }

  TEST_CASE("batch fits: duplicates, isolation and bitwise agreement") {
    std::mt19937_64 gen(26);
    std::normal_distribution<double> z;
    const Eigen::Index n = 80, p = 50;
    Eigen::MatrixXd X(n, p);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = z(gen);
    X.col(7) = X.col(3);
    X.col(11).setConstant(2.0);
    std::vector<double> y(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = X(i, 0) + z(gen) > 0 ? 1.0 : 0.0;

    for (Family f : {Family::gaussian, Family::bernoulli}) {
      const auto fits = fit_marginal_all(X, y, f, {}, 1);
      const auto fits4 = fit_marginal_all(X, y, f, {}, 4);
      REQUIRE(fits.size() == static_cast<std::size_t>(p));
      CHECK(fits[3].beta == fits[7].beta);
      CHECK(fits[3].beta0 == fits[7].beta0);
      CHECK(fits[11].degenerate);
      CHECK_FALSE(fits[11].converged);
      CHECK(fits[11].beta == 0.0);
      CHECK(fits[11].neg_loglik == doctest::Approx(intercept_neg_loglik(y, f)));
      for (Eigen::Index j = 0; j < p; ++j) {
        const auto& a = fits[static_cast<std::size_t>(j)];
        const auto& c = fits4[static_cast<std::size_t>(j)];
        CHECK(a.beta == c.beta);
        CHECK(a.neg_loglik == c.neg_loglik);
        if (j == 11) continue;
        CHECK_FALSE(a.degenerate);
        const std::vector<double> col(X.col(j).data(), X.col(j).data() + n);
        const MarginalFit single = fit_marginal(col, y, f);
        CHECK(a.beta0 == single.beta0);
        CHECK(a.beta == single.beta);
        CHECK(a.neg_loglik == single.neg_loglik);
        CHECK(a.converged == single.converged);
      }
    }
  }

  TEST_CASE("intercept identity holds across families") {
    std::mt19937_64 gen(27);
    for (Family f : {Family::gaussian, Family::bernoulli, Family::poisson}) {
      for (int k = 0; k < 100; ++k) {
        const auto in = random_instance(f, 5 + k, gen);
        const double b0 = fit_intercept(in.y, f);
        double ybar = 0.0;
        for (double v : in.y) ybar += v;
        ybar /= static_cast<double>(in.y.size());
        CHECK(std::abs(mean_function(f, b0) - ybar) <= 1e-10);
      }
    }
  }
}
