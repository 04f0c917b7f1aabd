#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "sis/errors.hpp"
#include "sis/screening.hpp"

using namespace sis;

namespace {

ScreeningResult from_utilities(std::vector<double> u) {
  ScreeningResult r;
  r.utilities = std::move(u);
  r.ranking = rank_features(r.utilities);
  return r;
}

MarginalFit with_beta(double beta, double nll = 0.0) {
  MarginalFit f;
  f.beta = beta;
  f.neg_loglik = nll;
  f.converged = true;
  return f;
}

Eigen::MatrixXd random_matrix(Eigen::Index n, Eigen::Index p, std::mt19937_64& gen) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd X(n, p);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = z(gen);
  return X;
}

}  // namespace

TEST_SUITE("screening") {
  TEST_CASE("standardization examples") {
    Eigen::MatrixXd X(3, 1);
    X << 1, 2, 3;
    const auto s = standardize_columns(X);
    CHECK(std::abs(s.matrix.col(0).mean()) <= 1e-12);
    CHECK(s.matrix.col(0).squaredNorm() / 3.0 == doctest::Approx(1.0).epsilon(1e-12));

    const auto again = standardize_columns(s.matrix);
    CHECK((again.matrix - s.matrix).cwiseAbs().maxCoeff() <= 1e-12);

    std::mt19937_64 gen(31);
    const Eigen::MatrixXd R = random_matrix(5, 3, gen) * 3.0;
    const auto r = standardize_columns(R);
    for (Eigen::Index j = 0; j < 3; ++j) {
      CHECK(std::abs(r.matrix.col(j).mean()) <= 1e-12);
      CHECK(std::abs(r.matrix.col(j).squaredNorm() / 5.0 - 1.0) <= 1e-12);
    }
    Eigen::MatrixXd back = r.matrix;
    restore_columns_inplace(back, r.scaling);
    CHECK((back - R).cwiseAbs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("constant column is named") {
    Eigen::MatrixXd X(4, 3);
    X << 1, 5, 2, 2, 5, 3, 3, 5, 1, 4, 5, 0;
    try {
      standardize_columns(X);
      FAIL("expected DegenerateFeatureError");
    } catch (const DegenerateFeatureError& e) {
      CHECK(e.column() == 1);
      CHECK(std::string(e.what()).find("column 1") != std::string::npos);
    }
    const auto kept = standardize_columns_inplace(X, DegeneratePolicy::keep);
    CHECK(kept.columns[1].degenerate);
    CHECK(X(0, 1) == 5.0);
  }

  TEST_CASE("mmle utilities") {
    std::vector<MarginalFit> fits{with_beta(0.5), with_beta(-2), with_beta(0)};
    CHECK(mmle_utilities(fits) == std::vector<double>{0.5, 2, 0});
    std::vector<MarginalFit> one{with_beta(0)};
    CHECK(mmle_utilities(one) == std::vector<double>{0});
  }

  TEST_CASE("mlr utilities") {
    std::vector<MarginalFit> fits{with_beta(0.1, 0.7), with_beta(1, 0.5), with_beta(1, 0.7 + 1e-15)};
    const auto u = mlr_utilities(fits, 0.7);
    CHECK(u[0] == 0.0);
    CHECK(u[1] == doctest::Approx(0.2));
    CHECK(u[2] == 0.0);
  }

  TEST_CASE("mlr utility equals a direct likelihood difference") {
    std::mt19937_64 gen(32);
    Eigen::MatrixXd X = random_matrix(40, 3, gen);
    std::vector<double> y(40);
    std::bernoulli_distribution coin(0.4);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = X(static_cast<Eigen::Index>(i), 0) + (coin(gen) ? 1.0 : -1.0) > 0 ? 1.0 : 0.0;
    const auto fits = fit_marginal_all(X, y, Family::bernoulli);
    const double null_nll = intercept_neg_loglik(y, Family::bernoulli);
    const auto u = mlr_utilities(fits, null_nll);
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= 40.0;
    const double b0 = std::log(ybar / (1 - ybar));
    const std::vector<double> zero(40, 0.0);
    const double direct_null = oracle::mean_nll(oracle::Kind::bernoulli, zero, y, b0, 0.0);
    for (Eigen::Index j = 0; j < 3; ++j) {
      const std::vector<double> col(X.col(j).data(), X.col(j).data() + 40);
      const auto& f = fits[static_cast<std::size_t>(j)];
      const double direct = direct_null - oracle::mean_nll(oracle::Kind::bernoulli, col, y, f.beta0, f.beta);
      CHECK(std::abs(u[static_cast<std::size_t>(j)] - direct) <= 1e-12);
    }
  }

  TEST_CASE("ranking examples") {
    CHECK(rank_features(std::vector<double>{1, 3, 2}) == std::vector<std::size_t>{1, 2, 0});
    CHECK(rank_features(std::vector<double>{2, 2, 2}) == std::vector<std::size_t>{0, 1, 2});
    std::mt19937_64 gen(33);
    std::uniform_int_distribution<int> small(0, 9);
    for (int k = 0; k < 100; ++k) {
      std::vector<double> u(30);
      for (auto& v : u) v = small(gen) * 0.5;
      CHECK(rank_features(u) == oracle::descending_order(u));
    }
  }

  TEST_CASE("threshold selection") {
    const auto r = from_utilities({0.5, 2, 0});
    CHECK(select_by_threshold(r, 1.0) == IndexSet{1});
    CHECK(select_by_threshold(r, 0.0) == IndexSet{0, 1, 2});
    CHECK(select_by_threshold(r, 2.5).empty());
    CHECK_THROWS_AS(select_by_threshold(r, -1.0), ArgumentError);
  }

  TEST_CASE("top-d selection") {
    const auto r = from_utilities({0.5, 2, 0});
    CHECK(select_top_d(r, 3).size() == 3);
    CHECK(select_top_d(r, 1) == IndexSet{1});
    CHECK(select_top_d(from_utilities({2, 2, 1}), 2) == IndexSet{0, 1});
    CHECK_THROWS_AS(select_top_d(r, 0), ArgumentError);
    CHECK_THROWS_AS(select_top_d(r, 4), ArgumentError);
  }

  TEST_CASE("default selection size") {
    CHECK(default_selection_size(200, 40000) == 38);
    CHECK(default_selection_size(300, 2000) == 53);
    CHECK(default_selection_size(200, 10) == 10);
  }

  TEST_CASE("method tokens") {
    CHECK(parse_method("mmle") == Method::mmle);
    CHECK(parse_method(to_string(Method::mlr)) == Method::mlr);
    CHECK_THROWS_AS(parse_method("lasso"), ArgumentError);
  }

  TEST_CASE("gaussian mmle ranking equals the absolute correlation ranking") {
    std::mt19937_64 gen(34);
    std::uniform_int_distribution<int> nn(20, 200), pp(2, 50);
    std::normal_distribution<double> z;
    for (int k = 0; k < 100; ++k) {
      const Eigen::Index n = nn(gen), p = pp(gen);
      Eigen::MatrixXd raw = random_matrix(n, p, gen);
      std::vector<double> y(static_cast<std::size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) {
        y[static_cast<std::size_t>(i)] = 0.8 * raw(i, 0) - 0.5 * raw(i, p - 1) + z(gen);
      }
      std::vector<double> corr(static_cast<std::size_t>(p));
      for (Eigen::Index j = 0; j < p; ++j) {
        corr[static_cast<std::size_t>(j)] =
            std::abs(oracle::pearson(std::span<const double>(raw.col(j).data(), static_cast<std::size_t>(n)), y));
      }
      Eigen::MatrixXd X = raw;
      ScreenOptions opts;
      const Screening sc = screen(X, y, opts);
      CHECK(sc.mmle.ranking == oracle::descending_order(corr));
    }
  }

  TEST_CASE("selection is invariant under strictly increasing transforms") {
    std::mt19937_64 gen(35);
    std::uniform_real_distribution<double> u01(0.0, 3.0);
    for (int k = 0; k < 100; ++k) {
      std::vector<double> u(40);
      for (auto& v : u) v = u01(gen);
      if (k % 3 == 0) u[5] = u[9];
      std::vector<double> t1(u.size()), t2(u.size());
      for (std::size_t j = 0; j < u.size(); ++j) {
        t1[j] = std::exp(u[j]);
        t2[j] = std::log1p(u[j]) * 7.0 + 1.0;
      }
      const auto a = from_utilities(u), b = from_utilities(t1), c = from_utilities(t2);
      for (std::size_t d : {1u, 5u, 17u, 40u}) {
        CHECK(select_top_d(a, d) == select_top_d(b, d));
        CHECK(select_top_d(a, d) == select_top_d(c, d));
      }
    }
  }

  TEST_CASE("threshold sets are nested") {
    std::mt19937_64 gen(36);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
      std::vector<double> u(25);
      for (auto& v : u) v = u01(gen);
      const auto r = from_utilities(u);
      double g1 = u01(gen), g2 = u01(gen);
      if (g1 < g2) std::swap(g1, g2);
      const auto big = select_by_threshold(r, g2), small = select_by_threshold(r, g1);
      const std::set<std::size_t> bs(big.begin(), big.end());
      for (std::size_t j : small) CHECK(bs.count(j) == 1);
    }
  }

  TEST_CASE("rank agreement is reported and shared fits drive both methods") {
    std::mt19937_64 gen(37);
    Eigen::MatrixXd X = random_matrix(100, 20, gen);
    std::vector<double> y(100);
    std::normal_distribution<double> z;
    for (Eigen::Index i = 0; i < 100; ++i) y[static_cast<std::size_t>(i)] = X(i, 2) + z(gen) > 0 ? 1.0 : 0.0;
    const Eigen::MatrixXd raw = X;
    ScreenOptions opts;
    opts.family = Family::bernoulli;
    const Screening sc = screen(X, y, opts);
    CHECK(sc.rank_agreement > 0.9);
    CHECK(sc.rank_agreement <= 1.0);
    CHECK(sc.mmle.utilities == mmle_utilities(sc.fits));
    CHECK(sc.mlr.utilities == mlr_utilities(sc.fits, sc.intercept_negloglik));
    Eigen::MatrixXd again = raw;
    standardize_columns_inplace(again);
    const auto refit = fit_marginal_all(again, y, Family::bernoulli);
    for (std::size_t j = 0; j < refit.size(); ++j) CHECK(refit[j].beta == sc.fits[j].beta);
  }

  TEST_CASE("spearman correlation") {
    CHECK(spearman_correlation(std::vector<double>{1, 2, 3}, std::vector<double>{10, 20, 30}) == doctest::Approx(1.0));
    CHECK(spearman_correlation(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}) == doctest::Approx(-1.0));
    CHECK(spearman_correlation(std::vector<double>{1, 1, 2, 3}, std::vector<double>{1, 1, 2, 3}) == doctest::Approx(1.0));
  }
}
