#pragma once

// Reference computations for the test suites. They are written from the
// textbook formulas and share no code with the library.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

enum class Kind { gaussian, bernoulli, poisson };

inline double b(Kind k, double t) {
  switch (k) {
    case Kind::gaussian:
      return 0.5 * t * t;
    case Kind::bernoulli:
      return t > 0 ? t + std::log(1.0 + std::exp(-t)) : std::log(1.0 + std::exp(t));
    case Kind::poisson:
      return std::exp(t);
  }
  return 0.0;
}

inline double db(Kind k, double t) {
  switch (k) {
    case Kind::gaussian:
      return t;
    case Kind::bernoulli:
      return 1.0 / (1.0 + std::exp(-t));
    case Kind::poisson:
      return std::exp(t);
  }
  return 0.0;
}

inline double mean_nll(Kind k, const std::vector<double>& x, const std::vector<double>& y,
                       double b0, double b1) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = b0 + b1 * x[i];
    s += b(k, t) - y[i] * t;
  }
  return s / static_cast<double>(x.size());
}

// d/d(b0) of the mean negative log-likelihood.
inline double score0(Kind k, const std::vector<double>& x, const std::vector<double>& y,
                     double b0, double b1) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += db(k, b0 + b1 * x[i]) - y[i];
  return s / static_cast<double>(x.size());
}

inline double score1(Kind k, const std::vector<double>& x, const std::vector<double>& y,
                     double b0, double b1) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (db(k, b0 + b1 * x[i]) - y[i]) * x[i];
  return s / static_cast<double>(x.size());
}

// Minimizer over b0 in [-B, B] for fixed b1, by bisection on the monotone
// score.
inline double profile_intercept(Kind k, const std::vector<double>& x,
                                const std::vector<double>& y, double b1, double B) {
  double lo = -B, hi = B;
  if (score0(k, x, y, lo, b1) >= 0.0) return lo;
  if (score0(k, x, y, hi, b1) <= 0.0) return hi;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (score0(k, x, y, mid, b1) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct GridFit {
  double b0;
  double b1;
};

// Brute-force minimizer of the two-parameter objective over [-B, B]^2.
// The slope is scanned on a grid (coarse pass over the whole range, then a
// 1e-3 pass around the coarse winner; the profile is convex in the slope),
// the intercept is profiled out exactly, and the winning grid cell is
// refined by one bisection on the profile derivative.
inline GridFit grid_minimizer(Kind k, const std::vector<double>& x,
                              const std::vector<double>& y, double B) {
  auto profile = [&](double b1) {
    return mean_nll(k, x, y, profile_intercept(k, x, y, b1, B), b1);
  };
  auto scan = [&](double lo, double hi, double step) {
    double best = lo, best_f = profile(lo);
    const int m = static_cast<int>(std::llround((hi - lo) / step));
    for (int i = 1; i <= m; ++i) {
      const double v = std::min(hi, lo + i * step);
      const double f = profile(v);
      if (f < best_f) {
        best_f = f;
        best = v;
      }
    }
    return best;
  };
  const double coarse = scan(-B, B, 1e-2);
  const double fine = scan(std::max(-B, coarse - 2e-2), std::min(B, coarse + 2e-2), 1e-3);

  auto dprofile = [&](double b1) {
    return score1(k, x, y, profile_intercept(k, x, y, b1, B), b1);
  };
  double lo = std::max(-B, fine - 1e-3), hi = std::min(B, fine + 1e-3);
  double b1 = fine;
  if (dprofile(lo) < 0.0 && dprofile(hi) > 0.0) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (dprofile(mid) > 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    b1 = 0.5 * (lo + hi);
  } else if (dprofile(hi) <= 0.0) {
    b1 = hi;
  } else if (dprofile(lo) >= 0.0) {
    b1 = lo;
  }
  return {profile_intercept(k, x, y, b1, B), b1};
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Descending order, ties by ascending index, by insertion sort.
inline std::vector<std::size_t> descending_order(const std::vector<double>& u) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < u.size(); ++j) {
    auto pos = out.begin();
    while (pos != out.end() && u[*pos] >= u[j]) ++pos;
    out.insert(pos, j);
  }
  return out;
}

// Smallest |{j : u_j >= g}| over all thresholds g that keep the true set.
inline std::size_t brute_mms(const std::vector<double>& u, const std::vector<std::size_t>& truth) {
  std::size_t best = u.size();
  for (double g : u) {
    bool all = true;
    for (std::size_t t : truth) all = all && u[t] >= g;
    if (!all) continue;
    std::size_t count = 0;
    for (double v : u) count += v >= g ? 1 : 0;
    best = std::min(best, count);
  }
  return best;
}

struct Ols {
  Eigen::VectorXd coef;
  Eigen::VectorXd t;
};

// Least squares on (1, X) with classical standard errors.
inline Ols ols(const Eigen::MatrixXd& X, const std::vector<double>& y) {
  const Eigen::Index n = X.rows(), k = X.cols() + 1;
  Eigen::MatrixXd D(n, k);
  D.col(0).setOnes();
  D.rightCols(k - 1) = X;
  const Eigen::VectorXd Y = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(D);
  Ols out;
  out.coef = qr.solve(Y);
  const double sigma2 = (Y - D * out.coef).squaredNorm() / static_cast<double>(n - k);
  const Eigen::MatrixXd cov = sigma2 * (D.transpose() * D).inverse();
  out.t = out.coef.array() / cov.diagonal().array().sqrt();
  return out;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static std::mt19937_64 gen(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() /
             ("sis-test-" + tag + "-" + std::to_string(gen() % 1000000007));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle
