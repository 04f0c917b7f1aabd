#include "sis/marginal_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "sis/errors.hpp"
#include "sis/parallel.hpp"

namespace sis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Distance the starting mean is pulled inside a boundary of the mean range.
constexpr double kMeanInset = 1e-6;

// Objective, gradient and observed information of the mean negative
// log-likelihood at one point. Any non-finite term makes `f` infinite.
struct Eval {
  double f = kInf;
  double g0 = 0.0, g1 = 0.0;
  double h00 = 0.0, h01 = 0.0, h11 = 0.0;
};

template <Family F>
Eval evaluate(std::span<const double> x, std::span<const double> y, double b0,
              double b1) {
  Eval out;
  double f = 0.0, g0 = 0.0, g1 = 0.0, h00 = 0.0, h01 = 0.0, h11 = 0.0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double t = b0 + b1 * xi;
    double b, mu, w;
    if constexpr (F == Family::bernoulli) {
      const double e = std::exp(-std::abs(t));
      const double d = 1.0 + e;
      b = std::max(t, 0.0) + std::log1p(e);
      mu = t >= 0.0 ? 1.0 / d : e / d;
      w = e / (d * d);
    } else if constexpr (F == Family::poisson) {
      if (t > kPoissonThetaMax) return out;
      mu = std::exp(t);
      b = mu;
      w = mu;
    } else {
      b = 0.5 * t * t;
      mu = t;
      w = 1.0;
    }
    const double r = mu - y[i];
    f += b - y[i] * t;
    g0 += r;
    g1 += r * xi;
    h00 += w;
    h01 += w * xi;
    h11 += w * xi * xi;
  }
  const double inv = 1.0 / static_cast<double>(n);
  if (!std::isfinite(f)) return out;
  out.f = f * inv;
  out.g0 = g0 * inv;
  out.g1 = g1 * inv;
  out.h00 = h00 * inv;
  out.h01 = h01 * inv;
  out.h11 = h11 * inv;
  return out;
}

Eval evaluate(Family family, std::span<const double> x,
              std::span<const double> y, double b0, double b1) {
  switch (family) {
    case Family::bernoulli:
      return evaluate<Family::bernoulli>(x, y, b0, b1);
    case Family::poisson:
      return evaluate<Family::poisson>(x, y, b0, b1);
    case Family::gaussian:
      break;
  }
  return evaluate<Family::gaussian>(x, y, b0, b1);
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e;
  return s / static_cast<double>(v.size());
}

// canonical_link of the sample mean, pulled inside the boundary if needed.
double start_intercept(Family family, double ybar) {
  switch (family) {
    case Family::bernoulli:
      ybar = std::clamp(ybar, kMeanInset, 1.0 - kMeanInset);
      break;
    case Family::poisson:
      ybar = std::max(ybar, kMeanInset);
      break;
    case Family::gaussian:
      break;
  }
  return canonical_link(family, ybar);
}

struct Point {
  double b0;
  double b1;
};

// When the data admit a direction of recession (no finite MLE), returns a
// starting point on the box boundary along that direction.
//   bernoulli: the classes are separated (possibly with ties) by a
//     threshold c on x.
//   poisson: every positive count sits at one extreme value c of x.
std::optional<Point> separated_start(Family family, std::span<const double> x,
                                     std::span<const double> y, double bound) {
  if (family == Family::gaussian) return std::nullopt;
  double xmin = kInf, xmax = -kInf;
  double lo[2] = {kInf, kInf}, hi[2] = {-kInf, -kInf};
  double count_pos = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int cls = y[i] > 0.0 ? 1 : 0;
    lo[cls] = std::min(lo[cls], x[i]);
    hi[cls] = std::max(hi[cls], x[i]);
    xmin = std::min(xmin, x[i]);
    xmax = std::max(xmax, x[i]);
    count_pos += cls;
  }
  if (count_pos == 0.0 || count_pos == static_cast<double>(x.size())) {
    return std::nullopt;
  }
  double direction = 0.0;
  double threshold = 0.0;
  double offset = 0.0;
  if (family == Family::bernoulli) {
    if (hi[0] <= lo[1]) {
      direction = 1.0;
      threshold = 0.5 * (hi[0] + lo[1]);
    } else if (hi[1] <= lo[0]) {
      direction = -1.0;
      threshold = 0.5 * (hi[1] + lo[0]);
    }
  } else {
    if (lo[1] == hi[1] && (lo[1] == xmax || lo[1] == xmin)) {
      direction = lo[1] == xmax ? 1.0 : -1.0;
      threshold = lo[1];
      double total = 0.0;
      for (double v : y) total += v;
      offset = std::log(total / count_pos);
    }
  }
  if (direction == 0.0) return std::nullopt;
  // The linear predictor equals `offset` at the threshold and falls away
  // from the positive side at slope `bound`, unless that would push the
  // intercept out of the box.
  Point p{offset - direction * bound * threshold, direction * bound};
  if (std::abs(p.b0) > bound) {
    p.b0 = std::clamp(p.b0, -bound, bound);
    if (threshold != 0.0) {
      p.b1 = std::clamp((offset - p.b0) / threshold, -bound, bound);
    }
  }
  return p;
}

double inf_norm(double a, double b) { return std::max(std::abs(a), std::abs(b)); }

// Projected damped Newton in [-B, B]^2. A coordinate sitting on the box with
// the gradient pointing outward is held fixed for the step.
MarginalFit newton(Family family, std::span<const double> x,
                   std::span<const double> y, Point start,
                   const FitOptions& opts) {
  const double bound = opts.param_bound;
  const double slack = 4.0 * std::numeric_limits<double>::epsilon();
  Point cur{std::clamp(start.b0, -bound, bound),
            std::clamp(start.b1, -bound, bound)};
  Eval ev = evaluate(family, x, y, cur.b0, cur.b1);
  if (!std::isfinite(ev.f)) {
    // Start saturated; fall back to the slope-0 slice.
    cur = {std::clamp(start_intercept(family, mean_of(y)), -bound, bound), 0.0};
    ev = evaluate(family, x, y, cur.b0, cur.b1);
  }

  MarginalFit fit;
  int iter = 0;
  for (;; ++iter) {
    if (inf_norm(ev.g0, ev.g1) <= opts.grad_tol) break;
    const bool fix0 = (cur.b0 >= bound && ev.g0 < 0.0) ||
                      (cur.b0 <= -bound && ev.g0 > 0.0);
    const bool fix1 = (cur.b1 >= bound && ev.g1 < 0.0) ||
                      (cur.b1 <= -bound && ev.g1 > 0.0);
    const double pg0 = fix0 ? 0.0 : ev.g0;
    const double pg1 = fix1 ? 0.0 : ev.g1;
    if (inf_norm(pg0, pg1) <= opts.grad_tol) break;
    if (iter >= opts.max_iter) break;

    double d0 = 0.0, d1 = 0.0;
    if (!fix0 && !fix1) {
      const double det = ev.h00 * ev.h11 - ev.h01 * ev.h01;
      if (det > 1e-14 * ev.h00 * ev.h11 && std::isfinite(det)) {
        d0 = (-ev.g0 * ev.h11 + ev.g1 * ev.h01) / det;
        d1 = (-ev.g1 * ev.h00 + ev.g0 * ev.h01) / det;
      } else {
        d0 = ev.h00 > 0.0 ? -ev.g0 / ev.h00 : -ev.g0;
        d1 = ev.h11 > 0.0 ? -ev.g1 / ev.h11 : -ev.g1;
      }
    } else if (!fix0) {
      d0 = ev.h00 > 0.0 ? -ev.g0 / ev.h00 : -ev.g0;
    } else {
      d1 = ev.h11 > 0.0 ? -ev.g1 / ev.h11 : -ev.g1;
    }

    bool accepted = false;
    double step = 1.0;
    for (int h = 0; h <= opts.step_halvings; ++h, step *= 0.5) {
      const Point cand{std::clamp(cur.b0 + step * d0, -bound, bound),
                       std::clamp(cur.b1 + step * d1, -bound, bound)};
      Eval trial = evaluate(family, x, y, cand.b0, cand.b1);
      if (trial.f <= ev.f + slack * std::max(1.0, std::abs(ev.f))) {
        cur = cand;
        ev = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }

  fit.beta0 = cur.b0;
  fit.beta = cur.b1;
  fit.neg_loglik = ev.f;
  fit.iterations = iter;
  fit.converged = std::isfinite(ev.f) && inf_norm(ev.g0, ev.g1) <= opts.grad_tol;
  fit.hit_bound = std::abs(cur.b0) >= bound || std::abs(cur.b1) >= bound;
  return fit;
}

// Expects validated inputs (lengths, support, options).
MarginalFit fit_unchecked(std::span<const double> x, std::span<const double> y,
                          Family family, const FitOptions& opts) {
  const double n = static_cast<double>(x.size());
  double xbar = 0.0, ybar = 0.0;
  double xmin = kInf, xmax = -kInf;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xbar += x[i];
    ybar += y[i];
    xmin = std::min(xmin, x[i]);
    xmax = std::max(xmax, x[i]);
  }
  if (xmin == xmax) {
    throw DegenerateFeatureError("constant feature column", -1);
  }
  xbar /= n;
  ybar /= n;

  if (family == Family::gaussian && opts.gaussian_closed_form) {
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double dx = x[i] - xbar;
      sxx += dx * dx;
      sxy += dx * (y[i] - ybar);
    }
    const double slope = sxy / sxx;
    const double intercept = ybar - slope * xbar;
    const double bound = opts.param_bound;
    if (std::abs(slope) <= bound && std::abs(intercept) <= bound) {
      const Eval ev = evaluate<Family::gaussian>(x, y, intercept, slope);
      MarginalFit fit;
      fit.beta0 = intercept;
      fit.beta = slope;
      fit.neg_loglik = ev.f;
      fit.converged = inf_norm(ev.g0, ev.g1) <= opts.grad_tol;
      fit.hit_bound = std::abs(slope) >= bound || std::abs(intercept) >= bound;
      return fit;
    }
  }

  const auto sep = separated_start(family, x, y, opts.param_bound);
  const Point start = sep ? *sep : Point{start_intercept(family, ybar), 0.0};
  return newton(family, x, y, start, opts);
}

void check_lengths(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ArgumentError("feature length " + std::to_string(x.size()) +
                        " differs from response length " +
                        std::to_string(y.size()));
  }
  if (x.size() < 2) {
    throw ArgumentError("marginal fit needs at least 2 observations");
  }
}

}  // namespace

void FitOptions::validate() const {
  if (!(grad_tol > 0.0)) throw ArgumentError("grad_tol must be positive");
  if (max_iter < 1) throw ArgumentError("max_iter must be at least 1");
  if (!(param_bound > 0.0)) throw ArgumentError("param_bound must be positive");
  if (step_halvings < 0) throw ArgumentError("step_halvings must be >= 0");
}

double fit_intercept(std::span<const double> y, Family family) {
  if (y.empty()) throw ArgumentError("empty response");
  check_support(family, y);
  return canonical_link(family, mean_of(y));
}

double intercept_neg_loglik(std::span<const double> y, Family family) {
  const double beta0 = fit_intercept(y, family);
  const double b = cumulant(family, beta0);
  return b - beta0 * mean_of(y);
}

double empirical_neg_loglik(std::span<const double> x,
                            std::span<const double> y, Family family,
                            double beta0, double beta) {
  check_lengths(x, y);
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total += neg_loglik(family, beta0 + beta * x[i], y[i]);
  }
  return total / static_cast<double>(x.size());
}

MarginalFit fit_marginal(std::span<const double> x, std::span<const double> y,
                         Family family, const FitOptions& opts) {
  opts.validate();
  check_lengths(x, y);
  check_support(family, y);
  return fit_unchecked(x, y, family, opts);
}

std::vector<MarginalFit> fit_marginal_all(const Eigen::MatrixXd& X,
                                          std::span<const double> y,
                                          Family family,
                                          const FitOptions& opts,
                                          int workers) {
  opts.validate();
  if (static_cast<std::size_t>(X.rows()) != y.size()) {
    throw ArgumentError("design has " + std::to_string(X.rows()) +
                        " rows but response has " + std::to_string(y.size()));
  }
  if (X.cols() < 1) throw ArgumentError("design has no columns");
  if (y.size() < 2) throw ArgumentError("marginal fit needs at least 2 observations");
  check_support(family, y);

  // Objective of the slope-0 slice, reported for constant columns.
  const double b0 = std::clamp(start_intercept(family, mean_of(y)),
                               -opts.param_bound, opts.param_bound);
  const std::size_t n = y.size();
  std::vector<MarginalFit> fits(static_cast<std::size_t>(X.cols()));
  parallel_for(fits.size(), workers, [&](std::size_t j) {
    const std::span<const double> col(X.col(static_cast<Eigen::Index>(j)).data(), n);
    try {
      fits[j] = fit_unchecked(col, y, family, opts);
    } catch (const DegenerateFeatureError&) {
      MarginalFit dead;
      dead.beta0 = b0;
      dead.beta = 0.0;
      dead.neg_loglik = evaluate(family, col, y, b0, 0.0).f;
      dead.degenerate = true;
      fits[j] = dead;
    }
  });
  return fits;
}

}  // namespace sis
