#include "sis/data_gen.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>

#include "sis/errors.hpp"
#include "sis/screening.hpp"

namespace sis {

namespace {

constexpr std::size_t kS3Tail = 50;
constexpr std::size_t kS3MaxSupport = 24;

std::string replace_all(std::string text, std::string_view from,
                        std::string_view to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::size_t shortest_period(const std::vector<double>& v) {
  for (std::size_t period = 1; period < v.size(); ++period) {
    bool ok = true;
    for (std::size_t i = period; i < v.size() && ok; ++i) {
      ok = v[i] == v[i % period];
    }
    if (ok) return period;
  }
  return v.size();
}

Eigen::VectorXd draw_normals(std::size_t n, Rng& rng) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (auto& e : v) e = rng.normal();
  return v;
}

// Unit-variance base variate of column j under the three-block rule:
// normal, Laplace / sqrt(2), two-component normal mixture / sqrt(1.75).
void fill_base(Eigen::Ref<Eigen::VectorXd> col, std::size_t j, std::size_t p,
               Rng& rng) {
  const std::size_t first = p / 3;
  const std::size_t second = 2 * p / 3;
  if (j < first) {
    for (auto& e : col) e = rng.normal();
  } else if (j < second) {
    const double scale = 1.0 / std::sqrt(2.0);
    for (auto& e : col) e = rng.laplace() * scale;
  } else {
    const double scale = 1.0 / std::sqrt(kMixtureVariance);
    const double sd2 = std::sqrt(0.5);
    for (auto& e : col) {
      const bool upper = rng.uniform() < 0.5;
      const double z = rng.normal();
      e = (upper ? 1.0 + sd2 * z : -1.0 + z) * scale;
    }
  }
}

void check_common(const SimSetting& s) {
  if (s.n < 2) throw ArgumentError("n must be at least 2");
  if (s.p < 1) throw ArgumentError("p must be at least 1");
}

// Factor-model columns [0, columns) given the loading of each column.
Eigen::MatrixXd factor_columns(const SimSetting& setting,
                               std::uint64_t rep_seed,
                               std::span<const double> loadings,
                               std::size_t columns) {
  const std::size_t n = setting.n;
  Rng factor_rng(stream_seed(rep_seed, kFactorStream));
  const Eigen::VectorXd factor = draw_normals(n, factor_rng);
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n),
                    static_cast<Eigen::Index>(columns));
  for (std::size_t j = 0; j < columns; ++j) {
    Rng rng(stream_seed(rep_seed, j + 1));
    auto col = X.col(static_cast<Eigen::Index>(j));
    fill_base(col, j, setting.p, rng);
    const double a = j < loadings.size() ? loadings[j] : 0.0;
    if (a != 0.0) {
      col = (col + a * factor) / std::sqrt(1.0 + a * a);
    }
  }
  return X;
}

std::vector<double> s1_loadings(const SimSetting& setting) {
  if (!(setting.rho >= 0.0) || setting.rho >= 1.0) {
    throw ArgumentError("s1 requires 0 <= rho < 1");
  }
  const double a = std::sqrt(setting.rho / (1.0 - setting.rho));
  return std::vector<double>(std::min(setting.q, setting.p), a);
}

std::vector<double> s2_loadings(const SimSetting& setting,
                                std::uint64_t rep_seed) {
  const double mean = s2_loading_mean(setting.rho);
  Rng rng(stream_seed(rep_seed, kLoadingStream));
  std::vector<double> a(std::min(setting.q, setting.p));
  for (auto& e : a) e = mean + rng.normal();
  return a;
}

void check_s3(const SimSetting& setting) {
  if (setting.s > kS3MaxSupport) {
    throw ArgumentError("s3 requires s <= 24");
  }
  if (setting.p <= kS3Tail || setting.p - kS3Tail < setting.s) {
    throw ArgumentError("s3 requires p - 50 >= s and p > 50");
  }
}

Eigen::MatrixXd s3_columns(const SimSetting& setting, std::uint64_t rep_seed,
                           std::size_t columns) {
  check_s3(setting);
  const std::size_t n = setting.n;
  const std::size_t head = setting.p - kS3Tail;
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n),
                    static_cast<Eigen::Index>(columns));
  const std::size_t iid = std::min(columns, head);
  for (std::size_t j = 0; j < iid; ++j) {
    Rng rng(stream_seed(rep_seed, j + 1));
    for (auto& e : X.col(static_cast<Eigen::Index>(j))) e = rng.normal();
  }
  if (columns <= head) return X;

  Eigen::VectorXd shared = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < setting.s; ++j) {
    const double sign = j % 2 == 0 ? 1.0 : -1.0;
    shared += (sign / 5.0) * X.col(static_cast<Eigen::Index>(j));
  }
  const double noise = std::sqrt(25.0 - static_cast<double>(setting.s)) / 5.0;
  for (std::size_t k = head; k < columns; ++k) {
    Rng rng(stream_seed(rep_seed, k + 1));
    auto col = X.col(static_cast<Eigen::Index>(k));
    for (auto& e : col) e = rng.normal();
    col = shared + noise * col;
  }
  return X;
}

}  // namespace

std::string_view to_string(Design design) {
  switch (design) {
    case Design::s1:
      return "S1";
    case Design::s2:
      return "S2";
    case Design::s3:
      return "S3";
  }
  return "unknown";
}

Design parse_design(std::string_view token) {
  if (token == "S1" || token == "s1") return Design::s1;
  if (token == "S2" || token == "s2") return Design::s2;
  if (token == "S3" || token == "s3") return Design::s3;
  throw ArgumentError("unknown design '" + std::string(token) +
                      "' (expected S1, S2 or S3)");
}

BetaPattern BetaPattern::parse(std::string_view text) {
  std::string t = replace_all(std::string(text), "…", "...");
  t = replace_all(std::move(t), "−", "-");
  t.erase(std::remove_if(t.begin(), t.end(),
                         [](unsigned char c) { return std::isspace(c); }),
          t.end());
  t = replace_all(std::move(t), "ᵀ", "^T");
  if (t.ends_with("^T")) t.resize(t.size() - 2);
  if (t.size() >= 2 && t.front() == '(' && t.back() == ')') {
    t = t.substr(1, t.size() - 2);
  }
  BetaPattern pattern;
  std::size_t start = 0;
  while (start <= t.size()) {
    const std::size_t comma = std::min(t.find(',', start), t.size());
    const std::string_view token(t.data() + start, comma - start);
    if (token == "...") {
      if (comma != t.size()) {
        throw ArgumentError("ellipsis must end the pattern '" +
                            std::string(text) + "'");
      }
      pattern.repeating = true;
    } else {
      double v = 0.0;
      const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
      if (token.empty() || res.ec != std::errc() ||
          res.ptr != token.data() + token.size()) {
        throw ArgumentError("cannot parse coefficient pattern '" +
                            std::string(text) + "'");
      }
      pattern.values.push_back(v);
    }
    start = comma + 1;
  }
  if (pattern.values.empty()) {
    throw ArgumentError("coefficient pattern '" + std::string(text) +
                        "' has no values");
  }
  return pattern;
}

std::string BetaPattern::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(values[i]);
  }
  if (repeating) out += ",...";
  out += ')';
  return out;
}

std::vector<double> BetaPattern::expand(std::size_t s) const {
  if (!repeating) {
    if (values.size() != s) {
      throw ArgumentError("literal pattern " + to_string() + " has " +
                          std::to_string(values.size()) +
                          " values but s = " + std::to_string(s));
    }
    return values;
  }
  const std::size_t period = shortest_period(values);
  std::vector<double> out(s);
  for (std::size_t i = 0; i < s; ++i) out[i] = values[i % period];
  return out;
}

void SimSetting::validate() const {
  check_common(*this);
  if (s < 1) throw ArgumentError("s must be at least 1");
  if (design == Design::s3) {
    if (s > kS3MaxSupport || p < kS3MaxSupport + kS3Tail) {
      throw ArgumentError("s3 requires s <= 24 <= p - 50");
    }
  } else {
    if (!(s <= q && q <= p)) {
      throw ArgumentError("s1/s2 require 0 < s <= q <= p");
    }
    if (!(rho >= 0.0) || rho >= 1.0) {
      throw ArgumentError("rho must lie in [0, 1)");
    }
  }
  beta_pattern.expand(s);
}

Eigen::MatrixXd gen_s1(const SimSetting& setting, std::uint64_t rep_seed) {
  check_common(setting);
  const auto a = s1_loadings(setting);
  return factor_columns(setting, rep_seed, a, setting.p);
}

Eigen::MatrixXd gen_s2(const SimSetting& setting, std::uint64_t rep_seed) {
  check_common(setting);
  const auto a = s2_loadings(setting, rep_seed);
  return factor_columns(setting, rep_seed, a, setting.p);
}

Eigen::MatrixXd gen_s3(const SimSetting& setting, std::uint64_t rep_seed) {
  check_common(setting);
  return s3_columns(setting, rep_seed, setting.p);
}

Eigen::MatrixXd generate_design(const SimSetting& setting,
                                std::uint64_t rep_seed) {
  switch (setting.design) {
    case Design::s1:
      return gen_s1(setting, rep_seed);
    case Design::s2:
      return gen_s2(setting, rep_seed);
    case Design::s3:
      return gen_s3(setting, rep_seed);
  }
  throw ArgumentError("unknown design");
}

Eigen::MatrixXd generate_design_prefix(const SimSetting& setting,
                                       std::uint64_t rep_seed,
                                       std::size_t columns) {
  check_common(setting);
  columns = std::min(columns, setting.p);
  switch (setting.design) {
    case Design::s1:
      return factor_columns(setting, rep_seed, s1_loadings(setting), columns);
    case Design::s2:
      return factor_columns(setting, rep_seed, s2_loadings(setting, rep_seed),
                            columns);
    case Design::s3:
      return s3_columns(setting, rep_seed, columns);
  }
  throw ArgumentError("unknown design");
}

double s2_expected_correlation(double a) {
  // E[g(a + Z)] with g(t) = t / sqrt(1 + t^2), trapezoid rule on [-12, 12].
  constexpr int kPoints = 200001;
  constexpr double kHalfWidth = 12.0;
  const double h = 2.0 * kHalfWidth / (kPoints - 1);
  const double norm = 1.0 / std::sqrt(2.0 * std::acos(-1.0));
  double sum = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double z = -kHalfWidth + h * i;
    const double t = a + z;
    const double w = (i == 0 || i == kPoints - 1) ? 0.5 : 1.0;
    sum += w * t / std::sqrt(1.0 + t * t) * std::exp(-0.5 * z * z);
  }
  const double m = sum * h * norm;
  return m * m;
}

double s2_loading_mean(double rho) {
  if (!(rho >= 0.0) || rho >= 1.0) {
    throw ArgumentError("s2 requires 0 <= rho < 1");
  }
  if (rho == 0.0) return 0.0;

  static std::mutex cache_mutex;
  static std::map<double, double> cache;
  {
    std::lock_guard lock(cache_mutex);
    if (auto it = cache.find(rho); it != cache.end()) return it->second;
  }

  double lo = 0.0, hi = 1.0;
  while (s2_expected_correlation(hi) < rho) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) {
      throw ArgumentError("expected correlation " + std::to_string(rho) +
                          " is unreachable for s2");
    }
  }
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (s2_expected_correlation(mid) < rho ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);
  std::lock_guard lock(cache_mutex);
  cache.emplace(rho, root);
  return root;
}

std::vector<double> beta_pattern(std::size_t s, const BetaPattern& pattern,
                                 std::size_t p) {
  if (s < 1) throw ArgumentError("s must be at least 1");
  if (s > p) throw ArgumentError("s exceeds p");
  std::vector<double> beta(p, 0.0);
  const auto head = pattern.expand(s);
  std::copy(head.begin(), head.end(), beta.begin());
  return beta;
}

std::vector<double> gen_response(const Eigen::MatrixXd& X,
                                 std::span<const double> beta_star,
                                 Family family, Rng& rng) {
  if (beta_star.size() != static_cast<std::size_t>(X.cols())) {
    throw ArgumentError("coefficient length does not match column count");
  }
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(X.rows());
  for (std::size_t j = 0; j < beta_star.size(); ++j) {
    if (beta_star[j] != 0.0) eta += beta_star[j] * X.col(static_cast<Eigen::Index>(j));
  }
  std::vector<double> y(static_cast<std::size_t>(X.rows()));
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double t = eta[static_cast<Eigen::Index>(i)];
    switch (family) {
      case Family::gaussian:
        y[i] = t + rng.normal();
        break;
      case Family::bernoulli:
        y[i] = rng.bernoulli(mean_function(family, t)) ? 1.0 : 0.0;
        break;
      case Family::poisson:
        y[i] = static_cast<double>(rng.poisson(mean_function(family, t)));
        break;
    }
  }
  return y;
}

SimulatedData simulate(const SimSetting& setting, std::uint64_t rep_seed,
                       bool empirical_standardize) {
  setting.validate();
  SimulatedData out;
  out.X = generate_design(setting, rep_seed);
  if (empirical_standardize) standardize_columns_inplace(out.X);
  out.beta_star = beta_pattern(setting.s, setting.beta_pattern, setting.p);
  Rng rng(stream_seed(rep_seed, kResponseStream));
  out.y = gen_response(out.X, out.beta_star, setting.family, rng);
  return out;
}

}  // namespace sis
