#include "req2tc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "req2tc/error.hpp"

namespace req2tc::stats {
namespace {

// erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_n 2^n x^(2n+1) / (2n+1)!!.
// Every term is positive, so there is no cancellation.
double erf_series(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 500; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-x2) * sum;
}

// erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
// evaluated with the modified Lentz algorithm. x > 0.
double erfc_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int n = 1; n < 5000; ++n) {
    const double a = n / 2.0;
    d = x + a * d;
    d = std::abs(d) < tiny ? tiny : d;
    c = x + a / c;
    c = std::abs(c) < tiny ? tiny : c;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x * x) / std::sqrt(std::numbers::pi) / f;
}

struct Ranked {
  double rank_sum_a = 0.0;
  double tie_term = 0.0;  // sum of t^3 - t over tie groups
  bool ties = false;
};

Ranked rank(std::span<const double> a, std::span<const double> b) {
  std::vector<std::pair<double, bool>> all;
  for (double v : a) all.emplace_back(v, true);
  for (double v : b) all.emplace_back(v, false);
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  Ranked r;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].second) r.rank_sum_a += midrank;
    }
    if (t > 1) {
      r.ties = true;
      r.tie_term += t * t * t - t;
    }
    i = j;
  }
  return r;
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::MANN_WHITNEY_EXACT: return "MANN_WHITNEY_EXACT";
    case Method::MANN_WHITNEY_NORMAL: return "MANN_WHITNEY_NORMAL";
    case Method::TWO_PROPORTION_Z: return "TWO_PROPORTION_Z";
  }
  return "MANN_WHITNEY_NORMAL";
}

std::string_view to_string(Alternative a) noexcept {
  switch (a) {
    case Alternative::GREATER: return "GREATER";
    case Alternative::LESS: return "LESS";
    case Alternative::TWO_SIDED: return "TWO_SIDED";
  }
  return "TWO_SIDED";
}

Alternative alternative_from_string(std::string_view s) {
  std::string l(s);
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::replace(l.begin(), l.end(), '_', '-');
  if (l == "greater") return Alternative::GREATER;
  if (l == "less") return Alternative::LESS;
  if (l == "two-sided") return Alternative::TWO_SIDED;
  throw Error(ErrorCode::InvalidArgument, "unknown alternative '" + std::string(s) + "'");
}

double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x < 0) return 2.0 - erfc(-x);
  if (x < 2.5) return 1.0 - erf_series(x);
  if (x > 27.0) return 0.0;
  return erfc_continued_fraction(x);
}

double normal_cdf(double z) { return 0.5 * erfc(-z / std::numbers::sqrt2); }
double normal_sf(double z) { return 0.5 * erfc(z / std::numbers::sqrt2); }

std::vector<std::uint64_t> u_distribution(std::size_t m, std::size_t n) {
  // f(i, j)[u] = f(i-1, j)[u-j] + f(i, j-1)[u]; f(0, j) = f(i, 0) = [1].
  std::vector<std::vector<std::uint64_t>> prev(n + 1, std::vector<std::uint64_t>{1});
  for (std::size_t i = 1; i <= m; ++i) {
    std::vector<std::vector<std::uint64_t>> cur(n + 1);
    cur[0] = {1};
    for (std::size_t j = 1; j <= n; ++j) {
      std::vector<std::uint64_t> f(i * j + 1, 0);
      for (std::size_t u = 0; u < prev[j].size(); ++u) f[u + j] += prev[j][u];
      for (std::size_t u = 0; u < cur[j - 1].size(); ++u) f[u] += cur[j - 1][u];
      cur[j] = std::move(f);
    }
    prev = std::move(cur);
  }
  return prev[n];
}

StatTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b, Alternative alt) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySample, "Mann-Whitney U needs two non-empty samples");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const auto ranked = rank(a, b);
  const double u = ranked.rank_sum_a - na * (na + 1.0) / 2.0;

  StatTestResult r;
  r.statistic = u;
  r.alternative = alt;

  if (a.size() * b.size() <= 400 && !ranked.ties) {
    const auto dist = u_distribution(a.size(), b.size());
    const auto observed = static_cast<std::size_t>(std::llround(u));
    std::uint64_t total = 0, ge = 0, le = 0;
    for (std::size_t k = 0; k < dist.size(); ++k) {
      total += dist[k];
      if (k >= observed) ge += dist[k];
      if (k <= observed) le += dist[k];
    }
    std::uint64_t numerator = 0;
    switch (alt) {
      case Alternative::GREATER: numerator = ge; break;
      case Alternative::LESS: numerator = le; break;
      case Alternative::TWO_SIDED: numerator = std::min(total, 2 * std::min(ge, le)); break;
    }
    r.method = Method::MANN_WHITNEY_EXACT;
    r.p_numerator = numerator;
    r.p_denominator = total;
    r.p_value = static_cast<double>(numerator) / static_cast<double>(total);
    return r;
  }

  r.method = Method::MANN_WHITNEY_NORMAL;
  const double n = na + nb;
  const double mu = na * nb / 2.0;
  const double var = na * nb / 12.0 * ((n + 1.0) - ranked.tie_term / (n * (n - 1.0)));
  const double sd = var > 0 ? std::sqrt(var) : 0.0;
  if (sd == 0.0) {
    r.p_value = 1.0;
    return r;
  }
  switch (alt) {
    case Alternative::GREATER: r.p_value = normal_sf((u - mu - 0.5) / sd); break;
    case Alternative::LESS: r.p_value = normal_cdf((u - mu + 0.5) / sd); break;
    case Alternative::TWO_SIDED:
      r.p_value = std::min(1.0, 2.0 * normal_sf(std::max(std::abs(u - mu) - 0.5, 0.0) / sd));
      break;
  }
  r.p_value = std::clamp(r.p_value, 0.0, 1.0);
  return r;
}

StatTestResult two_proportion_z_test(std::uint64_t success_a, std::uint64_t n_a, std::uint64_t success_b,
                                     std::uint64_t n_b, Alternative alt) {
  if (n_a == 0 || n_b == 0) throw Error(ErrorCode::InvalidArgument, "sample sizes must be positive");
  if (success_a > n_a || success_b > n_b) throw Error(ErrorCode::InvalidArgument, "successes exceed sample size");

  StatTestResult r;
  r.method = Method::TWO_PROPORTION_Z;
  r.alternative = alt;
  const double pa = static_cast<double>(success_a) / static_cast<double>(n_a);
  const double pb = static_cast<double>(success_b) / static_cast<double>(n_b);
  const double pooled = static_cast<double>(success_a + success_b) / static_cast<double>(n_a + n_b);
  if (pooled <= 0.0 || pooled >= 1.0) {
    r.degenerate = true;
    r.statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / static_cast<double>(n_a) + 1.0 / static_cast<double>(n_b)));
  const double z = (pa - pb) / se;
  r.statistic = z;
  switch (alt) {
    case Alternative::GREATER: r.p_value = normal_sf(z); break;
    case Alternative::LESS: r.p_value = normal_cdf(z); break;
    case Alternative::TWO_SIDED: r.p_value = std::min(1.0, 2.0 * normal_sf(std::abs(z))); break;
  }
  return r;
}

}  // namespace req2tc::stats
