#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "req2tc/error.hpp"
#include "req2tc/stats.hpp"

using namespace req2tc;
using stats::Alternative;

namespace {

double phi_upper(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// U of `a` by pairwise comparison.
double pairwise_u(const std::vector<double>& a, const std::vector<double>& b) {
  double u = 0;
  for (double x : a) {
    for (double y : b) u += x > y ? 1.0 : x == y ? 0.5 : 0.0;
  }
  return u;
}

struct Enumeration {
  std::uint64_t total = 0, ge = 0, le = 0;
};

// Every way of handing ranks 1..m+n to sample a (tie-free case).
Enumeration enumerate(std::size_t m, std::size_t n, double observed) {
  Enumeration e;
  const std::size_t N = m + n;
  for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != m) continue;
    double rank_sum = 0;
    for (std::size_t r = 0; r < N; ++r) {
      if (mask & (1u << r)) rank_sum += static_cast<double>(r + 1);
    }
    const double u = rank_sum - static_cast<double>(m * (m + 1)) / 2.0;
    ++e.total;
    e.ge += u >= observed;
    e.le += u <= observed;
  }
  return e;
}

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("erfc and the normal tail agree with the standard library") {
  for (double x = -6.0; x <= 30.0; x += 0.173) {
    CAPTURE(x);
    const double want = std::erfc(x);
    CHECK(std::abs(stats::erfc(x) - want) <= 1e-12 * std::max(1.0, want) + 1e-300);
  }
  for (double z = -8.0; z <= 8.0; z += 0.25) {
    CHECK(std::abs(stats::normal_sf(z) - phi_upper(z)) <= 1e-12);
    CHECK(std::abs(stats::normal_cdf(z) - phi_upper(-z)) <= 1e-12);
  }
  // Relative accuracy deep in the tail.
  CHECK(stats::normal_sf(10.0) == doctest::Approx(phi_upper(10.0)).epsilon(1e-10));
}

TEST_CASE("U count distribution") {
  for (std::size_t m = 1; m <= 5; ++m) {
    for (std::size_t n = 1; n <= 5; ++n) {
      const auto f = stats::u_distribution(m, n);
      REQUIRE(f.size() == m * n + 1);
      CHECK(std::accumulate(f.begin(), f.end(), std::uint64_t{0}) == choose(m + n, m));
      for (std::size_t u = 0; u <= m * n; ++u) CHECK(f[u] == f[m * n - u]);
    }
  }
}

TEST_CASE("exact Mann-Whitney equals full enumeration") {
  // Grid values; samples are disjoint so there are no ties.
  std::vector<double> grid;
  for (int i = 0; i < 12; ++i) grid.push_back(0.5 + 0.75 * i);
  std::size_t cases = 0;
  for (std::size_t m = 1; m <= 6; ++m) {
    for (std::size_t n = 1; n <= 6; ++n) {
      const std::size_t N = m + n;
      // A handful of interleavings per size pair.
      for (std::uint32_t mask = 0; mask < (1u << N); mask += 1 + (1u << N) / 37) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != m) continue;
        std::vector<double> a, b;
        for (std::size_t r = 0; r < N; ++r) ((mask & (1u << r)) ? a : b).push_back(grid[r]);
        const double u = pairwise_u(a, b);
        const auto e = enumerate(m, n, u);
        for (auto alt : {Alternative::GREATER, Alternative::LESS, Alternative::TWO_SIDED}) {
          const auto t = stats::mann_whitney_u(a, b, alt);
          REQUIRE(t.method == stats::Method::MANN_WHITNEY_EXACT);
          CHECK(t.statistic == u);
          REQUIRE(t.p_numerator);
          const std::uint64_t want = alt == Alternative::GREATER ? e.ge
                                     : alt == Alternative::LESS  ? e.le
                                                                 : std::min(e.total, 2 * std::min(e.ge, e.le));
          CHECK(*t.p_numerator * e.total == want * *t.p_denominator);
        }
        ++cases;
      }
    }
  }
  CHECK(cases > 100);
}

TEST_CASE("complete separation of five against five") {
  const std::vector<double> a = {6, 7, 8, 9, 10}, b = {1, 2, 3, 4, 5};
  const auto t = stats::mann_whitney_u(a, b, Alternative::GREATER);
  CHECK(t.statistic == 25.0);
  CHECK(*t.p_numerator * 252 == *t.p_denominator);
  CHECK(t.p_value == doctest::Approx(1.0 / 252.0).epsilon(1e-15));
}

TEST_CASE("ties take the normal approximation") {
  const std::vector<double> a = {3, 4, 5}, b = {1, 2, 3};
  const auto t = stats::mann_whitney_u(a, b, Alternative::GREATER);
  CHECK(t.method == stats::Method::MANN_WHITNEY_NORMAL);
  CHECK(t.statistic == pairwise_u(a, b));
  // Tie-corrected variance: one tie group of size 2 among N = 6.
  const double mu = 4.5;
  const double var = 9.0 / 12.0 * (7.0 - (8.0 - 2.0) / (6.0 * 5.0));
  CHECK(t.p_value == doctest::Approx(phi_upper((t.statistic - mu - 0.5) / std::sqrt(var))).epsilon(1e-12));

  const auto same = stats::mann_whitney_u(a, a, Alternative::TWO_SIDED);
  CHECK(same.p_value >= 0.9);
  const std::vector<double> flat = {1, 1, 1};
  CHECK(stats::mann_whitney_u(flat, flat, Alternative::GREATER).p_value == 1.0);
  const std::vector<double> none;
  CHECK_THROWS_AS(stats::mann_whitney_u(none, a, Alternative::GREATER), Error);
}

TEST_CASE("large samples use the normal approximation") {
  std::vector<double> a, b;
  for (int i = 0; i < 25; ++i) {
    a.push_back(i + 0.25);
    b.push_back(i);
  }
  const auto t = stats::mann_whitney_u(a, b, Alternative::GREATER);
  CHECK(t.method == stats::Method::MANN_WHITNEY_NORMAL);
  const double u = pairwise_u(a, b);
  const double sd = std::sqrt(25.0 * 25.0 * 51.0 / 12.0);
  CHECK(t.p_value == doctest::Approx(phi_upper((u - 312.5 - 0.5) / sd)).epsilon(1e-12));
}

TEST_CASE("two-proportion z test") {
  auto t = stats::two_proportion_z_test(50, 100, 50, 100, Alternative::TWO_SIDED);
  CHECK(t.statistic == 0.0);
  CHECK(t.p_value == 1.0);

  t = stats::two_proportion_z_test(90, 100, 60, 100, Alternative::GREATER);
  const double pooled = 150.0 / 200.0;
  const double z = (0.9 - 0.6) / std::sqrt(pooled * (1 - pooled) * (2.0 / 100.0));
  CHECK(std::abs(t.statistic - z) <= 1e-12);
  CHECK(std::abs(t.p_value - phi_upper(z)) <= 1e-9);
  CHECK(t.p_value < 1e-5);

  t = stats::two_proportion_z_test(60, 100, 90, 100, Alternative::LESS);
  CHECK(std::abs(t.p_value - phi_upper(z)) <= 1e-9);

  t = stats::two_proportion_z_test(0, 10, 0, 20, Alternative::GREATER);
  CHECK(t.degenerate);
  CHECK(t.statistic == 0.0);
  CHECK(t.p_value == 1.0);

  CHECK_THROWS_AS(stats::two_proportion_z_test(11, 10, 1, 10, Alternative::GREATER), Error);
  CHECK_THROWS_AS(stats::two_proportion_z_test(0, 0, 1, 10, Alternative::GREATER), Error);
}

TEST_CASE("alternative names") {
  CHECK(stats::alternative_from_string("greater") == Alternative::GREATER);
  CHECK(stats::alternative_from_string("LESS") == Alternative::LESS);
  CHECK(stats::alternative_from_string("two-sided") == Alternative::TWO_SIDED);
  CHECK_THROWS_AS(stats::alternative_from_string("sideways"), Error);
}
