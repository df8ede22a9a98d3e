#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace req2tc::stats {

enum class Method { MANN_WHITNEY_EXACT, MANN_WHITNEY_NORMAL, TWO_PROPORTION_Z };
enum class Alternative { GREATER, LESS, TWO_SIDED };

std::string_view to_string(Method m) noexcept;
std::string_view to_string(Alternative a) noexcept;
Alternative alternative_from_string(std::string_view s);

struct StatTestResult {
  Method method = Method::MANN_WHITNEY_NORMAL;
  double statistic = 0.0;
  double p_value = 1.0;
  Alternative alternative = Alternative::TWO_SIDED;
  /// Exact path only: p = numerator / denominator.
  std::optional<std::uint64_t> p_numerator;
  std::optional<std::uint64_t> p_denominator;
  /// Two-proportion test with pooled proportion 0 or 1.
  bool degenerate = false;
};

/// erfc via its Maclaurin series for |x| < 3 and a continued fraction
/// beyond; absolute error below 1e-12 for the normal-tail use here.
double erfc(double x);
double normal_cdf(double z);
/// 1 - Phi(z), computed without cancellation for large z.
double normal_sf(double z);

/// Number of size-`m` subsets of ranks 1..m+n whose rank sum minus
/// m(m+1)/2 equals u, for every u in [0, m*n].
std::vector<std::uint64_t> u_distribution(std::size_t m, std::size_t n);

/// U of sample `a` with midranks. Exact p from the count recurrence when
/// |a|*|b| <= 400 and there are no ties, otherwise the normal approximation
/// with tie and continuity corrections. Throws EmptySample.
StatTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b, Alternative alt);

/// Pooled two-proportion z test. Throws InvalidArgument when a count is
/// outside [0, n] or n is zero.
StatTestResult two_proportion_z_test(std::uint64_t success_a, std::uint64_t n_a, std::uint64_t success_b,
                                     std::uint64_t n_b, Alternative alt);

}  // namespace req2tc::stats
