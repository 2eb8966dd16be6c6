#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "vax/error.hpp"
#include "vax/jep.hpp"

namespace vax {
namespace {

double log_choose(double n, double k) { return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1); }

// ln(2^53) less a margin for lgamma error.
constexpr double kExactLogLimit = 36.0;

// Exact when the result stays below 2^53.
std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return static_cast<std::uint64_t>(c);
}

}  // namespace

ContingencyTable contingency(std::size_t supported_target, std::size_t supported_total, std::size_t class_size,
                             std::size_t n_rows) {
  if (supported_target > supported_total || supported_target > class_size || class_size > n_rows ||
      supported_total > n_rows || supported_total - supported_target > n_rows - class_size)
    throw InputError("fisher: inconsistent counts");
  ContingencyTable t;
  t.supported_target = supported_target;
  t.supported_other = supported_total - supported_target;
  t.unsupported_target = class_size - supported_target;
  t.unsupported_other = (n_rows - class_size) - t.supported_other;
  return t;
}

double fisher_exact(const ContingencyTable& t) {
  const std::uint64_t target = t.supported_target + t.unsupported_target;
  const std::uint64_t other = t.supported_other + t.unsupported_other;
  if (target == 0 || other == 0) throw InputError("fisher: degenerate table, a class column is empty");
  const std::uint64_t supported = t.supported_target + t.supported_other;
  const std::uint64_t n = target + other;
  const std::uint64_t lo = t.supported_target;
  const std::uint64_t hi = std::min(target, supported);
  if (lo > hi) return 0.0;

  // P(X = x) = C(target, x) C(other, supported - x) / C(n, supported).
  // Small tables: every product is an integer below 2^53, so the tail is an
  // exact ratio and only the final division rounds.
  const double log_denominator = log_choose(static_cast<double>(n), static_cast<double>(supported));
  if (log_denominator < kExactLogLimit) {
    std::uint64_t numerator = 0;
    for (std::uint64_t x = lo; x <= hi; ++x) numerator += choose(target, x) * choose(other, supported - x);
    return static_cast<double>(numerator) / static_cast<double>(choose(n, supported));
  }

  // Otherwise log terms: the first from lgamma, the rest by the pmf ratio
  // P(x + 1) / P(x) = (target - x)(supported - x) / ((x + 1)(other - supported + x + 1)),
  // summed relative to the largest.
  std::vector<double> logs = {log_choose(static_cast<double>(target), static_cast<double>(lo)) +
                              log_choose(static_cast<double>(other), static_cast<double>(supported - lo)) -
                              log_denominator};
  for (std::uint64_t x = lo; x < hi; ++x)
    logs.push_back(logs.back() + std::log(static_cast<double>(target - x) * static_cast<double>(supported - x)) -
                   std::log(static_cast<double>(x + 1) * static_cast<double>(other - supported + x + 1)));
  const double peak = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0;
  for (double l : logs) sum += std::exp(l - peak);
  return std::clamp(std::exp(peak) * sum, 0.0, 1.0);
}

}  // namespace vax
