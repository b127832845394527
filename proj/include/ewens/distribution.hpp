#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ewens/detail/big_numeric.hpp"
#include "ewens/detail/compensated.hpp"
#include "ewens/detail/extended_real.hpp"
#include "ewens/errors.hpp"
#include "ewens/params.hpp"
#include "ewens/stirling.hpp"

namespace ewens {

/// Default cap for carrying exact rational probabilities alongside the
/// log-space ones (numerators grow factorially with n).
inline constexpr std::int64_t kDefaultExactPmfLimit = 200;

/// Law of the number of blocks K for given (n, theta), supported on 1..n.
/// log_pmf[x-1] holds ln P(K = x); exact_pmf is present when theta was given
/// as a rational and n is within the exact-path limit. Immutable once built.
struct LengthDistribution {
  EwensParams params;
  std::vector<double> log_pmf;
  std::optional<std::vector<BigRational>> exact_pmf;

  [[nodiscard]] std::int64_t n() const { return params.n; }

  /// P(K = x) as a double (0 when the value underflows the double range).
  [[nodiscard]] double pmf(std::int64_t x) const {
    return std::exp(log_pmf[static_cast<std::size_t>(x - 1)]);
  }
};

namespace detail {

/// Success probabilities p_i = theta/(theta+i-1) and their complements
/// (i-1)/(theta+i-1); the complement is formed directly, not as 1 - p.
inline std::pair<double, double> bernoulli_probs(double theta, std::int64_t i) {
  const double denom = theta + static_cast<double>(i - 1);
  return {theta / denom, static_cast<double>(i - 1) / denom};
}

/// Exact numerators of the convolution over the common denominator
/// prod_{j<=n} (a + (j-1) b), for theta = a/b. num[x] is the numerator of
/// P(K = x). The i = 1 trial is deterministic and contributes the factor
/// a/a, so the base state is num[1] = a.
inline std::vector<BigInt> convolution_numerators(std::int64_t n, const BigInt& a,
                                                  const BigInt& b) {
  std::vector<BigInt> num(static_cast<std::size_t>(n) + 1);
  num[1] = a;
  for (std::int64_t i = 2; i <= n; ++i) {
    const BigInt fail = b * (i - 1);
    num[static_cast<std::size_t>(i)] = a * num[static_cast<std::size_t>(i - 1)];
    for (std::int64_t x = i - 1; x >= 2; --x) {
      auto& slot = num[static_cast<std::size_t>(x)];
      slot *= fail;
      slot += a * num[static_cast<std::size_t>(x - 1)];
    }
    num[1] *= fail;
  }
  num.erase(num.begin());
  return num;
}

inline BigInt rising_factorial_denominator(std::int64_t n, const BigInt& a, const BigInt& b) {
  BigInt d = 1;
  for (std::int64_t i = 1; i <= n; ++i) {
    d *= a + (i - 1) * b;
  }
  return d;
}

}  // namespace detail

/// Evaluates P(K = x) = s(n, x) theta^x / (theta)_n from a prebuilt Stirling
/// table. Requires n <= table.n_max().
inline LengthDistribution pmf_stirling(const EwensParams& params, const StirlingTable& table,
                                       std::int64_t exact_limit = kDefaultExactPmfLimit) {
  const std::int64_t n = params.n;
  if (n > table.n_max()) {
    throw dimension_error("n = " + std::to_string(n) + " exceeds table n_max = " +
                          std::to_string(table.n_max()));
  }
  LengthDistribution dist;
  dist.params = params;
  dist.log_pmf.resize(static_cast<std::size_t>(n));

  const double log_theta = std::log(params.theta);
  detail::CompensatedSum log_rising;  // ln (theta)_n
  for (std::int64_t i = 1; i <= n; ++i) {
    log_rising.add(std::log(params.theta + static_cast<double>(i - 1)));
  }
  const double log_denom = log_rising.value();
  const auto logs = table.log_row(n);
  for (std::int64_t x = 1; x <= n; ++x) {
    dist.log_pmf[static_cast<std::size_t>(x - 1)] =
        logs[static_cast<std::size_t>(x - 1)] + static_cast<double>(x) * log_theta - log_denom;
  }

  if (params.has_exact_theta() && n <= exact_limit) {
    const BigInt a = boost::multiprecision::numerator(*params.theta_rational);
    const BigInt b = boost::multiprecision::denominator(*params.theta_rational);
    const BigInt denom = detail::rising_factorial_denominator(n, a, b);
    std::vector<BigRational> exact;
    exact.reserve(static_cast<std::size_t>(n));
    BigInt a_pow = 1;          // a^x
    BigInt b_pow = boost::multiprecision::pow(b, static_cast<unsigned>(n));  // b^(n-x)
    for (std::int64_t x = 1; x <= n; ++x) {
      a_pow *= a;
      b_pow /= b;
      exact.emplace_back(table.at(n, x) * a_pow * b_pow, denom);
    }
    dist.exact_pmf = std::move(exact);
  }
  return dist;
}

/// Evaluates the same law through the Bernoulli representation: K is
/// distributed as the sum of independent Bernoulli(theta/(theta+i-1)),
/// i = 1..n, convolved by dynamic programming. The float path runs on
/// base-2-scaled doubles, so tail values below the double range keep full
/// relative precision instead of underflowing.
inline LengthDistribution pmf_poisson_binomial(const EwensParams& params,
                                               std::int64_t exact_limit = kDefaultExactPmfLimit) {
  const std::int64_t n = params.n;
  LengthDistribution dist;
  dist.params = params;
  dist.log_pmf.resize(static_cast<std::size_t>(n));

  std::vector<detail::ExtReal> v(static_cast<std::size_t>(n) + 1);
  v[1] = detail::ext_from(1.0);
  for (std::int64_t i = 2; i <= n; ++i) {
    const auto [p, q] = detail::bernoulli_probs(params.theta, i);
    v[static_cast<std::size_t>(i)] = detail::ext_scale(p, v[static_cast<std::size_t>(i - 1)]);
    // v'[x] = q v[x] + p v[x-1], anchored on whichever side carries weight
    // >= 1/2 so the computed combination never cancels.
    if (p <= 0.5) {
      for (std::int64_t x = i - 1; x >= 2; --x) {
        v[static_cast<std::size_t>(x)] = detail::ext_lerp(p, v[static_cast<std::size_t>(x)],
                                                          v[static_cast<std::size_t>(x - 1)]);
      }
    } else {
      for (std::int64_t x = i - 1; x >= 2; --x) {
        v[static_cast<std::size_t>(x)] = detail::ext_lerp(q, v[static_cast<std::size_t>(x - 1)],
                                                          v[static_cast<std::size_t>(x)]);
      }
    }
    v[1] = detail::ext_scale(q, v[1]);
  }
  for (std::int64_t x = 1; x <= n; ++x) {
    dist.log_pmf[static_cast<std::size_t>(x - 1)] = detail::ext_log(v[static_cast<std::size_t>(x)]);
  }

  if (params.has_exact_theta() && n <= exact_limit) {
    const BigInt a = boost::multiprecision::numerator(*params.theta_rational);
    const BigInt b = boost::multiprecision::denominator(*params.theta_rational);
    const auto numerators = detail::convolution_numerators(n, a, b);
    const BigInt denom = detail::rising_factorial_denominator(n, a, b);
    std::vector<BigRational> exact;
    exact.reserve(numerators.size());
    for (const auto& num : numerators) {
      exact.emplace_back(num, denom);
    }
    dist.exact_pmf = std::move(exact);
  }
  return dist;
}

/// Running distribution function F(x) = P(K <= x) for x = 1..n, by
/// compensated left-to-right summation of the pmf.
inline std::vector<double> cdf(const LengthDistribution& dist) {
  std::vector<double> out(dist.log_pmf.size());
  detail::CompensatedSum acc;
  for (std::size_t i = 0; i < dist.log_pmf.size(); ++i) {
    acc.add(std::exp(dist.log_pmf[i]));
    out[i] = acc.value();
  }
  return out;
}

}  // namespace ewens
