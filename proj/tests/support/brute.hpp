#pragma once

// Test-only brute-force oracles, deliberately independent of the library's
// evaluation paths: exact pmf by outcome enumeration, termwise moment sums,
// and a dense-grid Kolmogorov scan with a step-lookup CDF.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ewens/distribution.hpp"
#include "ewens/gaussian.hpp"
#include "support/normal_oracle.hpp"

namespace ewens::testing {

/// Exact pmf of the block count by enumerating all 2^(n-1) outcomes of the
/// Bernoulli sequence (trial 1 always succeeds). Usable for n <= ~16.
inline std::vector<BigRational> enumerate_pmf(std::int64_t n, const BigRational& theta) {
  std::vector<BigRational> succ(static_cast<std::size_t>(n) + 1);
  std::vector<BigRational> fail(static_cast<std::size_t>(n) + 1);
  for (std::int64_t i = 1; i <= n; ++i) {
    const BigRational denom = theta + BigRational(i - 1);
    succ[static_cast<std::size_t>(i)] = theta / denom;
    fail[static_cast<std::size_t>(i)] = BigRational(i - 1) / denom;
  }
  std::vector<BigRational> pmf(static_cast<std::size_t>(n));
  const std::uint64_t outcomes = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 0; mask < outcomes; ++mask) {
    BigRational prob = succ[1];
    std::int64_t blocks = 1;
    for (std::int64_t i = 2; i <= n; ++i) {
      if ((mask >> (i - 2)) & 1U) {
        prob *= succ[static_cast<std::size_t>(i)];
        ++blocks;
      } else {
        prob *= fail[static_cast<std::size_t>(i)];
      }
    }
    pmf[static_cast<std::size_t>(blocks - 1)] += prob;
  }
  return pmf;
}

struct TermwiseMoments {
  double var = 0.0;
  double abs3 = 0.0;
  double signed3 = 0.0;
  double sq22 = 0.0;
};

/// Per-trial direct sums of the central moments (no power-sum identities).
inline TermwiseMoments termwise_moments(std::int64_t n, double theta) {
  detail::CompensatedSum var, abs3, signed3, sq22;
  for (std::int64_t i = 1; i <= n; ++i) {
    const double denom = theta + static_cast<double>(i - 1);
    const double p = theta / denom;
    const double q = static_cast<double>(i - 1) / denom;
    var.add(p * q);
    abs3.add(p * q * (q * q + p * p));
    signed3.add(p * q * q * q - q * p * p * p);
    sq22.add(p * q * p * q);
  }
  return {var.value(), abs3.value(), signed3.value(), sq22.value()};
}

/// sum_i E[(xi_i - p_i)^m] termwise: p (1-p)^m + (1-p)(-p)^m.
inline double termwise_central_moment_sum(std::int64_t n, double theta, int m) {
  detail::CompensatedSum acc;
  for (std::int64_t i = 1; i <= n; ++i) {
    const double denom = theta + static_cast<double>(i - 1);
    const double p = theta / denom;
    const double q = static_cast<double>(i - 1) / denom;
    double qpow = 1.0;
    double ppow = 1.0;
    for (int j = 0; j < m; ++j) {
      qpow *= q;
      ppow *= -p;
    }
    acc.add(p * qpow + q * ppow);
  }
  return acc.value();
}

/// Dense-scan Kolmogorov oracle: evaluates |F(z) - Phi(z)| with a step-lookup
/// CDF over a uniform grid plus probes at and just left of every jump.
inline double kolmogorov_scan(const LengthDistribution& dist, const Standardization& std_) {
  const std::int64_t n = dist.n();
  std::vector<double> jumps(static_cast<std::size_t>(n));
  std::vector<double> cdf_at(static_cast<std::size_t>(n));
  detail::CompensatedSum acc;
  for (std::int64_t x = 1; x <= n; ++x) {
    jumps[static_cast<std::size_t>(x - 1)] = (static_cast<double>(x) - std_.mu) / std_.sigma;
    acc.add(dist.pmf(x));
    cdf_at[static_cast<std::size_t>(x - 1)] = acc.value();
  }
  const auto step_cdf = [&](double z) {
    const auto it = std::upper_bound(jumps.begin(), jumps.end(), z);
    if (it == jumps.begin()) return 0.0;
    return cdf_at[static_cast<std::size_t>(std::distance(jumps.begin(), it) - 1)];
  };
  std::vector<double> candidates;
  candidates.reserve(jumps.size() * 2 + 100001);
  for (const double z : jumps) {
    candidates.push_back(z);
    candidates.push_back(z - 1e-11);
  }
  const double lo = jumps.front() - 1.0;
  const double hi = jumps.back() + 1.0;
  for (int k = 0; k <= 100000; ++k) {
    candidates.push_back(lo + (hi - lo) * static_cast<double>(k) / 100000.0);
  }
  double best = 0.0;
  for (const double z : candidates) {
    best = std::max(best, std::abs(step_cdf(z) - phi_reference(z)));
  }
  return best;
}

}  // namespace ewens::testing
