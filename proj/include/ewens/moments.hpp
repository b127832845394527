#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ewens/detail/compensated.hpp"
#include "ewens/errors.hpp"
#include "ewens/params.hpp"

namespace ewens {

/// Power sums s[k] = sum_{i=1..n} 1/(theta+i-1)^k for k = 1..k_max,
/// accumulated with compensated summation.
struct PowerSums {
  EwensParams params;
  std::vector<double> s;  // s[k] at index k; index 0 unused

  [[nodiscard]] double at(int k) const { return s[static_cast<std::size_t>(k)]; }
};

inline PowerSums power_sums(const EwensParams& params, int k_max) {
  if (k_max < 1) {
    throw domain_error("k_max must be >= 1, got " + std::to_string(k_max));
  }
  std::vector<detail::CompensatedSum> acc(static_cast<std::size_t>(k_max) + 1);
  for (std::int64_t i = 1; i <= params.n; ++i) {
    const double base = 1.0 / (params.theta + static_cast<double>(i - 1));
    double term = 1.0;
    for (int k = 1; k <= k_max; ++k) {
      term *= base;
      acc[static_cast<std::size_t>(k)].add(term);
    }
  }
  PowerSums out;
  out.params = params;
  out.s.resize(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (int k = 1; k <= k_max; ++k) {
    out.s[static_cast<std::size_t>(k)] = acc[static_cast<std::size_t>(k)].value();
  }
  return out;
}

/// Exact mean/variance of K, the three central-moment sums of the Bernoulli
/// representation, and the approximate standardization moments:
///   sigma0_sq  = sum E|xi - p|^2
///   s3_abs     = sum E|xi - p|^3
///   s3_signed  = sum E(xi - p)^3
///   s22        = sum (E|xi - p|^2)^2
///   mu_T       = theta log(1 + n/theta)
///   sigma_T_sq = theta (log(1 + n/theta) + theta/(n+theta) - 1)
struct MomentSummary {
  double mu0 = 0.0;
  double sigma0_sq = 0.0;
  double s3_abs = 0.0;
  double s3_signed = 0.0;
  double s22 = 0.0;
  double mu_T = 0.0;
  double sigma_T_sq = 0.0;
};

/// All five moment quantities from the power-sum linear combinations.
inline MomentSummary exact_moments(const EwensParams& params) {
  const PowerSums ps = power_sums(params, 4);
  const double th = params.theta;
  const double th2 = th * th;
  const double th3 = th2 * th;
  const double th4 = th2 * th2;
  const double s1 = ps.at(1);
  const double s2 = ps.at(2);
  const double s3 = ps.at(3);
  const double s4 = ps.at(4);

  MomentSummary m;
  m.mu0 = th * s1;
  m.sigma0_sq = th * s1 - th2 * s2;
  m.s3_abs = th * s1 - 3.0 * th2 * s2 + 4.0 * th3 * s3 - 2.0 * th4 * s4;
  m.s3_signed = th * s1 - 3.0 * th2 * s2 + 2.0 * th3 * s3;
  m.s22 = th2 * s2 - 2.0 * th3 * s3 + th4 * s4;

  const double x = static_cast<double>(params.n) / th;
  m.mu_T = th * std::log1p(x);
  m.sigma_T_sq = th * (std::log1p(x) + th / (static_cast<double>(params.n) + th) - 1.0);
  return m;
}

/// sum_i E[(xi_i - p_i)^m] via the binomial-theorem expansion
///   sum_{j=1}^{m-1} (-1)^{j-1} C(m, j-1) sum_i p_i^j
///   + (-1)^{m-1} (m-1) sum_i p_i^m.
inline double central_moment_sum(const EwensParams& params, int m) {
  if (m < 2) {
    throw domain_error("central_moment_sum requires m >= 2, got " + std::to_string(m));
  }
  // sum_i p_i^j for j = 1..m
  std::vector<detail::CompensatedSum> pj(static_cast<std::size_t>(m) + 1);
  for (std::int64_t i = 1; i <= params.n; ++i) {
    const double p = params.theta / (params.theta + static_cast<double>(i - 1));
    double term = 1.0;
    for (int j = 1; j <= m; ++j) {
      term *= p;
      pj[static_cast<std::size_t>(j)].add(term);
    }
  }
  detail::CompensatedSum total;
  double binom = 1.0;  // C(m, j-1), starting at C(m, 0)
  double sign = 1.0;
  for (int j = 1; j <= m - 1; ++j) {
    total.add(sign * binom * pj[static_cast<std::size_t>(j)].value());
    binom = binom * static_cast<double>(m - (j - 1)) / static_cast<double>(j);
    sign = -sign;
  }
  total.add(sign * static_cast<double>(m - 1) * pj[static_cast<std::size_t>(m)].value());
  return total.value();
}

/// Closed-form two-sided bracket around an exactly computed quantity.
struct EnvelopePair {
  double lower = 0.0;
  double upper = 0.0;
  double value = 0.0;
};

/// Integral bounds on the power sums:
///  k = 0:  log(1+n/theta) + n/(2 theta (n+theta))
///            <= s_1 <= log(1+n/theta) + n/(theta (n+theta))
///  k >= 1: 1/(k theta^k) - 1/(k (n+theta)^k)
///            <= s_{k+1} <= 1/theta^{k+1} + 1/(k theta^k) - 1/(k (n+theta)^k)
inline EnvelopePair power_sum_envelope(const EwensParams& params, int k) {
  if (k < 0) {
    throw domain_error("envelope index k must be >= 0, got " + std::to_string(k));
  }
  const double n = static_cast<double>(params.n);
  const double th = params.theta;
  EnvelopePair env;
  if (k == 0) {
    const double base = std::log1p(n / th);
    env.lower = base + n / (2.0 * th * (n + th));
    env.upper = base + n / (th * (n + th));
    env.value = power_sums(params, 1).at(1);
  } else {
    const double kd = static_cast<double>(k);
    const double common = 1.0 / (kd * std::pow(th, kd)) - 1.0 / (kd * std::pow(n + th, kd));
    env.lower = common;
    env.upper = 1.0 / std::pow(th, kd + 1.0) + common;
    env.value = power_sums(params, k + 1).at(k + 1);
  }
  return env;
}

/// Closed-form envelopes around the four central-moment sums. The squared
/// second-moment sum carries an upper bound only (lower = 0).
struct MomentSumEnvelopes {
  EnvelopePair var;      // sum E|xi - p|^2
  EnvelopePair abs3;     // sum E|xi - p|^3
  EnvelopePair signed3;  // sum E(xi - p)^3
  EnvelopePair sq22;     // sum (E|xi - p|^2)^2
};

inline MomentSumEnvelopes moment_sum_envelopes(const EwensParams& params) {
  const double n = static_cast<double>(params.n);
  const double th = params.theta;
  const double L = std::log1p(n / th);
  const double r = th / (n + th);
  const MomentSummary m = exact_moments(params);

  MomentSumEnvelopes env;

  const double var_core = th * (L - 1.0 + r);
  env.var.lower = var_core + n / (2.0 * (th + n)) - 1.0;
  env.var.upper = var_core + n / (th + n);
  env.var.value = m.sigma0_sq;

  const double abs3_core =
      th * (L - 5.0 / 3.0 + 3.0 * r - 2.0 * r * r + (2.0 / 3.0) * r * r * r);
  env.abs3.lower = abs3_core + n / (2.0 * (n + th)) - 5.0;
  env.abs3.upper = abs3_core + 4.0 + n / (n + th);
  env.abs3.value = m.s3_abs;

  const double signed3_core = th * (L - 2.0 + 3.0 * r - r * r);
  env.signed3.lower = signed3_core + n / (2.0 * (n + th)) - 3.0;
  env.signed3.upper = signed3_core + 2.0 + n / (n + th);
  env.signed3.value = m.s3_signed;

  env.sq22.lower = 0.0;
  env.sq22.upper = th * (1.0 / 3.0 - r + r * r - r * r * r / 3.0) + 2.0;
  env.sq22.value = m.s22;

  return env;
}

/// Asymptotic case of a coupling theta(n) for the moment-sum equivalents:
/// A is n/theta -> infinity, B is n/theta -> c in (0, infinity), C is
/// n/theta -> 0.
enum class RegimeCase { A, B, C };

/// Leading-order equivalents of the four moment sums at (n, theta) under the
/// given case. Case B needs the limit constant c. The sq22 entry is the
/// equivalent of the upper-bound closed form (for Case C it keeps the
/// additive 2 verbatim).
struct MomentSumEquivalents {
  double var = 0.0;
  double abs3 = 0.0;
  double signed3 = 0.0;
  double sq22 = 0.0;
};

inline MomentSumEquivalents asymptotic_equivalents(const EwensParams& params, RegimeCase which,
                                                   double c = 0.0) {
  const double n = static_cast<double>(params.n);
  const double th = params.theta;
  MomentSumEquivalents eq;
  switch (which) {
    case RegimeCase::A: {
      const double lead = th * std::log(n / th);
      eq.var = lead;
      eq.abs3 = lead;
      eq.signed3 = lead;
      eq.sq22 = th / 3.0;
      return eq;
    }
    case RegimeCase::B: {
      if (!(c > 0.0) || !std::isfinite(c)) {
        throw domain_error("Case B requires a finite positive constant c");
      }
      const double u = 1.0 / (c + 1.0);
      eq.var = th * (std::log1p(c) - 1.0 + u);
      eq.abs3 = th * (std::log1p(c) - 5.0 / 3.0 + 3.0 * u - 2.0 * u * u +
                      (2.0 / 3.0) * u * u * u);
      eq.signed3 = th * (std::log1p(c) - 2.0 + 3.0 * u - u * u);
      eq.sq22 = th * (1.0 / 3.0 - u + u * u - u * u * u / 3.0);
      return eq;
    }
    case RegimeCase::C: {
      const double lead = n * n / (2.0 * th);
      eq.var = lead;
      eq.abs3 = lead;
      eq.signed3 = -lead;
      eq.sq22 = n * n * n / (3.0 * th * th) + 2.0;
      return eq;
    }
  }
  throw domain_error("unknown regime case label");
}

}  // namespace ewens
