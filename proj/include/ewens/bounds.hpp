#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "ewens/detail/compensated.hpp"
#include "ewens/errors.hpp"
#include "ewens/moments.hpp"
#include "ewens/params.hpp"

namespace ewens {

/// Ceiling for the universal constant in the Berry-Esseen theorem for
/// independent summands (Tyurin's estimate).
inline constexpr double kBerryEsseenConstant = 0.5591;

/// Truth values of the three applicability conditions plus var(K) >= 1.
struct ConditionFlags {
  bool assth1 = false;   // theta(log(1+n/t) - 1 + t/(n+t)) + n/(2(t+n)) - 1 > 0
  bool assth2i = false;  // theta{log(1+n/t) - 2 + 3t/(n+t) - t^2/(n+t)^2} - 3 + n/(2(n+t)) > 0
  bool assth2ii = false; // theta{...same core...} + 2 + n/(n+t) < 0
  bool var_ge_1 = false;
};

namespace detail {

/// The closed forms below are evaluated term by term as stated, with no
/// algebraic rearrangement, so each line is auditable against its formula.
struct BoundPieces {
  double cond1_expr;   // also the gamma1/gamma3 denominator base
  double cond2i_expr;  // gamma2 numerator
  double cond2ii_expr; // negated gamma4 numerator
  double gamma1_num;
  double gamma24_den_base;  // variance upper envelope
  double gamma3_num;
};

inline BoundPieces bound_pieces(const EwensParams& params) {
  const double n = static_cast<double>(params.n);
  const double th = params.theta;
  const double L = std::log1p(n / th);
  const double r = th / (n + th);
  BoundPieces p{};
  p.cond1_expr = th * (L - 1.0 + r) + n / (2.0 * (th + n)) - 1.0;
  const double core = th * (L - 2.0 + 3.0 * r - r * r);
  p.cond2i_expr = core - 3.0 + n / (2.0 * (n + th));
  p.cond2ii_expr = core + 2.0 + n / (n + th);
  p.gamma1_num =
      th * (L - 5.0 / 3.0 + 3.0 * r - 2.0 * r * r + (2.0 / 3.0) * r * r * r) + 4.0 + n / (n + th);
  p.gamma24_den_base = th * (L - 1.0 + r) + n / (th + n);
  p.gamma3_num = th * (1.0 / 3.0 - r + r * r - r * r * r / 3.0) + 2.0;
  return p;
}

}  // namespace detail

inline ConditionFlags evaluate_conditions(const EwensParams& params,
                                          const MomentSummary& moments) {
  const auto p = detail::bound_pieces(params);
  ConditionFlags flags;
  flags.assth1 = p.cond1_expr > 0.0;
  flags.assth2i = p.cond2i_expr > 0.0;
  flags.assth2ii = p.cond2ii_expr < 0.0;
  flags.var_ge_1 = moments.sigma0_sq >= 1.0;
  return flags;
}

struct GammaValues {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double gamma4 = 0.0;
};

/// The four closed-form bound quantities. gamma1 and gamma3 divide by powers
/// of the assth1 condition expression, which must be positive.
inline GammaValues gamma_values(const EwensParams& params) {
  const auto p = detail::bound_pieces(params);
  if (!(p.cond1_expr > 0.0)) {
    throw condition_error("condition assth1 fails at n = " + std::to_string(params.n) +
                          "; gamma1/gamma3 are undefined");
  }
  GammaValues g;
  const double den1 = std::pow(p.cond1_expr, 1.5);
  const double den24 = std::pow(p.gamma24_den_base, 1.5);
  g.gamma1 = p.gamma1_num / den1;
  g.gamma2 = p.cond2i_expr / den24;
  g.gamma3 = p.gamma3_num / (p.cond1_expr * p.cond1_expr);
  g.gamma4 = -p.cond2ii_expr / den24;
  return g;
}

/// Berry-Esseen upper bound C * gamma1 for the exact-moment standardization.
/// Requires the assth1 condition to hold.
inline double upper_bound(const EwensParams& params, double C = kBerryEsseenConstant) {
  return C * gamma_values(params).gamma1;
}

/// Lyapunov fraction sum E|xi-p|^3 / (var K)^{3/2}.
inline double lyapunov_fraction(const EwensParams& params) {
  if (params.n < 2) {
    throw degenerate_error("Lyapunov fraction needs n >= 2 (var K > 0)");
  }
  const MomentSummary m = exact_moments(params);
  return m.s3_abs / std::pow(m.sigma0_sq, 1.5);
}

/// Which reverse-bound branch applies, the bound value gamma_k/D - gamma3,
/// and whether it is vacuous (nonpositive).
struct LowerBound {
  enum class Branch { I, II, None };
  Branch which = Branch::None;
  double value = std::numeric_limits<double>::quiet_NaN();
  bool vacuous = false;
};

/// Lower bound on the Kolmogorov distance. D is the universal constant of
/// the reverse Berry-Esseen inequality; it has no published numeric value and
/// must be supplied by the caller.
inline LowerBound lower_bound(const EwensParams& params, double D) {
  if (!(D > 0.0)) {
    throw domain_error("D must be positive, got " + std::to_string(D));
  }
  const MomentSummary moments = exact_moments(params);
  const ConditionFlags cond = evaluate_conditions(params, moments);
  LowerBound out;
  if (!cond.assth1 || !cond.var_ge_1 || (!cond.assth2i && !cond.assth2ii)) {
    return out;
  }
  const GammaValues g = gamma_values(params);
  if (cond.assth2i) {
    out.which = LowerBound::Branch::I;
    out.value = g.gamma2 / D - g.gamma3;
  } else {
    out.which = LowerBound::Branch::II;
    out.value = g.gamma4 / D - g.gamma3;
  }
  out.vacuous = !(out.value > 0.0);
  return out;
}

/// The reverse-inequality statistic delta for Y_i = (xi_i - p_i)/sigma0,
/// split into its three terms, all resolved exactly per summand; plus
/// sum sigma_i^4 of the normalized sequence.
struct HallBarbourDelta {
  double delta = 0.0;
  double term_tail = 0.0;       // sum E[Y^2 1{|Y| > 1}]
  double term_fourth = 0.0;     // sum E[Y^4 1{|Y| <= 1}]
  double term_third_abs = 0.0;  // |sum E[Y^3 1{|Y| <= 1}]|
  double sum_sigma4 = 0.0;      // sum sigma_i^4 = s22 / sigma0^4
};

inline HallBarbourDelta hall_barbour_delta(const EwensParams& params) {
  if (params.n < 2) {
    throw degenerate_error("hall_barbour_delta needs n >= 2 (var K > 0)");
  }
  const MomentSummary m = exact_moments(params);
  const double sigma0 = std::sqrt(m.sigma0_sq);
  detail::CompensatedSum tail, fourth, third;
  for (std::int64_t i = 1; i <= params.n; ++i) {
    const double denom = params.theta + static_cast<double>(i - 1);
    const double p = params.theta / denom;
    const double q = static_cast<double>(i - 1) / denom;
    const double y_succ = q / sigma0;   // value of Y when xi = 1, with prob p
    const double y_fail = -p / sigma0;  // value of Y when xi = 0, with prob q
    if (std::abs(y_succ) > 1.0) {
      tail.add(p * y_succ * y_succ);
    } else {
      fourth.add(p * y_succ * y_succ * y_succ * y_succ);
      third.add(p * y_succ * y_succ * y_succ);
    }
    if (std::abs(y_fail) > 1.0) {
      tail.add(q * y_fail * y_fail);
    } else {
      fourth.add(q * y_fail * y_fail * y_fail * y_fail);
      third.add(q * y_fail * y_fail * y_fail);
    }
  }
  HallBarbourDelta out;
  out.term_tail = tail.value();
  out.term_fourth = fourth.value();
  out.term_third_abs = std::abs(third.value());
  out.delta = out.term_tail + out.term_fourth + out.term_third_abs;
  out.sum_sigma4 = m.s22 / (m.sigma0_sq * m.sigma0_sq);
  return out;
}

/// Everything the bound evaluation produces for one (n, theta): the gamma
/// values (NaN where their condition fails), condition flags, the assembled
/// upper bound, and both lower-bound branches where their hypotheses hold.
struct BoundReport {
  EwensParams params;
  MomentSummary moments;
  ConditionFlags cond;
  double gamma1 = std::numeric_limits<double>::quiet_NaN();
  double gamma2 = std::numeric_limits<double>::quiet_NaN();
  double gamma3 = std::numeric_limits<double>::quiet_NaN();
  double gamma4 = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> upper;     // C * gamma1, present iff assth1 holds
  std::optional<double> lower_i;   // gamma2/D - gamma3, iff assth1, var >= 1, assth2i hold
  std::optional<double> lower_ii;  // gamma4/D - gamma3, iff assth1, var >= 1, assth2ii hold
  double C = kBerryEsseenConstant;
  double D = 1.0;
};

inline BoundReport bound_report(const EwensParams& params, double D,
                                double C = kBerryEsseenConstant) {
  if (!(D > 0.0)) {
    throw domain_error("D must be positive, got " + std::to_string(D));
  }
  BoundReport report;
  report.params = params;
  report.moments = exact_moments(params);
  report.cond = evaluate_conditions(params, report.moments);
  report.C = C;
  report.D = D;

  const auto p = detail::bound_pieces(params);
  const double den24 = std::pow(p.gamma24_den_base, 1.5);
  report.gamma2 = p.cond2i_expr / den24;
  report.gamma4 = -p.cond2ii_expr / den24;
  if (report.cond.assth1) {
    const double den1 = std::pow(p.cond1_expr, 1.5);
    report.gamma1 = p.gamma1_num / den1;
    report.gamma3 = p.gamma3_num / (p.cond1_expr * p.cond1_expr);
    report.upper = C * report.gamma1;
    if (report.cond.var_ge_1 && report.cond.assth2i) {
      report.lower_i = report.gamma2 / D - report.gamma3;
    }
    if (report.cond.var_ge_1 && report.cond.assth2ii) {
      report.lower_ii = report.gamma4 / D - report.gamma3;
    }
  }
  return report;
}

}  // namespace ewens
