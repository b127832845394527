#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ewens/bounds.hpp"
#include "ewens/detail/parallel.hpp"
#include "ewens/distribution.hpp"
#include "ewens/errors.hpp"
#include "ewens/gaussian.hpp"
#include "ewens/moments.hpp"
#include "ewens/params.hpp"

namespace ewens {

/// theta(n) coupling rules. theta must be nondecreasing in n and satisfy
/// n^2/theta -> infinity along the coupling, which restricts Power to p < 2.
struct FixedCoupling {
  double theta0;  // theta = theta0
};
struct PowerCoupling {
  double a;  // theta = a * n^p
  double p;
};
struct RatioCoupling {
  double c;  // theta = n / c
};
using Coupling = std::variant<FixedCoupling, PowerCoupling, RatioCoupling>;

inline void validate_coupling(const Coupling& coupling) {
  if (const auto* fixed = std::get_if<FixedCoupling>(&coupling)) {
    if (!(fixed->theta0 > 0.0) || !std::isfinite(fixed->theta0)) {
      throw domain_error("fixed coupling needs theta0 > 0");
    }
  } else if (const auto* power = std::get_if<PowerCoupling>(&coupling)) {
    if (!(power->a > 0.0) || !std::isfinite(power->a)) {
      throw domain_error("power coupling needs a > 0");
    }
    if (!(power->p >= 0.0)) {
      throw domain_error("power coupling needs p >= 0 (theta nondecreasing in n)");
    }
    if (power->p >= 2.0) {
      throw domain_error("power coupling needs p < 2 (n^2/theta must diverge)");
    }
  } else if (const auto* ratio = std::get_if<RatioCoupling>(&coupling)) {
    if (!(ratio->c > 0.0) || !std::isfinite(ratio->c)) {
      throw domain_error("ratio coupling needs c > 0");
    }
  }
}

inline double coupling_theta(const Coupling& coupling, std::int64_t n) {
  const double nd = static_cast<double>(n);
  if (const auto* fixed = std::get_if<FixedCoupling>(&coupling)) return fixed->theta0;
  if (const auto* power = std::get_if<PowerCoupling>(&coupling)) {
    return power->a * std::pow(nd, power->p);
  }
  return nd / std::get<RatioCoupling>(coupling).c;
}

/// Asymptotic label of a coupling. BAtCstar marks the ratio case sitting at
/// the sign-change root c*, whose decay rate is an open problem; it is
/// reported but excluded from rate assertions.
enum class CaseLabel { A, B, Bstar, C1, BAtCstar };

inline const char* to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::A: return "A";
    case CaseLabel::B: return "B";
    case CaseLabel::Bstar: return "Bstar";
    case CaseLabel::C1: return "C1";
    case CaseLabel::BAtCstar: return "B-at-cstar";
  }
  return "?";
}

/// Unique positive root of log(1+x) - 2 + 3/(x+1) - 1/(x+1)^2 = 0, located
/// by bisection on [0.1, 100].
inline double solve_cstar(double tolerance) {
  if (!(tolerance >= 1e-14)) {
    throw domain_error("tolerance must be >= 1e-14");
  }
  const auto f = [](double x) {
    return std::log1p(x) - 2.0 + 3.0 / (x + 1.0) - 1.0 / ((x + 1.0) * (x + 1.0));
  };
  double lo = 0.1;
  double hi = 100.0;
  if (!(f(lo) < 0.0 && f(hi) > 0.0)) {
    throw error("c* bracket [0.1, 100] lost its sign change");
  }
  while (hi - lo > tolerance && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// A coupling together with its derived case label.
struct RegimeSpec {
  Coupling coupling;
  CaseLabel declared_case = CaseLabel::A;

  static RegimeSpec from(const Coupling& coupling, double cstar);
};

/// Labels the coupling: Fixed or Power with p < 1 give Case A; Power with
/// p = 1 and Ratio give Case B (split on c vs c*); Power with 1 < p < 2
/// gives Case C1.
inline CaseLabel classify(const Coupling& coupling, double cstar) {
  validate_coupling(coupling);
  const auto ratio_label = [cstar](double c) {
    return std::abs(c - cstar) <= 1e-6 ? CaseLabel::BAtCstar : CaseLabel::Bstar;
  };
  if (std::holds_alternative<FixedCoupling>(coupling)) return CaseLabel::A;
  if (const auto* power = std::get_if<PowerCoupling>(&coupling)) {
    if (power->p < 1.0) return CaseLabel::A;
    if (power->p == 1.0) return ratio_label(1.0 / power->a);
    return CaseLabel::C1;
  }
  return ratio_label(std::get<RatioCoupling>(coupling).c);
}

inline CaseLabel classify(const RegimeSpec& spec, double cstar) {
  return classify(spec.coupling, cstar);
}

inline RegimeSpec RegimeSpec::from(const Coupling& coupling, double cstar) {
  RegimeSpec spec;
  spec.coupling = coupling;
  spec.declared_case = classify(coupling, cstar);
  return spec;
}

/// One sweep grid point: the three Kolmogorov distances, the bounds where
/// their conditions hold, and the case-appropriate rate normalizer with the
/// rescaled error kolmo_x * rate_normalizer.
struct SweepRow {
  std::int64_t n = 0;
  double theta = 0.0;
  double kolmo_x = std::numeric_limits<double>::quiet_NaN();
  double kolmo_y = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> kolmo_z;
  std::optional<double> upper;
  std::optional<double> lower_i;
  std::optional<double> lower_ii;
  double rate_normalizer = std::numeric_limits<double>::quiet_NaN();
  double scaled_error = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
};

/// Rate from the decay-rate statement: sqrt(theta log(n/theta)) in Case A,
/// sqrt(theta) in the ratio cases, sqrt(n^2/theta) in Case C1. NaN when the
/// Case-A normalizer is undefined (n <= theta).
inline double rate_normalizer(CaseLabel label, std::int64_t n, double theta) {
  const double nd = static_cast<double>(n);
  switch (label) {
    case CaseLabel::A: {
      const double lead = theta * std::log(nd / theta);
      return lead > 0.0 ? std::sqrt(lead) : std::numeric_limits<double>::quiet_NaN();
    }
    case CaseLabel::B:
    case CaseLabel::Bstar:
    case CaseLabel::BAtCstar:
      return std::sqrt(theta);
    case CaseLabel::C1:
      return std::sqrt(nd * nd / theta);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

/// Evaluates the sweep over an ascending n grid. Rows are independent and
/// run on up to `jobs` threads; output order follows the input grid. Errors
/// are confined to their row (status carries the message).
inline std::vector<SweepRow> sweep(const RegimeSpec& spec, std::span<const std::int64_t> n_values,
                                   double D, unsigned jobs = 1,
                                   double C = kBerryEsseenConstant) {
  validate_coupling(spec.coupling);
  if (!(D > 0.0)) {
    throw domain_error("D must be positive, got " + std::to_string(D));
  }
  for (std::size_t i = 1; i < n_values.size(); ++i) {
    if (n_values[i] <= n_values[i - 1]) {
      throw domain_error("n grid must be strictly ascending");
    }
  }
  std::vector<SweepRow> rows(n_values.size());
  detail::parallel_for_index(n_values.size(), jobs, [&](std::size_t idx) {
    SweepRow& row = rows[idx];
    row.n = n_values[idx];
    try {
      row.theta = coupling_theta(spec.coupling, row.n);
      const EwensParams params = EwensParams::of(row.n, row.theta);
      const LengthDistribution dist = pmf_poisson_binomial(params);
      const MomentSummary moments = exact_moments(params);
      const ConditionFlags cond = evaluate_conditions(params, moments);

      row.kolmo_x =
          kolmogorov_distance(dist, make_standardization(StandardizationKind::ExactMoments,
                                                         params, moments))
              .distance;
      row.kolmo_y =
          kolmogorov_distance(dist, make_standardization(StandardizationKind::ApproxMoments,
                                                         params, moments))
              .distance;
      if (row.n >= 2) {
        row.kolmo_z =
            kolmogorov_distance(dist, make_standardization(StandardizationKind::LogLeading,
                                                           params, moments))
                .distance;
      }
      if (cond.assth1) {
        const GammaValues g = gamma_values(params);
        row.upper = C * g.gamma1;
        if (cond.var_ge_1 && cond.assth2i) row.lower_i = g.gamma2 / D - g.gamma3;
        if (cond.var_ge_1 && cond.assth2ii) row.lower_ii = g.gamma4 / D - g.gamma3;
      }
      row.rate_normalizer = rate_normalizer(spec.declared_case, row.n, row.theta);
      row.scaled_error = row.kolmo_x * row.rate_normalizer;
      if (std::isnan(row.rate_normalizer)) {
        row.status = "rate normalizer undefined (n <= theta in Case A)";
      }
    } catch (const std::exception& e) {
      row.status = e.what();
    }
  });
  return rows;
}

}  // namespace ewens
