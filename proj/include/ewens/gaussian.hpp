#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ewens/detail/compensated.hpp"
#include "ewens/distribution.hpp"
#include "ewens/errors.hpp"
#include "ewens/moments.hpp"
#include "ewens/params.hpp"

namespace ewens {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2 pi)

/// Standard normal distribution function, full double precision via erfc.
inline double phi_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

/// Standard normal density.
inline double phi_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

/// Which affine standardization of K is being compared against the normal:
/// exact moments (mu0, sigma0), the closed-form approximations (mu_T,
/// sigma_T), or the leading term theta log n for both.
enum class StandardizationKind { ExactMoments, ApproxMoments, LogLeading };

struct Standardization {
  StandardizationKind kind = StandardizationKind::ExactMoments;
  double mu = 0.0;
  double sigma = 1.0;
};

inline Standardization make_standardization(StandardizationKind kind, const EwensParams& params,
                                            const MomentSummary& moments) {
  Standardization std_;
  std_.kind = kind;
  switch (kind) {
    case StandardizationKind::ExactMoments:
      std_.mu = moments.mu0;
      std_.sigma = std::sqrt(moments.sigma0_sq);
      break;
    case StandardizationKind::ApproxMoments:
      std_.mu = moments.mu_T;
      std_.sigma = std::sqrt(moments.sigma_T_sq);
      break;
    case StandardizationKind::LogLeading: {
      const double lead = params.theta * std::log(static_cast<double>(params.n));
      std_.mu = lead;
      std_.sigma = std::sqrt(lead);
      break;
    }
  }
  if (!(std_.sigma > 0.0)) {
    throw degenerate_error("standardization has zero scale (n = " + std::to_string(params.n) +
                           ")");
  }
  return std_;
}

inline Standardization make_standardization(StandardizationKind kind, const EwensParams& params) {
  return make_standardization(kind, params, exact_moments(params));
}

/// Exact sup-distance between the standardized step CDF and Phi, its
/// location, and which one-sided gap attains it.
struct KolmogorovReport {
  enum class Side { LeftLimit, RightValue };
  double distance = 0.0;
  double argmax_point = 0.0;  // standardized jump location
  Side side = Side::RightValue;
};

/// sup_x |F(x) - Phi(x)| for the standardized distribution. The sup over a
/// step function against a continuous one is attained at a jump, from one of
/// its two sides, so only the 2n candidate gaps are examined. On the
/// exact-rational path the step CDF is accumulated exactly and only Phi
/// contributes roundoff.
inline KolmogorovReport kolmogorov_distance(const LengthDistribution& dist,
                                            const Standardization& std_) {
  if (!(std_.sigma > 0.0)) {
    throw degenerate_error("kolmogorov_distance requires a positive standardization scale");
  }
  KolmogorovReport report;
  const std::int64_t n = dist.n();
  const auto consider = [&report](double below, double above, double z) {
    const double normal = phi_cdf(z);
    const double gap_left = std::abs(below - normal);
    const double gap_right = std::abs(above - normal);
    if (gap_left > report.distance) {
      report.distance = gap_left;
      report.argmax_point = z;
      report.side = KolmogorovReport::Side::LeftLimit;
    }
    if (gap_right > report.distance) {
      report.distance = gap_right;
      report.argmax_point = z;
      report.side = KolmogorovReport::Side::RightValue;
    }
  };
  if (dist.exact_pmf) {
    BigRational cdf_exact = 0;
    for (std::int64_t x = 1; x <= n; ++x) {
      const double z = (static_cast<double>(x) - std_.mu) / std_.sigma;
      const double below = cdf_exact.convert_to<double>();
      cdf_exact += (*dist.exact_pmf)[static_cast<std::size_t>(x - 1)];
      consider(below, cdf_exact.convert_to<double>(), z);
    }
  } else {
    detail::CompensatedSum cdf_acc;
    for (std::int64_t x = 1; x <= n; ++x) {
      const double z = (static_cast<double>(x) - std_.mu) / std_.sigma;
      const double below = cdf_acc.value();
      cdf_acc.add(dist.pmf(x));
      consider(below, cdf_acc.value(), z);
    }
  }
  // summation roundoff can push the running float CDF a few ulp past 1; the
  // metric itself is capped at 1
  report.distance = std::min(report.distance, 1.0);
  return report;
}

/// Observed sup of a normal-CDF perturbation over a probe grid, next to the
/// closed-form bound that must dominate it.
struct ShiftScaleCheck {
  double observed = 0.0;
  double bound = 0.0;
};

struct NormalPerturbationReport {
  ShiftScaleCheck shift;  // sup_x |Phi(x+alpha) - Phi(x)| vs |alpha|/sqrt(2 pi)
  ShiftScaleCheck scale;  // sup_x |Phi(beta x) - Phi(x)| vs max(beta,1)|1-1/beta|/sqrt(2 pi e)
};

/// Default probe grid: 1e5 equispaced points on [-10, 10].
inline std::vector<double> default_probe_grid() {
  constexpr std::size_t kPoints = 100000;
  std::vector<double> grid(kPoints);
  for (std::size_t i = 0; i < kPoints; ++i) {
    grid[i] = -10.0 + 20.0 * static_cast<double>(i) / static_cast<double>(kPoints - 1);
  }
  return grid;
}

/// Evaluates both shift and scale perturbations over the probe grid plus the
/// analytic extremizer candidates (-alpha/2 for the shift; +-x* with
/// x*^2 = 2 log(beta)/(beta^2 - 1) for the scale).
inline NormalPerturbationReport normal_perturbation_check(double alpha, double beta, std::span<const double> probe_grid) {
  if (!(beta > 0.0)) {
    throw domain_error("beta must be positive, got " + std::to_string(beta));
  }
  if (probe_grid.empty()) {
    throw domain_error("probe grid must be nonempty");
  }
  NormalPerturbationReport report;
  report.shift.bound = std::abs(alpha) * kInvSqrt2Pi;
  report.scale.bound =
      std::max(beta, 1.0) * std::abs(1.0 - 1.0 / beta) / std::sqrt(2.0 * M_PI * M_E);

  const auto probe_shift = [&](double x) {
    const double gap = std::abs(phi_cdf(x + alpha) - phi_cdf(x));
    if (gap > report.shift.observed) report.shift.observed = gap;
  };
  const auto probe_scale = [&](double x) {
    const double gap = std::abs(phi_cdf(beta * x) - phi_cdf(x));
    if (gap > report.scale.observed) report.scale.observed = gap;
  };
  for (const double x : probe_grid) {
    probe_shift(x);
    probe_scale(x);
  }
  probe_shift(-alpha / 2.0);
  if (beta != 1.0) {
    const double xstar = std::sqrt(2.0 * std::log(beta) / (beta * beta - 1.0));
    probe_scale(xstar);
    probe_scale(-xstar);
  }
  return report;
}

inline NormalPerturbationReport normal_perturbation_check(double alpha, double beta) {
  const auto grid = default_probe_grid();
  return normal_perturbation_check(alpha, beta, grid);
}

}  // namespace ewens
