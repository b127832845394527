#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "ewens/detail/big_numeric.hpp"
#include "ewens/errors.hpp"

namespace ewens {

/// The (n, theta) pair indexing the length distribution: n >= 1 trials,
/// theta > 0 the concentration parameter. theta may additionally carry an
/// exact rational value ("p/q" input), which enables the exact-arithmetic
/// evaluation paths.
struct EwensParams {
  std::int64_t n = 1;
  double theta = 1.0;
  std::optional<BigRational> theta_rational;

  static EwensParams of(std::int64_t n, double theta) {
    validate_n(n);
    if (!(theta > 0.0) || !std::isfinite(theta)) {
      throw domain_error("theta must be positive and finite, got " + std::to_string(theta));
    }
    return EwensParams{n, theta, std::nullopt};
  }

  static EwensParams of_rational(std::int64_t n, BigRational theta) {
    validate_n(n);
    if (theta <= 0) {
      throw domain_error("theta must be positive");
    }
    const double approx = theta.convert_to<double>();
    if (!(approx > 0.0) || !std::isfinite(approx)) {
      throw domain_error("rational theta out of double range");
    }
    return EwensParams{n, approx, std::move(theta)};
  }

  /// Accepts either a decimal literal (float path only) or "p/q" with p, q
  /// positive integers (enables the exact path as well).
  static EwensParams parse(std::int64_t n, std::string_view theta_text);

  [[nodiscard]] bool has_exact_theta() const { return theta_rational.has_value(); }

 private:
  static void validate_n(std::int64_t n) {
    if (n < 1) {
      throw domain_error("n must be a positive integer, got " + std::to_string(n));
    }
  }
};

inline EwensParams EwensParams::parse(std::int64_t n, std::string_view theta_text) {
  const auto slash = theta_text.find('/');
  if (slash == std::string_view::npos) {
    std::size_t used = 0;
    double value = 0.0;
    const std::string text(theta_text);
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      throw domain_error("cannot parse theta: '" + text + "'");
    }
    if (used != text.size()) {
      throw domain_error("cannot parse theta: '" + text + "'");
    }
    return of(n, value);
  }
  const std::string num(theta_text.substr(0, slash));
  const std::string den(theta_text.substr(slash + 1));
  if (num.empty() || den.empty() ||
      num.find_first_not_of("0123456789") != std::string::npos ||
      den.find_first_not_of("0123456789") != std::string::npos) {
    throw domain_error("rational theta must be 'p/q' with positive integers, got '" +
                       std::string(theta_text) + "'");
  }
  const BigInt p(num);
  const BigInt q(den);
  if (p <= 0 || q <= 0) {
    throw domain_error("rational theta must have positive numerator and denominator");
  }
  return of_rational(n, BigRational(p, q));
}

}  // namespace ewens
