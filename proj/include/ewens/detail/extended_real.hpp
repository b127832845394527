#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace ewens::detail {

// Nonnegative real carried as frac * 2^exp2, where exp2 is a multiple of 512
// and frac sits in (2^-512, 1] once normalized (frac == 0 encodes zero).
// Tail probabilities of long Bernoulli convolutions drop far below the IEEE
// double range (exponents of order -n log n); this keeps them representable
// while the hot path stays plain double arithmetic.
struct ExtReal {
  double frac = 0.0;
  std::int64_t exp2 = 0;
};

inline constexpr double kExtFloor = 0x1p-512;
inline constexpr double kExtLift = 0x1p512;
inline constexpr double kExtDrop = 0x1p-512;
inline constexpr double kExtDrop2 = 0x1p-1024;
inline constexpr std::int64_t kExtStep = 512;

inline ExtReal ext_normalize(ExtReal v) {
  while (v.frac != 0.0 && v.frac < kExtFloor) {
    v.frac *= kExtLift;
    v.exp2 -= kExtStep;
  }
  return v;
}

inline ExtReal ext_from(double x) { return ext_normalize(ExtReal{x, 0}); }

/// p * a with 0 <= p <= 1.
inline ExtReal ext_scale(double p, ExtReal a) {
  a.frac *= p;
  return ext_normalize(a);
}

/// Convex combination (1-w) * a + w * b with w in [0, 1/2], written as
/// a + w * (b - a) so the weight enters once and total mass telescopes
/// exactly across a convolution step. The anchor a carries weight >= 1/2,
/// so the computed fraction never cancels below a.frac / 2. Exponents are
/// multiples of 512 and alignment is a multiply by a fixed power of two; a
/// term more than 1024 binary orders below the other degrades to zero
/// (relative weight < 2^-452 for the probabilities used here).
inline ExtReal ext_lerp(double w, ExtReal a, ExtReal b) {
  ExtReal r;
  if (a.exp2 == b.exp2) {
    r.frac = a.frac + w * (b.frac - a.frac);
    r.exp2 = a.exp2;
    if (r.frac == 0.0) {
      r.exp2 = 0;
      return r;
    }
  } else if (a.frac == 0.0) {
    return ext_scale(w, b);
  } else if (a.exp2 > b.exp2) {
    const std::int64_t d = a.exp2 - b.exp2;
    const double aligned = d == kExtStep    ? b.frac * kExtDrop
                           : d == 2 * kExtStep ? b.frac * kExtDrop2
                                               : 0.0;
    r.frac = a.frac + w * (aligned - a.frac);
    r.exp2 = a.exp2;
  } else {
    const std::int64_t d = b.exp2 - a.exp2;
    const double aligned = d == kExtStep    ? a.frac * kExtDrop
                           : d == 2 * kExtStep ? a.frac * kExtDrop2
                                               : 0.0;
    r.frac = aligned + w * (b.frac - aligned);
    r.exp2 = b.exp2;
  }
  if (r.frac < kExtFloor) return ext_normalize(r);
  return r;
}

// ln2 split after Cody-Waite; the high part has 27 significant bits, so
// exp2 * kLn2Hi is exact for |exp2| < 2^26.
inline constexpr double kLn2Hi = 0x1.62e42fep-1;
inline constexpr double kLn2Lo = 0x1.f473de6af278fp-30;

/// Natural log; -inf for zero.
inline double ext_log(const ExtReal& v) {
  if (v.frac == 0.0) return -std::numeric_limits<double>::infinity();
  const double e = static_cast<double>(v.exp2);
  return e * kLn2Hi + (e * kLn2Lo + std::log(v.frac));
}

}  // namespace ewens::detail
