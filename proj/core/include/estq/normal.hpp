#pragma once

#include <cmath>

namespace estq {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779;
inline constexpr double kSqrt2 = 1.4142135623730950488;

inline double norm_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

// Standard normal CDF via erfc; accurate into the deep lower tail
// (representable down to z ~ -37.5).
inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

// Inverse standard normal CDF. Acklam's rational approximation polished
// with one Halley step; relative error below 1e-14 on (0,1).
double norm_ppf(double p);

}  // namespace estq
