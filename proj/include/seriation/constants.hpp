#pragma once

// Constants fitted once by Monte Carlo and frozen.

namespace seriation::constants {

// max |dhat - d| <= c (A + sqrt(A) (n log n)^(1/4)) for dhat_toeplitz,
// fitted at n = 400, sigma = 1, A = 1 on seeds 10000..10049 (worst ratio
// 2.32 over both theta families).
inline constexpr double toeplitz_deviation = 2.5;

// max |dhat - d| <= c A (n log n)^(1/4) for dhat_latent, box kernel of width
// 1/sqrt(n), same protocol (worst ratio 2.25).
inline constexpr double latent_deviation = 2.5;

}  // namespace seriation::constants

namespace seriation::constants {

// l_inf oracle loss of supnorm_seriate in units of the noise bound, on the
// one-jump adversarial construction (n = 40, bound 0.1, sign / uniform /
// gap_closing noise), calibration seeds 10000..10099 (worst ratio 10.74).
inline constexpr double supnorm_linf = 11.0;

}  // namespace seriation::constants
