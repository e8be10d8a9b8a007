#pragma once

#include <cstdint>

#include "parsim/types.hpp"

namespace parsim::bench {

/// Seed for sub-stream `index` of `master` (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// i.i.d. N(0, variance) samples.
Vector white_noise(Index n, double variance, std::uint64_t seed);

/// Causal FIR filter with zero initial conditions; coeffs[0] multiplies x[k].
Vector fir_filter(const Vector& coeffs, const Vector& x);

/// Binary +-1 signal: white Gaussian noise through an order-8 Butterworth
/// low-pass with cutoff band_high (fraction of Nyquist), then the sign.
/// band_high = 1 skips the filter. Throws ErrorCategory::config outside (0, 1].
Vector gen_rbs(Index n, double band_high, std::uint64_t seed);

}  // namespace parsim::bench
