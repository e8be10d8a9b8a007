#include "parsim/signals.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "parsim/error.hpp"

namespace parsim::bench {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Vector white_noise(Index n, double variance, std::uint64_t seed) {
  if (variance < 0.0) throw Error(ErrorCategory::config, "noise variance must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(variance));
  Vector out(n);
  for (Index i = 0; i < n; ++i) out(i) = variance > 0.0 ? normal(rng) : 0.0;
  return out;
}

Vector fir_filter(const Vector& coeffs, const Vector& x) {
  Vector out = Vector::Zero(x.size());
  for (Index k = 0; k < x.size(); ++k) {
    for (Index j = 0; j < coeffs.size() && j <= k; ++j) out(k) += coeffs(j) * x(k - j);
  }
  return out;
}

namespace {

constexpr int kButterworthOrder = 8;
constexpr Index kFilterWarmup = 200;

struct Biquad {
  double b0, b1, b2, a1, a2;
  double z1 = 0.0, z2 = 0.0;

  double step(double x) {
    const double y = b0 * x + z1;
    z1 = b1 * x - a1 * y + z2;
    z2 = b2 * x - a2 * y;
    return y;
  }
};

// Bilinear-transform Butterworth low-pass as cascaded second-order sections.
std::array<Biquad, kButterworthOrder / 2> butterworth_lowpass(double band_high) {
  const double w = std::tan(std::numbers::pi * band_high / 2.0);
  std::array<Biquad, kButterworthOrder / 2> sections{};
  for (int s = 0; s < kButterworthOrder / 2; ++s) {
    const double theta = std::numbers::pi * (2.0 * s + 1.0) / (2.0 * kButterworthOrder);
    const double inv_q = 2.0 * std::sin(theta);  // 1/Q of the analog pole pair
    const double norm = 1.0 / (1.0 + w * inv_q + w * w);
    Biquad& bq = sections[static_cast<std::size_t>(s)];
    bq.b0 = w * w * norm;
    bq.b1 = 2.0 * bq.b0;
    bq.b2 = bq.b0;
    bq.a1 = 2.0 * (w * w - 1.0) * norm;
    bq.a2 = (1.0 - w * inv_q + w * w) * norm;
  }
  return sections;
}

}  // namespace

Vector gen_rbs(Index n, double band_high, std::uint64_t seed) {
  if (!(band_high > 0.0 && band_high <= 1.0)) {
    throw Error(ErrorCategory::config, "gen_rbs: band_high must lie in (0, 1]");
  }
  const bool filtered = band_high < 1.0;
  const Index warmup = filtered ? kFilterWarmup : 0;
  const Vector noise = white_noise(n + warmup, 1.0, seed);
  auto sections = butterworth_lowpass(filtered ? band_high : 0.5);
  Vector out(n);
  for (Index k = 0; k < n + warmup; ++k) {
    double v = noise(k);
    if (filtered) {
      for (auto& s : sections) v = s.step(v);
    }
    if (k >= warmup) out(k - warmup) = v >= 0.0 ? 1.0 : -1.0;
  }
  return out;
}

}  // namespace parsim::bench
