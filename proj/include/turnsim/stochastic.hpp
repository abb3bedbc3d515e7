#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace turnsim {

/// Three-parameter Weibull: shape alpha, scale beta [s], offset theta [s].
struct WeibullParams {
  double alpha = 1.0;
  double beta = 1.0;
  double theta = 0.0;

  bool valid() const noexcept { return alpha > 0.0 && beta > 0.0 && theta >= 0.0; }
  double mean() const;
  double cdf(double x) const;
};

// Table presets: walking cell time and the two luggage policies.
inline constexpr WeibullParams kWalkPreset{0.9, 4.0, 1.6};
inline constexpr WeibullParams kLuggageA{2.0, 6.5, 5.5};
inline constexpr WeibullParams kLuggageB{2.0, 6.5, 1.5};

/// "A", "B" or "walk"; nullopt for anything else.
std::optional<WeibullParams> weibull_preset(std::string_view name);

struct RngSeed {
  std::uint64_t value = 0;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// xoshiro256** with a splitmix64 seeder. Streams are derived from
/// (seed, stream id) so every passenger owns an independent sequence.
class Rng {
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) noexcept;
  static Rng stream(RngSeed seed, std::uint64_t stream_id) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;

private:
  std::uint64_t s_[4];
};

/// Inverse-transform draw: theta + beta * (-ln(1 - U))^(1/alpha).
double sample_weibull(const WeibullParams& params, Rng& rng);
/// Same map applied to a given U in [0, 1).
double weibull_quantile(const WeibullParams& params, double u);

bool bernoulli(double p, Rng& rng);

}  // namespace turnsim
