#include "turnsim/stochastic.hpp"

#include <cassert>
#include <cmath>

#include "turnsim/errors.hpp"

namespace turnsim {

double WeibullParams::mean() const { return theta + beta * std::tgamma(1.0 + 1.0 / alpha); }

double WeibullParams::cdf(double x) const {
  if (x <= theta) return 0.0;
  return 1.0 - std::exp(-std::pow((x - theta) / beta, alpha));
}

std::optional<WeibullParams> weibull_preset(std::string_view name) {
  if (name == "A") return kLuggageA;
  if (name == "B") return kLuggageB;
  if (name == "walk") return kWalkPreset;
  return std::nullopt;
}

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {
constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
}  // namespace

Rng::Rng(std::uint64_t seed) noexcept {
  std::uint64_t state = seed;
  for (auto& word : s_) word = splitmix64(state);
}

Rng Rng::stream(RngSeed seed, std::uint64_t stream_id) noexcept {
  std::uint64_t state = seed.value;
  const std::uint64_t a = splitmix64(state);
  state = stream_id ^ 0xd1b54a32d192ed03ULL;
  const std::uint64_t b = splitmix64(state);
  return Rng(a ^ rotl(b, 17));
}

Rng::result_type Rng::operator()() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) noexcept {
  // Lemire's multiply-shift with rejection.
  unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>((*this)()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double weibull_quantile(const WeibullParams& params, double u) {
  const double x = params.theta + params.beta * std::pow(-std::log1p(-u), 1.0 / params.alpha);
  assert(x >= params.theta);
  return x;
}

double sample_weibull(const WeibullParams& params, Rng& rng) {
  if (!params.valid()) throw ValidationError("invalid Weibull parameters");
  return weibull_quantile(params, rng.uniform());
}

bool bernoulli(double p, Rng& rng) { return rng.uniform() < p; }

}  // namespace turnsim
