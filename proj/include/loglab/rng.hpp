#ifndef LOGLAB_RNG_HPP
#define LOGLAB_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace loglab {

/// Philox4x32-10 block function (Salmon et al., Random123). Stateless:
/// the output is a pure function of (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) noexcept {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

/// Counter-based Gaussian source for one Monte Carlo stream. Every draw is
/// addressed by a 64-bit tag, so the value attached to a tag never depends
/// on how many other tags were drawn or in which order.
class StreamRng {
 public:
  StreamRng(std::uint64_t master_seed, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)},
        stream_(stream) {}

  /// Two independent uniforms in (0, 1].
  std::pair<double, double> uniform_pair(std::uint64_t tag) const noexcept {
    const auto out = Philox4x32::generate(
        {static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32),
         static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)},
        key_);
    const std::uint64_t a = (std::uint64_t{out[0]} << 32) | out[1];
    const std::uint64_t b = (std::uint64_t{out[2]} << 32) | out[3];
    constexpr double kUnit = 0x1.0p-53;
    return {static_cast<double>((a >> 11) + 1) * kUnit, static_cast<double>((b >> 11) + 1) * kUnit};
  }

  /// Two independent standard normals (Box-Muller).
  std::pair<double, double> normal_pair(std::uint64_t tag) const noexcept {
    const auto [u1, u2] = uniform_pair(tag);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(angle), r * std::sin(angle)};
  }

  std::uint64_t stream() const noexcept { return stream_; }

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
};

}  // namespace loglab

#endif  // LOGLAB_RNG_HPP
