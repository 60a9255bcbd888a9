#ifndef LLAB_PHILOX_HPP
#define LLAB_PHILOX_HPP

// Philox-4x32-10 counter-based generator (Salmon et al., SC 2011).
// Stateless: every draw is a pure function of (key, counter), which is what
// makes order- and thread-independent Monte Carlo reproducible.

#include <array>
#include <cstdint>

namespace llab::rng {

namespace detail {

inline void mulhilo32(std::uint32_t a, std::uint32_t b,
                      std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace detail

inline std::array<std::uint32_t, 4> philox4x32(
    std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    detail::mulhilo32(kMul0, ctr[0], hi0, lo0);
    detail::mulhilo32(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

// One double in [0,1) keyed by (seed, stream, site). 53 mantissa bits from
// the first two output lanes.
inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t site) {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(stream),
      static_cast<std::uint32_t>(stream >> 32),
      static_cast<std::uint32_t>(site),
      static_cast<std::uint32_t>(site >> 32)};
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(seed),
      static_cast<std::uint32_t>(seed >> 32)};
  const auto out = philox4x32(ctr, key);
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace llab::rng

#endif  // LLAB_PHILOX_HPP
