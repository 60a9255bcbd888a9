#include <catch2/catch_amalgamated.hpp>

#include "llab/philox.hpp"

using llab::rng::philox4x32;
using llab::rng::uniform01;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Reference vectors published with the Random123 suite.
  {
    const auto out = philox4x32({0, 0, 0, 0}, {0, 0});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
  }
  {
    const auto out = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                {0xffffffffu, 0xffffffffu});
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);
  }
  {
    const auto out = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                {0xa4093822u, 0x299f31d0u});
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
  }
}

TEST_CASE("uniform01 is a pure function of its key") {
  const double a = uniform01(42, 7, 12345);
  const double b = uniform01(42, 7, 12345);
  CHECK(a == b);
  CHECK(a >= 0.0);
  CHECK(a < 1.0);
  CHECK(uniform01(42, 7, 12346) != a);
  CHECK(uniform01(43, 7, 12345) != a);
  CHECK(uniform01(42, 8, 12345) != a);
}

TEST_CASE("uniform01 looks uniform") {
  const int n = 200000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = uniform01(1, 0, static_cast<std::uint64_t>(i));
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(mean == Catch::Approx(0.5).margin(3.0 / std::sqrt(12.0 * n)));
  CHECK(var == Catch::Approx(1.0 / 12.0).margin(0.002));
}
