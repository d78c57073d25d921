#include <gtest/gtest.h>

#include <vector>

#include "trimlab/random.hpp"

namespace trimlab {
namespace {

using Counter = Philox4x32::Counter;

TEST(Philox, KnownAnswerZero) {
  EXPECT_EQ(Philox4x32::generate({0, 0, 0, 0}, {0, 0}),
            (Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerAllOnes) {
  EXPECT_EQ(Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
            (Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
  EXPECT_EQ(Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
            (Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, UsableAtCompileTime) {
  constexpr auto out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
  static_assert(out[0] == 0x6627e8d5u);
}

TEST(Substream, UniformsAreInOpenInterval) {
  EXPECT_GT(Substream::to_unit(0, 0), 0.0);
  EXPECT_LT(Substream::to_unit(0xffffffffu, 0xffffffffu), 1.0);
  const Substream s(3, SeedDomain::Experiment, 0);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double u = s.uniform(i);
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Substream, FillMatchesPointwiseAccessForEveryLength) {
  const Substream s(0x1234567890ull, SeedDomain::Experiment, 77);
  for (std::uint64_t count : {0ull, 1ull, 2ull, 127ull, 128ull, 129ull, 1001ull}) {
    std::vector<double> got(count, -1.0);
    s.fill(count, [&](std::uint64_t i, double u) { got[i] = u; });
    for (std::uint64_t i = 0; i < count; ++i) ASSERT_EQ(got[i], s.uniform(i)) << count << " " << i;
  }
}

TEST(Substream, CoordinatesSelectDistinctStreams) {
  const double base = Substream(5, SeedDomain::Experiment, 0).uniform(0);
  EXPECT_NE(base, Substream(6, SeedDomain::Experiment, 0).uniform(0));
  EXPECT_NE(base, Substream(5, SeedDomain::Centers, 0).uniform(0));
  EXPECT_NE(base, Substream(5, SeedDomain::Experiment, 1).uniform(0));
  EXPECT_NE(base, Substream(5, SeedDomain::Experiment, 1ull << 32).uniform(0));
  EXPECT_NE(base, Substream(5, SeedDomain::Experiment, 0).uniform(1));
}

TEST(Substream, UniformMomentsAreSane) {
  const Substream s(11, SeedDomain::Experiment, 0);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  s.fill(n, [&](std::uint64_t, double u) {
    sum += u;
    sum2 += u * u;
  });
  EXPECT_NEAR(sum / n, 0.5, 0.003);
  EXPECT_NEAR(sum2 / n, 1.0 / 3.0, 0.003);
}

}  // namespace
}  // namespace trimlab
