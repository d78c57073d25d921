#pragma once

#include <array>
#include <cstdint>

namespace trimlab {

// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2,
// 3"). A keyed bijection on 128-bit counters; no state is carried between
// calls, so any draw can be recomputed from its coordinates alone.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  static constexpr int kRounds = 10;

  static constexpr Counter generate(Counter ctr, Key key) noexcept {
    ctr = round(ctr, key);
    for (int r = 1; r < kRounds; ++r) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
      ctr = round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr Counter round(const Counter& c, const Key& k) noexcept {
    const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

// Seed domains keep the random streams of different procedures disjoint; for
// example the centring pass of an experiment never reuses the draws of the
// main pass.
enum class SeedDomain : std::uint32_t {
  Experiment = 0,
  Centers = 1,
  Audit = 2,
  Interval = 3,
  MomentBound = 4,
  Coverage = 5,
};

// Uniform stream of one replication, addressed by observation index.
// Coordinates: key = seed, counter = (block, replication lo, replication hi,
// domain). Each Philox block yields two 52-bit uniforms.
class Substream {
 public:
  constexpr Substream(std::uint64_t seed, SeedDomain domain,
                      std::uint64_t replication) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        rep_lo_(static_cast<std::uint32_t>(replication)),
        rep_hi_(static_cast<std::uint32_t>(replication >> 32)),
        domain_(static_cast<std::uint32_t>(domain)) {}

  // Open-interval uniform in (0,1): (m + 1/2) 2^-52 for a 52-bit integer m.
  static constexpr double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 12;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
  }

  // Uniforms 2*block and 2*block + 1.
  constexpr std::array<double, 2> pair(std::uint32_t block) const noexcept {
    const auto out = Philox4x32::generate({block, rep_lo_, rep_hi_, domain_}, key_);
    return {to_unit(out[0], out[1]), to_unit(out[2], out[3])};
  }

  constexpr double uniform(std::uint64_t index) const noexcept {
    const auto p = pair(static_cast<std::uint32_t>(index >> 1));
    return p[index & 1u];
  }

  // Writes uniforms 0..count-1 through `sink(i, u)`. Blocks are generated
  // in lanes of kLanes so the rounds vectorise; values match pair().
  template <class Sink>
  void fill(std::uint64_t count, Sink&& sink) const {
    constexpr std::uint32_t kLanes = 64;
    const std::uint64_t blocks = (count + 1) / 2;
    std::uint64_t block = 0;
    for (; block + kLanes <= blocks; block += kLanes) {
      std::uint32_t c0[kLanes], c1[kLanes], c2[kLanes], c3[kLanes];
      for (std::uint32_t l = 0; l < kLanes; ++l) {
        c0[l] = static_cast<std::uint32_t>(block) + l;
        c1[l] = rep_lo_;
        c2[l] = rep_hi_;
        c3[l] = domain_;
      }
      std::uint32_t k0 = key_[0], k1 = key_[1];
      for (int r = 0; r < Philox4x32::kRounds; ++r) {
        for (std::uint32_t l = 0; l < kLanes; ++l) {
          const std::uint64_t p0 = std::uint64_t{Philox4x32::kMul0} * c0[l];
          const std::uint64_t p1 = std::uint64_t{Philox4x32::kMul1} * c2[l];
          const auto n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1[l] ^ k0;
          const auto n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3[l] ^ k1;
          c1[l] = static_cast<std::uint32_t>(p1);
          c3[l] = static_cast<std::uint32_t>(p0);
          c0[l] = n0;
          c2[l] = n2;
        }
        k0 += Philox4x32::kWeyl0;
        k1 += Philox4x32::kWeyl1;
      }
      for (std::uint32_t l = 0; l < kLanes; ++l) {
        const std::uint64_t i = 2 * (block + l);
        sink(i, to_unit(c0[l], c1[l]));
        if (i + 1 < count) sink(i + 1, to_unit(c2[l], c3[l]));
      }
    }
    for (; block < blocks; ++block) {
      const auto p = pair(static_cast<std::uint32_t>(block));
      const std::uint64_t i = 2 * block;
      sink(i, p[0]);
      if (i + 1 < count) sink(i + 1, p[1]);
    }
  }

 private:
  Philox4x32::Key key_;
  std::uint32_t rep_lo_;
  std::uint32_t rep_hi_;
  std::uint32_t domain_;
};

}  // namespace trimlab
