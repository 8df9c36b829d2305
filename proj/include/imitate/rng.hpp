#pragma once

#include <array>
#include <cstdint>

namespace imitate {

// Philox 4x32-10 counter-based generator (Salmon et al., SC'11).
// Pure function of (counter, key), so a simulation can hand every
// (seed, round, player) triple its own stream and evaluate players in
// any order, on any number of threads, with identical results.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::uint32_t key0, std::uint32_t key1);

// Stream of uniform variates for one (seed, round, player) triple.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t round, std::uint64_t player)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        ctr_round_(round),
        ctr_player_(static_cast<std::uint32_t>(player)) {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  // Uniform in [0,1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0,n). Multiply-shift; bias is n/2^64, negligible here.
  std::int64_t next_below(std::int64_t n) {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
    return static_cast<std::int64_t>(wide >> 64);
  }

 private:
  void refill();

  std::uint32_t key0_, key1_;
  std::uint64_t ctr_round_;
  std::uint32_t ctr_player_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

}  // namespace imitate
