#include "imitate/rng.hpp"

namespace imitate {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline std::uint32_t mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  return static_cast<std::uint32_t>(product);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::uint32_t key0, std::uint32_t key1) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, hi1;
    const std::uint32_t lo0 = mulhilo(kPhiloxM0, counter[0], hi0);
    const std::uint32_t lo1 = mulhilo(kPhiloxM1, counter[2], hi1);
    counter = {hi1 ^ counter[1] ^ key0, lo1, hi0 ^ counter[3] ^ key1, lo0};
    key0 += kPhiloxW0;
    key1 += kPhiloxW1;
  }
  return counter;
}

void CounterRng::refill() {
  buf_ = philox4x32({static_cast<std::uint32_t>(ctr_round_),
                     static_cast<std::uint32_t>(ctr_round_ >> 32), ctr_player_, block_},
                    key0_, key1_);
  ++block_;
  pos_ = 0;
}

}  // namespace imitate
