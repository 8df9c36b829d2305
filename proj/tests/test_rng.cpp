#include <doctest.h>

#include <map>
#include <set>

#include "imitate/rng.hpp"

using namespace imitate;

TEST_CASE("philox known-answer vectors") {
  // Reference vectors published with the original generator suite.
  const auto zero = philox4x32({0, 0, 0, 0}, 0, 0);
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);

  const auto ones = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                               0xffffffffu, 0xffffffffu);
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);
}

TEST_CASE("streams are reproducible and distinct per key") {
  CounterRng a(42, 7, 3);
  CounterRng b(42, 7, 3);
  for (int i = 0; i < 20; ++i) CHECK(a.next_u64() == b.next_u64());

  std::set<std::uint64_t> firsts;
  for (std::uint64_t player = 0; player < 50; ++player) {
    firsts.insert(CounterRng(42, 7, player).next_u64());
  }
  CHECK(firsts.size() == 50);

  CHECK(CounterRng(42, 7, 3).next_u64() != CounterRng(42, 8, 3).next_u64());
  CHECK(CounterRng(42, 7, 3).next_u64() != CounterRng(43, 7, 3).next_u64());
}

TEST_CASE("next_double lies in [0,1) and next_below in range") {
  CounterRng rng(1, 2, 3);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const std::int64_t k = rng.next_below(17);
    CHECK(k >= 0);
    CHECK(k < 17);
  }
}

TEST_CASE("next_below is close to uniform") {
  CounterRng rng(9, 1, 0);
  std::map<std::int64_t, int> counts;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) ++counts[rng.next_below(6)];
  for (const auto& [value, count] : counts) {
    CHECK(value >= 0);
    CHECK(value < 6);
    CHECK(count > draws / 6 - 600);
    CHECK(count < draws / 6 + 600);
  }
}
