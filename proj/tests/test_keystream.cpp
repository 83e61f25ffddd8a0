#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hcie/cipher.hpp"
#include "hcie/keystream.hpp"
#include "helpers.hpp"

using namespace hcie;

TEST_CASE("key validation") {
  CHECK_THROWS_AS((Key{0, 1, 8}.validate()), error);                 // x0 = 0
  CHECK_THROWS_AS((Key{256, 1, 8}.validate()), error);               // x0 = 1.0
  CHECK_THROWS_AS((Key{1, 0, 8}.validate()), error);                 // mu = 0
  CHECK_THROWS_AS((Key{1, 257, 8}.validate()), error);               // mu > 4
  CHECK_THROWS_AS((Key{1, 1, 3}.validate()), error);                 // precision too small
  CHECK_THROWS_AS((Key{1, 1, 33}.validate()), error);                // precision too large
  CHECK_NOTHROW((Key{1, 256, 8}.validate()));                        // mu = 4 exactly
  const Key k = Key::from_doubles(0.5, 2.0, 8);
  CHECK(k.x0_raw == 128);
  CHECK(k.mu_raw == 128);
}

TEST_CASE("logistic map fixed point arithmetic") {
  SECTION("zero is a fixed point") {
    CHECK(logistic_next(0, 200, 8) == 0);
  }
  SECTION("x=1/2, mu=4 saturates to the largest representable fraction") {
    // exact arithmetic gives 1.0, which is clamped to 1 - 2^-L
    CHECK(logistic_next(128, 256, 8) == 255);
    CHECK(logistic_next(1u << 15, 1u << 16, 16) == (1u << 16) - 1);
  }
  SECTION("x=1/4, mu=2 is exact at any precision of at least 4") {
    for (int L : {8, 12, 16, 24, 32}) {
      const std::uint64_t x = 1ull << (L - 2);
      const std::uint64_t mu = 1ull << (L - 1);
      CHECK(logistic_next(x, mu, L) == 3ull << (L - 3));  // 0.375
    }
  }
  SECTION("closure: results stay in [0, 1)") {
    std::mt19937_64 rng(9);
    for (int L : {4, 8, 16, 32}) {
      const std::uint64_t one = 1ull << L;
      for (int t = 0; t < 2000; ++t) {
        const std::uint64_t x = rng() % one;
        const std::uint64_t mu = 1 + rng() % one;
        CHECK(logistic_next(x, mu, L) < one);
      }
    }
  }
}

TEST_CASE("bit extraction order") {
  // x0 = 1/4, mu = 2 at L = 8: the first two states are 96 = 0b01100000 and
  // 120 = 0b01111000; bits come from the new states, most significant first.
  const Key key{64, 128, 8};
  const BitStream s = generate_bitstream(key, 16);
  const std::vector<std::uint8_t> expect{0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0};
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(s.bit(i) == expect[i]);
}

TEST_CASE("stream length accounting") {
  SECTION("the flagship shape") {
    const PublicParams params{32, 32, 4, 2, 1, 2};
    CHECK(params.bits_per_permutation() == 190 * 2);
    CHECK(required_stream_bits(params, 256, 256) == 24700);
    // 24700 bits need ceil(24700/8) = 3088 map iterations
    CHECK((24700 + 7) / 8 == 3088);
  }
  SECTION("generate produces exactly the requested length") {
    const Key key = testutil::fixed_key(16);
    CHECK(generate_bitstream(key, 24700).length() == 24700);
    CHECK(generate_bitstream(key, 1).length() == 1);
  }
}

TEST_CASE("determinism") {
  const Key key = testutil::fixed_key();
  const BitStream a = generate_bitstream(key, 4096);
  const BitStream b = generate_bitstream(key, 4096);
  for (std::size_t i = 0; i < 4096; ++i) REQUIRE(a.bit(i) == b.bit(i));
}

TEST_CASE("take_bits consumes sequentially") {
  BitStream s(std::vector<std::uint8_t>{1, 0, 1, 1});
  CHECK(s.take(0).empty());
  CHECK(s.cursor() == 0);
  CHECK(s.take(2) == std::vector<std::uint8_t>{1, 0});
  CHECK(s.take(2) == std::vector<std::uint8_t>{1, 1});
  CHECK(s.remaining() == 0);
  CHECK_THROWS_AS(s.take(1), error);
}

TEST_CASE("one encryption consumes exactly the computed stream length") {
  std::mt19937 rng(11);
  const PublicParams params{4, 4, 1, 1, 1, 2};
  const Key key = testutil::fixed_key(16);
  const std::size_t lb = required_stream_bits(params, 16, 16);
  BitStream stream = generate_bitstream(key, lb);

  // Drive the same consumption pattern encryption uses: 1 + K permutations.
  const long k = params.block_count(16, 16);
  Image block = testutil::random_image(rng, 4, 4);
  for (long i = 0; i < 1 + k; ++i) block = sub_hcie(block, stream, params);
  CHECK(stream.remaining() == 0);
  CHECK_THROWS_AS(sub_hcie(block, stream, params), error);
}
