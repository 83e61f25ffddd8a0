#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hcie/cipher.hpp"
#include "hcie/image.hpp"
#include "hcie/permutation.hpp"
#include "helpers.hpp"

using namespace hcie;

TEST_CASE("image validates its domain") {
  CHECK_THROWS_AS(Image(0, 4, 256), error);
  CHECK_THROWS_AS(Image(4, 4, 1), error);
  CHECK_THROWS_AS(Image(2, 2, 4, {0, 1, 2, 4}), error);  // value 4 out of [0, 4)
  const Image img(2, 2, 4, {0, 1, 2, 3});
  CHECK(img(1, 0) == 2);
  CHECK(img.histogram() == std::vector<std::uint32_t>{1, 1, 1, 1});
}

TEST_CASE("params validation") {
  PublicParams good{4, 4, 1, 1, 1, 2};
  CHECK_NOTHROW(good.validate_for(16, 16));
  CHECK_THROWS_AS((PublicParams{4, 4, 2, 1, 1, 2}.validate()), error);  // p can reach 4
  CHECK_THROWS_AS((PublicParams{4, 4, 1, 1, 1, 0}.validate()), error);
  CHECK_THROWS_AS(good.validate_for(15, 16), error);   // divisibility
  CHECK_THROWS_AS((PublicParams{2, 16, 0, 0, 1, 1}.validate_for(16, 16)), error);  // S_M < sqrt(M)
}

TEST_CASE("partition splits in raster order") {
  SECTION("single block equals the image") {
    const Image img(2, 2, 256, {9, 8, 7, 6});
    const BlockImage b = partition(img, {2, 2, 0, 0, 0, 1});
    REQUIRE(b.block_count() == 1);
    CHECK(b.block(0, 0) == img);
  }
  SECTION("4x4 with 2x2 blocks") {
    std::vector<pixel_t> px(16);
    for (int i = 0; i < 16; ++i) px[i] = static_cast<pixel_t>(i);
    const Image img(4, 4, 256, px);
    const BlockImage b = partition(img, {2, 2, 0, 0, 0, 1});
    CHECK(b.block(0, 1) == Image(2, 2, 256, {2, 3, 6, 7}));
    CHECK(assemble(b) == img);
  }
  SECTION("256x256 with 16x16 blocks gives a 16x16 grid") {
    const Image img(256, 256, 256);
    const BlockImage b = partition(img, {16, 16, 0, 0, 0, 1});
    CHECK(b.grid_rows() == 16);
    CHECK(b.grid_cols() == 16);
    CHECK(b.block_count() == 256);
  }
  SECTION("round trip on random images and shapes") {
    std::mt19937 rng(42);
    for (int t = 0; t < 20; ++t) {
      const Image img = testutil::random_image(rng, 24, 32);
      const PublicParams params{8, 8, 0, 0, 0, 1};
      CHECK(assemble(partition(img, params)) == img);
    }
  }
  SECTION("divisibility failure") {
    CHECK_THROWS_AS(partition(Image(6, 6, 16), PublicParams{4, 4, 0, 0, 0, 1}), error);
  }
}

TEST_CASE("apply_permutation moves values to destinations") {
  SECTION("identity") {
    std::mt19937 rng(1);
    const Image img = testutil::random_image(rng, 5, 7);
    CHECK(apply_permutation(img, PermutationMatrix(5, 7)) == img);
  }
  SECTION("1x3 cycle") {
    const Image img(1, 3, 256, {5, 7, 9});
    PermutationMatrix w(1, 3);
    w.set_dest(0, 0, {0, 1});
    w.set_dest(0, 1, {0, 2});
    w.set_dest(0, 2, {0, 0});
    CHECK(apply_permutation(img, w) == Image(1, 3, 256, {9, 5, 7}));
  }
  SECTION("inverse round trip and histogram invariance") {
    std::mt19937 rng(2);
    for (int t = 0; t < 30; ++t) {
      const Image img = testutil::random_image(rng, 8, 8, 16);
      const PermutationMatrix w = testutil::random_permutation(rng, 8, 8);
      const Image moved = apply_permutation(img, w);
      CHECK(testutil::same_histogram(img, moved));
      CHECK(apply_permutation(moved, invert(w)) == img);
    }
  }
  SECTION("size mismatch") {
    CHECK_THROWS_AS(apply_permutation(Image(2, 3, 4), PermutationMatrix(3, 2)), error);
  }
}

TEST_CASE("invert") {
  SECTION("identity and cycles") {
    CHECK(invert(PermutationMatrix(3, 3)) == PermutationMatrix(3, 3));
    PermutationMatrix cycle(1, 3);  // 0 -> 1 -> 2 -> 0
    cycle.set_dest_raster(0, 1);
    cycle.set_dest_raster(1, 2);
    cycle.set_dest_raster(2, 0);
    PermutationMatrix reversed(1, 3);  // 0 -> 2 -> 1 -> 0
    reversed.set_dest_raster(0, 2);
    reversed.set_dest_raster(2, 1);
    reversed.set_dest_raster(1, 0);
    CHECK(invert(cycle) == reversed);
  }
  SECTION("inverse composes to identity") {
    std::mt19937 rng(3);
    for (int t = 0; t < 25; ++t) {
      const PermutationMatrix w = testutil::random_permutation(rng, 8, 8);
      const PermutationMatrix inv = invert(w);
      CHECK(invert(inv) == w);
      for (std::size_t s = 0; s < w.size(); ++s)
        CHECK(inv.dest_raster(w.dest_raster(s)) == s);
    }
  }
  SECTION("non-bijective input rejected") {
    PermutationMatrix bad(1, 2);
    bad.set_dest_raster(0, 1);
    bad.set_dest_raster(1, 1);
    CHECK(!bad.is_bijective());
    CHECK_THROWS_AS(invert(bad), error);
  }
}

TEST_CASE("flatten") {
  SECTION("identity hierarchy flattens to identity") {
    HierarchicalPermutation hp;
    hp.high = PermutationMatrix(1, 1);
    hp.low = {PermutationMatrix(4, 4)};
    CHECK(flatten(hp, {4, 4, 0, 0, 0, 1}, 4, 4) == PermutationMatrix(4, 4));
  }
  SECTION("block swap with identity low matrices shifts by the block size") {
    const PublicParams params{2, 2, 0, 0, 0, 1};
    HierarchicalPermutation hp;
    hp.high = PermutationMatrix(2, 2);
    hp.high.set_dest(0, 0, {1, 1});
    hp.high.set_dest(1, 1, {0, 0});
    hp.low.assign(4, PermutationMatrix(2, 2));
    const PermutationMatrix flat = flatten(hp, params, 4, 4);
    CHECK(flat.dest(0, 0) == Pos{2, 2});
    CHECK(flat.dest(1, 1) == Pos{3, 3});
    CHECK(flat.dest(3, 3) == Pos{1, 1});
    CHECK(flat.dest(0, 2) == Pos{0, 2});  // untouched block
  }
  SECTION("flatten-then-apply equals hierarchical application") {
    std::mt19937 rng(4);
    const PublicParams params{4, 4, 0, 0, 0, 1};
    for (int t = 0; t < 100; ++t) {
      HierarchicalPermutation hp;
      hp.high = testutil::random_permutation(rng, 4, 4);
      for (int b = 0; b < 16; ++b) hp.low.push_back(testutil::random_permutation(rng, 4, 4));
      const Image img = testutil::random_image(rng, 16, 16);
      const PermutationMatrix flat = flatten(hp, params, 16, 16);
      CHECK(flat.is_bijective());
      CHECK(apply_permutation(img, flat) == apply_hierarchical(img, hp, params));
    }
  }
  SECTION("inconsistent dimensions rejected") {
    HierarchicalPermutation hp;
    hp.high = PermutationMatrix(2, 2);
    hp.low.assign(4, PermutationMatrix(2, 2));
    CHECK_THROWS_AS(flatten(hp, PublicParams{2, 2, 0, 0, 0, 1}, 4, 6), error);
    hp.low.pop_back();
    CHECK_THROWS_AS(flatten(hp, PublicParams{2, 2, 0, 0, 0, 1}, 4, 4), error);
  }
}
