#pragma once

#include <random>
#include <vector>

#include "hcie/image.hpp"
#include "hcie/keystream.hpp"
#include "hcie/permutation.hpp"

namespace testutil {

inline hcie::Image random_image(std::mt19937& rng, int rows, int cols, std::uint32_t levels = 256) {
  hcie::Image img(rows, cols, levels);
  std::uniform_int_distribution<std::uint32_t> uni(0, levels - 1);
  for (std::size_t i = 0; i < img.size(); ++i)
    img.value(i) = static_cast<hcie::pixel_t>(uni(rng));
  return img;
}

inline hcie::PermutationMatrix random_permutation(std::mt19937& rng, int rows, int cols) {
  std::vector<std::uint32_t> dest(static_cast<std::size_t>(rows) * cols);
  for (std::size_t i = 0; i < dest.size(); ++i) dest[i] = static_cast<std::uint32_t>(i);
  std::shuffle(dest.begin(), dest.end(), rng);
  hcie::PermutationMatrix w(rows, cols);
  for (std::size_t i = 0; i < dest.size(); ++i) w.set_dest_raster(i, dest[i]);
  return w;
}

inline hcie::Key random_key(std::mt19937& rng, int precision = 32) {
  const std::uint64_t one = 1ull << precision;
  std::uniform_int_distribution<std::uint64_t> x0(1, one - 1);
  // keep mu in the strongly chaotic band near 4 so streams stay non-degenerate
  std::uniform_int_distribution<std::uint64_t> mu(static_cast<std::uint64_t>(3.8 * (one >> 2)), one);
  return hcie::Key{x0(rng), mu(rng), precision};
}

inline hcie::Key fixed_key(int precision = 32) {
  // x0 ~ 0.3388, mu ~ 3.99
  const std::uint64_t one = 1ull << precision;
  return hcie::Key{static_cast<std::uint64_t>(0.3388 * static_cast<double>(one)),
                   static_cast<std::uint64_t>(3.99 * static_cast<double>(one >> 2)), precision};
}

inline bool same_histogram(const hcie::Image& a, const hcie::Image& b) {
  return a.levels() == b.levels() && a.histogram() == b.histogram();
}

}  // namespace testutil
