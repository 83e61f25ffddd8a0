#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hcie/image.hpp"

// Built-in 256x256 8-bit test corpus. Six deterministic synthetic images with
// natural-image character: smooth multi-scale structure, a few hard edges,
// distinct regional brightness and a low-amplitude dither everywhere. The
// attack-quality thresholds of the experiment suite are calibrated on these.

namespace hcie::corpus {

inline constexpr int kImageCount = 6;
inline constexpr int kSize = 256;

namespace detail {

/// Smooth value noise: a coarse random lattice upsampled bilinearly.
inline std::vector<double> value_noise(std::mt19937& rng, int lattice, double amplitude) {
  std::uniform_real_distribution<double> uni(-amplitude, amplitude);
  std::vector<double> coarse(static_cast<std::size_t>(lattice + 1) * (lattice + 1));
  for (double& v : coarse) v = uni(rng);
  std::vector<double> out(static_cast<std::size_t>(kSize) * kSize);
  const double scale = static_cast<double>(lattice) / kSize;
  for (int r = 0; r < kSize; ++r)
    for (int c = 0; c < kSize; ++c) {
      const double y = r * scale, x = c * scale;
      const int y0 = static_cast<int>(y), x0 = static_cast<int>(x);
      const double fy = y - y0, fx = x - x0;
      auto at = [&](int yy, int xx) { return coarse[static_cast<std::size_t>(yy) * (lattice + 1) + xx]; };
      out[static_cast<std::size_t>(r) * kSize + c] =
          at(y0, x0) * (1 - fy) * (1 - fx) + at(y0, x0 + 1) * (1 - fy) * fx +
          at(y0 + 1, x0) * fy * (1 - fx) + at(y0 + 1, x0 + 1) * fy * fx;
    }
  return out;
}

inline void add_disk(std::vector<double>& px, double cy, double cx, double radius, double delta) {
  for (int r = 0; r < kSize; ++r)
    for (int c = 0; c < kSize; ++c) {
      const double d = std::hypot(r - cy, c - cx);
      if (d < radius) {
        const double edge = std::min(1.0, (radius - d) / 4.0);  // soft rim
        px[static_cast<std::size_t>(r) * kSize + c] += delta * edge;
      }
    }
}

inline void add_rect(std::vector<double>& px, int r0, int c0, int r1, int c1, double delta) {
  for (int r = std::max(0, r0); r < std::min(kSize, r1); ++r)
    for (int c = std::max(0, c0); c < std::min(kSize, c1); ++c)
      px[static_cast<std::size_t>(r) * kSize + c] += delta;
}

}  // namespace detail

/// Deterministic synthetic test image, index in [0, kImageCount).
inline Image test_image(int index) {
  require(index >= 0 && index < kImageCount, errc::domain, "corpus index out of range");
  std::mt19937 rng(0xC0FFEEu + static_cast<unsigned>(index) * 7919u);
  std::vector<double> px(static_cast<std::size_t>(kSize) * kSize, 0.0);

  // Base brightness and a direction-varying gradient.
  const double base = 70.0 + 20.0 * index;
  const double gr = (index % 3 == 0) ? 0.30 : (index % 3 == 1 ? -0.18 : 0.10);
  const double gc = (index % 2 == 0) ? 0.22 : -0.26;
  for (int r = 0; r < kSize; ++r)
    for (int c = 0; c < kSize; ++c)
      px[static_cast<std::size_t>(r) * kSize + c] = base + gr * r + gc * c;

  // Multi-scale smooth structure.
  for (const auto [lattice, amp] : {std::pair{4, 46.0}, {8, 30.0}, {16, 16.0}, {64, 7.0}}) {
    const auto noise = detail::value_noise(rng, lattice, amp);
    for (std::size_t i = 0; i < px.size(); ++i) px[i] += noise[i];
  }

  // A few scene elements per image.
  switch (index) {
    case 0:
      detail::add_disk(px, 96, 128, 58, 55);
      detail::add_disk(px, 190, 70, 30, -48);
      break;
    case 1:
      for (int r = 0; r < kSize; ++r)
        for (int c = 0; c < kSize; ++c)
          if (r > 150 + 28 * std::sin(c * 0.05)) px[static_cast<std::size_t>(r) * kSize + c] -= 52;
      detail::add_disk(px, 52, 200, 22, 70);
      break;
    case 2:
      detail::add_rect(px, 40, 30, 210, 80, 48);
      detail::add_rect(px, 90, 110, 230, 150, -42);
      detail::add_rect(px, 30, 170, 120, 236, 30);
      break;
    case 3:
      for (int r = 0; r < kSize; ++r)
        for (int c = 0; c < kSize; ++c)
          px[static_cast<std::size_t>(r) * kSize + c] +=
              26.0 * std::sin(r * 0.11) * std::cos(c * 0.07);
      detail::add_disk(px, 128, 128, 80, -25);
      break;
    case 4:
      detail::add_rect(px, 0, 0, 256, 36, -35);
      detail::add_rect(px, 0, 220, 256, 256, 42);
      detail::add_disk(px, 140, 128, 46, 58);
      break;
    case 5:
      detail::add_disk(px, 80, 90, 50, 46);
      detail::add_rect(px, 150, 140, 220, 240, -44);
      for (int r = 0; r < kSize; ++r)
        for (int c = 0; c < kSize; ++c)
          px[static_cast<std::size_t>(r) * kSize + c] += 14.0 * std::sin((r + c) * 0.035);
      break;
    default:
      break;
  }

  // Dither keeps block statistics distinct without changing the look.
  std::uniform_int_distribution<int> dither(-2, 2);
  std::vector<pixel_t> out(px.size());
  for (std::size_t i = 0; i < px.size(); ++i) {
    const int v = static_cast<int>(std::lround(px[i])) + dither(rng);
    out[i] = static_cast<pixel_t>(std::clamp(v, 0, 255));
  }
  return Image(kSize, kSize, 256, std::move(out));
}

inline std::vector<Image> test_images() {
  std::vector<Image> out;
  out.reserve(kImageCount);
  for (int i = 0; i < kImageCount; ++i) out.push_back(test_image(i));
  return out;
}

}  // namespace hcie::corpus
