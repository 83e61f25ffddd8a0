#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hcie/error.hpp"

namespace hcie {

/// Pixel storage type. Wide enough for 8-bit images and for index images
/// (block indices, slot indices) used internally by the cipher and attacks.
using pixel_t = std::uint16_t;

struct Pos {
  int row = 0;
  int col = 0;
  friend bool operator==(const Pos&, const Pos&) = default;
};

/// Rectangular grid of pixel values in [0, levels).
class Image {
 public:
  Image() = default;

  /// Zero-filled image.
  Image(int rows, int cols, std::uint32_t levels)
      : rows_(rows), cols_(cols), levels_(levels), pixels_(checked_size(rows, cols, levels)) {}

  /// Image from raster (row-major) pixel data. Every value must be < levels.
  Image(int rows, int cols, std::uint32_t levels, std::vector<pixel_t> pixels)
      : rows_(rows), cols_(cols), levels_(levels), pixels_(std::move(pixels)) {
    checked_size(rows, cols, levels);
    require(pixels_.size() == static_cast<std::size_t>(rows) * cols, errc::domain,
            "pixel buffer size does not match image dimensions");
    for (pixel_t v : pixels_)
      require(v < levels_, errc::domain,
              "pixel value " + std::to_string(v) + " out of range [0, " + std::to_string(levels_) + ")");
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::uint32_t levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  std::size_t raster(int r, int c) const noexcept { return static_cast<std::size_t>(r) * cols_ + c; }
  Pos pos_of(std::size_t raster_index) const noexcept {
    return {static_cast<int>(raster_index) / cols_, static_cast<int>(raster_index) % cols_};
  }

  pixel_t operator()(int r, int c) const noexcept { return pixels_[raster(r, c)]; }
  pixel_t& operator()(int r, int c) noexcept { return pixels_[raster(r, c)]; }
  pixel_t value(std::size_t raster_index) const noexcept { return pixels_[raster_index]; }
  pixel_t& value(std::size_t raster_index) noexcept { return pixels_[raster_index]; }

  const std::vector<pixel_t>& pixels() const noexcept { return pixels_; }

  bool same_shape(const Image& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_ && levels_ == other.levels_;
  }

  /// Per-value occurrence counts, one bin per level.
  std::vector<std::uint32_t> histogram() const {
    std::vector<std::uint32_t> bins(levels_, 0);
    for (pixel_t v : pixels_) ++bins[v];
    return bins;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  static std::size_t checked_size(int rows, int cols, std::uint32_t levels) {
    require(rows >= 1 && cols >= 1, errc::domain, "image dimensions must be at least 1x1");
    require(levels >= 2 && levels <= 65536u, errc::domain, "image levels must be in [2, 65536]");
    return static_cast<std::size_t>(rows) * cols;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::uint32_t levels_ = 2;
  std::vector<pixel_t> pixels_;
};

/// Public cipher configuration: block shape, rotation-amount coefficients and
/// the per-permutation iteration count. The rotation amount used inside one
/// iteration is p = alpha + beta*b0 + gamma*b1 for keystream bits b0, b1.
struct PublicParams {
  int block_rows = 1;  ///< S_M
  int block_cols = 1;  ///< S_N
  int alpha = 0;
  int beta = 0;
  int gamma = 0;
  int rounds = 1;  ///< iteration count per permutation ("no")

  void validate() const {
    require(block_rows >= 1 && block_cols >= 1, errc::domain, "block dimensions must be positive");
    require(alpha >= 0 && beta >= 0 && gamma >= 0, errc::domain,
            "alpha, beta, gamma must be non-negative");
    require(rounds >= 1, errc::domain, "iteration count must be at least 1");
    // p = alpha + beta*b + gamma*b' must stay below min(S_M, S_N) for every bit pair.
    require(alpha + beta + gamma < std::min(block_rows, block_cols), errc::domain,
            "alpha + beta + gamma must be smaller than min(block_rows, block_cols)");
  }

  /// Validates this configuration against a concrete image shape.
  void validate_for(int rows, int cols) const {
    validate();
    require(rows % block_rows == 0, errc::domain,
            "image height " + std::to_string(rows) + " not divisible by block height " +
                std::to_string(block_rows));
    require(cols % block_cols == 0, errc::domain,
            "image width " + std::to_string(cols) + " not divisible by block width " +
                std::to_string(block_cols));
    const int min_rows = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(rows))));
    const int min_cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cols))));
    require(block_rows >= min_rows && block_rows <= rows, errc::domain,
            "block height must satisfy ceil(sqrt(M)) <= S_M <= M");
    require(block_cols >= min_cols && block_cols <= cols, errc::domain,
            "block width must satisfy ceil(sqrt(N)) <= S_N <= N");
    require(block_count(rows, cols) <= 65535, errc::domain,
            "block count exceeds the representable index range");
  }

  int grid_rows(int rows) const noexcept { return rows / block_rows; }
  int grid_cols(int cols) const noexcept { return cols / block_cols; }
  /// K, the number of blocks the image splits into.
  long block_count(int rows, int cols) const noexcept {
    return static_cast<long>(grid_rows(rows)) * grid_cols(cols);
  }
  /// Keystream bits one permutation consumes: (3*S_M + 3*S_N - 2) * rounds.
  std::size_t bits_per_permutation() const noexcept {
    return static_cast<std::size_t>(3 * block_rows + 3 * block_cols - 2) * rounds;
  }
};

/// An image split into a grid of equally sized blocks.
class BlockImage {
 public:
  BlockImage(int grid_rows, int grid_cols, int block_rows, int block_cols, std::uint32_t levels)
      : grid_rows_(grid_rows), grid_cols_(grid_cols) {
    require(grid_rows >= 1 && grid_cols >= 1, errc::domain, "block grid must be non-empty");
    blocks_.assign(static_cast<std::size_t>(grid_rows) * grid_cols,
                   Image(block_rows, block_cols, levels));
  }

  int grid_rows() const noexcept { return grid_rows_; }
  int grid_cols() const noexcept { return grid_cols_; }
  int block_rows() const noexcept { return blocks_.front().rows(); }
  int block_cols() const noexcept { return blocks_.front().cols(); }
  std::uint32_t levels() const noexcept { return blocks_.front().levels(); }
  std::size_t block_count() const noexcept { return blocks_.size(); }

  Image& block(int i, int j) noexcept { return blocks_[static_cast<std::size_t>(i) * grid_cols_ + j]; }
  const Image& block(int i, int j) const noexcept {
    return blocks_[static_cast<std::size_t>(i) * grid_cols_ + j];
  }
  Image& block(std::size_t raster_index) noexcept { return blocks_[raster_index]; }
  const Image& block(std::size_t raster_index) const noexcept { return blocks_[raster_index]; }

 private:
  int grid_rows_ = 0;
  int grid_cols_ = 0;
  std::vector<Image> blocks_;
};

/// Splits an image into S_M x S_N blocks in raster order.
inline BlockImage partition(const Image& img, const PublicParams& params) {
  params.validate_for(img.rows(), img.cols());
  BlockImage out(params.grid_rows(img.rows()), params.grid_cols(img.cols()), params.block_rows,
                 params.block_cols, img.levels());
  for (int bi = 0; bi < out.grid_rows(); ++bi)
    for (int bj = 0; bj < out.grid_cols(); ++bj) {
      Image& blk = out.block(bi, bj);
      for (int r = 0; r < params.block_rows; ++r)
        for (int c = 0; c < params.block_cols; ++c)
          blk(r, c) = img(bi * params.block_rows + r, bj * params.block_cols + c);
    }
  return out;
}

/// Reassembles blocks in raster order; exact inverse of partition.
inline Image assemble(const BlockImage& blocks) {
  Image out(blocks.grid_rows() * blocks.block_rows(), blocks.grid_cols() * blocks.block_cols(),
            blocks.levels());
  for (int bi = 0; bi < blocks.grid_rows(); ++bi)
    for (int bj = 0; bj < blocks.grid_cols(); ++bj) {
      const Image& blk = blocks.block(bi, bj);
      for (int r = 0; r < blk.rows(); ++r)
        for (int c = 0; c < blk.cols(); ++c)
          out(bi * blocks.block_rows() + r, bj * blocks.block_cols() + c) = blk(r, c);
    }
  return out;
}

}  // namespace hcie
