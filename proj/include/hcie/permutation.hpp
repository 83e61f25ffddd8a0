#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcie/error.hpp"
#include "hcie/image.hpp"

namespace hcie {

/// Grid the same shape as the object it permutes; the entry at a source
/// position stores that element's destination position.
class PermutationMatrix {
 public:
  PermutationMatrix() = default;

  /// Identity permutation.
  PermutationMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    require(rows >= 1 && cols >= 1, errc::domain, "permutation dimensions must be positive");
    dest_.resize(static_cast<std::size_t>(rows) * cols);
    for (std::size_t i = 0; i < dest_.size(); ++i) dest_[i] = static_cast<std::uint32_t>(i);
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return dest_.size(); }

  std::size_t raster(int r, int c) const noexcept { return static_cast<std::size_t>(r) * cols_ + c; }
  Pos pos_of(std::size_t raster_index) const noexcept {
    return {static_cast<int>(raster_index) / cols_, static_cast<int>(raster_index) % cols_};
  }

  Pos dest(int r, int c) const noexcept { return pos_of(dest_[raster(r, c)]); }
  std::uint32_t dest_raster(std::size_t src) const noexcept { return dest_[src]; }

  void set_dest(int r, int c, Pos d) noexcept { dest_[raster(r, c)] = static_cast<std::uint32_t>(raster(d.row, d.col)); }
  void set_dest_raster(std::size_t src, std::uint32_t dst) noexcept { dest_[src] = dst; }

  /// True when the multiset of entries equals the set of all positions.
  bool is_bijective() const {
    std::vector<bool> seen(dest_.size(), false);
    for (std::uint32_t d : dest_) {
      if (d >= dest_.size() || seen[d]) return false;
      seen[d] = true;
    }
    return true;
  }

  friend bool operator==(const PermutationMatrix&, const PermutationMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint32_t> dest_;
};

/// Inverse permutation: invert(W) maps each destination back to its source.
inline PermutationMatrix invert(const PermutationMatrix& w) {
  require(w.is_bijective(), errc::domain, "cannot invert a non-bijective permutation matrix");
  PermutationMatrix inv(w.rows(), w.cols());
  for (std::size_t src = 0; src < w.size(); ++src)
    inv.set_dest_raster(w.dest_raster(src), static_cast<std::uint32_t>(src));
  return inv;
}

/// Moves every pixel to its destination: out(w(i,j)) = img(i,j).
inline Image apply_permutation(const Image& img, const PermutationMatrix& w) {
  require(img.rows() == w.rows() && img.cols() == w.cols(), errc::domain,
          "image and permutation matrix dimensions differ");
  Image out(img.rows(), img.cols(), img.levels());
  for (std::size_t src = 0; src < img.size(); ++src) out.value(w.dest_raster(src)) = img.value(src);
  return out;
}

/// Two-level permutation: one matrix over the block grid plus one matrix per
/// destination block. low[d] permutes the pixels of the block that lands at
/// block-grid raster position d.
struct HierarchicalPermutation {
  PermutationMatrix high;
  std::vector<PermutationMatrix> low;

  friend bool operator==(const HierarchicalPermutation&, const HierarchicalPermutation&) = default;
};

namespace detail {

inline void check_hierarchical(const HierarchicalPermutation& hp, const PublicParams& params,
                               int rows, int cols) {
  params.validate_for(rows, cols);
  const int gr = params.grid_rows(rows);
  const int gc = params.grid_cols(cols);
  require(hp.high.rows() == gr && hp.high.cols() == gc, errc::domain,
          "high-level matrix does not match the block grid");
  require(hp.low.size() == static_cast<std::size_t>(gr) * gc, errc::domain,
          "low-level matrix count does not match the block count");
  for (const auto& w : hp.low)
    require(w.rows() == params.block_rows && w.cols() == params.block_cols, errc::domain,
            "low-level matrix does not match the block shape");
}

}  // namespace detail

/// Equivalent single flat permutation: move the whole block per the high
/// matrix, then move the pixel inside the destination block per that block's
/// low matrix.
inline PermutationMatrix flatten(const HierarchicalPermutation& hp, const PublicParams& params,
                                 int rows, int cols) {
  detail::check_hierarchical(hp, params, rows, cols);
  const int gc = params.grid_cols(cols);
  PermutationMatrix flat(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const Pos dst_block = hp.high.dest(i / params.block_rows, j / params.block_cols);
      const std::size_t d = static_cast<std::size_t>(dst_block.row) * gc + dst_block.col;
      const Pos dst_off = hp.low[d].dest(i % params.block_rows, j % params.block_cols);
      flat.set_dest(i, j,
                    {dst_block.row * params.block_rows + dst_off.row,
                     dst_block.col * params.block_cols + dst_off.col});
    }
  return flat;
}

/// Applies the two-level structure directly (block move, then per-block move).
inline Image apply_hierarchical(const Image& img, const HierarchicalPermutation& hp,
                                const PublicParams& params) {
  detail::check_hierarchical(hp, params, img.rows(), img.cols());
  BlockImage blocks = partition(img, params);
  BlockImage moved(blocks.grid_rows(), blocks.grid_cols(), blocks.block_rows(), blocks.block_cols(),
                   blocks.levels());
  for (int bi = 0; bi < blocks.grid_rows(); ++bi)
    for (int bj = 0; bj < blocks.grid_cols(); ++bj) {
      const Pos d = hp.high.dest(bi, bj);
      moved.block(d.row, d.col) = blocks.block(bi, bj);
    }
  for (std::size_t d = 0; d < moved.block_count(); ++d)
    moved.block(d) = apply_permutation(moved.block(d), hp.low[d]);
  return assemble(moved);
}

}  // namespace hcie
