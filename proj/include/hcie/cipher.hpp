#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hcie/error.hpp"
#include "hcie/image.hpp"
#include "hcie/keystream.hpp"
#include "hcie/permutation.hpp"

namespace hcie {

/// The four line families the cipher rotates along.
enum class LineKind { row, column, anti_diagonal, diagonal };

/// One cyclic rotation of a single line.
///
/// `line` selects the row index, column index, anti-diagonal sum i+j, or
/// diagonal offset i-j. `direction` picks the sense of the rotation:
///   row:           0 = left,       1 = right
///   column:        0 = up,         1 = down
///   anti_diagonal: 0 = lower-left, 1 = upper-right
///   diagonal:      0 = upper-left, 1 = lower-right
/// Diagonal lines are ordered by increasing row index; the effective shift is
/// `amount` modulo the line length.
struct RotationSpec {
  LineKind kind = LineKind::row;
  int line = 0;
  int direction = 0;
  int amount = 0;
};

namespace detail {

/// Raster indices of the selected line, ordered by increasing row (rows are
/// ordered by increasing column).
inline void line_positions(int rows, int cols, const RotationSpec& spec,
                           std::vector<std::size_t>& out) {
  out.clear();
  switch (spec.kind) {
    case LineKind::row:
      require(spec.line >= 0 && spec.line < rows, errc::domain, "row index out of range");
      for (int c = 0; c < cols; ++c) out.push_back(static_cast<std::size_t>(spec.line) * cols + c);
      break;
    case LineKind::column:
      require(spec.line >= 0 && spec.line < cols, errc::domain, "column index out of range");
      for (int r = 0; r < rows; ++r) out.push_back(static_cast<std::size_t>(r) * cols + spec.line);
      break;
    case LineKind::anti_diagonal: {
      require(spec.line >= 0 && spec.line <= rows + cols - 2, errc::domain,
              "anti-diagonal index out of range");
      const int r0 = std::max(0, spec.line - (cols - 1));
      const int r1 = std::min(rows - 1, spec.line);
      for (int r = r0; r <= r1; ++r) out.push_back(static_cast<std::size_t>(r) * cols + (spec.line - r));
      break;
    }
    case LineKind::diagonal: {
      require(spec.line >= 1 - cols && spec.line <= rows - 1, errc::domain,
              "diagonal offset out of range");
      const int r0 = std::max(0, spec.line);
      const int r1 = std::min(rows - 1, cols - 1 + spec.line);
      for (int r = r0; r <= r1; ++r) out.push_back(static_cast<std::size_t>(r) * cols + (r - spec.line));
      break;
    }
  }
}

/// Cyclic shift along a position list: new[t] = old[(t + shift) mod len].
inline void rotate_line(std::vector<pixel_t>& px, const std::vector<std::size_t>& idx, long shift,
                        std::vector<pixel_t>& scratch) {
  const long len = static_cast<long>(idx.size());
  const long s = ((shift % len) + len) % len;
  if (s == 0) return;
  scratch.resize(idx.size());
  for (long t = 0; t < len; ++t) scratch[t] = px[idx[(t + s) % len]];
  for (long t = 0; t < len; ++t) px[idx[t]] = scratch[t];
}

/// Shift sign for new[t] = old[(t + s) mod len] given the direction bit.
inline long line_shift(const RotationSpec& spec) {
  const bool forward =  // value moves toward a higher position index on the line
      (spec.kind == LineKind::row && spec.direction == 1) ||
      (spec.kind == LineKind::column && spec.direction == 1) ||
      (spec.kind == LineKind::anti_diagonal && spec.direction == 0) ||
      (spec.kind == LineKind::diagonal && spec.direction == 1);
  return forward ? -static_cast<long>(spec.amount) : static_cast<long>(spec.amount);
}

}  // namespace detail

/// Rotates one line of the image in place; all other pixels are untouched.
inline void rotate_in_place(Image& img, const RotationSpec& spec) {
  require(spec.amount >= 0 && spec.amount < std::min(img.rows(), img.cols()), errc::domain,
          "rotation amount must satisfy 0 <= p < min(rows, cols)");
  require(spec.direction == 0 || spec.direction == 1, errc::domain, "direction must be 0 or 1");
  std::vector<std::size_t> idx;
  std::vector<pixel_t> scratch;
  detail::line_positions(img.rows(), img.cols(), spec, idx);
  std::vector<pixel_t> px = img.pixels();
  detail::rotate_line(px, idx, detail::line_shift(spec), scratch);
  img = Image(img.rows(), img.cols(), img.levels(), std::move(px));
}

inline Image rotate(const Image& img, const RotationSpec& spec) {
  Image out = img;
  rotate_in_place(out, spec);
  return out;
}

namespace detail {

/// Core permutation pass over a full bit block of bits_per_permutation()
/// bits. Every rotation acts on the running image. Within one iteration with
/// bit base q: p = alpha + beta*b(q) + gamma*b(q+1); rows use bits b(q+i),
/// columns b(q+S_M+j), anti-diagonals b(q+S_M+S_N+k) and diagonals
/// b(q+2*S_M+3*S_N-2+l).
inline void sub_hcie_with_bits(Image& img, std::span<const std::uint8_t> bits,
                               const PublicParams& params) {
  const int sm = params.block_rows;
  const int sn = params.block_cols;
  require(img.rows() == sm && img.cols() == sn, errc::domain,
          "sub-image shape does not match the configured block shape");
  require(bits.size() == params.bits_per_permutation(), errc::stream,
          "wrong bit-block length for one permutation");

  std::vector<pixel_t> px = img.pixels();
  std::vector<std::size_t> idx;
  std::vector<pixel_t> scratch;
  const std::size_t per_iter = static_cast<std::size_t>(3 * sm + 3 * sn - 2);

  for (int ite = 0; ite < params.rounds; ++ite) {
    const std::size_t q = per_iter * ite;
    const int p = params.alpha + params.beta * bits[q] + params.gamma * bits[q + 1];
    auto run = [&](const RotationSpec& spec) {
      line_positions(sm, sn, spec, idx);
      rotate_line(px, idx, line_shift(spec), scratch);
    };
    for (int i = 0; i < sm; ++i)
      run({LineKind::row, i, bits[q + i], p});
    for (int j = 0; j < sn; ++j)
      run({LineKind::column, j, bits[q + sm + j], p});
    for (int k = 0; k <= sm + sn - 2; ++k)
      run({LineKind::anti_diagonal, k, bits[q + sm + sn + k], p});
    for (int l = 1 - sn; l <= sm - 1; ++l)
      run({LineKind::diagonal, l, bits[q + 2 * sm + 3 * sn - 2 + l], p});
  }
  img = Image(sm, sn, img.levels(), std::move(px));
}

}  // namespace detail

/// Permutes one S_M x S_N sub-image, consuming exactly
/// bits_per_permutation() bits from the stream.
inline Image sub_hcie(const Image& img, BitStream& stream, const PublicParams& params) {
  params.validate();
  const std::vector<std::uint8_t> bits = stream.take(params.bits_per_permutation());
  Image out = img;
  detail::sub_hcie_with_bits(out, bits, params);
  return out;
}

namespace detail {

/// Scratch image holding the 1-based indices of all blocks at the first K
/// raster positions and zeros elsewhere. Its level count is K+1 and is
/// independent of the plaintext's levels.
inline Image block_index_pseudo_image(const PublicParams& params, int rows, int cols) {
  const long k = params.block_count(rows, cols);
  Image pseudo(params.block_rows, params.block_cols, static_cast<std::uint32_t>(k + 1));
  for (long t = 0; t < k; ++t) pseudo.value(static_cast<std::size_t>(t)) = static_cast<pixel_t>(t + 1);
  return pseudo;
}

/// Reads the shuffled pseudo-image: the t-th non-zero value v (raster scan)
/// sends source block v-1 to destination block position t.
inline PermutationMatrix high_level_from_pseudo(const Image& shuffled, int grid_rows, int grid_cols) {
  PermutationMatrix w0(grid_rows, grid_cols);
  std::size_t t = 0;
  const std::size_t k = static_cast<std::size_t>(grid_rows) * grid_cols;
  for (std::size_t i = 0; i < shuffled.size(); ++i) {
    const pixel_t v = shuffled.value(i);
    if (v == 0) continue;
    require(t < k, errc::internal, "pseudo-image holds more non-zero entries than blocks");
    w0.set_dest_raster(static_cast<std::size_t>(v - 1), static_cast<std::uint32_t>(t));
    ++t;
  }
  require(t == k, errc::internal, "pseudo-image lost block indices");
  require(w0.is_bijective(), errc::internal, "pseudo-image readout is not a bijection");
  return w0;
}

/// Shuffles the pseudo-image and derives the block-move permutation,
/// consuming one permutation's worth of bits.
inline PermutationMatrix high_level_permutation(BitStream& stream, const PublicParams& params,
                                                int rows, int cols) {
  Image pseudo = block_index_pseudo_image(params, rows, cols);
  pseudo = sub_hcie(pseudo, stream, params);
  return high_level_from_pseudo(pseudo, params.grid_rows(rows), params.grid_cols(cols));
}

}  // namespace detail

/// Encrypts an image: block positions are shuffled via the pseudo-image, then
/// every block of the moved arrangement is permuted in raster order, each
/// permutation consuming its own segment of the keystream.
inline Image encrypt(const Image& img, const Key& key, const PublicParams& params) {
  params.validate_for(img.rows(), img.cols());
  key.validate();
  BitStream stream = generate_bitstream(key, required_stream_bits(params, img.rows(), img.cols()));

  const PermutationMatrix w0 = detail::high_level_permutation(stream, params, img.rows(), img.cols());

  BlockImage blocks = partition(img, params);
  BlockImage moved(blocks.grid_rows(), blocks.grid_cols(), blocks.block_rows(), blocks.block_cols(),
                   blocks.levels());
  for (std::size_t src = 0; src < blocks.block_count(); ++src)
    moved.block(w0.dest_raster(src)) = blocks.block(src);

  for (std::size_t d = 0; d < moved.block_count(); ++d)
    moved.block(d) = sub_hcie(moved.block(d), stream, params);

  require(stream.remaining() == 0, errc::internal, "encryption did not consume the whole keystream");
  return assemble(moved);
}

/// Recovers the equivalent permutation structure of a key by tracing index
/// images through the same permutation path encryption uses.
inline HierarchicalPermutation extract_permutation(const Key& key, const PublicParams& params,
                                                   int rows, int cols) {
  params.validate_for(rows, cols);
  key.validate();
  BitStream stream = generate_bitstream(key, required_stream_bits(params, rows, cols));

  HierarchicalPermutation hp;
  hp.high = detail::high_level_permutation(stream, params, rows, cols);

  const std::size_t slots = static_cast<std::size_t>(params.block_rows) * params.block_cols;
  Image slot_index(params.block_rows, params.block_cols, static_cast<std::uint32_t>(slots == 1 ? 2 : slots));
  for (std::size_t s = 0; s < slots; ++s) slot_index.value(s) = static_cast<pixel_t>(s);

  const long k = params.block_count(rows, cols);
  hp.low.reserve(static_cast<std::size_t>(k));
  for (long d = 0; d < k; ++d) {
    const Image traced = sub_hcie(slot_index, stream, params);
    PermutationMatrix w(params.block_rows, params.block_cols);
    for (std::size_t pos = 0; pos < traced.size(); ++pos)
      w.set_dest_raster(traced.value(pos), static_cast<std::uint32_t>(pos));
    require(w.is_bijective(), errc::internal, "traced block permutation is not a bijection");
    hp.low.push_back(std::move(w));
  }
  require(stream.remaining() == 0, errc::internal, "extraction did not consume the whole keystream");
  return hp;
}

/// Exact inverse of encrypt: extracts the key's permutation structure and
/// pulls every pixel back from its destination.
inline Image decrypt(const Image& cipher, const Key& key, const PublicParams& params) {
  const HierarchicalPermutation hp = extract_permutation(key, params, cipher.rows(), cipher.cols());
  const PermutationMatrix flat = flatten(hp, params, cipher.rows(), cipher.cols());
  Image out(cipher.rows(), cipher.cols(), cipher.levels());
  for (std::size_t src = 0; src < out.size(); ++src) out.value(src) = cipher.value(flat.dest_raster(src));
  return out;
}

}  // namespace hcie
