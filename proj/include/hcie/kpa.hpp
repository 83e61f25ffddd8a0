#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <string>
#include <unordered_map>
#include <vector>

#include "hcie/error.hpp"
#include "hcie/image.hpp"
#include "hcie/permutation.hpp"

namespace hcie {

/// A set of plain/cipher image pairs related by one unknown permutation.
struct KnownPairSet {
  std::vector<Image> plain;
  std::vector<Image> cipher;

  std::size_t count() const noexcept { return plain.size(); }

  void validate() const {
    require(!plain.empty(), errc::domain, "at least one known pair is required");
    require(plain.size() == cipher.size(), errc::domain,
            "plain and cipher image counts differ");
    for (std::size_t i = 0; i < plain.size(); ++i) {
      require(plain[i].same_shape(plain[0]), errc::domain, "known plain-images differ in shape");
      require(cipher[i].same_shape(plain[0]), errc::domain,
              "cipher-images do not match the plain-image shape");
    }
  }

  /// Truncated view keeping only the first n pairs.
  KnownPairSet prefix(std::size_t n) const {
    require(n >= 1 && n <= plain.size(), errc::domain, "pair prefix length out of range");
    return {std::vector<Image>(plain.begin(), plain.begin() + n),
            std::vector<Image>(cipher.begin(), cipher.begin() + n)};
  }
};

/// Per-source-position sets of candidate destinations. Positions whose value
/// tuples are equal share one bucket, so the sets are stored once per bucket.
class CandidateMatrix {
 public:
  CandidateMatrix() = default;
  CandidateMatrix(int rows, int cols, std::vector<std::int32_t> bucket_of,
                  std::vector<std::vector<std::uint32_t>> buckets)
      : rows_(rows), cols_(cols), bucket_of_(std::move(bucket_of)), buckets_(std::move(buckets)) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return bucket_of_.size(); }

  std::size_t cardinality(std::size_t src) const noexcept {
    const std::int32_t b = bucket_of_[src];
    return b < 0 ? 0 : buckets_[static_cast<std::size_t>(b)].size();
  }
  std::size_t cardinality(int r, int c) const noexcept {
    return cardinality(static_cast<std::size_t>(r) * cols_ + c);
  }

  /// Candidate destination raster indices for a source position (ascending).
  const std::vector<std::uint32_t>& candidates(std::size_t src) const {
    static const std::vector<std::uint32_t> kEmpty;
    const std::int32_t b = bucket_of_[src];
    return b < 0 ? kEmpty : buckets_[static_cast<std::size_t>(b)];
  }

  bool contains(std::size_t src, std::uint32_t dst) const {
    const auto& set = candidates(src);
    return std::binary_search(set.begin(), set.end(), dst);
  }

  /// Bucket id of a source position, -1 when no destination matches it.
  std::int32_t bucket_index(std::size_t src) const noexcept { return bucket_of_[src]; }

  double average_cardinality() const {
    std::size_t total = 0;
    for (std::size_t s = 0; s < bucket_of_.size(); ++s) total += cardinality(s);
    return static_cast<double>(total) / static_cast<double>(bucket_of_.size());
  }

  bool any_empty() const {
    return std::any_of(bucket_of_.begin(), bucket_of_.end(), [](std::int32_t b) { return b < 0; });
  }

  const std::vector<std::vector<std::uint32_t>>& buckets() const noexcept { return buckets_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::int32_t> bucket_of_;
  std::vector<std::vector<std::uint32_t>> buckets_;
};

/// Result of one permutation-matrix estimation: the candidate structure, a
/// concrete bijective estimate, and whether the two sides bucketed
/// consistently (they always do when the pairs really are related by one
/// permutation).
struct PermutationEstimate {
  CandidateMatrix candidates;
  PermutationMatrix estimate;
  bool consistent = true;
};

namespace detail {

/// Buckets source and destination positions by their per-position keys and
/// pairs them bucket-by-bucket in raster order. Linear in the total key
/// bytes; no pairwise set intersections anywhere.
inline PermutationEstimate match_by_keys(const std::vector<std::string>& plain_keys,
                                         const std::vector<std::string>& cipher_keys, int rows,
                                         int cols) {
  const std::size_t n = plain_keys.size();
  require(cipher_keys.size() == n && n == static_cast<std::size_t>(rows) * cols, errc::internal,
          "key grids do not match the matrix shape");

  std::unordered_map<std::string, std::uint32_t> bucket_id;
  bucket_id.reserve(n * 2);
  std::vector<std::vector<std::uint32_t>> buckets;
  for (std::size_t d = 0; d < n; ++d) {
    auto [it, inserted] = bucket_id.try_emplace(cipher_keys[d], static_cast<std::uint32_t>(buckets.size()));
    if (inserted) buckets.emplace_back();
    buckets[it->second].push_back(static_cast<std::uint32_t>(d));
  }

  std::vector<std::int32_t> bucket_of(n, -1);
  std::vector<std::uint32_t> next_unused(buckets.size(), 0);
  std::vector<bool> used(n, false);
  PermutationMatrix estimate(rows, cols);
  std::vector<std::uint32_t> unmatched_sources;
  bool consistent = true;

  for (std::size_t s = 0; s < n; ++s) {
    const auto it = bucket_id.find(plain_keys[s]);
    if (it == bucket_id.end()) {
      consistent = false;
      unmatched_sources.push_back(static_cast<std::uint32_t>(s));
      continue;
    }
    const std::uint32_t b = it->second;
    bucket_of[s] = static_cast<std::int32_t>(b);
    if (next_unused[b] < buckets[b].size()) {
      const std::uint32_t dst = buckets[b][next_unused[b]++];
      estimate.set_dest_raster(s, dst);
      used[dst] = true;
    } else {
      consistent = false;  // more sources than destinations share this key
      unmatched_sources.push_back(static_cast<std::uint32_t>(s));
    }
  }

  // Keep the estimate bijective even under inconsistent inputs: pair the
  // leftovers in raster order.
  std::size_t scan = 0;
  for (std::uint32_t s : unmatched_sources) {
    while (scan < n && used[scan]) ++scan;
    require(scan < n, errc::internal, "destination pool exhausted during leftover pairing");
    estimate.set_dest_raster(s, static_cast<std::uint32_t>(scan));
    used[scan] = true;
  }
  for (std::uint32_t b = 0; b < buckets.size(); ++b)
    if (next_unused[b] != buckets[b].size()) consistent = false;  // destinations left over

  return {CandidateMatrix(rows, cols, std::move(bucket_of), std::move(buckets)),
          std::move(estimate), consistent};
}

/// Key = the tuple of pixel values a position takes across all images.
inline std::vector<std::string> pixel_tuple_keys(const std::vector<Image>& images) {
  const std::size_t n = images.front().size();
  std::vector<std::string> keys(n);
  for (std::size_t p = 0; p < n; ++p) {
    std::string& k = keys[p];
    k.resize(images.size() * sizeof(pixel_t));
    for (std::size_t m = 0; m < images.size(); ++m) {
      const pixel_t v = images[m].value(p);
      std::memcpy(k.data() + m * sizeof(pixel_t), &v, sizeof(pixel_t));
    }
  }
  return keys;
}

}  // namespace detail

/// Estimates the permutation relating the pairs: positions with equal value
/// tuples across all plain images are matched against the cipher positions
/// with the same tuple. Runs in O(n * H * W).
inline PermutationEstimate get_permutation_matrix(const KnownPairSet& pairs) {
  pairs.validate();
  return detail::match_by_keys(detail::pixel_tuple_keys(pairs.plain),
                               detail::pixel_tuple_keys(pairs.cipher), pairs.plain[0].rows(),
                               pairs.plain[0].cols());
}

// ---------------------------------------------------------------------------
// Block features for the high-level attack
// ---------------------------------------------------------------------------

/// Measures computed per block that any within-block pixel permutation leaves
/// unchanged.
enum class BlockFeature { mean, histogram };

/// Grid whose (i,j) entry is the floor of the mean of block (i,j).
inline Image block_mean_image(const Image& img, const PublicParams& params) {
  const BlockImage blocks = partition(img, params);
  Image out(blocks.grid_rows(), blocks.grid_cols(), img.levels());
  const std::size_t area = static_cast<std::size_t>(params.block_rows) * params.block_cols;
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) {
      std::uint64_t sum = 0;
      for (pixel_t v : blocks.block(i, j).pixels()) sum += v;
      out(i, j) = static_cast<pixel_t>(sum / area);
    }
  return out;
}

/// Grid of per-block feature vectors (a single mean, or the full histogram).
struct FeatureGrid {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<std::uint32_t>> features;
};

inline FeatureGrid block_invariant_image(const Image& img, const PublicParams& params,
                                         BlockFeature kind) {
  const BlockImage blocks = partition(img, params);
  FeatureGrid grid{blocks.grid_rows(), blocks.grid_cols(), {}};
  grid.features.reserve(blocks.block_count());
  for (std::size_t b = 0; b < blocks.block_count(); ++b) {
    if (kind == BlockFeature::mean) {
      std::uint64_t sum = 0;
      for (pixel_t v : blocks.block(b).pixels()) sum += v;
      grid.features.push_back({static_cast<std::uint32_t>(sum / blocks.block(b).size())});
    } else {
      grid.features.push_back(blocks.block(b).histogram());
    }
  }
  return grid;
}

namespace detail {

inline std::vector<std::string> feature_tuple_keys(const std::vector<FeatureGrid>& grids) {
  const std::size_t n = grids.front().features.size();
  std::vector<std::string> keys(n);
  for (std::size_t p = 0; p < n; ++p) {
    std::string& k = keys[p];
    for (const FeatureGrid& g : grids) {
      const auto& f = g.features[p];
      const std::size_t off = k.size();
      k.resize(off + f.size() * sizeof(std::uint32_t));
      std::memcpy(k.data() + off, f.data(), f.size() * sizeof(std::uint32_t));
    }
  }
  return keys;
}

}  // namespace detail

/// Reconstructs the block-move permutation from per-block features of the
/// known pairs. Throws when the feature grids of the two sides cannot be
/// matched, which only happens for inputs not related by one configuration.
inline PermutationEstimate kpa_high_level(const KnownPairSet& pairs, const PublicParams& params,
                                          BlockFeature kind) {
  pairs.validate();
  std::vector<FeatureGrid> plain_grids, cipher_grids;
  for (const Image& f : pairs.plain) plain_grids.push_back(block_invariant_image(f, params, kind));
  for (const Image& f : pairs.cipher) cipher_grids.push_back(block_invariant_image(f, params, kind));
  PermutationEstimate est = detail::match_by_keys(
      detail::feature_tuple_keys(plain_grids), detail::feature_tuple_keys(cipher_grids),
      plain_grids[0].rows, plain_grids[0].cols);
  require(est.consistent, errc::domain,
          "block features of the known pairs are inconsistent; the pairs are not related by one "
          "block permutation under this configuration");
  return est;
}

/// Per-block estimates: source block (i,j) is matched against cipher block
/// w0(i,j). Results are in source-block raster order. A block whose estimate
/// is inconsistent (wrong w0 entry) keeps consistent = false.
inline std::vector<PermutationEstimate> kpa_low_level(const KnownPairSet& pairs,
                                                      const PermutationMatrix& w0,
                                                      const PublicParams& params) {
  pairs.validate();
  require(w0.is_bijective(), errc::domain, "high-level estimate must be bijective");
  std::vector<BlockImage> plain_blocks, cipher_blocks;
  for (const Image& f : pairs.plain) plain_blocks.push_back(partition(f, params));
  for (const Image& f : pairs.cipher) cipher_blocks.push_back(partition(f, params));
  require(w0.rows() == plain_blocks[0].grid_rows() && w0.cols() == plain_blocks[0].grid_cols(),
          errc::domain, "high-level estimate does not match the block grid");

  std::vector<PermutationEstimate> out;
  out.reserve(plain_blocks[0].block_count());
  for (std::size_t src = 0; src < plain_blocks[0].block_count(); ++src) {
    const std::uint32_t dst = w0.dest_raster(src);
    std::vector<Image> p, c;
    for (std::size_t m = 0; m < pairs.count(); ++m) {
      p.push_back(plain_blocks[m].block(src));
      c.push_back(cipher_blocks[m].block(dst));
    }
    out.push_back(detail::match_by_keys(detail::pixel_tuple_keys(p), detail::pixel_tuple_keys(c),
                                        params.block_rows, params.block_cols));
  }
  return out;
}

/// Undoes a hierarchical permutation given its inverse matrices: the
/// high-level inverse plus, for every plain block in raster order, the
/// inverse of the within-block permutation that produced its cipher block.
inline Image dermutation(const PermutationMatrix& w0_inv,
                         const std::vector<PermutationMatrix>& low_inv, const Image& cipher,
                         const PublicParams& params) {
  params.validate_for(cipher.rows(), cipher.cols());
  require(w0_inv.rows() == params.grid_rows(cipher.rows()) &&
              w0_inv.cols() == params.grid_cols(cipher.cols()),
          errc::domain, "high-level inverse does not match the block grid");
  require(w0_inv.is_bijective(), errc::domain, "high-level inverse must be bijective");
  require(low_inv.size() == static_cast<std::size_t>(params.block_count(cipher.rows(), cipher.cols())),
          errc::domain, "one low-level inverse per block is required");

  const BlockImage cblocks = partition(cipher, params);
  BlockImage out(cblocks.grid_rows(), cblocks.grid_cols(), params.block_rows, params.block_cols,
                 cipher.levels());
  for (std::size_t t = 0; t < cblocks.block_count(); ++t) {
    const std::uint32_t s = w0_inv.dest_raster(t);  // plain origin of cipher block t
    const PermutationMatrix& inv = low_inv[s];
    require(inv.rows() == params.block_rows && inv.cols() == params.block_cols, errc::domain,
            "low-level inverse does not match the block shape");
    out.block(s) = apply_permutation(cblocks.block(t), inv);
  }
  return assemble(out);
}

/// Low-level matrices of a hierarchical permutation reindexed by source
/// block: entry s is the within-block permutation applied to the block that
/// started at raster position s.
inline std::vector<PermutationMatrix> lows_by_source(const HierarchicalPermutation& hp) {
  std::vector<PermutationMatrix> out(hp.low.size());
  for (std::size_t s = 0; s < hp.low.size(); ++s) out[s] = hp.low[hp.high.dest_raster(s)];
  return out;
}

// ---------------------------------------------------------------------------
// Attack-quality metrics
// ---------------------------------------------------------------------------

/// Fraction of pixels that differ.
inline double error_ratio(const Image& truth, const Image& candidate) {
  require(truth.rows() == candidate.rows() && truth.cols() == candidate.cols(), errc::domain,
          "images differ in shape");
  std::size_t wrong = 0;
  for (std::size_t p = 0; p < truth.size(); ++p)
    if (truth.value(p) != candidate.value(p)) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

inline double avg_cardinality(const CandidateMatrix& c) { return c.average_cardinality(); }

/// Mean, over all pixels, of |block candidates| * |slot candidates|: the
/// number of full destinations consistent with the evidence for that pixel.
inline double composite_cardinality(const PermutationEstimate& high,
                                    const std::vector<PermutationEstimate>& lows,
                                    const PublicParams& params) {
  const std::size_t slots = static_cast<std::size_t>(params.block_rows) * params.block_cols;
  long double total = 0;
  for (std::size_t b = 0; b < lows.size(); ++b) {
    const long double block_card = static_cast<long double>(high.candidates.cardinality(b));
    std::size_t slot_total = 0;
    for (std::size_t s = 0; s < slots; ++s) slot_total += lows[b].candidates.cardinality(s);
    total += block_card * static_cast<long double>(slot_total);
  }
  return static_cast<double>(total / (static_cast<long double>(lows.size()) * slots));
}

}  // namespace hcie
