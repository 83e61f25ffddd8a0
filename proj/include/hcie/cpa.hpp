#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hcie/error.hpp"
#include "hcie/image.hpp"
#include "hcie/kpa.hpp"
#include "hcie/permutation.hpp"

namespace hcie {

/// Chosen-plaintext construction strategies.
///
/// flat:      base-T digit planes of the pixel raster index; every position's
///            value tuple is globally unique, so one flat matrix is recovered
///            exactly with ceil(log_T(M*N)) images.
/// two_phase: block-constant digit planes of the block index (fixes the block
///            move), then digit planes of the within-block slot index (fixes
///            every within-block permutation); exact recovery with
///            ceil(log_T(K)) + ceil(log_T(S_M*S_N)) images.
/// combined:  max(ceil(log_T(S_M*S_N)), ceil(log_T(K))) images; slot s of
///            every block encodes the digits of s except that slot 0 of block
///            b encodes the digits of b. Slot 0 and slot b of block b share a
///            value tuple, leaving at most one two-way ambiguity per block,
///            which is reported.
enum class CpaMode { flat, two_phase, combined };

namespace detail {

inline int digits_needed(std::uint64_t count, std::uint64_t base) {
  int n = 0;
  std::uint64_t reach = 1;
  while (reach < count) {
    reach *= base;
    ++n;
  }
  return n;
}

inline pixel_t digit_of(std::uint64_t value, int digit, std::uint64_t base) {
  for (int i = 0; i < digit; ++i) value /= base;
  return static_cast<pixel_t>(value % base);
}

}  // namespace detail

/// Number of chosen images the mode needs for the given shape.
inline int cpa_image_count(CpaMode mode, int rows, int cols, std::uint32_t levels,
                           const PublicParams& params) {
  params.validate_for(rows, cols);
  const std::uint64_t area = static_cast<std::uint64_t>(rows) * cols;
  const std::uint64_t block_area = static_cast<std::uint64_t>(params.block_rows) * params.block_cols;
  const std::uint64_t k = static_cast<std::uint64_t>(params.block_count(rows, cols));
  switch (mode) {
    case CpaMode::flat:
      return detail::digits_needed(area, levels);
    case CpaMode::two_phase:
      return detail::digits_needed(k, levels) + detail::digits_needed(block_area, levels);
    case CpaMode::combined:
      return std::max(detail::digits_needed(block_area, levels), detail::digits_needed(k, levels));
  }
  fail(errc::internal, "unknown mode");
}

/// Builds the chosen plain-images for the mode. Digit planes are emitted
/// least-significant digit first.
inline std::vector<Image> cpa_construct(CpaMode mode, int rows, int cols, std::uint32_t levels,
                                        const PublicParams& params) {
  params.validate_for(rows, cols);
  std::vector<Image> out;
  const std::uint64_t base = levels;
  const std::uint64_t k = static_cast<std::uint64_t>(params.block_count(rows, cols));
  const std::uint64_t block_area = static_cast<std::uint64_t>(params.block_rows) * params.block_cols;
  const int gc = params.grid_cols(cols);

  auto block_of = [&](int r, int c) {
    return static_cast<std::uint64_t>(r / params.block_rows) * gc + (c / params.block_cols);
  };
  auto slot_of = [&](int r, int c) {
    return static_cast<std::uint64_t>(r % params.block_rows) * params.block_cols +
           (c % params.block_cols);
  };

  switch (mode) {
    case CpaMode::flat: {
      const int n = detail::digits_needed(static_cast<std::uint64_t>(rows) * cols, base);
      for (int m = 0; m < n; ++m) {
        Image img(rows, cols, levels);
        for (std::size_t p = 0; p < img.size(); ++p)
          img.value(p) = detail::digit_of(p, m, base);
        out.push_back(std::move(img));
      }
      break;
    }
    case CpaMode::two_phase: {
      for (int m = 0; m < detail::digits_needed(k, base); ++m) {
        Image img(rows, cols, levels);
        for (int r = 0; r < rows; ++r)
          for (int c = 0; c < cols; ++c) img(r, c) = detail::digit_of(block_of(r, c), m, base);
        out.push_back(std::move(img));
      }
      for (int m = 0; m < detail::digits_needed(block_area, base); ++m) {
        Image img(rows, cols, levels);
        for (int r = 0; r < rows; ++r)
          for (int c = 0; c < cols; ++c) img(r, c) = detail::digit_of(slot_of(r, c), m, base);
        out.push_back(std::move(img));
      }
      break;
    }
    case CpaMode::combined: {
      const int n = cpa_image_count(mode, rows, cols, levels, params);
      for (int m = 0; m < n; ++m) {
        Image img(rows, cols, levels);
        for (int r = 0; r < rows; ++r)
          for (int c = 0; c < cols; ++c) {
            const std::uint64_t s = slot_of(r, c);
            img(r, c) = detail::digit_of(s == 0 ? block_of(r, c) : s, m, base);
          }
        out.push_back(std::move(img));
      }
      break;
    }
  }
  return out;
}

/// A group of source slots within one block whose value tuples coincide, so
/// their destinations cannot be told apart from the chosen pairs alone.
struct SlotAmbiguity {
  std::uint32_t block = 0;                    ///< source-block raster index
  std::vector<std::uint32_t> source_slots;    ///< within-block raster indices
  std::vector<std::uint32_t> candidate_slots; ///< possible destinations, ascending
};

struct CpaRecovery {
  CpaMode mode = CpaMode::flat;
  std::optional<PermutationMatrix> flat;                 ///< flat mode only
  std::optional<HierarchicalPermutation> hierarchical;   ///< two_phase / combined
  std::vector<SlotAmbiguity> ambiguities;

  std::size_t ambiguous_position_count() const {
    std::size_t n = 0;
    for (const auto& a : ambiguities) n += a.source_slots.size();
    return n;
  }
};

namespace detail {

/// Collects every multi-candidate bucket of a within-block estimate.
inline void collect_ambiguities(const PermutationEstimate& est, std::uint32_t block,
                                std::vector<SlotAmbiguity>& out) {
  const std::size_t slots = est.candidates.size();
  std::vector<bool> seen(slots, false);
  for (std::size_t s = 0; s < slots; ++s) {
    if (seen[s] || est.candidates.cardinality(s) <= 1) continue;
    SlotAmbiguity amb;
    amb.block = block;
    amb.candidate_slots = est.candidates.candidates(s);
    for (std::size_t s2 = s; s2 < slots; ++s2)
      if (!seen[s2] && est.candidates.candidates(s2) == amb.candidate_slots) {
        amb.source_slots.push_back(static_cast<std::uint32_t>(s2));
        seen[s2] = true;
      }
    out.push_back(std::move(amb));
  }
}

}  // namespace detail

/// Recovers the permutation structure from chosen pairs produced by
/// cpa_construct plus the corresponding cipher-images.
inline CpaRecovery cpa_recover(const std::vector<Image>& chosen, const std::vector<Image>& ciphered,
                               CpaMode mode, const PublicParams& params) {
  require(!chosen.empty() && chosen.size() == ciphered.size(), errc::domain,
          "chosen and ciphered image counts differ or are empty");
  KnownPairSet pairs{chosen, ciphered};
  pairs.validate();
  const int rows = chosen[0].rows(), cols = chosen[0].cols();
  params.validate_for(rows, cols);

  CpaRecovery rec;
  rec.mode = mode;

  if (mode == CpaMode::flat) {
    PermutationEstimate est = get_permutation_matrix(pairs);
    require(est.consistent, errc::domain, "chosen pairs are inconsistent with one flat permutation");
    require(!est.candidates.any_empty(), errc::domain, "chosen pairs leave unmatched positions");
    for (std::size_t s = 0; s < est.candidates.size(); ++s)
      require(est.candidates.cardinality(s) == 1, errc::domain,
              "flat chosen set did not isolate every position");
    rec.flat = std::move(est.estimate);
    return rec;
  }

  // Hierarchical modes: block move first, then per-block slots.
  const int n_high = detail::digits_needed(
      static_cast<std::uint64_t>(params.block_count(rows, cols)), chosen[0].levels());
  PermutationEstimate high;
  if (mode == CpaMode::two_phase) {
    // Phase-one images are block-constant, so their block means are the
    // encoded digits themselves.
    if (n_high == 0) {
      high.estimate = PermutationMatrix(params.grid_rows(rows), params.grid_cols(cols));
      high.candidates = CandidateMatrix(
          high.estimate.rows(), high.estimate.cols(), {0},
          {{0}});
    } else {
      KnownPairSet phase1{std::vector<Image>(chosen.begin(), chosen.begin() + n_high),
                          std::vector<Image>(ciphered.begin(), ciphered.begin() + n_high)};
      high = kpa_high_level(phase1, params, BlockFeature::mean);
    }
  } else {
    // The combined construction varies a single slot per block, which shifts
    // the block mean by less than one quantization step; the block histogram
    // separates the blocks instead.
    high = kpa_high_level(pairs, params, BlockFeature::histogram);
  }
  for (std::size_t b = 0; b < high.candidates.size(); ++b)
    require(high.candidates.cardinality(b) == 1, errc::domain,
            "chosen set did not isolate every block");

  const KnownPairSet low_pairs =
      mode == CpaMode::two_phase
          ? KnownPairSet{std::vector<Image>(chosen.begin() + n_high, chosen.end()),
                         std::vector<Image>(ciphered.begin() + n_high, ciphered.end())}
          : pairs;
  std::vector<PermutationEstimate> lows = kpa_low_level(low_pairs, high.estimate, params);

  HierarchicalPermutation hp;
  hp.high = high.estimate;
  hp.low.resize(lows.size());
  for (std::uint32_t src = 0; src < lows.size(); ++src) {
    require(lows[src].consistent && !lows[src].candidates.any_empty(), errc::domain,
            "chosen pairs are inconsistent within block " + std::to_string(src));
    detail::collect_ambiguities(lows[src], src, rec.ambiguities);
    hp.low[hp.high.dest_raster(src)] = lows[src].estimate;
  }
  rec.hierarchical = std::move(hp);
  return rec;
}

}  // namespace hcie
