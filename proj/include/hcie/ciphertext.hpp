#pragma once

#include <gmpxx.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hcie/cipher.hpp"
#include "hcie/error.hpp"
#include "hcie/image.hpp"
#include "hcie/keystream.hpp"
#include "hcie/permutation.hpp"

namespace hcie {

/// Analytic per-trial operation counts of exhaustive key search, broken down
/// into the cost of generating the bit sequence, building and shuffling the
/// pseudo-image, moving the blocks, and permuting every block.
struct BruteForceCostModel {
  std::size_t stream_bits = 0;          ///< L_b
  std::size_t chaotic_iterations = 0;   ///< ceil(L_b / 8)
  std::size_t pseudo_image_ops = 0;     ///< S_M * S_N
  std::size_t block_move_ops = 0;       ///< M * N
  std::size_t permutation_runs = 0;     ///< 1 + K
  std::size_t permutation_cost_each = 0;///< (4*S_M + 4*S_N) * rounds
  std::size_t per_trial_total = 0;
  mpz_class search_space;               ///< number of candidate keys
  mpz_class total_ops;                  ///< search_space * per_trial_total
};

inline BruteForceCostModel brute_force_cost(const PublicParams& params, int rows, int cols,
                                            int precision) {
  BruteForceCostModel cm;
  cm.stream_bits = required_stream_bits(params, rows, cols);
  cm.chaotic_iterations = (cm.stream_bits + 7) / 8;
  cm.pseudo_image_ops = static_cast<std::size_t>(params.block_rows) * params.block_cols;
  cm.block_move_ops = static_cast<std::size_t>(rows) * cols;
  cm.permutation_runs = static_cast<std::size_t>(1 + params.block_count(rows, cols));
  cm.permutation_cost_each =
      static_cast<std::size_t>(4 * params.block_rows + 4 * params.block_cols) * params.rounds;
  cm.per_trial_total = cm.chaotic_iterations + cm.pseudo_image_ops + cm.block_move_ops +
                       cm.permutation_runs * cm.permutation_cost_each;
  mpz_class one = 1;
  cm.search_space = (one << precision) * ((one << precision) - 1);  // mu values * x0 values
  cm.total_ops = cm.search_space * static_cast<unsigned long>(cm.per_trial_total);
  return cm;
}

struct BruteForceOptions {
  bool mu_near_4 = false;    ///< restrict mu to [3.57, 4], where the map is strongly chaotic
  int max_precision = 12;    ///< refuse exhaustive search beyond this L
};

struct BruteForceReport {
  std::uint64_t tried = 0;
  std::vector<Key> matches;  ///< every key reproducing the ciphertext exactly
  double wall_ms = 0.0;
  BruteForceCostModel cost;
};

/// Exhaustive search over all (x0, mu) pairs at L-bit precision. The key
/// space holds at most 2^(2L) candidates, far fewer than the count of raw
/// bit sequences of length L_b.
inline BruteForceReport brute_force(const Image& plain, const Image& cipher,
                                    const PublicParams& params, int precision,
                                    const BruteForceOptions& opts = {}) {
  require(plain.same_shape(cipher), errc::domain, "plain and cipher images differ in shape");
  params.validate_for(plain.rows(), plain.cols());
  require(precision >= kMinPrecision && precision <= kMaxPrecision, errc::domain,
          "precision out of range");
  require(precision <= opts.max_precision, errc::usage,
          "search space 2^(2*" + std::to_string(precision) +
              ") exceeds the exhaustive-search cap; raise max_precision explicitly for larger runs");

  BruteForceReport report;
  report.cost = brute_force_cost(params, plain.rows(), plain.cols(), precision);

  const std::uint64_t one = 1ull << precision;
  std::uint64_t mu_min = 1;
  if (opts.mu_near_4)
    mu_min = static_cast<std::uint64_t>(std::ceil(3.57 * static_cast<double>(1ull << (precision - 2))));

  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t mu = mu_min; mu <= one; ++mu) {
    for (std::uint64_t x0 = 1; x0 < one; ++x0) {
      Key key{x0, mu, precision};
      ++report.tried;
      if (encrypt(plain, key, params) == cipher) report.matches.push_back(key);
    }
  }
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                       .count();
  return report;
}

/// Number of value histograms the summation formula assigns to an H x W image
/// with `levels` possible values: sum over i of C(levels, i) * C(H*W, i-1).
/// Exact arbitrary-precision arithmetic.
inline mpz_class histogram_count(std::uint64_t levels, std::uint64_t height, std::uint64_t width) {
  require(levels >= 1 && height * width >= 1, errc::domain, "histogram_count needs T >= 1, H*W >= 1");
  const std::uint64_t area = height * width;
  const std::uint64_t upper = std::min<std::uint64_t>(levels, area);
  mpz_class total = 0;
  for (std::uint64_t i = 1; i <= upper; ++i) {
    mpz_class a, b;
    mpz_bin_uiui(a.get_mpz_t(), levels, i);
    mpz_bin_uiui(b.get_mpz_t(), area, i - 1);
    total += a * b;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Histogram similarity of cipher blocks
// ---------------------------------------------------------------------------

/// Pairwise block-histogram scores. For `intersection` the score is
/// sum(min(h1,h2)) normalized by block area to [0, 1] (1 = identical
/// histograms). For `chi_square` the entry is the chi-square distance
/// (0 = identical; larger = less similar).
enum class SimilarityKind { intersection, chi_square };

struct BlockSimilarityMatrix {
  int block_count = 0;
  SimilarityKind kind = SimilarityKind::intersection;
  std::vector<double> scores;  // block_count^2, row-major

  double at(int a, int b) const noexcept { return scores[static_cast<std::size_t>(a) * block_count + b]; }
  double& at(int a, int b) noexcept { return scores[static_cast<std::size_t>(a) * block_count + b]; }
};

inline BlockSimilarityMatrix block_similarity(const Image& cipher, const PublicParams& params,
                                              SimilarityKind kind = SimilarityKind::intersection) {
  const BlockImage blocks = partition(cipher, params);
  const int k = static_cast<int>(blocks.block_count());
  std::vector<std::vector<std::uint32_t>> hist(k);
  for (int b = 0; b < k; ++b) hist[b] = blocks.block(b).histogram();
  const double area = static_cast<double>(params.block_rows) * params.block_cols;

  BlockSimilarityMatrix sim;
  sim.block_count = k;
  sim.kind = kind;
  sim.scores.resize(static_cast<std::size_t>(k) * k, 0.0);
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      double score = 0.0;
      if (kind == SimilarityKind::intersection) {
        std::uint64_t overlap = 0;
        for (std::size_t t = 0; t < hist[a].size(); ++t)
          overlap += std::min(hist[a][t], hist[b][t]);
        score = static_cast<double>(overlap) / area;
      } else {
        for (std::size_t t = 0; t < hist[a].size(); ++t) {
          const double sum = static_cast<double>(hist[a][t]) + hist[b][t];
          if (sum > 0.0) {
            const double diff = static_cast<double>(hist[a][t]) - static_cast<double>(hist[b][t]);
            score += diff * diff / sum;
          }
        }
      }
      sim.at(a, b) = score;
      sim.at(b, a) = score;
    }
  return sim;
}

/// A proposed arrangement of cipher blocks based only on histogram
/// similarity of neighbours. Best-effort: no correctness guarantee.
struct ReassemblyProposal {
  PermutationMatrix placement;  ///< entry at cipher-block position = proposed plain position
  double objective = 0.0;       ///< summed similarity over adjacent placed pairs
  bool ties = false;            ///< a placement step had equally good choices
};

/// Greedy seed-and-grow: fills the block grid in raster order, each time
/// picking the unplaced cipher block most similar to the already placed left
/// and upper neighbours.
inline ReassemblyProposal greedy_reassembly(const BlockSimilarityMatrix& sim,
                                            const PublicParams& params, int rows, int cols) {
  params.validate_for(rows, cols);
  const int gr = params.grid_rows(rows), gc = params.grid_cols(cols);
  require(sim.block_count == gr * gc, errc::domain,
          "similarity matrix does not match the block grid");
  const bool higher_better = (sim.kind == SimilarityKind::intersection);
  auto sim_of = [&](int a, int b) { return higher_better ? sim.at(a, b) : -sim.at(a, b); };

  ReassemblyProposal out;
  out.placement = PermutationMatrix(gr, gc);
  const int k = gr * gc;
  std::vector<bool> placed(k, false);
  std::vector<int> at(k, -1);  // grid position (raster) -> cipher block

  // Seed: the block with the highest total similarity to all others.
  int seed = 0;
  double best_total = -1e300;
  for (int b = 0; b < k; ++b) {
    double total = 0;
    for (int o = 0; o < k; ++o)
      if (o != b) total += sim_of(b, o);
    if (total > best_total) {
      best_total = total;
      seed = b;
    }
  }
  at[0] = seed;
  placed[seed] = true;

  for (int cell = 1; cell < k; ++cell) {
    const int ci = cell / gc, cj = cell % gc;
    auto neighbour_score = [&](int b) {
      double score = 0;
      if (cj > 0 && at[cell - 1] >= 0) score += sim_of(b, at[cell - 1]);
      if (ci > 0 && at[cell - gc] >= 0) score += sim_of(b, at[cell - gc]);
      return score;
    };
    int best = -1;
    double best_score = -1e300;
    for (int b = 0; b < k; ++b)
      if (!placed[b] && neighbour_score(b) > best_score) {
        best_score = neighbour_score(b);
        best = b;
      }
    int equally_good = 0;
    for (int b = 0; b < k; ++b)
      if (!placed[b] && neighbour_score(b) >= best_score - 1e-12) ++equally_good;
    if (equally_good > 1) out.ties = true;
    at[cell] = best;
    placed[best] = true;
  }

  for (int cell = 0; cell < k; ++cell)
    out.placement.set_dest_raster(static_cast<std::size_t>(at[cell]), static_cast<std::uint32_t>(cell));

  for (int i = 0; i < gr; ++i)
    for (int j = 0; j < gc; ++j) {
      if (j + 1 < gc) out.objective += sim_of(at[i * gc + j], at[i * gc + j + 1]);
      if (i + 1 < gr) out.objective += sim_of(at[i * gc + j], at[(i + 1) * gc + j]);
    }
  return out;
}

}  // namespace hcie
