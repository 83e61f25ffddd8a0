#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hcie/cipher.hpp"
#include "hcie/cpa.hpp"
#include "hcie/error.hpp"
#include "hcie/image.hpp"
#include "hcie/kpa.hpp"
#include "hcie/pgm.hpp"
#include "hcie/permutation.hpp"

namespace hcie {

/// One point of a breaking-performance curve: the first n corpus images are
/// known, the last corpus image's cipher is attacked.
struct KpaCell {
  int n = 0;
  double error_ratio = 0.0;
  double avg_cardinality = 0.0;
  double wall_ms = 0.0;
  Image decrypted;
};

/// Runs the hierarchical known-plaintext attack for each n and decrypts the
/// final corpus image with the estimated matrices. Deterministic given
/// (params, key, corpus).
inline std::vector<KpaCell> kpa_breaking_curve(const PublicParams& params, const Key& key,
                                               const std::vector<Image>& corpus,
                                               const std::vector<int>& known_counts,
                                               BlockFeature feature,
                                               std::vector<Image>* ciphers_out = nullptr) {
  require(corpus.size() >= 2, errc::domain, "corpus needs at least one known and one target image");
  for (int n : known_counts)
    require(n >= 1 && n + 1 <= static_cast<int>(corpus.size()), errc::domain,
            "known-image count " + std::to_string(n) + " needs a corpus of at least " +
                std::to_string(n + 1) + " images");

  std::vector<Image> ciphers;
  ciphers.reserve(corpus.size());
  for (const Image& f : corpus) ciphers.push_back(encrypt(f, key, params));
  if (ciphers_out) *ciphers_out = ciphers;

  const Image& target_plain = corpus.back();
  const Image& target_cipher = ciphers.back();

  KnownPairSet all_pairs{std::vector<Image>(corpus.begin(), corpus.end() - 1),
                         std::vector<Image>(ciphers.begin(), ciphers.end() - 1)};

  std::vector<KpaCell> cells;
  for (int n : known_counts) {
    const auto t0 = std::chrono::steady_clock::now();
    const KnownPairSet pairs = all_pairs.prefix(static_cast<std::size_t>(n));
    PermutationEstimate high = kpa_high_level(pairs, params, feature);
    std::vector<PermutationEstimate> lows = kpa_low_level(pairs, high.estimate, params);

    std::vector<PermutationMatrix> low_inverses;
    low_inverses.reserve(lows.size());
    for (const auto& est : lows) low_inverses.push_back(invert(est.estimate));
    const Image decrypted =
        dermutation(invert(high.estimate), low_inverses, target_cipher, params);

    KpaCell cell;
    cell.n = n;
    cell.error_ratio = error_ratio(target_plain, decrypted);
    cell.avg_cardinality = composite_cardinality(high, lows, params);
    cell.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    cell.decrypted = decrypted;
    cells.push_back(std::move(cell));
  }
  return cells;
}

/// Full experiment configuration for one cipher setup.
struct ExperimentConfig {
  std::string name;
  PublicParams params;
  Key key;
  std::vector<Image> corpus;
  std::vector<int> known_counts{1, 2, 3, 4, 5};
  BlockFeature feature = BlockFeature::histogram;
  std::filesystem::path out_dir;

  void validate() const {
    require(!name.empty(), errc::usage, "experiment needs a name");
    require(corpus.size() >= 2, errc::usage, "experiment corpus needs at least 2 images");
    for (const Image& f : corpus)
      params.validate_for(f.rows(), f.cols());
    key.validate();
  }
};

/// Runs the breaking curve of one configuration and writes cipher images,
/// decrypted images and the metrics CSV under out_dir/<name>/.
inline std::vector<KpaCell> run_kpa_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::filesystem::path dir = cfg.out_dir / cfg.name;
  std::filesystem::create_directories(dir);

  std::vector<Image> ciphers;
  std::vector<KpaCell> cells =
      kpa_breaking_curve(cfg.params, cfg.key, cfg.corpus, cfg.known_counts, cfg.feature, &ciphers);

  for (std::size_t i = 0; i < ciphers.size(); ++i)
    pgm::write(dir / ("cipher_" + std::to_string(i + 1) + ".pgm"), ciphers[i]);
  for (const KpaCell& cell : cells)
    pgm::write(dir / ("decrypted_n" + std::to_string(cell.n) + ".pgm"), cell.decrypted);

  std::ofstream csv(dir / "metrics.csv");
  require(csv.good(), errc::io, "cannot create metrics CSV");
  csv << "config,n,error_ratio,avg_cardinality,wall_time_ms\n";
  for (const KpaCell& cell : cells)
    csv << cfg.name << "," << cell.n << "," << cell.error_ratio << "," << cell.avg_cardinality
        << "," << cell.wall_ms << "\n";
  return cells;
}

/// Outcome of one chosen-plaintext run against an encryption oracle.
struct CpaDemoReport {
  CpaMode mode = CpaMode::flat;
  int images_used = 0;
  bool exact = false;                    ///< recovered structure equals the key's exactly
  std::size_t ambiguous_positions = 0;   ///< positions left undetermined (reported, not guessed)
  double test_error_ratio = 0.0;         ///< decryption error on an unrelated test image
  double wall_ms = 0.0;
};

/// Constructs the mode's chosen images, encrypts them with the key (playing
/// the oracle), recovers the permutation structure and scores it against the
/// key's true structure and a held-out test image.
inline CpaDemoReport run_cpa_demo(const PublicParams& params, const Key& key, CpaMode mode,
                                  const Image& test_image) {
  const int rows = test_image.rows(), cols = test_image.cols();
  const std::uint32_t levels = test_image.levels();
  params.validate_for(rows, cols);

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Image> chosen = cpa_construct(mode, rows, cols, levels, params);
  std::vector<Image> ciphered;
  ciphered.reserve(chosen.size());
  for (const Image& f : chosen) ciphered.push_back(encrypt(f, key, params));
  const CpaRecovery rec = cpa_recover(chosen, ciphered, mode, params);

  const HierarchicalPermutation truth = extract_permutation(key, params, rows, cols);
  const Image test_cipher = encrypt(test_image, key, params);

  CpaDemoReport report;
  report.mode = mode;
  report.images_used = static_cast<int>(chosen.size());
  report.ambiguous_positions = rec.ambiguous_position_count();

  Image decrypted;
  if (mode == CpaMode::flat) {
    const PermutationMatrix true_flat = flatten(truth, params, rows, cols);
    report.exact = (*rec.flat == true_flat);
    decrypted = Image(rows, cols, levels);
    for (std::size_t s = 0; s < decrypted.size(); ++s)
      decrypted.value(s) = test_cipher.value(rec.flat->dest_raster(s));
  } else {
    report.exact = (*rec.hierarchical == truth);
    std::vector<PermutationMatrix> low_inv;
    for (const PermutationMatrix& w : lows_by_source(*rec.hierarchical)) low_inv.push_back(invert(w));
    decrypted = dermutation(invert(rec.hierarchical->high), low_inv, test_cipher, params);
  }
  report.test_error_ratio = error_ratio(test_image, decrypted);
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace hcie
