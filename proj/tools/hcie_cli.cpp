// Command-line front end: cipher operations, the attack suite and the
// breaking-performance experiment.
//
// Exit codes: 0 success, 2 usage, 3 io, 4 format, 5 domain, 6 keystream or
// internal invariant failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "hcie/hcie.hpp"

namespace fs = std::filesystem;
using namespace hcie;

namespace {

/// Relative output paths land under $HCIE_OUT_ROOT when it is set.
fs::path resolve_out(const fs::path& p) {
  if (p.is_absolute()) return p;
  if (const char* root = std::getenv("HCIE_OUT_ROOT")) return fs::path(root) / p;
  return p;
}

fs::path prepare_out(const fs::path& p) {
  const fs::path full = resolve_out(p);
  if (full.has_parent_path()) fs::create_directories(full.parent_path());
  return full;
}

/// Fixed-point values accept either a decimal ("0.3388") or a raw
/// hexadecimal fixed-point integer ("0x56c16c16").
std::uint64_t parse_fixed(const std::string& s, int frac_bits, const std::string& what) {
  try {
    if (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0) return std::stoull(s.substr(2), nullptr, 16);
    const double v = std::stod(s);
    return static_cast<std::uint64_t>(v * static_cast<double>(1ull << frac_bits));
  } catch (const std::exception&) {
    fail(errc::usage, "cannot parse " + what + " value '" + s + "'");
  }
}

/// Cipher configuration shared by most subcommands.
struct CipherOpts {
  int sm = 32, sn = 32;
  int alpha = 4, beta = 2, gamma = 1, rounds = 2;
  std::string x0_str = "0.3388";
  std::string mu_str = "3.99";
  int precision = 32;

  void attach_params(CLI::App& sub) {
    sub.add_option("--sm", sm, "block height S_M");
    sub.add_option("--sn", sn, "block width S_N");
    sub.add_option("--alpha", alpha, "base rotation amount");
    sub.add_option("--beta", beta, "rotation amount weight of the first bit");
    sub.add_option("--gamma", gamma, "rotation amount weight of the second bit");
    sub.add_option("--no", rounds, "iteration count per permutation");
  }
  void attach_key(CLI::App& sub) {
    sub.add_option("--key-x0", x0_str, "initial condition, decimal or 0x<raw fixed point>");
    sub.add_option("--key-mu", mu_str, "control parameter, decimal or 0x<raw fixed point>");
    sub.add_option("--precision", precision, "fixed-point precision L in bits")
        ->check(CLI::Range(kMinPrecision, kMaxPrecision));
  }

  PublicParams params() const {
    PublicParams p{sm, sn, alpha, beta, gamma, rounds};
    p.validate();
    return p;
  }
  Key key() const {
    Key k{parse_fixed(x0_str, precision, "--key-x0"), parse_fixed(mu_str, precision - 2, "--key-mu"),
          precision};
    k.validate();
    return k;
  }

  void log_params() const {
    std::cerr << "config: sm=" << sm << " sn=" << sn << " alpha=" << alpha << " beta=" << beta
              << " gamma=" << gamma << " no=" << rounds;
  }
  void log_key() const {
    const Key k = key();
    std::cerr << " precision=" << precision << std::hex << " key-x0=0x" << k.x0_raw
              << " key-mu=0x" << k.mu_raw << std::dec << " (x0~" << k.x0() << ", mu~" << k.mu()
              << ")";
  }
};

BlockFeature parse_feature(const std::string& s) {
  if (s == "mean") return BlockFeature::mean;
  if (s == "histogram") return BlockFeature::histogram;
  fail(errc::usage, "unknown feature kind '" + s + "' (expected mean or histogram)");
}

CpaMode parse_mode(const std::string& s) {
  if (s == "flat") return CpaMode::flat;
  if (s == "two_phase") return CpaMode::two_phase;
  if (s == "combined") return CpaMode::combined;
  fail(errc::usage, "unknown mode '" + s + "' (expected flat, two_phase or combined)");
}

int run_encrypt(const CipherOpts& opts, const std::string& in, const std::string& out, bool forward) {
  const Image img = pgm::read(in);
  opts.log_params();
  opts.log_key();
  std::cerr << " in=" << in << " out=" << out << "\n";
  const Image result = forward ? encrypt(img, opts.key(), opts.params())
                               : decrypt(img, opts.key(), opts.params());
  pgm::write(prepare_out(out), result);
  return 0;
}

int run_extract(const CipherOpts& opts, int rows, int cols, const std::string& out, bool flat_form) {
  opts.log_params();
  opts.log_key();
  std::cerr << " rows=" << rows << " cols=" << cols << " out=" << out << "\n";
  const HierarchicalPermutation hp = extract_permutation(opts.key(), opts.params(), rows, cols);
  if (flat_form)
    serial::write_permutation_csv(prepare_out(out), flatten(hp, opts.params(), rows, cols));
  else
    serial::write_hierarchical_csv(prepare_out(out), hp);
  return 0;
}

int run_kpa(const CipherOpts& opts, const std::vector<std::string>& plain_paths,
            const std::vector<std::string>& cipher_paths, const std::string& target,
            const std::string& out, const std::string& feature, const std::string& metrics,
            const std::string& save_perm, const std::string& load_perm,
            const std::string& save_candidates) {
  require(!target.empty(), errc::usage, "kpa needs --target");
  const PublicParams params = opts.params();
  const Image target_cipher = pgm::read(target);
  params.validate_for(target_cipher.rows(), target_cipher.cols());
  opts.log_params();
  std::cerr << " n=" << plain_paths.size() << " feature=" << feature << " target=" << target << "\n";

  Image decrypted;
  if (!load_perm.empty()) {
    // Resume from a saved hierarchical estimate instead of re-running the attack.
    const HierarchicalPermutation hp = serial::read_hierarchical_csv(load_perm);
    std::vector<PermutationMatrix> low_inv;
    for (const PermutationMatrix& w : lows_by_source(hp)) low_inv.push_back(invert(w));
    decrypted = dermutation(invert(hp.high), low_inv, target_cipher, params);
  } else {
    require(!plain_paths.empty(), errc::usage, "kpa needs at least one known pair (--plain/--cipher)");
    require(plain_paths.size() == cipher_paths.size(), errc::usage,
            "--plain and --cipher counts differ");
    KnownPairSet pairs;
    for (const auto& p : plain_paths) pairs.plain.push_back(pgm::read(p));
    for (const auto& p : cipher_paths) pairs.cipher.push_back(pgm::read(p));

    PermutationEstimate high = kpa_high_level(pairs, params, parse_feature(feature));
    std::vector<PermutationEstimate> lows = kpa_low_level(pairs, high.estimate, params);

    std::vector<PermutationMatrix> low_inv;
    for (const auto& est : lows) low_inv.push_back(invert(est.estimate));
    decrypted = dermutation(invert(high.estimate), low_inv, target_cipher, params);

    const double card = composite_cardinality(high, lows, params);
    std::cerr << "avg_cardinality=" << card << "\n";
    if (!metrics.empty()) {
      std::ofstream csv(prepare_out(metrics));
      require(csv.good(), errc::io, "cannot create " + metrics);
      csv << "config,n,error_ratio,avg_cardinality,wall_time_ms\n";
      csv << "kpa," << pairs.count() << ",," << card << ",\n";
    }
    if (!save_perm.empty()) {
      HierarchicalPermutation hp;
      hp.high = high.estimate;
      hp.low.resize(lows.size());
      for (std::size_t s = 0; s < lows.size(); ++s)
        hp.low[hp.high.dest_raster(s)] = lows[s].estimate;
      serial::write_hierarchical_csv(prepare_out(save_perm), hp);
    }
    if (!save_candidates.empty())
      serial::write_candidates_csv(prepare_out(save_candidates), high.candidates);
  }
  if (!out.empty()) pgm::write(prepare_out(out), decrypted);
  return 0;
}

int run_cpa(const CipherOpts& opts, const std::string& mode_str, int rows, int cols,
            const std::string& test_path, const std::string& save_perm) {
  const CpaMode mode = parse_mode(mode_str);
  const PublicParams params = opts.params();
  const Key key = opts.key();
  opts.log_params();
  opts.log_key();
  std::cerr << " mode=" << mode_str << "\n";

  Image test = test_path.empty() ? corpus::test_image(corpus::kImageCount - 1) : pgm::read(test_path);
  require(test.rows() == rows && test.cols() == cols, errc::usage,
          "test image does not match --rows/--cols");
  const CpaDemoReport rep = run_cpa_demo(params, key, mode, test);
  std::cout << "mode=" << mode_str << " chosen_images=" << rep.images_used
            << " exact=" << (rep.exact ? "yes" : "no")
            << " ambiguous_positions=" << rep.ambiguous_positions
            << " test_error_ratio=" << rep.test_error_ratio << " wall_ms=" << rep.wall_ms << "\n";

  if (!save_perm.empty()) {
    const std::vector<Image> chosen = cpa_construct(mode, rows, cols, test.levels(), params);
    std::vector<Image> ciphered;
    for (const Image& f : chosen) ciphered.push_back(encrypt(f, key, params));
    const CpaRecovery rec = cpa_recover(chosen, ciphered, mode, params);
    if (rec.flat)
      serial::write_permutation_csv(prepare_out(save_perm), *rec.flat);
    else
      serial::write_hierarchical_csv(prepare_out(save_perm), *rec.hierarchical);
  }
  return 0;
}

int run_brute(const CipherOpts& opts, const std::string& plain_path, const std::string& cipher_path,
              bool mu_near_4, int max_precision, const std::string& out) {
  const Image plain = pgm::read(plain_path);
  const Image cipher = pgm::read(cipher_path);
  opts.log_params();
  std::cerr << " precision=" << opts.precision << " mu_near_4=" << mu_near_4 << "\n";
  BruteForceOptions bf;
  bf.mu_near_4 = mu_near_4;
  bf.max_precision = max_precision;
  const BruteForceReport rep = brute_force(plain, cipher, opts.params(), opts.precision, bf);
  std::cout << "tried=" << rep.tried << " matches=" << rep.matches.size()
            << " wall_ms=" << rep.wall_ms << " per_trial_ops=" << rep.cost.per_trial_total
            << " search_space=" << rep.cost.search_space.get_str() << "\n";
  for (const Key& k : rep.matches)
    std::cout << "match x0=0x" << std::hex << k.x0_raw << " mu=0x" << k.mu_raw << std::dec << "\n";
  if (!out.empty()) serial::write_brute_report_csv(prepare_out(out), rep, opts.precision);
  return 0;
}

int run_coa(const CipherOpts& opts, const std::string& cipher_path, const std::string& kind_str,
            const std::string& out, bool reassemble) {
  const Image cipher = pgm::read(cipher_path);
  const SimilarityKind kind =
      kind_str == "chi_square" ? SimilarityKind::chi_square : SimilarityKind::intersection;
  require(kind_str == "chi_square" || kind_str == "intersection", errc::usage,
          "unknown similarity kind '" + kind_str + "'");
  opts.log_params();
  std::cerr << " kind=" << kind_str << "\n";
  const BlockSimilarityMatrix sim = block_similarity(cipher, opts.params(), kind);
  if (!out.empty()) serial::write_similarity_csv(prepare_out(out), sim);
  if (reassemble) {
    const ReassemblyProposal prop =
        greedy_reassembly(sim, opts.params(), cipher.rows(), cipher.cols());
    std::cout << "reassembly objective=" << prop.objective << " ties=" << (prop.ties ? "yes" : "no")
              << "\n";
  }
  return 0;
}

int run_keystream_dump(const CipherOpts& opts, std::size_t count, const std::string& out) {
  opts.log_key();
  std::cerr << " count=" << count << "\n";
  const BitStream stream = generate_bitstream(opts.key(), count);
  std::string line;
  line.reserve(count);
  for (std::size_t i = 0; i < count; ++i) line.push_back(stream.bit(i) ? '1' : '0');
  if (out.empty()) {
    std::cout << line << "\n";
  } else {
    std::ofstream f(prepare_out(out));
    require(f.good(), errc::io, "cannot create " + out);
    f << line << "\n";
  }
  return 0;
}

int run_experiment(const CipherOpts& opts, const std::string& out_dir,
                   const std::string& corpus_dir, const std::string& feature) {
  const fs::path out = prepare_out(out_dir.empty() ? "experiment_out" : out_dir);
  fs::create_directories(out);

  std::vector<Image> images;
  if (!corpus_dir.empty()) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(corpus_dir))
      if (e.path().extension() == ".pgm") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    require(files.size() >= 2, errc::usage, "corpus directory needs at least 2 PGM images");
    for (const auto& f : files) images.push_back(pgm::read(f));
  } else {
    images = corpus::test_images();
  }
  fs::create_directories(out / "corpus");
  for (std::size_t i = 0; i < images.size(); ++i)
    pgm::write(out / "corpus" / ("image_" + std::to_string(i + 1) + ".pgm"), images[i]);

  struct Setup {
    std::string name;
    PublicParams params;
  };
  const int side = images[0].rows();
  const std::vector<Setup> setups = {
      {"s" + std::to_string(side), {side, side, 6, 3, 3, 9}},
      {"s32", {32, 32, 4, 2, 1, 2}},
      {"s16", {16, 16, 4, 2, 1, 2}},
  };

  Key key = opts.key();
  const int max_n = static_cast<int>(images.size()) - 1;
  std::vector<int> ns;
  for (int n = 1; n <= std::min(5, max_n); ++n) ns.push_back(n);

  opts.log_key();
  std::cerr << " out=" << out.string() << " corpus_images=" << images.size() << "\n";
  for (const Setup& s : setups) {
    ExperimentConfig cfg;
    cfg.name = s.name;
    cfg.params = s.params;
    cfg.key = key;
    cfg.corpus = images;
    cfg.known_counts = ns;
    cfg.feature = parse_feature(feature);
    cfg.out_dir = out;
    const auto cells = run_kpa_experiment(cfg);
    for (const auto& c : cells)
      std::cout << s.name << " n=" << c.n << " error_ratio=" << c.error_ratio
                << " avg_cardinality=" << c.avg_cardinality << " wall_ms=" << c.wall_ms << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HCIE hierarchical permutation image cipher and its attack toolbox"};
  app.require_subcommand(1);

  int exit_code = 0;
  auto guard = [&exit_code](auto fn) {
    return [fn, &exit_code]() { exit_code = fn(); };
  };

  // encrypt / decrypt -------------------------------------------------------
  CipherOpts enc_opts;
  std::string enc_in, enc_out;
  auto* enc = app.add_subcommand("encrypt", "encrypt a PGM image");
  enc->set_config("--config");
  enc_opts.attach_params(*enc);
  enc_opts.attach_key(*enc);
  enc->add_option("--in", enc_in, "input PGM")->required();
  enc->add_option("--out", enc_out, "output PGM")->required();
  enc->callback(guard([&]() { return run_encrypt(enc_opts, enc_in, enc_out, true); }));

  CipherOpts dec_opts;
  std::string dec_in, dec_out;
  auto* dec = app.add_subcommand("decrypt", "decrypt a PGM image");
  dec->set_config("--config");
  dec_opts.attach_params(*dec);
  dec_opts.attach_key(*dec);
  dec->add_option("--in", dec_in, "input PGM")->required();
  dec->add_option("--out", dec_out, "output PGM")->required();
  dec->callback(guard([&]() { return run_encrypt(dec_opts, dec_in, dec_out, false); }));

  // extract-perm ------------------------------------------------------------
  CipherOpts ext_opts;
  int ext_rows = 256, ext_cols = 256;
  bool ext_flat = false;
  std::string ext_out;
  auto* ext = app.add_subcommand("extract-perm", "write the key's equivalent permutation as CSV");
  ext->set_config("--config");
  ext_opts.attach_params(*ext);
  ext_opts.attach_key(*ext);
  ext->add_option("--rows", ext_rows, "image height");
  ext->add_option("--cols", ext_cols, "image width");
  ext->add_flag("--flat", ext_flat, "write the equivalent flat matrix instead of the hierarchy");
  ext->add_option("--out", ext_out, "output CSV")->required();
  ext->callback(guard([&]() { return run_extract(ext_opts, ext_rows, ext_cols, ext_out, ext_flat); }));

  // kpa -----------------------------------------------------------------------
  CipherOpts kpa_opts;
  std::vector<std::string> kpa_plain, kpa_cipher;
  std::string kpa_target, kpa_out, kpa_feature = "histogram", kpa_metrics, kpa_save, kpa_load,
              kpa_cands;
  auto* kpa = app.add_subcommand("kpa", "known-plaintext attack");
  kpa->set_config("--config");
  kpa_opts.attach_params(*kpa);
  kpa->add_option("--plain", kpa_plain, "known plain PGMs")->expected(-1);
  kpa->add_option("--cipher", kpa_cipher, "matching cipher PGMs")->expected(-1);
  kpa->add_option("--target", kpa_target, "cipher PGM to decrypt")->required();
  kpa->add_option("--out", kpa_out, "decrypted output PGM");
  kpa->add_option("--feature", kpa_feature, "block feature: mean | histogram");
  kpa->add_option("--metrics", kpa_metrics, "metrics CSV path");
  kpa->add_option("--save-perm", kpa_save, "save the estimated hierarchy as CSV");
  kpa->add_option("--load-perm", kpa_load, "skip estimation, load a saved hierarchy CSV");
  kpa->add_option("--save-candidates", kpa_cands, "save the high-level candidate sets as CSV");
  kpa->callback(guard([&]() {
    return run_kpa(kpa_opts, kpa_plain, kpa_cipher, kpa_target, kpa_out, kpa_feature, kpa_metrics,
                   kpa_save, kpa_load, kpa_cands);
  }));

  // cpa -----------------------------------------------------------------------
  CipherOpts cpa_opts;
  std::string cpa_mode = "flat", cpa_test, cpa_save;
  int cpa_rows = 256, cpa_cols = 256;
  auto* cpa = app.add_subcommand("cpa", "chosen-plaintext attack against the built-in oracle");
  cpa->set_config("--config");
  cpa_opts.attach_params(*cpa);
  cpa_opts.attach_key(*cpa);
  cpa->add_option("--mode", cpa_mode, "flat | two_phase | combined");
  cpa->add_option("--rows", cpa_rows, "image height");
  cpa->add_option("--cols", cpa_cols, "image width");
  cpa->add_option("--test", cpa_test, "held-out test PGM (defaults to a built-in image)");
  cpa->add_option("--save-perm", cpa_save, "save the recovered permutation as CSV");
  cpa->callback(guard([&]() { return run_cpa(cpa_opts, cpa_mode, cpa_rows, cpa_cols, cpa_test, cpa_save); }));

  // brute ---------------------------------------------------------------------
  CipherOpts brute_opts;
  std::string brute_plain, brute_cipher, brute_out;
  bool brute_mu4 = false;
  int brute_cap = 12;
  auto* brute = app.add_subcommand("brute", "exhaustive key search at small precision");
  brute->set_config("--config");
  brute_opts.attach_params(*brute);
  brute_opts.attach_key(*brute);
  brute->add_option("--plain", brute_plain, "known plain PGM")->required();
  brute->add_option("--cipher", brute_cipher, "matching cipher PGM")->required();
  brute->add_flag("--mu-near-4", brute_mu4, "search only mu in [3.57, 4]");
  brute->add_option("--max-precision", brute_cap, "exhaustive-search precision cap");
  brute->add_option("--out", brute_out, "report CSV path");
  brute->callback(guard([&]() {
    return run_brute(brute_opts, brute_plain, brute_cipher, brute_mu4, brute_cap, brute_out);
  }));

  // coa-sim ---------------------------------------------------------------------
  CipherOpts coa_opts;
  std::string coa_cipher, coa_kind = "intersection", coa_out;
  bool coa_reassemble = false;
  auto* coa = app.add_subcommand("coa-sim", "cipher-block histogram similarity analysis");
  coa->set_config("--config");
  coa_opts.attach_params(*coa);
  coa->add_option("--cipher", coa_cipher, "cipher PGM")->required();
  coa->add_option("--kind", coa_kind, "intersection | chi_square");
  coa->add_option("--out", coa_out, "similarity matrix CSV");
  coa->add_flag("--reassemble", coa_reassemble, "propose a greedy block placement");
  coa->callback(guard([&]() { return run_coa(coa_opts, coa_cipher, coa_kind, coa_out, coa_reassemble); }));

  // keystream-dump ---------------------------------------------------------------
  CipherOpts ks_opts;
  std::size_t ks_count = 256;
  std::string ks_out;
  auto* ks = app.add_subcommand("keystream-dump", "dump keystream bits as ASCII 0/1");
  ks->set_config("--config");
  ks_opts.attach_key(*ks);
  ks->add_option("--count", ks_count, "number of bits");
  ks->add_option("--out", ks_out, "output file (stdout when omitted)");
  ks->callback(guard([&]() { return run_keystream_dump(ks_opts, ks_count, ks_out); }));

  // experiment ---------------------------------------------------------------
  CipherOpts exp_opts;
  std::string exp_out = "experiment_out", exp_corpus, exp_feature = "histogram";
  auto* exp = app.add_subcommand("experiment",
                                 "run the three-configuration breaking-performance experiment");
  exp->set_config("--config");
  exp_opts.attach_key(*exp);
  exp->add_option("--out-dir", exp_out, "output directory");
  exp->add_option("--corpus-dir", exp_corpus, "directory of PGM images (built-in corpus when omitted)");
  exp->add_option("--feature", exp_feature, "block feature: mean | histogram");
  exp->callback(guard([&]() { return run_experiment(exp_opts, exp_out, exp_corpus, exp_feature); }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case errc::usage: return 2;
      case errc::io: return 3;
      case errc::format: return 4;
      case errc::domain: return 5;
      case errc::stream:
      case errc::internal: return 6;
    }
    return 6;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  }
  return exit_code;
}
