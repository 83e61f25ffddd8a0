#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hcie/ciphertext.hpp"
#include "hcie/error.hpp"
#include "hcie/kpa.hpp"
#include "hcie/permutation.hpp"

// CSV forms of the attack artifacts, so long experiments can be resumed and
// results can be diffed. All positions are written as row,col pairs.

namespace hcie::serial {

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  require(out.good(), errc::io, "cannot create " + path.string());
  return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), errc::io, "cannot open " + path.string());
  return in;
}

inline std::vector<long> split_longs(const std::string& line) {
  std::vector<long> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    require(!cell.empty(), errc::format, "empty CSV cell");
    out.push_back(std::stol(cell));
  }
  return out;
}

}  // namespace detail

/// permutation CSV: header `rows,cols`, then one `src_row,src_col,dst_row,dst_col`
/// line per position in raster order.
inline void write_permutation_csv(std::ostream& out, const PermutationMatrix& w) {
  out << w.rows() << "," << w.cols() << "\n";
  for (std::size_t s = 0; s < w.size(); ++s) {
    const Pos sp = w.pos_of(s);
    const Pos dp = w.pos_of(w.dest_raster(s));
    out << sp.row << "," << sp.col << "," << dp.row << "," << dp.col << "\n";
  }
}

inline void write_permutation_csv(const std::filesystem::path& path, const PermutationMatrix& w) {
  auto out = detail::open_out(path);
  write_permutation_csv(out, w);
}

inline PermutationMatrix read_permutation_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), errc::format, "missing permutation header");
  const auto dims = detail::split_longs(line);
  require(dims.size() == 2, errc::format, "permutation header must be rows,cols");
  PermutationMatrix w(static_cast<int>(dims[0]), static_cast<int>(dims[1]));
  for (std::size_t s = 0; s < w.size(); ++s) {
    require(static_cast<bool>(std::getline(in, line)), errc::format, "truncated permutation CSV");
    const auto v = detail::split_longs(line);
    require(v.size() == 4, errc::format, "permutation row must have 4 fields");
    w.set_dest(static_cast<int>(v[0]), static_cast<int>(v[1]),
               {static_cast<int>(v[2]), static_cast<int>(v[3])});
  }
  require(w.is_bijective(), errc::format, "loaded permutation is not bijective");
  return w;
}

inline PermutationMatrix read_permutation_csv(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  return read_permutation_csv(in);
}

/// hierarchical CSV: `high` section then one `low` section per block in
/// raster order, each section a permutation CSV preceded by a tag line.
inline void write_hierarchical_csv(const std::filesystem::path& path,
                                   const HierarchicalPermutation& hp) {
  auto out = detail::open_out(path);
  out << "high\n";
  write_permutation_csv(out, hp.high);
  for (std::size_t d = 0; d < hp.low.size(); ++d) {
    out << "low," << d << "\n";
    write_permutation_csv(out, hp.low[d]);
  }
}

inline HierarchicalPermutation read_hierarchical_csv(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line == "high", errc::format,
          "expected 'high' section");
  HierarchicalPermutation hp;
  hp.high = read_permutation_csv(in);
  for (std::size_t d = 0; d < hp.high.size(); ++d) {
    require(static_cast<bool>(std::getline(in, line)), errc::format, "missing low section");
    require(line == "low," + std::to_string(d), errc::format, "unexpected section tag " + line);
    hp.low.push_back(read_permutation_csv(in));
  }
  return hp;
}

/// candidate CSV: header `rows,cols`, then per source position in raster
/// order `src_row,src_col,count,dst_row,dst_col,...`.
inline void write_candidates_csv(const std::filesystem::path& path, const CandidateMatrix& c) {
  auto out = detail::open_out(path);
  out << c.rows() << "," << c.cols() << "\n";
  for (std::size_t s = 0; s < c.size(); ++s) {
    const int row = static_cast<int>(s) / c.cols(), col = static_cast<int>(s) % c.cols();
    out << row << "," << col << "," << c.cardinality(s);
    for (std::uint32_t d : c.candidates(s))
      out << "," << static_cast<int>(d) / c.cols() << "," << static_cast<int>(d) % c.cols();
    out << "\n";
  }
}

/// brute-force report CSV: one `field,value` line per component.
inline void write_brute_report_csv(const std::filesystem::path& path, const BruteForceReport& r,
                                   int precision) {
  auto out = detail::open_out(path);
  out << "field,value\n";
  out << "precision_bits," << precision << "\n";
  out << "tried," << r.tried << "\n";
  out << "matches," << r.matches.size() << "\n";
  for (std::size_t i = 0; i < r.matches.size(); ++i)
    out << "match_" << i << "_x0_mu," << r.matches[i].x0_raw << ";" << r.matches[i].mu_raw << "\n";
  out << "wall_ms," << r.wall_ms << "\n";
  out << "stream_bits," << r.cost.stream_bits << "\n";
  out << "chaotic_iterations," << r.cost.chaotic_iterations << "\n";
  out << "pseudo_image_ops," << r.cost.pseudo_image_ops << "\n";
  out << "block_move_ops," << r.cost.block_move_ops << "\n";
  out << "permutation_runs," << r.cost.permutation_runs << "\n";
  out << "permutation_cost_each," << r.cost.permutation_cost_each << "\n";
  out << "per_trial_total," << r.cost.per_trial_total << "\n";
  out << "search_space," << r.cost.search_space.get_str() << "\n";
  out << "total_ops," << r.cost.total_ops.get_str() << "\n";
}

/// similarity CSV: header `blocks,kind`, then the score matrix row by row.
inline void write_similarity_csv(const std::filesystem::path& path,
                                 const BlockSimilarityMatrix& sim) {
  auto out = detail::open_out(path);
  out << sim.block_count << ","
      << (sim.kind == SimilarityKind::intersection ? "intersection" : "chi_square") << "\n";
  for (int a = 0; a < sim.block_count; ++a) {
    for (int b = 0; b < sim.block_count; ++b) out << (b ? "," : "") << sim.at(a, b);
    out << "\n";
  }
}

}  // namespace hcie::serial
