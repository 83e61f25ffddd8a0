#pragma once

// Test-only reference simulator for the core permutation pass, written
// directly from the rotation definitions and kept independent of the library
// implementation: images are plain int grids, every rotation rebuilds the
// whole grid, and line cells are addressed by explicit (row, col) formulas.

#include <vector>

namespace oracle {

using Grid = std::vector<std::vector<int>>;

inline int mod(int a, int m) { return ((a % m) + m) % m; }

inline Grid rot_row(const Grid& g, int i, int b, int p) {
  const int n = static_cast<int>(g[0].size());
  Grid out = g;
  for (int c = 0; c < n; ++c)
    out[i][c] = b == 0 ? g[i][mod(c + p, n)]   // left: the pixel p to the right lands here
                       : g[i][mod(c - p, n)];  // right
  return out;
}

inline Grid rot_col(const Grid& g, int j, int b, int p) {
  const int m = static_cast<int>(g.size());
  Grid out = g;
  for (int r = 0; r < m; ++r)
    out[r][j] = b == 0 ? g[mod(r + p, m)][j]   // up
                       : g[mod(r - p, m)][j];  // down
  return out;
}

// cells with r + c = k, ordered by increasing r
inline Grid rot_anti_diag(const Grid& g, int k, int b, int p) {
  const int m = static_cast<int>(g.size()), n = static_cast<int>(g[0].size());
  Grid out = g;
  const int r0 = std::max(0, k - (n - 1));
  const int r1 = std::min(m - 1, k);
  const int len = r1 - r0 + 1;
  for (int r = r0; r <= r1; ++r) {
    // lower-left (b=0): a value comes from p steps up the line
    const int src = r0 + (b == 0 ? mod(r - r0 - p, len) : mod(r - r0 + p, len));
    out[r][k - r] = g[src][k - src];
  }
  return out;
}

// cells with r - c = l, ordered by increasing r
inline Grid rot_diag(const Grid& g, int l, int b, int p) {
  const int m = static_cast<int>(g.size()), n = static_cast<int>(g[0].size());
  Grid out = g;
  const int r0 = std::max(0, l);
  const int r1 = std::min(m - 1, n - 1 + l);
  const int len = r1 - r0 + 1;
  for (int r = r0; r <= r1; ++r) {
    // upper-left (b=0): a value comes from p steps down the line
    const int src = r0 + (b == 0 ? mod(r - r0 + p, len) : mod(r - r0 - p, len));
    out[r][r - l] = g[src][src - l];
  }
  return out;
}

/// The permutation pass: `rounds` iterations over rows, columns,
/// anti-diagonals and diagonals, directions drawn from `bits`.
inline Grid sub_hcie(Grid g, const std::vector<int>& bits, int rounds, int alpha, int beta,
                     int gamma) {
  const int sm = static_cast<int>(g.size()), sn = static_cast<int>(g[0].size());
  for (int ite = 0; ite < rounds; ++ite) {
    const int q = (3 * sm + 3 * sn - 2) * ite;
    const int p = alpha + beta * bits[q] + gamma * bits[q + 1];
    for (int i = 0; i < sm; ++i) g = rot_row(g, i, bits[q + i], p);
    for (int j = 0; j < sn; ++j) g = rot_col(g, j, bits[q + sm + j], p);
    for (int k = 0; k <= sm + sn - 2; ++k) g = rot_anti_diag(g, k, bits[q + sm + sn + k], p);
    for (int l = 1 - sn; l <= sm - 1; ++l)
      g = rot_diag(g, l, bits[q + 2 * sm + 3 * sn - 2 + l], p);
  }
  return g;
}

}  // namespace oracle
