#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "excursion/grid.hpp"
#include "excursion/rng.hpp"

namespace testing {

using excursion::BinaryField;
using excursion::GridSpec;
using excursion::RasterArray;

// Rows are given top (j = M-1) first, as the raster would be drawn.
inline BinaryField binary_from_rows(const std::vector<std::string>& rows, double t = 1.0) {
  const int n = static_cast<int>(rows.size());
  RasterArray<std::uint8_t> v(n, n);
  for (int r = 0; r < n; ++r)
    for (int i = 0; i < n; ++i) v(n - 1 - r, i) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] == '1';
  return BinaryField(GridSpec::from_half_width(t, n), std::move(v));
}

inline BinaryField random_binary(excursion::Xoshiro256pp& rng, int n, double density,
                                 double t = 1.0) {
  RasterArray<std::uint8_t> v(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) v(j, i) = rng.uniform_open0() <= density;
  return BinaryField(GridSpec::from_half_width(t, n), std::move(v));
}

template <typename Pred>
BinaryField raster(int n, double t, Pred inside) {
  const auto spec = GridSpec::from_half_width(t, n);
  RasterArray<std::uint8_t> v(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) v(j, i) = inside(i, j, spec.point(i, j));
  return BinaryField(spec, std::move(v));
}

// Literal transcription of the block sums, summation limits included:
//   N_h(a,b) = sum_{i=a}^{(a+m-1)^(M-1)} sum_{j=b}^{(b+m-1)^(M-2)} |z(i,j) - z(i,j+1)|
//   N_v(a,b) = sum_{i=a}^{(a+m-1)^(M-2)} sum_{j=b}^{(b+m-1)^(M-1)} |z(i,j) - z(i+1,j)|
inline std::pair<long, long> literal_block_sums(const BinaryField& z, int a, int b, int m) {
  const int M = z.size();
  long nh = 0;
  long nv = 0;
  for (int i = a; i <= std::min(a + m - 1, M - 1); ++i)
    for (int j = b; j <= std::min(b + m - 1, M - 2); ++j) nh += z(i, j) != z(i, j + 1);
  for (int i = a; i <= std::min(a + m - 1, M - 2); ++i)
    for (int j = b; j <= std::min(b + m - 1, M - 1); ++j) nv += z(i, j) != z(i + 1, j);
  return {nh, nv};
}

// Breadth-first flood fill; counts 8-connected foreground components and
// 4-connected background components that never reach the border.
struct FloodCounts {
  int components = 0;
  int holes = 0;
};

inline FloodCounts flood_fill_counts(const BinaryField& z) {
  const int n = z.size();
  std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
  auto at = [&](int i, int j) -> char& { return seen[static_cast<std::size_t>(j) * n + i]; };
  FloodCounts out;
  for (int j0 = 0; j0 < n; ++j0)
    for (int i0 = 0; i0 < n; ++i0) {
      if (at(i0, j0)) continue;
      const int value = z(i0, j0);
      const bool diagonal = value == 1;
      bool touches_border = false;
      std::deque<std::pair<int, int>> queue{{i0, j0}};
      at(i0, j0) = 1;
      while (!queue.empty()) {
        const auto [i, j] = queue.front();
        queue.pop_front();
        if (i == 0 || j == 0 || i == n - 1 || j == n - 1) touches_border = true;
        for (int di = -1; di <= 1; ++di)
          for (int dj = -1; dj <= 1; ++dj) {
            if ((di == 0 && dj == 0) || (!diagonal && di != 0 && dj != 0)) continue;
            const int p = i + di;
            const int q = j + dj;
            if (p < 0 || q < 0 || p >= n || q >= n || at(p, q) || z(p, q) != value) continue;
            at(p, q) = 1;
            queue.emplace_back(p, q);
          }
      }
      if (value == 1)
        ++out.components;
      else if (!touches_border)
        ++out.holes;
    }
  return out;
}

// Euler characteristic of the union of closed foreground pixels, counted as
// vertices - edges + faces of the cubical complex.
inline int cubical_euler(const BinaryField& z) {
  const int n = z.size();
  std::set<std::pair<int, int>> vertices;
  std::set<std::tuple<int, int, int>> edges;  // (x, y, direction)
  int faces = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!z(i, j)) continue;
      ++faces;
      for (int dx = 0; dx <= 1; ++dx)
        for (int dy = 0; dy <= 1; ++dy) vertices.emplace(i + dx, j + dy);
      edges.emplace(i, j, 0);
      edges.emplace(i, j + 1, 0);
      edges.emplace(i, j, 1);
      edges.emplace(i + 1, j, 1);
    }
  return static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) + faces;
}

}  // namespace testing
