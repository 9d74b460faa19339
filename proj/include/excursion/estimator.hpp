#pragma once

#include <cstdint>
#include <vector>

#include "excursion/grid.hpp"

namespace excursion {

/// Sign-change counts inside one m x m block.
struct BlockCounts {
  int a = 0;
  int b = 0;
  /// Pairs (i, j) ~ (i, j+1) that differ: horizontal pixel edges.
  std::int64_t n_h = 0;
  /// Pairs (i, j) ~ (i+1, j) that differ: vertical pixel edges.
  std::int64_t n_v = 0;
};

struct PerimeterEstimate {
  double value = 0.0;
  int p = 1;
  int m = 1;
  double level = 0.0;  // NaN when the binary image was given without its level
};

/// Per-block counts in block_origins order. A horizontal pair (j, j+1) is
/// attributed to the block containing its lower pixel, a vertical pair
/// (i, i+1) to the block containing its left pixel; this reproduces the
/// truncated upper summation limits (a+m-1) ^ (M-1) and (b+m-1) ^ (M-2)
/// literally, including their asymmetry on the last block row/column.
std::vector<BlockCounts> block_counts(const BinaryField& bin, int m);

/// ||(n_h, n_v)||_p. Powers are taken in integer arithmetic whenever the
/// sum fits in 128 bits, so the only rounding is the final root.
double block_norm(std::int64_t n_h, std::int64_t n_v, int p);

/// eps * sum over blocks of ||(n_h, n_v)||_p, blocks visited in row-major
/// order. p = 1 counts every differing pixel edge and is independent of m.
/// p = 2 is the multigrid-convergent member of the family; p > 2 is accepted
/// but its bias depends on boundary orientation.
PerimeterEstimate perimeter_hat(const BinaryField& bin, int m, int p, double level);
PerimeterEstimate perimeter_hat(const BinaryField& bin, int m, int p);

/// Same as perimeter_hat for p = 1 but without building blocks.
double edge_count_length(const BinaryField& bin);

/// Adaptive block size floor(C * eps^(-2/3)) with
/// C = (1/3) * (area(T) / (N_cc + N_holes))^(1/3), clamped to [1, M-1].
/// Components are 8-connected, holes 4-connected. Throws NoExcursionBoundary
/// when the image has no 0/1 transition.
int select_m(const BinaryField& bin);

/// The closed-form rule above, for callers that already know the topology.
int select_m_from_counts(double area, double eps, long components_plus_holes, int grid_size);

}  // namespace excursion
