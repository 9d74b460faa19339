#include "excursion/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "excursion/topology.hpp"

namespace excursion {
namespace {

__extension__ using u128 = unsigned __int128;

// base^p, or false on overflow.
bool checked_pow(std::uint64_t base, int p, u128& out) {
  u128 acc = 1;
  const u128 limit = ~u128(0);
  for (int k = 0; k < p; ++k) {
    if (base != 0 && acc > limit / base) return false;
    acc *= base;
  }
  out = acc;
  return true;
}

}  // namespace

std::vector<BlockCounts> block_counts(const BinaryField& bin, int m) {
  const int per_side = blocks_per_side(bin.spec(), m);
  const int n = bin.size();
  std::vector<BlockCounts> blocks(static_cast<std::size_t>(per_side) * per_side);
  for (int bb = 0; bb < per_side; ++bb)
    for (int aa = 0; aa < per_side; ++aa) {
      auto& blk = blocks[static_cast<std::size_t>(bb) * per_side + aa];
      blk.a = aa * m;
      blk.b = bb * m;
    }

  const auto& v = bin.values();
  for (int j = 0; j < n; ++j) {
    const std::size_t row_base = static_cast<std::size_t>(j / m) * per_side;
    for (int i = 0; i < n; ++i) {
      auto& blk = blocks[row_base + static_cast<std::size_t>(i / m)];
      const std::uint8_t z = v(j, i);
      if (j + 1 < n) blk.n_h += z != v(j + 1, i);
      if (i + 1 < n) blk.n_v += z != v(j, i + 1);
    }
  }
  return blocks;
}

double block_norm(std::int64_t n_h, std::int64_t n_v, int p) {
  if (p < 1) throw InvalidArgument("norm order p must be at least 1");
  if (n_h < 0 || n_v < 0) throw InvalidArgument("counts must be nonnegative");
  if (p == 1) return static_cast<double>(n_h + n_v);
  if (n_h == 0 || n_v == 0) return static_cast<double>(std::max(n_h, n_v));

  u128 ph = 0;
  u128 pv = 0;
  if (checked_pow(static_cast<std::uint64_t>(n_h), p, ph) &&
      checked_pow(static_cast<std::uint64_t>(n_v), p, pv) && ph <= ~u128(0) - pv) {
    const long double sum = static_cast<long double>(ph + pv);
    if (p == 2) return static_cast<double>(std::sqrt(sum));
    return static_cast<double>(std::pow(sum, 1.0L / p));
  }
  // Overflow: factor out the larger count.
  const double hi = static_cast<double>(std::max(n_h, n_v));
  const double lo = static_cast<double>(std::min(n_h, n_v));
  return hi * std::pow(1.0 + std::pow(lo / hi, p), 1.0 / p);
}

PerimeterEstimate perimeter_hat(const BinaryField& bin, int m, int p, double level) {
  if (p < 1) throw InvalidArgument("norm order p must be at least 1");
  const auto blocks = block_counts(bin, m);
  double total = 0.0;
  if (p == 1) {
    std::int64_t edges = 0;
    for (const auto& blk : blocks) edges += blk.n_h + blk.n_v;
    total = static_cast<double>(edges);
  } else {
    for (const auto& blk : blocks) total += block_norm(blk.n_h, blk.n_v, p);
  }
  return {bin.spec().pixel_width() * total, p, m, level};
}

PerimeterEstimate perimeter_hat(const BinaryField& bin, int m, int p) {
  return perimeter_hat(bin, m, p, std::numeric_limits<double>::quiet_NaN());
}

double edge_count_length(const BinaryField& bin) {
  const auto& v = bin.values();
  const Eigen::Index n = v.rows();
  std::int64_t edges = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      if (j + 1 < n) edges += v(j, i) != v(j + 1, i);
      if (i + 1 < n) edges += v(j, i) != v(j, i + 1);
    }
  return bin.spec().pixel_width() * static_cast<double>(edges);
}

int select_m_from_counts(double area, double eps, long components_plus_holes, int grid_size) {
  if (components_plus_holes < 1) throw NoExcursionBoundary("no components or holes to size blocks by");
  if (!(area > 0.0) || !(eps > 0.0)) throw InvalidArgument("area and pixel width must be positive");
  const double c = std::cbrt(area / static_cast<double>(components_plus_holes)) / 3.0;
  const double raw = std::floor(c * std::pow(eps, -2.0 / 3.0));
  const double hi = static_cast<double>(std::max(1, grid_size - 1));
  return static_cast<int>(std::clamp(raw, 1.0, hi));
}

int select_m(const BinaryField& bin) {
  if (edge_count_length(bin) == 0.0) throw NoExcursionBoundary("image has no 0/1 transition");
  const auto topo = topology(bin);
  return select_m_from_counts(bin.spec().area(), bin.spec().pixel_width(),
                              static_cast<long>(topo.components) + topo.holes, bin.size());
}

}  // namespace excursion
