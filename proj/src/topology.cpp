#include "excursion/topology.hpp"

#include <numeric>
#include <vector>

namespace excursion {
namespace {

class DisjointSet {
 public:
  int make() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Keeps the smaller root so first-encountered labels stay canonical.
  void unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (y < x) std::swap(x, y);
    parent_[y] = x;
  }

 private:
  std::vector<int> parent_;
};

// Labels pixels whose value equals `target` in a raster given in storage
// layout (rows = j). Scan order is row-major; for 8-connectivity the
// already-visited neighbours are left, and the three in the previous row.
template <typename Derived>
RasterArray<std::int32_t> two_pass(const Eigen::ArrayBase<Derived>& v, std::uint8_t target,
                                   Connectivity connectivity, int& count) {
  const Eigen::Index rows = v.rows();
  const Eigen::Index cols = v.cols();
  RasterArray<std::int32_t> lab = RasterArray<std::int32_t>::Constant(rows, cols, -1);
  DisjointSet sets;

  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (v(r, c) != target) continue;
      int current = -1;
      auto link = [&](Eigen::Index rr, Eigen::Index cc) {
        if (rr < 0 || cc < 0 || cc >= cols) return;
        const int other = lab(rr, cc);
        if (other < 0) return;
        if (current < 0)
          current = other;
        else
          sets.unite(current, other);
      };
      link(r, c - 1);
      if (connectivity == Connectivity::Eight) link(r - 1, c - 1);
      link(r - 1, c);
      if (connectivity == Connectivity::Eight) link(r - 1, c + 1);
      lab(r, c) = current < 0 ? sets.make() : current;
    }

  // Second pass: compact roots to 1..count in first-encounter order.
  std::vector<int> compact;
  count = 0;
  for (Eigen::Index k = 0; k < lab.size(); ++k) {
    int& x = lab.data()[k];
    if (x < 0) {
      x = 0;
      continue;
    }
    const int root = sets.find(x);
    if (static_cast<std::size_t>(root) >= compact.size()) compact.resize(static_cast<std::size_t>(root) + 1, 0);
    if (compact[static_cast<std::size_t>(root)] == 0) compact[static_cast<std::size_t>(root)] = ++count;
    x = compact[static_cast<std::size_t>(root)];
  }
  return lab;
}

}  // namespace

LabelField label_components(const BinaryField& bin, Connectivity connectivity) {
  LabelField out{bin.spec(), {}, 0};
  out.labels = two_pass(bin.values(), 1, connectivity, out.count);
  return out;
}

int count_holes(const BinaryField& bin) {
  int count = 0;
  const auto lab = two_pass(bin.values(), 0, Connectivity::Four, count);
  if (count == 0) return 0;
  std::vector<bool> touches(static_cast<std::size_t>(count) + 1, false);
  const Eigen::Index n = lab.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    touches[static_cast<std::size_t>(lab(0, k))] = true;
    touches[static_cast<std::size_t>(lab(n - 1, k))] = true;
    touches[static_cast<std::size_t>(lab(k, 0))] = true;
    touches[static_cast<std::size_t>(lab(k, n - 1))] = true;
  }
  int holes = 0;
  for (int l = 1; l <= count; ++l) holes += touches[static_cast<std::size_t>(l)] ? 0 : 1;
  return holes;
}

TopologySummary topology(const BinaryField& bin) {
  return {label_components(bin, Connectivity::Eight).count, count_holes(bin)};
}

}  // namespace excursion
