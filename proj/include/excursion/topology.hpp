#pragma once

#include <cstdint>

#include "excursion/grid.hpp"

namespace excursion {

enum class Connectivity { Four = 4, Eight = 8 };

/// Component labels of a binary raster; 0 is background, components are
/// numbered 1..count in order of their first pixel in storage (row-major) order.
struct LabelField {
  GridSpec spec;
  RasterArray<std::int32_t> labels;
  int count = 0;

  std::int32_t operator()(int i, int j) const { return labels(j, i); }
};

/// Two-pass labeling with a union-find over provisional labels.
LabelField label_components(const BinaryField& bin, Connectivity connectivity);

/// Background components (4-connected) that do not touch the raster border.
/// Pairs with 8-connected foreground so that components and holes are dual.
int count_holes(const BinaryField& bin);

struct TopologySummary {
  int components = 0;  // 8-connected foreground
  int holes = 0;
  int euler() const { return components - holes; }
};

TopologySummary topology(const BinaryField& bin);

}  // namespace excursion
