#include "excursion/grid.hpp"

namespace excursion {

std::vector<BlockOrigin> block_origins(const GridSpec& spec, int m) {
  const int per_side = blocks_per_side(spec, m);
  std::vector<BlockOrigin> out;
  out.reserve(static_cast<std::size_t>(per_side) * per_side);
  for (int b = 0; b < spec.size(); b += m)
    for (int a = 0; a < spec.size(); a += m) out.push_back({a, b});
  return out;
}

}  // namespace excursion
