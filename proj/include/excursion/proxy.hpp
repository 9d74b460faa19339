#pragma once

#include <array>
#include <cmath>

#include "excursion/grid.hpp"

namespace excursion {

namespace detail {

// Corner values equal to the level are nudged above it so that every corner
// has a strict sign, matching the inclusive >= of threshold().
template <typename Scalar>
inline double level_offset(Scalar value, double u) {
  const double d = static_cast<double>(value) - u;
  return d == 0.0 ? 1e-12 * (1.0 + std::abs(u)) : d;
}

// Position of the zero of the linear interpolant between offsets d0 and d1,
// as a fraction of the edge from the d0 end.
inline double crossing(double d0, double d1) { return d0 / (d0 - d1); }

}  // namespace detail

/// Length of the piecewise-linear level-u contour of a sampled field.
///
/// Each grid cell is split by the signs of its four corners; crossings are
/// placed on cell edges by linear interpolation and joined by straight
/// segments. Saddle cells (diagonal corners on the same side) are resolved by
/// the sign of the mean of the four corners. Cells are summed row by row in a
/// fixed order so the result is reproducible.
template <typename Scalar>
double marching_squares_length(const Field<Scalar>& field, double u) {
  using Point = std::array<double, 2>;
  const int n = field.size();
  const double eps = field.spec().pixel_width();
  const auto& v = field.values();

  double total = 0.0;
  for (int j = 0; j + 1 < n; ++j) {
    double row_total = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      // Corners counter-clockwise from lower-left: (i,j), (i+1,j), (i+1,j+1), (i,j+1).
      const double d0 = detail::level_offset(v(j, i), u);
      const double d1 = detail::level_offset(v(j, i + 1), u);
      const double d2 = detail::level_offset(v(j + 1, i + 1), u);
      const double d3 = detail::level_offset(v(j + 1, i), u);
      const int mask = (d0 > 0) | (d1 > 0) << 1 | (d2 > 0) << 2 | (d3 > 0) << 3;
      if (mask == 0 || mask == 15) continue;

      // Crossing on edge e in local cell units; edge e joins corner e and e+1.
      auto edge_point = [&](int e) -> Point {
        switch (e) {
          case 0: return {detail::crossing(d0, d1), 0.0};
          case 1: return {1.0, detail::crossing(d1, d2)};
          case 2: return {1.0 - detail::crossing(d2, d3), 1.0};
          default: return {0.0, 1.0 - detail::crossing(d3, d0)};
        }
      };
      auto seg = [&](int e0, int e1) {
        const Point p = edge_point(e0);
        const Point q = edge_point(e1);
        return std::hypot(p[0] - q[0], p[1] - q[1]);
      };

      double len = 0.0;
      switch (mask) {
        case 1: case 14: len = seg(3, 0); break;
        case 2: case 13: len = seg(0, 1); break;
        case 4: case 11: len = seg(1, 2); break;
        case 8: case 7: len = seg(2, 3); break;
        case 3: case 12: len = seg(3, 1); break;
        case 6: case 9: len = seg(0, 2); break;
        case 5: case 10: {
          // Saddle: if the centre is on the side of corners 0 and 2, those
          // corners are joined through the cell and the cuts isolate 1 and 3.
          const bool centre_up = (d0 + d1 + d2 + d3) > 0.0;
          const bool zero_two_up = mask == 5;
          if (centre_up == zero_two_up)
            len = seg(0, 1) + seg(2, 3);
          else
            len = seg(3, 0) + seg(1, 2);
          break;
        }
        default: break;
      }
      row_total += len;
    }
    total += row_total;
  }
  return total * eps;
}

}  // namespace excursion
