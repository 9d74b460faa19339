#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "excursion/errors.hpp"

namespace excursion {

/// Square observation window T = [-t, t]^2 sampled on an M x M lattice with
/// spacing epsilon. Grid point (i, j) sits at (-t + i*eps, -t + j*eps), i
/// counting columns rightward and j counting rows upward.
class GridSpec {
 public:
  /// Places the four corners of T on the lattice: eps = 2t / (M - 1).
  static GridSpec from_half_width(double t, int size) {
    if (size < 2) throw InvalidArgument("grid size must be at least 2");
    return GridSpec(t, size, 2.0 * t / (size - 1));
  }

  GridSpec(double t, int size, double eps) : t_(t), size_(size), eps_(eps) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("half-width t must be positive");
    if (size < 2) throw InvalidArgument("grid size must be at least 2");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("pixel width must be positive");
    const double slack = 1e-9 * (2.0 * t);
    if (std::abs(size * eps - 2.0 * t) > eps + slack)
      throw InvalidArgument("|M*eps - 2t| exceeds eps");
    if ((size - 1) * eps > 2.0 * t + slack)
      throw InvalidArgument("grid points fall outside [-t, t]^2");
  }

  double half_width() const { return t_; }
  int size() const { return size_; }
  double pixel_width() const { return eps_; }
  /// Lebesgue measure of T.
  double area() const { return 4.0 * t_ * t_; }

  Eigen::Vector2d point(int i, int j) const { return {-t_ + i * eps_, -t_ + j * eps_}; }

  bool operator==(const GridSpec&) const = default;

 private:
  double t_;
  int size_;
  double eps_;
};

template <typename Scalar>
using RasterArray = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// M x M raster tied to its grid. Storage is row-major with row index j, so
/// `values()(j, i)` and `(*this)(i, j)` address the same grid point.
template <typename Scalar>
class Field {
 public:
  using ScalarType = Scalar;

  Field(GridSpec spec, RasterArray<Scalar> values) : spec_(spec), values_(std::move(values)) {
    if (values_.rows() != spec_.size() || values_.cols() != spec_.size())
      throw InvalidArgument("raster dimensions do not match grid size");
    if constexpr (std::is_floating_point_v<Scalar>) {
      if (!values_.allFinite()) throw InvalidArgument("field contains non-finite values");
    } else {
      if ((values_ > Scalar(1)).any()) throw InvalidArgument("binary raster entries must be 0 or 1");
    }
  }

  const GridSpec& spec() const { return spec_; }
  int size() const { return spec_.size(); }
  const RasterArray<Scalar>& values() const { return values_; }

  Scalar operator()(int i, int j) const { return values_(j, i); }

  /// Builds a field by evaluating f(x, y) at every grid point.
  template <typename Fn>
  static Field sample(const GridSpec& spec, Fn&& f) {
    const int n = spec.size();
    RasterArray<Scalar> v(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Eigen::Vector2d s = spec.point(i, j);
        v(j, i) = static_cast<Scalar>(f(s.x(), s.y()));
      }
    return Field(spec, std::move(v));
  }

 private:
  GridSpec spec_;
  RasterArray<Scalar> values_;
};

using BinaryField = Field<std::uint8_t>;
using ScalarField = Field<double>;

/// Excursion indicator: 1 where the field is at or above u.
template <typename Scalar>
BinaryField threshold(const Field<Scalar>& field, double u) {
  RasterArray<std::uint8_t> bin =
      (field.values().template cast<double>() >= u).template cast<std::uint8_t>();
  return BinaryField(field.spec(), std::move(bin));
}

/// Swaps the roles of i and j; grid spec is unchanged since the window is square.
template <typename Scalar>
Field<Scalar> transpose(const Field<Scalar>& field) {
  return Field<Scalar>(field.spec(), field.values().transpose());
}

/// Rotates the raster by 90 degrees counter-clockwise: (i, j) -> (M-1-j, i).
template <typename Scalar>
Field<Scalar> rotate90(const Field<Scalar>& field) {
  const int n = field.size();
  RasterArray<Scalar> v(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) v(i, n - 1 - j) = field(i, j);
  return Field<Scalar>(field.spec(), std::move(v));
}

struct BlockOrigin {
  int a;  // column index of the block's lower-left pixel
  int b;  // row index
  bool operator==(const BlockOrigin&) const = default;
};

/// Lower-left corners of the m x m blocks tiling the index square, rows
/// outermost. Blocks on the top and right edges are truncated when m does
/// not divide M.
std::vector<BlockOrigin> block_origins(const GridSpec& spec, int m);

/// Number of blocks per side, ceil(M / m).
inline int blocks_per_side(const GridSpec& spec, int m) {
  if (m < 1) throw InvalidArgument("block size m must be at least 1");
  return (spec.size() + m - 1) / m;
}

}  // namespace excursion
