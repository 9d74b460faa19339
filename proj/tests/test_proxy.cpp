#include <doctest.h>

#include <cmath>
#include <numbers>

#include "excursion/estimator.hpp"
#include "excursion/grf.hpp"
#include "excursion/proxy.hpp"

using namespace excursion;
using std::numbers::pi;

namespace {

double cone_error(int n) {
  const auto spec = GridSpec::from_half_width(2.5, n);
  const auto cone = ScalarField::sample(spec, [](double x, double y) { return 1.0 - std::hypot(x, y); });
  return std::abs(marching_squares_length(cone, 0.0) - 2.0 * pi);
}

}  // namespace

TEST_CASE("ramp contour is a straight segment") {
  // M = 5 puts the zero of s1 on a grid column, which the level-equality
  // nudge moves by 1e-12 at most.
  for (int n : {5, 8, 33}) {
    const auto ramp = ScalarField::sample(GridSpec::from_half_width(1.0, n), [](double x, double) { return x; });
    CHECK(marching_squares_length(ramp, 0.0) == doctest::Approx(2.0).epsilon(1e-10));
  }
}

TEST_CASE("straight contour at an angle is measured exactly") {
  const auto spec = GridSpec::from_half_width(1.0, 41);
  const auto plane = ScalarField::sample(spec, [](double x, double y) { return 0.6 * x + 0.8 * y; });
  // The line 0.6 x + 0.8 y = 0.1 enters the square [-1, 1]^2 at (-1, 0.875) and
  // leaves at (1, -0.625), a chord of length sqrt(2^2 + 1.5^2) = 2.5.
  CHECK(marching_squares_length(plane, 0.1) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("cone contour approaches the circle") {
  CHECK(cone_error(1024) / (2.0 * pi) < 1e-3);
}

TEST_CASE("cone contour error is second order") {
  const double coarse = cone_error(129);
  const double fine = cone_error(257);
  // eps halves (to within 1%), so the error ratio should be near 4.
  CHECK(coarse / fine > 3.0);
  CHECK(coarse / fine < 5.0);
}

TEST_CASE("constant field has no contour") {
  const auto flat = ScalarField::sample(GridSpec::from_half_width(1.0, 9), [](double, double) { return 0.25; });
  CHECK(marching_squares_length(flat, 0.0) == 0.0);
  CHECK(marching_squares_length(flat, 0.25) == 0.0);
  CHECK(marching_squares_length(flat, 1.0) == 0.0);
}

TEST_CASE("saddle cells follow the centre average") {
  // Unit cell, eps = 1. Corners lower-left, lower-right, upper-right, upper-left.
  const auto spec = GridSpec::from_half_width(0.5, 2);
  auto cell = [&](double d0, double d1, double d2, double d3) {
    RasterArray<double> v(2, 2);
    v(0, 0) = d0;
    v(0, 1) = d1;
    v(1, 1) = d2;
    v(1, 0) = d3;
    return ScalarField(spec, v);
  };
  // Corners 0 and 2 above, centre above: 0 and 2 join through the cell and
  // the two cuts isolate corners 1 and 3.
  const double joined = 2.0 * std::hypot(0.25, 0.5);
  const double split = std::hypot(0.75, 0.75) + std::hypot(0.5, 0.5);
  CHECK(marching_squares_length(cell(3.0, -1.0, 1.0, -1.0), 0.0) == doctest::Approx(joined).epsilon(1e-12));
  // Centre below: corners 0 and 2 are cut off instead.
  CHECK(marching_squares_length(cell(1.0, -3.0, 1.0, -1.0), 0.0) == doctest::Approx(joined).epsilon(1e-12));
  CHECK(joined < split);
  // The complementary saddle (mask 10) resolves the same way.
  CHECK(marching_squares_length(cell(-3.0, 1.0, -1.0, 1.0), 0.0) == doctest::Approx(joined).epsilon(1e-12));
}

TEST_CASE("corners equal to the level count as above") {
  const auto spec = GridSpec::from_half_width(0.5, 2);
  RasterArray<double> v(2, 2);
  v << 0.0, 0.0, -1.0, -1.0;  // row j = 0 at the level, row j = 1 below
  const ScalarField f(spec, v);
  // The contour hugs the lower edge: length 1 up to the 1e-12 nudge.
  CHECK(marching_squares_length(f, 0.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("estimator approaches the proxy as the grid refines") {
  const MaternModel model{2.5};
  double previous = INFINITY;
  for (int n : {64, 256}) {
    const auto spec = GridSpec::from_half_width(2.5, n);
    const CirculantSampler sampler(spec, model, AnisotropyTransform::isotropic());
    double rel = 0.0;
    const int reps = 10;
    for (int r = 0; r < reps; ++r) {
      const auto field = sampler.sample(8, static_cast<std::uint64_t>(r));
      const auto bin = threshold(field, 0.0);
      const double proxy = marching_squares_length(field, 0.0);
      rel += std::abs(perimeter_hat(bin, select_m(bin), 2).value - proxy) / proxy;
    }
    rel /= reps;
    CAPTURE(n);
    CHECK(rel < previous);
    previous = rel;
  }
  CHECK(previous < 0.02);
}
