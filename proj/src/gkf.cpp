#include "excursion/gkf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "excursion/errors.hpp"

namespace excursion {

double matern_cov(const MaternModel& model, double h) {
  if (!(model.nu > 0.0)) throw InvalidArgument("Matern smoothness nu must be positive");
  if (h < 0.0 || std::isnan(h)) throw InvalidArgument("distance must be nonnegative");
  if (h == 0.0) return 1.0;
  const double nu = model.nu;
  const double x = std::sqrt(2.0 * nu) * h;
  // Half-integer closed forms; these are hit millions of times when filling
  // a covariance torus.
  if (nu == 0.5) return std::exp(-x);
  if (nu == 1.5) return (1.0 + x) * std::exp(-x);
  if (nu == 2.5) return (1.0 + x + x * x / 3.0) * std::exp(-x);
  if (x > 700.0) return 0.0;
  return std::exp((1.0 - nu) * std::numbers::ln2 - std::lgamma(nu) + nu * std::log(x)) *
         std::cyl_bessel_k(nu, x);
}

SpectralMoment second_spectral_moment(const MaternModel& model) {
  if (!(model.nu > 1.0))
    throw NonSmoothModel("second spectral moment is infinite for Matern nu <= 1");
  return {model.nu / (model.nu - 1.0)};
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double expected_perimeter_isotropic(double area, double u, SpectralMoment lambda2) {
  if (!(area > 0.0)) throw InvalidArgument("area must be positive");
  if (!(lambda2.lambda2 > 0.0)) throw InvalidArgument("lambda2 must be positive");
  return area * normal_pdf(u) * std::sqrt(std::numbers::pi * lambda2.lambda2 / 2.0);
}

double ellipse_perimeter(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("ellipse semi-axes must be positive");
  double hi = std::max(a, b);
  double lo = std::min(a, b);
  // P = 2 pi / AGM(a, b) * (a^2 - sum_{n>=0} 2^(n-1) c_n^2), c_0^2 = a^2 - b^2.
  double sum = 0.5 * (hi * hi - lo * lo);
  double weight = 0.5;
  while (hi - lo > 1e-15 * hi) {
    const double c = 0.5 * (hi - lo);
    const double mean = 0.5 * (hi + lo);
    lo = std::sqrt(hi * lo);
    hi = mean;
    weight *= 2.0;
    sum += weight * c * c;
  }
  const double big = std::max(a, b);
  return 2.0 * std::numbers::pi * (big * big - sum) / hi;
}

double expected_perimeter_affine(double area, double u, SpectralMoment lambda2, double sigma1,
                                 double sigma2) {
  if (!(sigma2 > 0.0) || sigma1 < sigma2) throw InvalidArgument("need sigma1 >= sigma2 > 0");
  return ellipse_perimeter(sigma1, sigma2) / (2.0 * std::numbers::pi) *
         expected_perimeter_isotropic(area, u, lambda2);
}

}  // namespace excursion
