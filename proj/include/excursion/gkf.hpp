#pragma once

namespace excursion {

/// Unit-variance, unit-range Matern covariance
///   r(h) = 2^(1-nu)/Gamma(nu) * (sqrt(2 nu) h)^nu * K_nu(sqrt(2 nu) h).
struct MaternModel {
  double nu = 2.5;
};

/// Second spectral moment: -r''(0) along any axis, i.e. the variance of each
/// partial derivative of a unit-variance isotropic field.
struct SpectralMoment {
  double lambda2;
};

double matern_cov(const MaternModel& model, double h);

/// nu / (nu - 1) for the sqrt(2 nu)-scaled Matern. Throws NonSmoothModel for
/// nu <= 1, where sample paths are not differentiable in mean square.
SpectralMoment second_spectral_moment(const MaternModel& model);

double normal_pdf(double x);
double normal_cdf(double x);

/// Expected boundary length of {Y >= u} in a window of the given area, for a
/// unit-variance isotropic Gaussian Y: area * phi(u) * E||grad Y||, where
/// ||grad Y|| is Rayleigh with scale sqrt(lambda2).
double expected_perimeter_isotropic(double area, double u, SpectralMoment lambda2);

/// Perimeter of the ellipse with semi-axes a and b, 4 max(a,b) E(e), through
/// the Gauss-Kummer arithmetic-geometric-mean series (relative error < 1e-12).
double ellipse_perimeter(double a, double b);

/// Mean perimeter for X(s) = Y(A s) where A has singular values sigma1 >= sigma2:
/// the isotropic value scaled by ellipse(sigma1, sigma2) / (2 pi).
double expected_perimeter_affine(double area, double u, SpectralMoment lambda2, double sigma1,
                                 double sigma2);

}  // namespace excursion
