#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace excursion::stats {

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;  // of the values
  double sd = 0.0;    // sample standard deviation of the values (n - 1)
  double mae = 0.0;
  /// Percent; empty when not requested.
  std::optional<double> mape;
};

/// Errors of `values` against `references`. With want_mape, any zero
/// reference throws UndefinedMape.
SampleSummary summary(std::span<const double> values, std::span<const double> references,
                      bool want_mape = true);

double mean(std::span<const double> x);
/// Sample standard deviation with n - 1 denominator; 0 for n < 2.
double stddev(std::span<const double> x);

/// Inverse standard normal CDF: Acklam's rational approximation followed by
/// one Halley step against erfc, giving close to full double precision.
double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x): series for x < a + 1,
/// Lentz continued fraction otherwise.
double regularized_gamma_p(double a, double x);
double chi2_cdf(double df, double x);
/// Wilson-Hilferty start refined by Newton iterations on chi2_cdf.
double chi2_quantile(double df, double p);

struct ShapiroWilk {
  double w;
  double p_value;
};

/// Royston's AS R94 approximation, valid for 3 <= n <= 5000.
ShapiroWilk shapiro_wilk(std::span<const double> sample);

/// Squared Mahalanobis distance of every row of `samples` (n x k) to
/// `center`, using the sample covariance of the rows.
Eigen::VectorXd mahalanobis_sq(const Eigen::MatrixXd& samples, const Eigen::VectorXd& center);

/// Principal-component scores of the rows, each component scaled to unit
/// sample variance (n x k). Throws DegenerateCovariance for singular input.
Eigen::MatrixXd standardized_pc_scores(const Eigen::MatrixXd& samples);

/// Shapiro-Wilk on the pooled standardized principal-component scores; a
/// joint normality screen for multivariate samples.
ShapiroWilk multivariate_shapiro_wilk(const Eigen::MatrixXd& samples);

struct Normal {};
struct ChiSquared {
  double df;
};

struct QQPoint {
  double theoretical;
  double sample;
};

/// Sorted sample against quantiles at plotting positions (i - 0.5) / n.
std::vector<QQPoint> qq_points(std::span<const double> sample, Normal);
std::vector<QQPoint> qq_points(std::span<const double> sample, ChiSquared dist);

}  // namespace excursion::stats
