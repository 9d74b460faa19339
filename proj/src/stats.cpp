#include "excursion/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "excursion/errors.hpp"
#include "excursion/gkf.hpp"

namespace excursion::stats {
namespace {

template <std::size_t N>
double poly(const double (&c)[N], double x) {
  double r = c[N - 1];
  for (std::size_t k = N - 1; k-- > 0;) r = r * x + c[k];
  return r;
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples) {
  const Eigen::MatrixXd centered = samples.rowwise() - samples.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(samples.rows() - 1);
}

void require_nonsingular(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& eig) {
  const auto& ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 1e-12 * std::max(ev.maxCoeff(), 0.0)) || !(ev.maxCoeff() > 0.0))
    throw DegenerateCovariance("sample covariance is singular");
}

}  // namespace

double mean(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("mean of an empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double mu = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

SampleSummary summary(std::span<const double> values, std::span<const double> references,
                      bool want_mape) {
  if (values.empty() || values.size() != references.size())
    throw InvalidArgument("summary needs equal-length, nonempty samples");
  SampleSummary s;
  s.n = values.size();
  s.mean = mean(values);
  s.sd = stddev(values);
  double abs_err = 0.0;
  double rel_err = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double e = std::abs(values[k] - references[k]);
    abs_err += e;
    if (want_mape) {
      if (references[k] == 0.0) throw UndefinedMape("MAPE undefined: a reference value is zero");
      rel_err += e / std::abs(references[k]);
    }
  }
  s.mae = abs_err / static_cast<double>(s.n);
  if (want_mape) s.mape = 100.0 * rel_err / static_cast<double>(s.n);
  return s;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("quantile probability must lie in (0, 1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley step on Phi(x) - p, evaluated through the tail nearest to p.
  const double e = p < 0.5 ? normal_cdf(x) - p : (1.0 - p) - 0.5 * std::erfc(x / std::numbers::sqrt2);
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw InvalidArgument("gamma shape must be positive");
  if (x < 0.0) throw InvalidArgument("gamma argument must be nonnegative");
  if (x == 0.0) return 0.0;
  const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 1000; ++k) {
      term *= x / (a + k);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(log_prefix);
  }
  // Q(a, x) by modified Lentz.
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int k = 1; k < 1000; ++k) {
    const double an = -k * (k - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(log_prefix) * h;
}

double chi2_cdf(double df, double x) {
  if (!(df > 0.0)) throw InvalidArgument("degrees of freedom must be positive");
  return x <= 0.0 ? 0.0 : regularized_gamma_p(0.5 * df, 0.5 * x);
}

double chi2_quantile(double df, double p) {
  if (!(df > 0.0)) throw InvalidArgument("degrees of freedom must be positive");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("quantile probability must lie in (0, 1)");
  const double z = normal_quantile(p);
  const double v = 2.0 / (9.0 * df);
  double x = df * std::pow(std::max(1.0 - v + z * std::sqrt(v), 1e-3), 3);
  const double k = 0.5 * df;
  for (int it = 0; it < 50; ++it) {
    const double f = chi2_cdf(df, x) - p;
    const double density = std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::numbers::ln2 - std::lgamma(k));
    if (!(density > 0.0)) break;
    double next = x - f / density;
    if (next <= 0.0) next = 0.5 * x;
    const bool done = std::abs(next - x) <= 1e-14 * x;
    x = next;
    if (done) break;
  }
  return x;
}

ShapiroWilk shapiro_wilk(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 3 || n > 5000) throw InvalidArgument("Shapiro-Wilk needs 3 <= n <= 5000");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  if (!(x.back() - x.front() > 0.0)) throw InvalidArgument("Shapiro-Wilk: sample has zero range");

  static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
  static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static constexpr double c3[] = {0.5440, -0.39978, 0.025054, -6.714e-4};
  static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};
  static constexpr double g[] = {-2.273, 0.459};

  const std::size_t half = n / 2;
  const double an = static_cast<double>(n);
  // Coefficients a_1..a_half for the lower half; antisymmetric in the upper.
  std::vector<double> coef(half);
  if (n == 3) {
    coef[0] = std::numbers::sqrt2 / 2.0;
  } else {
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, rsn) - m[0] / ssumm2;
    std::size_t first;
    double fac;
    if (n > 5) {
      const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      coef[1] = a2;
      first = 2;
    } else {
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
      first = 1;
    }
    coef[0] = a1;
    for (std::size_t i = first; i < half; ++i) coef[i] = -m[i] / fac;
  }

  const double mu = mean(x);
  double ssq = 0.0;
  for (double v : x) ssq += (v - mu) * (v - mu);
  double num = 0.0;
  for (std::size_t i = 0; i < half; ++i) num += coef[i] * (x[n - 1 - i] - x[i]);
  const double w = std::min(1.0, num * num / ssq);

  if (n == 3) {
    constexpr double pi6 = 6.0 / std::numbers::pi;
    constexpr double stqr = std::numbers::pi / 3.0;
    return {w, std::clamp(pi6 * (std::asin(std::sqrt(w)) - stqr), 0.0, 1.0)};
  }
  const double w1 = std::log1p(-w);
  double y;
  double mean_y;
  double sd_y;
  if (n <= 11) {
    const double gamma = poly(g, an);
    if (w1 >= gamma) return {w, 1e-99};
    y = -std::log(gamma - w1);
    mean_y = poly(c3, an);
    sd_y = std::exp(poly(c4, an));
  } else {
    const double ln_n = std::log(an);
    y = w1;
    mean_y = poly(c5, ln_n);
    sd_y = std::exp(poly(c6, ln_n));
  }
  if (!std::isfinite(y)) return {w, 1.0};
  return {w, 1.0 - normal_cdf((y - mean_y) / sd_y)};
}

Eigen::VectorXd mahalanobis_sq(const Eigen::MatrixXd& samples, const Eigen::VectorXd& center) {
  const Eigen::Index n = samples.rows();
  const Eigen::Index k = samples.cols();
  if (center.size() != k) throw InvalidArgument("center dimension does not match samples");
  if (n <= k) throw InvalidArgument("Mahalanobis distances need more samples than dimensions");
  const Eigen::MatrixXd cov = sample_covariance(samples);
  require_nonsingular(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cov, Eigen::EigenvaluesOnly));
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  const Eigen::MatrixXd diff = (samples.rowwise() - center.transpose()).transpose();
  const Eigen::MatrixXd solved = ldlt.solve(diff);
  return (diff.array() * solved.array()).colwise().sum().transpose();
}

Eigen::MatrixXd standardized_pc_scores(const Eigen::MatrixXd& samples) {
  if (samples.rows() <= samples.cols())
    throw InvalidArgument("principal components need more samples than dimensions");
  const Eigen::MatrixXd cov = sample_covariance(samples);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  require_nonsingular(eig);
  const Eigen::MatrixXd centered = samples.rowwise() - samples.colwise().mean();
  const Eigen::VectorXd inv_sd = eig.eigenvalues().cwiseSqrt().cwiseInverse();
  return (centered * eig.eigenvectors()) * inv_sd.asDiagonal();
}

ShapiroWilk multivariate_shapiro_wilk(const Eigen::MatrixXd& samples) {
  const Eigen::MatrixXd scores = standardized_pc_scores(samples);
  std::vector<double> pooled(scores.data(), scores.data() + scores.size());
  return shapiro_wilk(pooled);
}

namespace {

template <typename Quantile>
std::vector<QQPoint> qq_impl(std::span<const double> sample, Quantile&& quantile) {
  if (sample.empty()) throw InvalidArgument("qq plot of an empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<QQPoint> out(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    out[i] = {quantile((static_cast<double>(i) + 0.5) / n), sorted[i]};
  return out;
}

}  // namespace

std::vector<QQPoint> qq_points(std::span<const double> sample, Normal) {
  return qq_impl(sample, [](double p) { return normal_quantile(p); });
}

std::vector<QQPoint> qq_points(std::span<const double> sample, ChiSquared dist) {
  return qq_impl(sample, [df = dist.df](double p) { return chi2_quantile(df, p); });
}

}  // namespace excursion::stats
