#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "excursion/errors.hpp"
#include "excursion/rng.hpp"
#include "excursion/stats.hpp"

using namespace excursion;
using namespace excursion::stats;

namespace {

std::vector<double> normal_sample(Xoshiro256pp& rng, std::size_t n) {
  std::vector<double> x;
  while (x.size() < n) {
    const auto [a, b] = rng.normal_pair();
    x.push_back(a);
    if (x.size() < n) x.push_back(b);
  }
  return x;
}

// n x 3 draws from N(mu, L L^T).
Eigen::MatrixXd mvn_sample(Xoshiro256pp& rng, int n, const Eigen::Vector3d& mu, const Eigen::Matrix3d& l) {
  Eigen::MatrixXd out(n, 3);
  for (int r = 0; r < n; ++r) {
    const auto z = normal_sample(rng, 3);
    out.row(r) = (mu + l * Eigen::Vector3d(z[0], z[1], z[2])).transpose();
  }
  return out;
}

}  // namespace

TEST_CASE("summary arithmetic") {
  const std::vector<double> v{1.0, 3.0};
  const std::vector<double> r{2.0, 2.0};
  const auto s = summary(v, r);
  CHECK(s.n == 2);
  CHECK(s.mean == 2.0);
  CHECK(s.sd == doctest::Approx(std::sqrt(2.0)));
  CHECK(s.mae == 1.0);
  REQUIRE(s.mape.has_value());
  CHECK(*s.mape == doctest::Approx(50.0));

  const auto same = summary(r, r);
  CHECK(same.mae == 0.0);
  CHECK(*same.mape == 0.0);

  const std::vector<double> zero_ref{0.0, 2.0};
  CHECK_THROWS_AS(summary(v, zero_ref), UndefinedMape);
  CHECK_FALSE(summary(v, zero_ref, false).mape.has_value());
  CHECK_THROWS_AS(summary(std::vector<double>{}, std::vector<double>{}), InvalidArgument);
}

TEST_CASE("summary is permutation invariant") {
  Xoshiro256pp rng(5, 0);
  for (int trial = 0; trial < 50; ++trial) {
    auto v = normal_sample(rng, 30);
    std::vector<double> r(v.size());
    for (auto& x : r) x = 5.0 + rng.uniform_open0();
    const auto base = summary(v, r);
    std::vector<std::size_t> order(v.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<double> pv;
    std::vector<double> pr;
    for (auto k : order) {
      pv.push_back(v[k]);
      pr.push_back(r[k]);
    }
    const auto permuted = summary(pv, pr);
    CHECK(permuted.mean == doctest::Approx(base.mean).epsilon(1e-13));
    CHECK(permuted.sd == doctest::Approx(base.sd).epsilon(1e-13));
    CHECK(permuted.mae == doctest::Approx(base.mae).epsilon(1e-13));
    CHECK(*permuted.mape == doctest::Approx(*base.mape).epsilon(1e-13));
  }
}

TEST_CASE("normal quantile against Boost") {
  const boost::math::normal_distribution<double> n01;
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  for (double p : {1e-12, 1e-6, 0.001, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.97575, 0.999, 1.0 - 1e-9}) {
    CAPTURE(p);
    CHECK(std::abs(normal_quantile(p) - boost::math::quantile(n01, p)) < 1e-9);
  }
  CHECK_THROWS_AS(normal_quantile(0.0), InvalidArgument);
  CHECK_THROWS_AS(normal_quantile(1.0), InvalidArgument);
}

TEST_CASE("regularized gamma and chi-squared against Boost") {
  for (double a : {0.5, 1.0, 2.5, 10.0, 50.0})
    for (double x : {0.01, 0.5, 1.0, 3.0, 10.0, 60.0}) {
      CAPTURE(a);
      CAPTURE(x);
      CHECK(regularized_gamma_p(a, x) == doctest::Approx(boost::math::gamma_p(a, x)).epsilon(1e-12));
    }
  CHECK(chi2_quantile(3.0, 0.5) == doctest::Approx(2.3660).epsilon(1e-4));
  for (double df : {1.0, 2.0, 3.0, 7.0, 30.0})
    for (double p : {0.001, 0.05, 0.5, 0.95, 0.999}) {
      const boost::math::chi_squared_distribution<double> chi(df);
      CAPTURE(df);
      CAPTURE(p);
      CHECK(chi2_quantile(df, p) == doctest::Approx(boost::math::quantile(chi, p)).epsilon(1e-10));
      CHECK(chi2_cdf(df, chi2_quantile(df, p)) == doctest::Approx(p).epsilon(1e-10));
    }
  CHECK_THROWS_AS(chi2_quantile(3.0, 1.0), InvalidArgument);
}

TEST_CASE("Shapiro-Wilk reference values") {
  // References from an independent implementation of the same algorithm.
  const std::vector<double> a{2.1, 3.4, 1.9, 5.6, 4.4, 3.0, 2.8, 4.1, 3.7, 2.2};
  CHECK(shapiro_wilk(a).w == doctest::Approx(0.9505415013308331).epsilon(1e-6));
  CHECK(shapiro_wilk(a).p_value == doctest::Approx(0.6749103437454328).epsilon(1e-4));
  const std::vector<double> skewed{0.1, 0.5, 0.9, 1.2, 4.8, 0.3, 0.2, 0.05, 2.2, 0.7, 0.4, 6.1};
  CHECK(shapiro_wilk(skewed).w == doctest::Approx(0.7134896283704251).epsilon(1e-6));
  CHECK(shapiro_wilk(skewed).p_value == doctest::Approx(0.00114006178544064).epsilon(1e-3));
  const std::vector<double> three{1.0, 2.0, 4.0};
  CHECK(shapiro_wilk(three).w == doctest::Approx(0.9642857142857142).epsilon(1e-9));
  CHECK(shapiro_wilk(three).p_value == doctest::Approx(0.6368868450289689).epsilon(1e-6));
}

TEST_CASE("Shapiro-Wilk rejects an evenly spaced sample") {
  std::vector<double> x(200);
  for (int k = 0; k < 200; ++k) x[static_cast<std::size_t>(k)] = k + 1.0;
  const auto sw = shapiro_wilk(x);
  CHECK(sw.p_value < 0.01);
  CHECK(sw.w == doctest::Approx(0.9546116147545176).epsilon(1e-6));
}

TEST_CASE("Shapiro-Wilk input checks and range") {
  CHECK_THROWS_AS(shapiro_wilk(std::vector<double>{1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(shapiro_wilk(std::vector<double>(10, 3.0)), InvalidArgument);
  Xoshiro256pp rng(6, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = normal_sample(rng, 3 + trial);
    const auto sw = shapiro_wilk(x);
    CHECK(sw.w > 0.0);
    CHECK(sw.w <= 1.0);
    CHECK(sw.p_value >= 0.0);
    CHECK(sw.p_value <= 1.0);
  }
}

TEST_CASE("Shapiro-Wilk W is one for normal scores") {
  std::vector<double> scores;
  const int n = 50;
  for (int k = 1; k <= n; ++k) scores.push_back(normal_quantile((k - 0.375) / (n + 0.25)));
  CHECK(shapiro_wilk(scores).w > 0.995);
  CHECK(shapiro_wilk(scores).p_value > 0.99);
}

TEST_CASE("Shapiro-Wilk is calibrated under the null") {
  Xoshiro256pp rng(2023, 7);
  int rejections = 0;
  const int trials = 500;
  for (int trial = 0; trial < trials; ++trial)
    rejections += shapiro_wilk(normal_sample(rng, 200)).p_value < 0.05;
  const double rate = static_cast<double>(rejections) / trials;
  CHECK(rate > 0.03);
  CHECK(rate < 0.07);
}

TEST_CASE("Mahalanobis distance in one dimension") {
  Eigen::MatrixXd x(4, 1);
  x << 1.0, 2.0, 4.0, 7.0;
  const double mean = 3.5;
  const double var = ((1 - mean) * (1 - mean) + (2 - mean) * (2 - mean) + (4 - mean) * (4 - mean) + (7 - mean) * (7 - mean)) / 3.0;
  const auto d = mahalanobis_sq(x, Eigen::VectorXd::Constant(1, 2.0));
  for (int r = 0; r < 4; ++r) CHECK(d(r) == doctest::Approx((x(r, 0) - 2.0) * (x(r, 0) - 2.0) / var));
}

TEST_CASE("Mahalanobis distance is affine invariant") {
  Xoshiro256pp rng(8, 0);
  Eigen::Matrix3d l;
  l << 1.0, 0.0, 0.0, 0.5, 2.0, 0.0, -0.3, 0.4, 0.7;
  const auto x = mvn_sample(rng, 60, Eigen::Vector3d(1.0, -2.0, 0.5), l);
  const Eigen::VectorXd c = Eigen::Vector3d(0.9, -1.8, 0.7);
  Eigen::Matrix3d a;
  a << 2.0, 1.0, 0.0, 0.0, -1.0, 3.0, 1.0, 0.0, 0.5;
  const Eigen::Vector3d shift(10.0, -4.0, 2.0);
  const Eigen::MatrixXd y = (x * a.transpose()).rowwise() + shift.transpose();
  const Eigen::VectorXd cy = a * c + shift;
  const auto dx = mahalanobis_sq(x, c);
  const auto dy = mahalanobis_sq(y, cy);
  for (Eigen::Index r = 0; r < dx.size(); ++r) CHECK(dy(r) == doctest::Approx(dx(r)).epsilon(1e-9));
}

TEST_CASE("Mahalanobis distances to the true mean average about k") {
  Xoshiro256pp rng(8, 1);
  Eigen::Matrix3d l;
  l << 1.0, 0.0, 0.0, 0.8, 1.5, 0.0, 0.1, -0.2, 0.6;
  const Eigen::Vector3d mu(3.0, 1.0, -1.0);
  const auto x = mvn_sample(rng, 2000, mu, l);
  const auto d = mahalanobis_sq(x, mu);
  CHECK(d.mean() == doctest::Approx(3.0).epsilon(0.05));
  // Their quantiles track chi2(3).
  std::vector<double> dv(d.data(), d.data() + d.size());
  for (const auto& q : qq_points(dv, ChiSquared{3.0}))
    if (q.theoretical < 8.0) CHECK(std::abs(q.sample - q.theoretical) < 0.1 * q.theoretical + 0.05);
}

TEST_CASE("Mahalanobis with a singular covariance is reported") {
  Eigen::MatrixXd x(5, 2);
  x << 1, 2, 2, 4, 3, 6, 4, 8, 5, 10;
  CHECK_THROWS_AS(mahalanobis_sq(x, Eigen::Vector2d(0.0, 0.0)), DegenerateCovariance);
}

TEST_CASE("principal-component scores are standardized and uncorrelated") {
  Xoshiro256pp rng(8, 2);
  Eigen::Matrix3d l;
  l << 2.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.5, 0.5, 0.2;
  const auto x = mvn_sample(rng, 300, Eigen::Vector3d::Zero(), l);
  const auto s = standardized_pc_scores(x);
  const Eigen::MatrixXd centered = s.rowwise() - s.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / (s.rows() - 1.0);
  CHECK((cov - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(multivariate_shapiro_wilk(x).p_value > 0.01);
}

TEST_CASE("qq points") {
  Xoshiro256pp rng(8, 3);
  const auto x = normal_sample(rng, 400);
  const auto qq = qq_points(x, Normal{});
  REQUIRE(qq.size() == 400);
  CHECK(std::is_sorted(qq.begin(), qq.end(), [](auto a, auto b) { return a.sample < b.sample; }));
  CHECK(qq.front().theoretical == doctest::Approx(normal_quantile(0.5 / 400)));
  double worst = 0.0;
  for (std::size_t k = 20; k + 20 < qq.size(); ++k) worst = std::max(worst, std::abs(qq[k].sample - qq[k].theoretical));
  CHECK(worst < 0.25);

  // A sample made of the theoretical quantiles themselves lies on the diagonal.
  std::vector<double> exact;
  for (const auto& q : qq) exact.push_back(q.theoretical);
  for (const auto& q : qq_points(exact, Normal{})) CHECK(q.sample == doctest::Approx(q.theoretical));
}
