#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>

#include <Eigen/Core>

#include "excursion/gkf.hpp"
#include "excursion/grid.hpp"

namespace excursion {

/// Geometric anisotropy A = diag(sigma1, sigma2) * R(theta) with
/// R(theta) = [[cos, sin], [-sin, cos]]. The field X(s) = Y(A s) then has
/// covariance r(||A h||).
struct AnisotropyTransform {
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double theta = 0.0;

  static AnisotropyTransform isotropic() { return {}; }

  /// Throws InvalidArgument unless sigma1 >= sigma2 > 0 and 0 <= theta < pi.
  void validate() const;
  Eigen::Matrix2d matrix() const;
  /// The symmetric positive-definite B with ||B h|| = ||A h||; eigenvalues sigma1, sigma2.
  Eigen::Matrix2d symmetric_matrix() const;
};

struct SimConfig {
  GridSpec spec;
  MaternModel model;
  AnisotropyTransform transform;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
};

double transformed_cov(const MaternModel& model, const AnisotropyTransform& transform,
                       const Eigen::Vector2d& h);
inline double transformed_cov(const SimConfig& config, const Eigen::Vector2d& h) {
  return transformed_cov(config.model, config.transform, h);
}

/// Exact Gaussian sampler on the grid by circulant embedding.
///
/// The covariance is laid out on an N x N periodic torus with N = factor * K,
/// K the smallest power of two >= M. Its 2D DFT gives the torus eigenvalues;
/// the factor starts at 2 and doubles until the most negative eigenvalue is
/// no worse than -1e-8 of the largest (remaining tiny negatives are set to
/// zero and reported through clamped_eigenvalues()). Sampling multiplies
/// circular complex white noise by sqrt(eigenvalue / N^2), applies the DFT
/// and keeps the lower-left M x M corner.
///
/// Real and imaginary parts of one transform are independent fields with the
/// target law; replications 2k and 2k+1 are those two parts of the draw for
/// stream (seed, k). sample() is const and safe to call concurrently.
class CirculantSampler {
 public:
  static constexpr double kNegativeTolerance = 1e-8;
  static constexpr std::int64_t kMaxTorusPoints = std::int64_t{1} << 30;

  CirculantSampler(const GridSpec& spec, const MaternModel& model,
                   const AnisotropyTransform& transform);
  ~CirculantSampler();
  CirculantSampler(CirculantSampler&&) noexcept;
  CirculantSampler& operator=(CirculantSampler&&) noexcept;

  ScalarField sample(std::uint64_t seed, std::uint64_t replication) const;
  /// Replications (2 * pair, 2 * pair + 1) from a single transform.
  std::pair<ScalarField, ScalarField> sample_pair(std::uint64_t seed, std::uint64_t pair) const;

  const GridSpec& spec() const;
  int torus_size() const;
  int padding_factor() const;
  /// Number of eigenvalues in (-1e-8 max, 0) that were set to zero.
  std::int64_t clamped_eigenvalues() const;
  double min_eigenvalue_ratio() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One realization for the configuration's (seed, replication).
ScalarField sample_field(const SimConfig& config);

/// Mean of ((X(s + eps e1) - X(s - eps e1)) / (2 eps))^2 over interior grid
/// points of every field: an estimate of lambda2 for unit-variance fields.
double empirical_lambda2(std::span<const ScalarField> fields);

}  // namespace excursion
