#include "excursion/grf.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include <fftw3.h>

#include "excursion/rng.hpp"

namespace excursion {
namespace {

// The FFTW planner is not reentrant; plan execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

PlanHandle make_inplace_plan(int n, fftw_complex* buffer) {
  std::lock_guard lock(planner_mutex());
  fftw_plan plan = fftw_plan_dft_2d(n, n, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plan) throw EmbeddingFailure("FFTW could not plan a " + std::to_string(n) + "^2 transform");
  return PlanHandle(plan);
}

int next_power_of_two(int n) {
  int k = 1;
  while (k < n) k *= 2;
  return k;
}

}  // namespace

void AnisotropyTransform::validate() const {
  if (!(sigma2 > 0.0) || !(sigma1 >= sigma2) || !std::isfinite(sigma1))
    throw InvalidArgument("anisotropy requires sigma1 >= sigma2 > 0");
  if (!(theta >= 0.0) || !(theta < std::numbers::pi))
    throw InvalidArgument("anisotropy angle must lie in [0, pi)");
}

Eigen::Matrix2d AnisotropyTransform::matrix() const {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2d rot;
  rot << c, s, -s, c;
  return Eigen::Vector2d(sigma1, sigma2).asDiagonal() * rot;
}

Eigen::Matrix2d AnisotropyTransform::symmetric_matrix() const {
  const Eigen::Matrix2d rot = [&] {
    Eigen::Matrix2d r;
    r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    return r;
  }();
  return rot.transpose() * Eigen::Vector2d(sigma1, sigma2).asDiagonal() * rot;
}

double transformed_cov(const MaternModel& model, const AnisotropyTransform& transform,
                       const Eigen::Vector2d& h) {
  const double c = std::cos(transform.theta);
  const double s = std::sin(transform.theta);
  const double x = transform.sigma1 * (c * h.x() + s * h.y());
  const double y = transform.sigma2 * (-s * h.x() + c * h.y());
  return matern_cov(model, std::hypot(x, y));
}

struct CirculantSampler::Impl {
  GridSpec spec;
  int torus = 0;
  int factor = 0;
  std::int64_t clamped = 0;
  double min_ratio = 0.0;
  std::vector<double> root_spectrum;  // sqrt(lambda / N^2), storage order
  PlanHandle plan;

  explicit Impl(const GridSpec& s) : spec(s) {}
};

CirculantSampler::CirculantSampler(const GridSpec& spec, const MaternModel& model,
                                   const AnisotropyTransform& transform)
    : impl_(std::make_unique<Impl>(spec)) {
  transform.validate();
  const int base = next_power_of_two(spec.size());
  const double eps = spec.pixel_width();

  for (int factor = 2;; factor *= 2) {
    const int n = factor * base;
    const auto points = static_cast<std::int64_t>(n) * n;
    if (points > kMaxTorusPoints)
      throw EmbeddingFailure("circulant embedding failed up to a " + std::to_string(n / 2) +
                             "^2 torus; the covariance decays too slowly for this window");

    FftwBuffer buf(static_cast<std::size_t>(points));
    PlanHandle plan = make_inplace_plan(n, buf.data);

    const int half = n / 2;
    auto lag = [&](int k) { return (k <= half ? k : k - n) * eps; };
    for (int r = 0; r < n; ++r) {
      const double hy = lag(r);
      for (int c = 0; c < n; ++c) {
        const double hx = lag(c);
        double v = transformed_cov(model, transform, {hx, hy});
        // Lags exactly at n/2 are ambiguous in sign; averaging keeps the
        // base array even so its spectrum is real.
        if (c == half && r == half)
          v = 0.5 * (v + transformed_cov(model, transform, {-hx, hy}));
        else if (c == half)
          v = 0.5 * (v + transformed_cov(model, transform, {-hx, hy}));
        else if (r == half)
          v = 0.5 * (v + transformed_cov(model, transform, {hx, -hy}));
        auto* cell = buf.data[static_cast<std::size_t>(r) * n + c];
        cell[0] = v;
        cell[1] = 0.0;
      }
    }
    // The base array is real and even, so forward and backward DFTs agree.
    fftw_execute_dft(plan.get(), buf.data, buf.data);

    double max_eig = 0.0;
    double min_eig = 0.0;
    for (std::int64_t k = 0; k < points; ++k) {
      max_eig = std::max(max_eig, buf.data[k][0]);
      min_eig = std::min(min_eig, buf.data[k][0]);
    }
    if (!(max_eig > 0.0)) throw EmbeddingFailure("covariance spectrum has no positive mass");
    if (min_eig < -kNegativeTolerance * max_eig) continue;

    impl_->torus = n;
    impl_->factor = factor;
    impl_->min_ratio = min_eig / max_eig;
    impl_->root_spectrum.resize(static_cast<std::size_t>(points));
    const double scale = 1.0 / static_cast<double>(points);
    for (std::int64_t k = 0; k < points; ++k) {
      double lambda = buf.data[k][0];
      if (lambda < 0.0) {
        lambda = 0.0;
        ++impl_->clamped;
      }
      impl_->root_spectrum[static_cast<std::size_t>(k)] = std::sqrt(lambda * scale);
    }
    impl_->plan = std::move(plan);
    return;
  }
}

CirculantSampler::~CirculantSampler() = default;
CirculantSampler::CirculantSampler(CirculantSampler&&) noexcept = default;
CirculantSampler& CirculantSampler::operator=(CirculantSampler&&) noexcept = default;

std::pair<ScalarField, ScalarField> CirculantSampler::sample_pair(std::uint64_t seed,
                                                                  std::uint64_t pair) const {
  const int n = impl_->torus;
  const auto points = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  FftwBuffer buf(points);
  Xoshiro256pp rng(seed, pair);
  for (std::size_t k = 0; k < points; ++k) {
    const auto [re, im] = rng.normal_pair();
    const double w = impl_->root_spectrum[k];
    buf.data[k][0] = w * re;
    buf.data[k][1] = w * im;
  }
  fftw_execute_dft(impl_->plan.get(), buf.data, buf.data);

  const int m = impl_->spec.size();
  RasterArray<double> real(m, m);
  RasterArray<double> imag(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const auto* cell = buf.data[static_cast<std::size_t>(j) * n + i];
      real(j, i) = cell[0];
      imag(j, i) = cell[1];
    }
  return {ScalarField(impl_->spec, std::move(real)), ScalarField(impl_->spec, std::move(imag))};
}

ScalarField CirculantSampler::sample(std::uint64_t seed, std::uint64_t replication) const {
  auto fields = sample_pair(seed, replication / 2);
  return replication % 2 == 0 ? std::move(fields.first) : std::move(fields.second);
}

const GridSpec& CirculantSampler::spec() const { return impl_->spec; }
int CirculantSampler::torus_size() const { return impl_->torus; }
int CirculantSampler::padding_factor() const { return impl_->factor; }
std::int64_t CirculantSampler::clamped_eigenvalues() const { return impl_->clamped; }
double CirculantSampler::min_eigenvalue_ratio() const { return impl_->min_ratio; }

ScalarField sample_field(const SimConfig& config) {
  return CirculantSampler(config.spec, config.model, config.transform)
      .sample(config.seed, config.replication);
}

double empirical_lambda2(std::span<const ScalarField> fields) {
  if (fields.empty()) throw InvalidArgument("need at least one field");
  double sum = 0.0;
  std::int64_t count = 0;
  for (const auto& f : fields) {
    const int n = f.size();
    if (n < 3) throw InvalidArgument("central differences need M >= 3");
    const double inv = 1.0 / (2.0 * f.spec().pixel_width());
    const auto& v = f.values();
    for (int j = 1; j < n - 1; ++j)
      for (int i = 1; i < n - 1; ++i) {
        const double d = (v(j, i + 1) - v(j, i - 1)) * inv;
        sum += d * d;
      }
    count += static_cast<std::int64_t>(n - 2) * (n - 2);
  }
  return sum / static_cast<double>(count);
}

}  // namespace excursion
