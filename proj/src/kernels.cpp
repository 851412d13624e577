#include "fpnn/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fpnn/errors.hpp"

namespace fpnn {

namespace {

constexpr double kPi = std::numbers::pi;

// |sin(pi d / 2)| below this is treated as a removable singularity.
constexpr double kSingularity = 1e-12;

double squared_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw DimensionMismatch("kernel arguments have dimensions " + std::to_string(x.size()) +
                            " and " + std::to_string(y.size()));
  double acc = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double diff = x[d] - y[d];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

Cutoff::Cutoff(int j) : j_(j) {
  if (j < 1) throw InvalidParameter("cut-off J must be >= 1, got " + std::to_string(j));
}

SmoothingSigma::SmoothingSigma(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidParameter("smoothing sigma must be positive, got " + std::to_string(sigma));
}

double log_gaussian_parzen(std::span<const double> x, std::span<const double> y,
                           SmoothingSigma sigma) {
  const double s2 = sigma.value() * sigma.value();
  const double dim = static_cast<double>(x.size());
  return -0.5 * dim * std::log(2.0 * kPi * s2) - squared_distance(x, y) / (2.0 * s2);
}

double gaussian_parzen(std::span<const double> x, std::span<const double> y, SmoothingSigma sigma) {
  return std::exp(log_gaussian_parzen(x, y, sigma));
}

double dirichlet(double x, double y, Cutoff J) {
  const double delta = x - y;
  const double den = std::sin(0.5 * kPi * delta);
  const int j = J.value();
  if (std::abs(den) < kSingularity) return 2.0 * j + 1.0;
  return std::sin((j + 0.5) * kPi * delta) / den;
}

double fejer(double x, double y, Cutoff J) {
  // 1 - cos(t) = 2 sin^2(t/2); the squared-sine form avoids cancellation for
  // small differences.
  const double delta = x - y;
  const double den = std::sin(0.5 * kPi * delta);
  const double order = J.value() + 1.0;
  if (std::abs(den) < kSingularity) return order;
  const double num = std::sin(0.5 * order * kPi * delta);
  return (num * num) / (order * den * den);
}

void fill_trig_basis(double x, std::span<double> cosines, std::span<double> sines) {
  const std::size_t n = cosines.size();
  cosines[0] = 1.0;
  sines[0] = 0.0;
  if (n < 2) return;
  const double c1 = std::cos(kPi * x);
  const double s1 = std::sin(kPi * x);
  cosines[1] = c1;
  sines[1] = s1;
  for (std::size_t j = 2; j < n; ++j) {
    cosines[j] = cosines[j - 1] * c1 - sines[j - 1] * s1;
    sines[j] = cosines[j - 1] * s1 + sines[j - 1] * c1;
  }
}

TrigBasisTable::TrigBasisTable(double x, Cutoff J)
    : cos_(static_cast<std::size_t>(J.value()) + 1), sin_(cos_.size()) {
  fill_trig_basis(x, cos_, sin_);
}

TrigBasisTable trig_basis(double x, Cutoff J) { return TrigBasisTable(x, J); }

}  // namespace fpnn
