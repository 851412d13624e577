#include "fpnn/fourier_density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fpnn/errors.hpp"

namespace fpnn {

FourierCoefficients fourier_coeffs(std::span<const double> samples, Cutoff J) {
  if (samples.empty()) throw EmptySample("cannot estimate coefficients from no samples");
  const auto n = static_cast<std::size_t>(J.value()) + 1;
  FourierCoefficients c{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), samples.size()};
  std::vector<double> cosines(n), sines(n);
  for (double x : samples) {
    fill_trig_basis(x, cosines, sines);
    for (std::size_t j = 1; j < n; ++j) {
      c.A[j] += cosines[j];
      c.B[j] += sines[j];
    }
  }
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (std::size_t j = 1; j < n; ++j) {
    c.A[j] *= inv;
    c.B[j] *= inv;
  }
  c.A[0] = 1.0;
  c.B[0] = 0.0;
  return c;
}

double density_canonical(double x, std::span<const double> samples, Cutoff J) {
  if (samples.empty()) throw EmptySample("cannot estimate a density from no samples");
  double acc = 0.0;
  for (double xr : samples) acc += fejer(x, xr, J);
  return acc / (2.0 * static_cast<double>(samples.size()));
}

double density_noncanonical(double x, const FourierCoefficients& c) {
  const int J = c.cutoff();
  const auto n = static_cast<std::size_t>(J) + 1;
  std::vector<double> cosines(n), sines(n);
  fill_trig_basis(x, cosines, sines);
  double out = 0.5 * c.A[0];
  for (std::size_t j = 1; j < n; ++j) {
    const double weight = static_cast<double>(n - j) / static_cast<double>(n);
    out += weight * (c.A[j] * cosines[j] + c.B[j] * sines[j]);
  }
  return out;
}

int hart_cutoff(std::span<const double> samples, Cutoff J_max) {
  const auto c = fourier_coeffs(samples, J_max);
  const double penalty = 2.0 / (static_cast<double>(c.sample_count) + 1.0);
  double energy = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  int best_j = 1;
  for (int j = 1; j <= J_max.value(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    energy += c.A[k] * c.A[k] + c.B[k] * c.B[k];
    const double criterion = energy - penalty * j;
    // A gain has to beat accumulated rounding in `energy` to count.
    const double noise = 1e-12 * std::max(1.0, std::abs(best));
    if (j == 1 || criterion > best + noise) {
      best = criterion;
      best_j = j;
    }
  }
  return best_j;
}

int median_cutoff(std::span<const int> per_pair) {
  if (per_pair.empty()) throw EmptySelection("no per-pair cut-offs to take the median of");
  std::vector<int> sorted(per_pair.begin(), per_pair.end());
  const auto mid = (sorted.size() - 1) / 2;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid), sorted.end());
  return sorted[mid];
}

int fixed_cutoff(std::size_t total_instances, std::size_t num_classes) {
  if (total_instances < 1 || num_classes < 1)
    throw InvalidParameter("fixed cut-off needs R >= 1 and C >= 1");
  const double per_class = static_cast<double>(total_instances) / static_cast<double>(num_classes);
  const double scaled = 2.0 * std::max(std::cbrt(per_class), 1.0);
  // cbrt(8) may land a hair above 2; snap before taking the ceiling.
  const double snapped = std::round(scaled);
  return static_cast<int>(std::abs(scaled - snapped) < 1e-9 ? snapped : std::ceil(scaled));
}

}  // namespace fpnn
