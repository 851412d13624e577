#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fpnn {

/// Truncation order J >= 1 of the trigonometric series.
class Cutoff {
 public:
  explicit Cutoff(int j);
  int value() const { return j_; }
  friend bool operator==(Cutoff, Cutoff) = default;

 private:
  int j_;
};

/// Gaussian bandwidth, strictly positive.
class SmoothingSigma {
 public:
  explicit SmoothingSigma(double sigma);
  double value() const { return sigma_; }

 private:
  double sigma_;
};

/// (2 pi sigma^2)^(-D/2) exp(-|x - y|^2 / (2 sigma^2)).
double gaussian_parzen(std::span<const double> x, std::span<const double> y, SmoothingSigma sigma);

/// Logarithm of gaussian_parzen; finite where the kernel itself underflows.
double log_gaussian_parzen(std::span<const double> x, std::span<const double> y,
                           SmoothingSigma sigma);

/// sin((J + 1/2) pi (x - y)) / sin(pi (x - y) / 2), i.e. sum_{|j|<=J} cos(j pi (x - y)).
/// Returns the limit 2J + 1 where the denominator vanishes. Can be negative.
double dirichlet(double x, double y, Cutoff J);

/// Cesaro mean of the first J + 1 Dirichlet partial sums:
///   (1/(J+1)) (1 - cos((J+1) pi d)) / (1 - cos(pi d)),  d = x - y.
/// Non-negative; equals J + 1 at d = 0 (and at any even integer d).
double fejer(double x, double y, Cutoff J);

/// cos(j pi x) and sin(j pi x) for j = 0..J. Only cos(pi x) and sin(pi x)
/// are evaluated directly; higher orders use the angle-addition recursion.
class TrigBasisTable {
 public:
  TrigBasisTable(double x, Cutoff J);

  int cutoff() const { return static_cast<int>(cos_.size()) - 1; }
  double cos(int j) const { return cos_[static_cast<std::size_t>(j)]; }
  double sin(int j) const { return sin_[static_cast<std::size_t>(j)]; }

  /// Index 0 holds cos 0 = 1 and sin 0 = 0; indices 1..J are the basis.
  std::span<const double> cosines() const { return cos_; }
  std::span<const double> sines() const { return sin_; }

 private:
  std::vector<double> cos_;
  std::vector<double> sin_;
};

TrigBasisTable trig_basis(double x, Cutoff J);

/// Allocation-free form of trig_basis. Both spans must hold J + 1 entries.
void fill_trig_basis(double x, std::span<double> cosines, std::span<double> sines);

}  // namespace fpnn
