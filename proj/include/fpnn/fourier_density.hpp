#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fpnn/kernels.hpp"

namespace fpnn {

/// Empirical trigonometric moments of a 1-D sample on [-1, 1]:
///   A[j] = mean_r cos(j pi x_r),  B[j] = mean_r sin(j pi x_r),  j = 0..J.
/// A[0] = 1 and B[0] = 0 exactly.
struct FourierCoefficients {
  std::vector<double> A;
  std::vector<double> B;
  std::size_t sample_count = 0;

  int cutoff() const { return static_cast<int>(A.size()) - 1; }
};

FourierCoefficients fourier_coeffs(std::span<const double> samples, Cutoff J);

/// Kernel-sum form: (1 / (2 R)) sum_r fejer(x, x_r, J). Integrates to 1 over
/// [-1, 1]. Costs O(R) per query; used as the reference for the series form.
double density_canonical(double x, std::span<const double> samples, Cutoff J);

/// Series form of the same estimate:
///   A[0]/2 + sum_{j=1..J} (J+1-j)/(J+1) (A[j] cos(j pi x) + B[j] sin(j pi x)).
/// Costs O(J) per query. J is taken from the coefficients.
double density_noncanonical(double x, const FourierCoefficients& c);

/// Hart's data-driven truncation: the J in [1, J_max] maximising
///   sum_{j=1..J} (A[j]^2 + B[j]^2) - 2 J / (R + 1),
/// ties (within floating-point noise) resolved toward the smaller J.
int hart_cutoff(std::span<const double> samples, Cutoff J_max);

/// Lower median of the per-(class, dimension) optima.
int median_cutoff(std::span<const int> per_pair);

/// ceil(2 max((R/C)^(1/3), 1)).
int fixed_cutoff(std::size_t total_instances, std::size_t num_classes);

}  // namespace fpnn
