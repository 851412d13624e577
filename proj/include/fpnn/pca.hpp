#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "fpnn/features.hpp"

namespace fpnn {

/// Mean-centering followed by projection onto the leading principal axes.
/// Rows of the projection are orthonormal and ordered by descending variance.
class PcaTransform {
 public:
  PcaTransform(Feature mean, std::vector<Feature> rows);

  std::size_t input_dim() const { return mean_.size(); }
  std::size_t output_dim() const { return rows_.size(); }
  const Feature& mean() const { return mean_; }
  const std::vector<Feature>& rows() const { return rows_; }

  /// projection * (v - mean), without re-normalization.
  Feature project(std::span<const double> v) const;

 private:
  Feature mean_;
  std::vector<Feature> rows_;
};

/// Fits the top `target_dim` principal axes of the sample covariance
/// (denominator R - 1). Each axis is signed so that its largest-magnitude
/// entry is non-negative. Throws DimensionError unless
/// 1 <= target_dim <= min(D, R) and R >= 2.
PcaTransform fit_pca(const Dataset& ds, std::size_t target_dim);

/// l2_normalize(project(v)); throws ZeroVector if the projection vanishes.
Feature apply_pca(const PcaTransform& t, std::span<const double> v);

Dataset apply_pca(const PcaTransform& t, const Dataset& ds);

void save_pca(const PcaTransform& t, std::ostream& out);
void save_pca(const PcaTransform& t, const std::filesystem::path& path);
PcaTransform load_pca(std::istream& in);
PcaTransform load_pca(const std::filesystem::path& path);

}  // namespace fpnn
