#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fpnn/features.hpp"
#include "fpnn/kernels.hpp"
#include "fpnn/prediction.hpp"

namespace fpnn {

/// Trained weights of one class. For every dimension d the 2J + 1 weights
/// are stored contiguously as
///   W_cos[0], W_cos[1], ..., W_cos[J], W_sin[1], ..., W_sin[J]
/// with W_cos[j] = (J+1-j)/(J+1) * mean_r cos(j pi x_{r,d}) and W_sin alike.
struct FejerClass {
  std::string label;
  std::size_t count = 0;
  std::vector<double> weights;
};

/// Naive-Bayes classifier whose per-feature likelihoods are Fejer-smoothed
/// Fourier series on [-1, 1]. The model size is C * D * (2J + 1) weights
/// and does not depend on the number of training instances.
class FejerPnnModel {
 public:
  FejerPnnModel(Cutoff J, std::size_t dim, std::vector<FejerClass> classes);

  int cutoff() const { return J_; }
  std::size_t dim() const { return dim_; }
  std::size_t num_classes() const { return classes_.size(); }
  const std::string& label(std::size_t c) const { return classes_.at(c).label; }
  std::size_t count(std::size_t c) const { return classes_.at(c).count; }
  const std::vector<FejerClass>& classes() const { return classes_; }
  std::size_t find_class(const std::string& label) const;  // npos if absent

  std::size_t stride() const { return 2 * static_cast<std::size_t>(J_) + 1; }
  std::span<const double> weights(std::size_t c, std::size_t d) const;
  double w_cos(std::size_t c, int j, std::size_t d) const;
  double w_sin(std::size_t c, int j, std::size_t d) const;  // j >= 1
  std::size_t weight_count() const { return classes_.size() * dim_ * stride(); }

  /// Per-class log R_c + sum_d log max(eps, f_d(x_d | c)).
  std::vector<double> log_scores(std::span<const double> x) const;
  Prediction predict(std::span<const double> x) const;

  /// Folds one more instance of class `label` into the running weight
  /// averages in O(D J). Unknown labels throw UnknownClass unless
  /// `create_class` is set, in which case a new class is inserted at its
  /// sorted position.
  void add_instance(std::span<const double> x, const std::string& label, bool create_class = false);

  static constexpr double kDensityFloor = 1e-15;

 private:
  int J_;
  std::size_t dim_;
  std::vector<FejerClass> classes_;
};

struct FejerTrainOptions {
  /// Sets W_cos[0] = 1 / R_c instead of the self-consistent value 1.
  /// Kept for comparison runs only.
  bool table1_literal = false;
};

FejerPnnModel train_fejer(const Dataset& ds, Cutoff J, FejerTrainOptions options = {});

/// Value-returning form of FejerPnnModel::add_instance.
FejerPnnModel update(FejerPnnModel model, std::span<const double> x, const std::string& label,
                     bool create_class = false);

void save_model(const FejerPnnModel& m, std::ostream& out);
void save_model(const FejerPnnModel& m, const std::filesystem::path& path);
FejerPnnModel load_model(std::istream& in);
FejerPnnModel load_model(const std::filesystem::path& path);

}  // namespace fpnn
