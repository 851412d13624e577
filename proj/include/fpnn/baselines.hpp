#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fpnn/features.hpp"
#include "fpnn/kernels.hpp"
#include "fpnn/prediction.hpp"

namespace fpnn {

// --- Gaussian-Parzen PNN ----------------------------------------------------

/// Classical PNN: one pattern neuron per stored instance.
///
/// Class scores are log((R_c / R) * mean_r K(x, x_r)) with the Gaussian
/// kernel, evaluated as a shifted log-sum-exp so that high-dimensional
/// inputs do not underflow. Constant terms can be dropped through
/// `include_normalizer` without changing the decision.
class GaussianPnnModel {
 public:
  GaussianPnnModel(Dataset instances, SmoothingSigma sigma);

  const Dataset& instances() const { return instances_; }
  double sigma() const { return sigma_; }

  std::vector<double> log_scores(std::span<const double> x, bool include_normalizer = true) const;
  Prediction predict(std::span<const double> x) const;

 private:
  Dataset instances_;
  double sigma_;
};

GaussianPnnModel pnn_train(const Dataset& ds, SmoothingSigma sigma);

// --- k-medians ----------------------------------------------------------------

struct KMediansResult {
  std::vector<Feature> centroids;
  std::vector<std::size_t> assignment;  // centroid index per point
  std::vector<double> objective;        // sum of L1 distances after each assignment step
  int iterations = 0;
};

/// Lloyd-style k-medians in L1: assign to the nearest centroid, move each
/// centroid to the coordinate-wise median of its points. Seeded with greedy
/// farthest-point selection whose first pick is drawn from `seed`. Empty
/// clusters are re-seeded at the point farthest from its own centroid.
/// When k >= |points| the points themselves are returned.
KMediansResult kmedians(std::span<const Feature> points, std::size_t k, std::uint64_t seed,
                        int max_iters = 100);

// --- Reduced PNN --------------------------------------------------------------

/// PNN evaluated over per-class k-medians centroids. Priors keep the original
/// class counts; each class density averages over its own centroids.
class ReducedPnnModel {
 public:
  ReducedPnnModel(Dataset centroids, std::vector<std::size_t> original_counts, SmoothingSigma sigma);

  const Dataset& centroids() const { return centroids_; }
  const std::vector<std::size_t>& original_counts() const { return counts_; }
  double sigma() const { return sigma_; }

  std::vector<double> log_scores(std::span<const double> x) const;
  Prediction predict(std::span<const double> x) const;

 private:
  Dataset centroids_;
  std::vector<std::size_t> counts_;
  double sigma_;
};

ReducedPnnModel reduced_pnn_train(const Dataset& ds, std::size_t k, SmoothingSigma sigma,
                                  std::uint64_t seed);

// --- k-NN -------------------------------------------------------------------

/// Majority vote among the k nearest stored instances (Euclidean). Vote ties
/// go to the class with the smaller summed neighbour distance, then to the
/// smaller class index. Scores are vote counts.
class KnnModel {
 public:
  KnnModel(Dataset instances, std::size_t k);

  const Dataset& instances() const { return instances_; }
  std::size_t k() const { return k_; }

  Prediction predict(std::span<const double> x) const;

 private:
  Dataset instances_;
  std::size_t k_;
};

KnnModel knn_train(const Dataset& ds, std::size_t k);

// --- Nearest centroid ---------------------------------------------------------

/// Rocchio classifier over un-normalised class means. Scores are negated
/// Euclidean distances.
class CentroidModel {
 public:
  CentroidModel(Dataset centroids, std::vector<std::size_t> original_counts);

  const Dataset& centroids() const { return centroids_; }
  const std::vector<std::size_t>& original_counts() const { return counts_; }
  Prediction predict(std::span<const double> x) const;

 private:
  Dataset centroids_;
  std::vector<std::size_t> counts_;
};

CentroidModel centroid_train(const Dataset& ds);

// --- persistence --------------------------------------------------------------

using BaselineModel = std::variant<GaussianPnnModel, ReducedPnnModel, KnnModel, CentroidModel>;

/// "pnn", "reduced-pnn", "knn" or "centroid".
std::string baseline_kind(const BaselineModel& m);
std::size_t baseline_dim(const BaselineModel& m);
std::vector<std::string> baseline_labels(const BaselineModel& m);
Prediction predict(const BaselineModel& m, std::span<const double> x);

/// Instance-based models share one text format:
///   BASELINE v1
///   kind <name> classes <C> dim <D> sigma <s> k <k>
///   class <label> count <R_c> vectors <n>
///   <n lines of D numbers>
void save_baseline(const BaselineModel& m, std::ostream& out);
BaselineModel load_baseline(std::istream& in);

}  // namespace fpnn
