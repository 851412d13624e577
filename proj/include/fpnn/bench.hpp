#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpnn/features.hpp"
#include "fpnn/prediction.hpp"
#include "fpnn/random.hpp"

namespace fpnn {

struct SplitConfig {
  double ratio = 0.2;  // training share per class
  int n_splits = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

/// Per class, max(1, round_half_up(R_c * ratio)) instances drawn uniformly
/// without replacement go to train and the rest to test. Every class needs
/// at least two instances (ClassTooSmall otherwise); the training share is
/// capped at R_c - 1 so both sides stay non-empty.
TrainTestSplit stratified_split(const Dataset& ds, double ratio, Rng& rng);

/// Split `index` of a configuration; independent of how many splits follow.
TrainTestSplit split_for(const Dataset& ds, const SplitConfig& cfg, int index);

/// (1/C) sum_c (correct in c) / (total in c).
double mean_recall(std::span<const std::size_t> predicted, std::span<const std::size_t> truth,
                   std::size_t num_classes);

enum class ClassifierKind { Fejer, Pnn, ReducedPnn, Knn, Centroid };

std::string classifier_name(ClassifierKind kind);
ClassifierKind parse_classifier_kind(const std::string& name);  // throws InvalidParameter
std::vector<ClassifierKind> parse_classifier_list(const std::string& comma_list);

struct CutoffPolicy {
  enum class Kind { Fixed, Hart, Explicit };
  Kind kind = Kind::Fixed;
  int value = 32;  // explicit J, or J_max for Hart

  /// "fixed", "hart" or a positive integer.
  static CutoffPolicy parse(const std::string& text, int hart_jmax = 32);
  std::string describe() const;
};

/// Cut-off for a training set: the fixed rule, the median of Hart's
/// per-(class, dimension) optima, or the explicit value.
int resolve_cutoff(const CutoffPolicy& policy, const Dataset& train);

struct ClassifierParams {
  double sigma = 0.1;
  std::size_t k = 1;
  std::size_t centroids = 1;
  CutoffPolicy cutoff;
  bool table1_literal = false;
  std::uint64_t seed = 0;  // k-medians seeding

  std::string describe(ClassifierKind kind) const;
};

/// Type-erased trained classifier used by the harness.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual Prediction predict(std::span<const double> x) const = 0;
};

std::unique_ptr<Predictor> train_classifier(ClassifierKind kind, const ClassifierParams& params,
                                            const Dataset& train);

struct ParamGrid {
  std::vector<double> sigma;
  std::vector<std::size_t> k;
  std::vector<std::size_t> centroids;
  CutoffPolicy cutoff;

  /// sigma in {0.001, 0.005, 0.010, ..., 1.0}, k in {1, 3, 5},
  /// centroids in {1, 3, 5, 10}, fixed cut-off rule.
  static ParamGrid standard();

  /// Parameter combinations relevant to `kind`, in grid order.
  std::vector<ClassifierParams> candidates(ClassifierKind kind) const;
};

struct SplitScore {
  int split = 0;
  double recall = 0.0;
  double mean_predict_ms = 0.0;
};

struct ClassifierResult {
  ClassifierKind kind = ClassifierKind::Fejer;
  ClassifierParams params;
  std::vector<SplitScore> splits;
  double mean_recall = 0.0;
  double std_recall = 0.0;
  double mean_ms = 0.0;
  double std_ms = 0.0;
};

struct BenchResult {
  SplitConfig config;
  std::vector<ClassifierResult> classifiers;
};

struct BenchOptions {
  std::optional<std::size_t> pca_dim;  // PCA fitted on each training side
};

/// Mean recall over the splits of `cfg` without timing; used for tuning.
double evaluate_recall(ClassifierKind kind, const ClassifierParams& params, const Dataset& ds,
                       const SplitConfig& cfg, const BenchOptions& options = {});

/// Random-subsampling cross-validation. Grid parameters are chosen on
/// `tuning` (same protocol, best mean recall, first wins ties) and never on
/// `ds`; a grid with more than one candidate and no tuning set throws
/// MissingTuningSet. Per split, each classifier gets one untimed warm-up
/// pass over the test side, then a timed pass around predict calls only.
BenchResult run_benchmark(const Dataset& ds, const SplitConfig& cfg, const ParamGrid& grid,
                          std::span<const ClassifierKind> classifiers, const Dataset* tuning = nullptr,
                          const BenchOptions& options = {});

/// `# seed=... rng=... ratio=...`, per-split rows, then the aggregate block.
void write_results_csv(const BenchResult& result, std::ostream& out);

/// Human-readable accuracy/time table, one row per classifier.
void write_results_table(const BenchResult& result, std::ostream& out);

}  // namespace fpnn
