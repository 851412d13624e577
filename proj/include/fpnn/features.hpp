#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fpnn {

using Feature = std::vector<double>;

/// Returns v / ||v||_2. Throws ZeroVector when the norm is below 1e-12 and
/// ParseError when an entry is not finite.
Feature l2_normalize(std::span<const double> v);

/// Instances of one class. `label` is a non-empty token without commas.
struct LabeledClass {
  std::string label;
  std::vector<Feature> instances;
};

/// C labeled classes sharing one dimension D, ordered by label.
///
/// Class indices used by every classifier are positions in this order, so
/// two datasets built from the same label set agree on indices.
class Dataset {
 public:
  Dataset() = default;

  /// Sorts classes by label, merges nothing: duplicate labels, empty classes
  /// or inconsistent dimensions are rejected.
  explicit Dataset(std::vector<LabeledClass> classes);

  std::size_t num_classes() const { return classes_.size(); }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return total_; }
  bool empty() const { return classes_.empty(); }

  const std::string& label(std::size_t c) const { return classes_.at(c).label; }
  std::span<const Feature> instances(std::size_t c) const { return classes_.at(c).instances; }
  std::size_t count(std::size_t c) const { return classes_.at(c).instances.size(); }
  const std::vector<LabeledClass>& classes() const { return classes_; }

  std::optional<std::size_t> find_class(const std::string& label) const;
  std::vector<std::string> labels() const;

 private:
  std::vector<LabeledClass> classes_;
  std::size_t dim_ = 0;
  std::size_t total_ = 0;
};

/// One data line of a feature file, in file order.
struct FeatureRow {
  std::string label;
  Feature values;
};

/// Parses the feature CSV format: optional '#' comment lines, then
/// `<label>,<f_1>,...,<f_D>` per line. D is taken from the first data line.
std::vector<FeatureRow> parse_feature_rows(std::istream& in, bool normalize = true);
std::vector<FeatureRow> load_feature_rows(const std::filesystem::path& path,
                                          bool normalize = true);

/// Groups rows by label into a Dataset. Throws EmptyDataset for no rows.
Dataset dataset_from_rows(std::vector<FeatureRow> rows);

Dataset load_dataset(const std::filesystem::path& path, bool normalize = true);
Dataset read_dataset(std::istream& in, bool normalize = true);

void write_feature_rows(std::ostream& out, const Dataset& ds);

/// Applies `fn` to every instance of `ds`, keeping labels and order.
template <class Fn>
Dataset transform_dataset(const Dataset& ds, Fn&& fn) {
  std::vector<LabeledClass> out;
  out.reserve(ds.num_classes());
  for (const auto& cls : ds.classes()) {
    LabeledClass mapped{cls.label, {}};
    mapped.instances.reserve(cls.instances.size());
    for (const auto& x : cls.instances) mapped.instances.push_back(fn(x));
    out.push_back(std::move(mapped));
  }
  return Dataset(std::move(out));
}

}  // namespace fpnn
