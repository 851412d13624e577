#include "fpnn/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include "fpnn/errors.hpp"
#include "fpnn/numio.hpp"

namespace fpnn {

namespace {

constexpr double kZeroNormThreshold = 1e-12;

}  // namespace

Feature l2_normalize(std::span<const double> v) {
  double sum_sq = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw ParseError("non-finite feature value");
    sum_sq += x * x;
  }
  const double norm = std::sqrt(sum_sq);
  if (norm < kZeroNormThreshold) throw ZeroVector("feature vector has zero L2 norm");
  Feature out(v.begin(), v.end());
  for (double& x : out) x /= norm;
  return out;
}

Dataset::Dataset(std::vector<LabeledClass> classes) : classes_(std::move(classes)) {
  if (classes_.empty()) throw EmptyDataset("no classes");
  std::sort(classes_.begin(), classes_.end(),
            [](const LabeledClass& a, const LabeledClass& b) { return a.label < b.label; });
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    const auto& cls = classes_[c];
    if (cls.label.empty()) throw ParseError("empty class label");
    if (c > 0 && classes_[c - 1].label == cls.label)
      throw ParseError("duplicate class label '" + cls.label + "'");
    if (cls.instances.empty()) throw EmptyDataset("class '" + cls.label + "' has no instances");
    for (const auto& x : cls.instances) {
      if (dim_ == 0) dim_ = x.size();
      if (x.empty() || x.size() != dim_)
        throw DimensionMismatch("inconsistent feature dimension in class '" + cls.label + "'");
    }
    total_ += cls.instances.size();
  }
}

std::optional<std::size_t> Dataset::find_class(const std::string& label) const {
  auto it = std::lower_bound(
      classes_.begin(), classes_.end(), label,
      [](const LabeledClass& cls, const std::string& key) { return cls.label < key; });
  if (it == classes_.end() || it->label != label) return std::nullopt;
  return static_cast<std::size_t>(it - classes_.begin());
}

std::vector<std::string> Dataset::labels() const {
  std::vector<std::string> out;
  out.reserve(classes_.size());
  for (const auto& cls : classes_) out.push_back(cls.label);
  return out;
}

std::vector<FeatureRow> parse_feature_rows(std::istream& in, bool normalize) {
  std::vector<FeatureRow> rows;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;

    const auto fields = split(line, ',');
    const auto where = " at line " + std::to_string(line_no);
    if (fields.size() < 2) throw ParseError("expected <label>,<f_1>,...,<f_D>" + where);
    const auto label = std::string(trim(fields[0]));
    if (label.empty()) throw ParseError("empty label" + where);
    if (dim == 0) dim = fields.size() - 1;
    if (fields.size() - 1 != dim)
      throw ParseError("row has " + std::to_string(fields.size() - 1) + " features, expected " +
                       std::to_string(dim) + where);

    Feature values;
    values.reserve(dim);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const auto v = parse_double(fields[i]);
      if (!v) throw ParseError("malformed number '" + std::string(fields[i]) + "'" + where);
      values.push_back(*v);
    }
    if (normalize) {
      try {
        values = l2_normalize(values);
      } catch (const ZeroVector&) {
        throw ZeroVector("zero feature vector" + where);
      }
    }
    rows.push_back({label, std::move(values)});
  }
  return rows;
}

std::vector<FeatureRow> load_feature_rows(const std::filesystem::path& path, bool normalize) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open feature file " + path.string());
  return parse_feature_rows(in, normalize);
}

Dataset dataset_from_rows(std::vector<FeatureRow> rows) {
  if (rows.empty()) throw EmptyDataset("feature file has no data rows");
  std::map<std::string, std::vector<Feature>> grouped;
  for (auto& row : rows) grouped[row.label].push_back(std::move(row.values));
  std::vector<LabeledClass> classes;
  classes.reserve(grouped.size());
  for (auto& [label, instances] : grouped) classes.push_back({label, std::move(instances)});
  return Dataset(std::move(classes));
}

Dataset load_dataset(const std::filesystem::path& path, bool normalize) {
  return dataset_from_rows(load_feature_rows(path, normalize));
}

Dataset read_dataset(std::istream& in, bool normalize) {
  return dataset_from_rows(parse_feature_rows(in, normalize));
}

void write_feature_rows(std::ostream& out, const Dataset& ds) {
  for (const auto& cls : ds.classes()) {
    for (const auto& x : cls.instances) {
      out << cls.label;
      for (double v : x) out << ',' << format_double(v);
      out << '\n';
    }
  }
}

}  // namespace fpnn
