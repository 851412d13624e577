#include "fpnn/fejer_pnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fpnn/errors.hpp"
#include "fpnn/numio.hpp"

namespace fpnn {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

void check_dim(std::size_t expected, std::size_t got) {
  if (expected != got)
    throw DimensionMismatch("model expects dimension " + std::to_string(expected) + ", got " +
                            std::to_string(got));
}

}  // namespace

FejerPnnModel::FejerPnnModel(Cutoff J, std::size_t dim, std::vector<FejerClass> classes)
    : J_(J.value()), dim_(dim), classes_(std::move(classes)) {
  if (dim_ == 0) throw DimensionError("model dimension must be positive");
  if (classes_.empty()) throw EmptyDataset("model has no classes");
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    const auto& cls = classes_[c];
    if (cls.count < 1) throw InvalidParameter("class '" + cls.label + "' has no instances");
    if (cls.weights.size() != dim_ * stride())
      throw DimensionError("class '" + cls.label + "' has a malformed weight table");
    if (c > 0 && !(classes_[c - 1].label < cls.label))
      throw InvalidParameter("class labels must be unique and sorted");
  }
}

std::size_t FejerPnnModel::find_class(const std::string& label) const {
  auto it = std::lower_bound(
      classes_.begin(), classes_.end(), label,
      [](const FejerClass& cls, const std::string& key) { return cls.label < key; });
  if (it == classes_.end() || it->label != label) return npos;
  return static_cast<std::size_t>(it - classes_.begin());
}

std::span<const double> FejerPnnModel::weights(std::size_t c, std::size_t d) const {
  return std::span<const double>(classes_.at(c).weights).subspan(d * stride(), stride());
}

double FejerPnnModel::w_cos(std::size_t c, int j, std::size_t d) const {
  return weights(c, d)[static_cast<std::size_t>(j)];
}

double FejerPnnModel::w_sin(std::size_t c, int j, std::size_t d) const {
  return weights(c, d)[static_cast<std::size_t>(J_ + j)];
}

std::vector<double> FejerPnnModel::log_scores(std::span<const double> x) const {
  check_dim(dim_, x.size());
  const auto J = static_cast<std::size_t>(J_);
  const std::size_t width = stride();
  std::vector<double> scores(classes_.size());
  for (std::size_t c = 0; c < classes_.size(); ++c)
    scores[c] = std::log(static_cast<double>(classes_[c].count));

  std::vector<double> cosines(J + 1), sines(J + 1);
  for (std::size_t d = 0; d < dim_; ++d) {
    fill_trig_basis(x[d], cosines, sines);
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      const double* w = classes_[c].weights.data() + d * width;
      double out = 0.5 * w[0];
      for (std::size_t j = 1; j <= J; ++j) out += w[j] * cosines[j] + w[J + j] * sines[j];
      scores[c] += std::log(std::max(kDensityFloor, out));
    }
  }
  return scores;
}

Prediction FejerPnnModel::predict(std::span<const double> x) const {
  return make_prediction(log_scores(x));
}

void FejerPnnModel::add_instance(std::span<const double> x, const std::string& label,
                                 bool create_class) {
  check_dim(dim_, x.size());
  auto c = find_class(label);
  if (c == npos) {
    if (!create_class) throw UnknownClass("model has no class '" + label + "'");
    if (label.empty()) throw InvalidParameter("empty class label");
    auto pos = std::lower_bound(
        classes_.begin(), classes_.end(), label,
        [](const FejerClass& cls, const std::string& key) { return cls.label < key; });
    c = static_cast<std::size_t>(pos - classes_.begin());
    classes_.insert(pos, FejerClass{label, 0, std::vector<double>(dim_ * stride(), 0.0)});
  }

  auto& cls = classes_[c];
  const auto J = static_cast<std::size_t>(J_);
  const double n = static_cast<double>(cls.count);
  const double keep = n / (n + 1.0);
  std::vector<double> cosines(J + 1), sines(J + 1);
  for (std::size_t d = 0; d < dim_; ++d) {
    fill_trig_basis(x[d], cosines, sines);
    double* w = cls.weights.data() + d * stride();
    for (std::size_t j = 0; j <= J; ++j) {
      const double gain = static_cast<double>(J + 1 - j) / (static_cast<double>(J + 1) * (n + 1.0));
      w[j] = keep * w[j] + gain * cosines[j];
      if (j > 0) w[J + j] = keep * w[J + j] + gain * sines[j];
    }
  }
  ++cls.count;
}

FejerPnnModel train_fejer(const Dataset& ds, Cutoff J, FejerTrainOptions options) {
  if (ds.empty()) throw EmptyDataset("cannot train on an empty dataset");
  const std::size_t dim = ds.dim();
  const auto jmax = static_cast<std::size_t>(J.value());
  const std::size_t width = 2 * jmax + 1;

  std::vector<FejerClass> classes;
  classes.reserve(ds.num_classes());
  std::vector<double> cosines(jmax + 1), sines(jmax + 1);
  for (const auto& src : ds.classes()) {
    FejerClass cls{src.label, src.instances.size(), std::vector<double>(dim * width, 0.0)};
    // Single pass over the instances: accumulate raw trigonometric sums.
    for (const auto& x : src.instances) {
      for (std::size_t d = 0; d < dim; ++d) {
        if (!(std::abs(x[d]) <= 1.0 + 1e-12))
          throw InvalidParameter("feature value " + std::to_string(x[d]) +
                                 " outside [-1, 1]; normalize the features first");
        fill_trig_basis(x[d], cosines, sines);
        double* w = cls.weights.data() + d * width;
        for (std::size_t j = 1; j <= jmax; ++j) {
          w[j] += cosines[j];
          w[jmax + j] += sines[j];
        }
      }
    }
    const double count = static_cast<double>(cls.count);
    for (std::size_t d = 0; d < dim; ++d) {
      double* w = cls.weights.data() + d * width;
      w[0] = options.table1_literal ? 1.0 / count : 1.0;
      for (std::size_t j = 1; j <= jmax; ++j) {
        const double scale = static_cast<double>(jmax + 1 - j) / (static_cast<double>(jmax + 1) * count);
        w[j] *= scale;
        w[jmax + j] *= scale;
      }
    }
    classes.push_back(std::move(cls));
  }
  return FejerPnnModel(J, dim, std::move(classes));
}

FejerPnnModel update(FejerPnnModel model, std::span<const double> x, const std::string& label,
                     bool create_class) {
  model.add_instance(x, label, create_class);
  return model;
}

void save_model(const FejerPnnModel& m, std::ostream& out) {
  out << "FPNN v1\n";
  out << "classes " << m.num_classes() << " dim " << m.dim() << " cutoff " << m.cutoff() << '\n';
  for (std::size_t c = 0; c < m.num_classes(); ++c) {
    out << "class " << m.label(c) << " count " << m.count(c) << '\n';
    for (std::size_t d = 0; d < m.dim(); ++d) {
      const auto w = m.weights(c, d);
      for (std::size_t k = 0; k < w.size(); ++k) out << (k ? " " : "") << format_double(w[k]);
      out << '\n';
    }
  }
}

void save_model(const FejerPnnModel& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  save_model(m, out);
  if (!out) throw FormatError("failed writing " + path.string());
}

FejerPnnModel load_model(std::istream& in) {
  std::string line;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) throw FormatError(std::string("truncated model file: missing ") + what);
  };

  next_line("header");
  if (line.rfind("FPNN v", 0) == 0 && line != "FPNN v1")
    throw VersionError("unsupported model version '" + line + "', this reader handles FPNN v1");
  if (line != "FPNN v1") throw FormatError("not an FPNN model file");

  next_line("shape line");
  std::size_t num_classes = 0, dim = 0;
  long long cutoff = 0;
  {
    std::istringstream ss(line);
    std::string k1, k2, k3, rest;
    if (!(ss >> k1 >> num_classes >> k2 >> dim >> k3 >> cutoff) || k1 != "classes" ||
        k2 != "dim" || k3 != "cutoff" || (ss >> rest) || num_classes == 0 || dim == 0 ||
        cutoff < 1 || cutoff > 1'000'000)
      throw FormatError("malformed shape line '" + line + "'");
  }
  const auto width = 2 * static_cast<std::size_t>(cutoff) + 1;

  std::vector<FejerClass> classes;
  classes.reserve(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    next_line("class line");
    const auto tag = line.rfind(" count ");
    if (line.rfind("class ", 0) != 0 || tag == std::string::npos || tag < 6)
      throw FormatError("malformed class line '" + line + "'");
    FejerClass cls;
    cls.label = line.substr(6, tag - 6);
    const auto count = parse_int(std::string_view(line).substr(tag + 7));
    if (cls.label.empty() || !count || *count < 1)
      throw FormatError("malformed class line '" + line + "'");
    cls.count = static_cast<std::size_t>(*count);
    cls.weights.reserve(dim * width);
    for (std::size_t d = 0; d < dim; ++d) {
      next_line("weight line");
      const auto tokens = split(line, ' ');
      if (tokens.size() != width)
        throw FormatError("weight line has " + std::to_string(tokens.size()) + " values, expected " +
                          std::to_string(width));
      for (auto tok : tokens) {
        const auto v = parse_double(tok);
        if (!v) throw FormatError("malformed weight '" + std::string(tok) + "'");
        cls.weights.push_back(*v);
      }
    }
    classes.push_back(std::move(cls));
  }
  while (std::getline(in, line))
    if (!trim(line).empty()) throw FormatError("unexpected trailing content in model file");

  try {
    return FejerPnnModel(Cutoff(static_cast<int>(cutoff)), dim, std::move(classes));
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(e.what());
  }
}

FejerPnnModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open model file " + path.string());
  return load_model(in);
}

}  // namespace fpnn
