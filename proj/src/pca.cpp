#include "fpnn/pca.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <sstream>

#include "fpnn/errors.hpp"
#include "fpnn/numio.hpp"

namespace fpnn {

PcaTransform::PcaTransform(Feature mean, std::vector<Feature> rows)
    : mean_(std::move(mean)), rows_(std::move(rows)) {
  if (mean_.empty() || rows_.empty() || rows_.size() > mean_.size())
    throw DimensionError("invalid PCA shape");
  for (const auto& r : rows_)
    if (r.size() != mean_.size()) throw DimensionError("PCA row length differs from mean");
}

Feature PcaTransform::project(std::span<const double> v) const {
  if (v.size() != mean_.size())
    throw DimensionMismatch("PCA expects dimension " + std::to_string(mean_.size()) + ", got " +
                            std::to_string(v.size()));
  Feature out(rows_.size(), 0.0);
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    double acc = 0.0;
    for (std::size_t d = 0; d < v.size(); ++d) acc += rows_[k][d] * (v[d] - mean_[d]);
    out[k] = acc;
  }
  return out;
}

PcaTransform fit_pca(const Dataset& ds, std::size_t target_dim) {
  const std::size_t dim = ds.dim();
  const std::size_t n = ds.size();
  if (target_dim < 1 || target_dim > std::min(dim, n))
    throw DimensionError("target_dim must lie in [1, min(D, R)] = [1, " +
                         std::to_string(std::min(dim, n)) + "]");
  if (n < 2) throw DimensionError("PCA needs at least two instances");

  Eigen::MatrixXd data(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  Eigen::Index row = 0;
  for (const auto& cls : ds.classes())
    for (const auto& x : cls.instances)
      data.row(row++) = Eigen::Map<const Eigen::RowVectorXd>(x.data(), static_cast<Eigen::Index>(dim));

  const Eigen::RowVectorXd mean = data.colwise().mean();
  data.rowwise() -= mean;
  const Eigen::MatrixXd cov = (data.transpose() * data) / static_cast<double>(n - 1);

  // Eigenvalues come back ascending.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw DimensionError("eigendecomposition failed");
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  std::vector<Feature> rows;
  rows.reserve(target_dim);
  for (std::size_t k = 0; k < target_dim; ++k) {
    const auto col = static_cast<Eigen::Index>(dim - 1 - k);
    Feature axis(dim);
    Eigen::Index argmax = 0;
    vectors.col(col).cwiseAbs().maxCoeff(&argmax);
    const double sign = vectors(argmax, col) < 0.0 ? -1.0 : 1.0;
    for (std::size_t d = 0; d < dim; ++d)
      axis[d] = sign * vectors(static_cast<Eigen::Index>(d), col);
    rows.push_back(std::move(axis));
  }
  return PcaTransform(Feature(mean.data(), mean.data() + dim), std::move(rows));
}

Feature apply_pca(const PcaTransform& t, std::span<const double> v) {
  try {
    return l2_normalize(t.project(v));
  } catch (const ZeroVector&) {
    throw ZeroVector("projected feature vector vanishes");
  }
}

Dataset apply_pca(const PcaTransform& t, const Dataset& ds) {
  return transform_dataset(ds, [&](const Feature& x) { return apply_pca(t, x); });
}

// Format:
//   PCA v1
//   dim <D> target <K>
//   mean <D numbers>
//   K lines of D numbers
void save_pca(const PcaTransform& t, std::ostream& out) {
  out << "PCA v1\n";
  out << "dim " << t.input_dim() << " target " << t.output_dim() << '\n';
  out << "mean";
  for (double v : t.mean()) out << ' ' << format_double(v);
  out << '\n';
  for (const auto& r : t.rows()) {
    for (std::size_t d = 0; d < r.size(); ++d) out << (d ? " " : "") << format_double(r[d]);
    out << '\n';
  }
}

void save_pca(const PcaTransform& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  save_pca(t, out);
}

namespace {

std::vector<double> parse_numbers(std::string_view line, std::size_t expected) {
  std::vector<double> values;
  std::istringstream ss{std::string(line)};
  std::string token;
  while (ss >> token) {
    auto v = parse_double(token);
    if (!v) throw FormatError("malformed number '" + token + "' in PCA file");
    values.push_back(*v);
  }
  if (values.size() != expected) throw FormatError("wrong number of values in PCA file");
  return values;
}

}  // namespace

PcaTransform load_pca(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty PCA file");
  if (line.rfind("PCA v", 0) == 0 && line != "PCA v1")
    throw VersionError("unsupported PCA file version '" + line + "'");
  if (line != "PCA v1") throw FormatError("missing PCA header");

  std::size_t dim = 0, target = 0;
  {
    if (!std::getline(in, line)) throw FormatError("truncated PCA file");
    std::istringstream ss(line);
    std::string kw_dim, kw_target;
    if (!(ss >> kw_dim >> dim >> kw_target >> target) || kw_dim != "dim" || kw_target != "target" ||
        dim == 0 || target == 0 || target > dim)
      throw FormatError("malformed PCA shape line");
  }
  if (!std::getline(in, line) || line.rfind("mean", 0) != 0) throw FormatError("missing mean line");
  auto mean = parse_numbers(std::string_view(line).substr(4), dim);
  std::vector<Feature> rows;
  for (std::size_t k = 0; k < target; ++k) {
    if (!std::getline(in, line)) throw FormatError("truncated PCA file");
    rows.push_back(parse_numbers(line, dim));
  }
  return PcaTransform(std::move(mean), std::move(rows));
}

PcaTransform load_pca(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return load_pca(in);
}

}  // namespace fpnn
