#include "fpnn/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fpnn/errors.hpp"
#include "fpnn/numio.hpp"
#include "fpnn/random.hpp"

namespace fpnn {

namespace {

void check_dim(std::size_t expected, std::size_t got) {
  if (expected != got)
    throw DimensionMismatch("model expects dimension " + std::to_string(expected) + ", got " +
                            std::to_string(got));
}

double squared_l2(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    acc += diff * diff;
  }
  return acc;
}

double l1(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) acc += std::abs(a[d] - b[d]);
  return acc;
}

// log of mean_r K(x, v_r) for the Gaussian kernel, shifted by the largest
// exponent. The (2 pi sigma^2)^(-D/2) factor is optional.
double log_parzen_mean(std::span<const Feature> vectors, std::span<const double> x, double sigma,
                       bool include_normalizer) {
  const double inv_two_s2 = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> exponents(vectors.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    exponents[r] = -squared_l2(x, vectors[r]) * inv_two_s2;
    peak = std::max(peak, exponents[r]);
  }
  double acc = 0.0;
  for (double e : exponents) acc += std::exp(e - peak);
  double out = peak + std::log(acc) - std::log(static_cast<double>(vectors.size()));
  if (include_normalizer)
    out -= 0.5 * static_cast<double>(x.size()) * std::log(2.0 * std::numbers::pi * sigma * sigma);
  return out;
}

std::vector<double> parzen_scores(const Dataset& vectors, std::span<const std::size_t> counts,
                                  std::span<const double> x, double sigma, bool include_normalizer) {
  check_dim(vectors.dim(), x.size());
  double total = 0.0;
  for (auto n : counts) total += static_cast<double>(n);
  std::vector<double> scores(vectors.num_classes());
  for (std::size_t c = 0; c < scores.size(); ++c)
    scores[c] = std::log(static_cast<double>(counts[c]) / total) +
                log_parzen_mean(vectors.instances(c), x, sigma, include_normalizer);
  return scores;
}

std::vector<std::size_t> class_counts(const Dataset& ds) {
  std::vector<std::size_t> counts(ds.num_classes());
  for (std::size_t c = 0; c < counts.size(); ++c) counts[c] = ds.count(c);
  return counts;
}

void require_nonempty(const Dataset& ds) {
  if (ds.empty()) throw EmptyDataset("cannot train on an empty dataset");
}

}  // namespace

// --- Gaussian PNN -------------------------------------------------------------

GaussianPnnModel::GaussianPnnModel(Dataset instances, SmoothingSigma sigma)
    : instances_(std::move(instances)), sigma_(sigma.value()) {
  require_nonempty(instances_);
}

std::vector<double> GaussianPnnModel::log_scores(std::span<const double> x,
                                                 bool include_normalizer) const {
  return parzen_scores(instances_, class_counts(instances_), x, sigma_, include_normalizer);
}

Prediction GaussianPnnModel::predict(std::span<const double> x) const {
  return make_prediction(log_scores(x));
}

GaussianPnnModel pnn_train(const Dataset& ds, SmoothingSigma sigma) {
  require_nonempty(ds);
  return GaussianPnnModel(ds, sigma);
}

// --- k-medians ------------------------------------------------------------------

KMediansResult kmedians(std::span<const Feature> points, std::size_t k, std::uint64_t seed,
                        int max_iters) {
  if (points.empty()) throw EmptyInput("k-medians needs at least one point");
  if (k < 1) throw InvalidParameter("k-medians needs k >= 1");
  const std::size_t n = points.size();
  const std::size_t dim = points[0].size();
  for (const auto& p : points)
    if (p.size() != dim) throw DimensionMismatch("k-medians points differ in dimension");

  KMediansResult result;
  if (k >= n) {
    result.centroids.assign(points.begin(), points.end());
    result.assignment.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.assignment[i] = i;
    result.objective.push_back(0.0);
    return result;
  }

  // Greedy farthest-point seeding in L1.
  Rng rng(seed);
  auto& centroids = result.centroids;
  centroids.push_back(points[uniform_index(rng, n)]);
  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = l1(points[i], centroids[0]);
  while (centroids.size() < k) {
    const auto far = static_cast<std::size_t>(
        std::max_element(nearest.begin(), nearest.end()) - nearest.begin());
    centroids.push_back(points[far]);
    for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], l1(points[i], points[far]));
  }

  auto& assignment = result.assignment;
  std::vector<double> own_distance(n);
  std::vector<double> column;
  for (int iter = 1; iter <= max_iters; ++iter) {
    std::vector<std::size_t> next(n);
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = l1(points[i], centroids[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double dc = l1(points[i], centroids[c]);
        if (dc < best_d) {
          best_d = dc;
          best = c;
        }
      }
      next[i] = best;
      own_distance[i] = best_d;
      objective += best_d;
    }
    result.objective.push_back(objective);
    result.iterations = iter;
    const bool converged = next == assignment;
    assignment = std::move(next);
    if (converged) break;

    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < n; ++i) members[assignment[i]].push_back(i);
    std::vector<bool> taken(n, false);
    for (std::size_t c = 0; c < k; ++c) {
      if (members[c].empty()) {
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (!taken[i] && own_distance[i] > far_d) {
            far_d = own_distance[i];
            far = i;
          }
        }
        taken[far] = true;
        centroids[c] = points[far];
        continue;
      }
      const auto& idx = members[c];
      column.resize(idx.size());
      for (std::size_t d = 0; d < dim; ++d) {
        for (std::size_t m = 0; m < idx.size(); ++m) column[m] = points[idx[m]][d];
        std::sort(column.begin(), column.end());
        const std::size_t mid = column.size() / 2;
        centroids[c][d] =
            column.size() % 2 == 1 ? column[mid] : 0.5 * (column[mid - 1] + column[mid]);
      }
    }
  }
  return result;
}

// --- Reduced PNN ----------------------------------------------------------------

ReducedPnnModel::ReducedPnnModel(Dataset centroids, std::vector<std::size_t> original_counts,
                                 SmoothingSigma sigma)
    : centroids_(std::move(centroids)), counts_(std::move(original_counts)), sigma_(sigma.value()) {
  require_nonempty(centroids_);
  if (counts_.size() != centroids_.num_classes())
    throw InvalidParameter("one original count per class is required");
  for (std::size_t c = 0; c < counts_.size(); ++c)
    if (counts_[c] < 1) throw InvalidParameter("original class counts must be positive");
}

std::vector<double> ReducedPnnModel::log_scores(std::span<const double> x) const {
  return parzen_scores(centroids_, counts_, x, sigma_, true);
}

Prediction ReducedPnnModel::predict(std::span<const double> x) const {
  return make_prediction(log_scores(x));
}

ReducedPnnModel reduced_pnn_train(const Dataset& ds, std::size_t k, SmoothingSigma sigma,
                                  std::uint64_t seed) {
  require_nonempty(ds);
  if (k < 1) throw InvalidParameter("reduced PNN needs at least one centroid per class");
  std::vector<LabeledClass> reduced;
  reduced.reserve(ds.num_classes());
  for (std::size_t c = 0; c < ds.num_classes(); ++c) {
    auto clusters = kmedians(ds.instances(c), k, splitmix64(seed ^ c));
    reduced.push_back({ds.label(c), std::move(clusters.centroids)});
  }
  return ReducedPnnModel(Dataset(std::move(reduced)), class_counts(ds), sigma);
}

// --- k-NN -----------------------------------------------------------------------

KnnModel::KnnModel(Dataset instances, std::size_t k) : instances_(std::move(instances)), k_(k) {
  require_nonempty(instances_);
  if (k_ < 1 || k_ > instances_.size())
    throw InvalidParameter("k must lie in [1, R] = [1, " + std::to_string(instances_.size()) + "]");
}

Prediction KnnModel::predict(std::span<const double> x) const {
  check_dim(instances_.dim(), x.size());
  struct Neighbour {
    double dist2;
    std::size_t cls;
    std::size_t order;
  };
  std::vector<Neighbour> all;
  all.reserve(instances_.size());
  std::size_t order = 0;
  for (std::size_t c = 0; c < instances_.num_classes(); ++c)
    for (const auto& v : instances_.instances(c)) all.push_back({squared_l2(x, v), c, order++});

  const auto by_distance = [](const Neighbour& a, const Neighbour& b) {
    if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
    return a.order < b.order;
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k_), all.end(),
                    by_distance);

  std::vector<double> votes(instances_.num_classes(), 0.0);
  std::vector<double> summed(instances_.num_classes(), 0.0);
  for (std::size_t i = 0; i < k_; ++i) {
    votes[all[i].cls] += 1.0;
    summed[all[i].cls] += std::sqrt(all[i].dist2);
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < votes.size(); ++c) {
    if (votes[c] > votes[best] || (votes[c] == votes[best] && summed[c] < summed[best])) best = c;
  }
  return {best, std::move(votes)};
}

KnnModel knn_train(const Dataset& ds, std::size_t k) {
  require_nonempty(ds);
  return KnnModel(ds, k);
}

// --- Nearest centroid -------------------------------------------------------------

CentroidModel::CentroidModel(Dataset centroids, std::vector<std::size_t> original_counts)
    : centroids_(std::move(centroids)), counts_(std::move(original_counts)) {
  require_nonempty(centroids_);
  for (std::size_t c = 0; c < centroids_.num_classes(); ++c)
    if (centroids_.count(c) != 1) throw InvalidParameter("nearest centroid keeps one mean per class");
  if (counts_.size() != centroids_.num_classes())
    throw InvalidParameter("one original count per class is required");
}

Prediction CentroidModel::predict(std::span<const double> x) const {
  check_dim(centroids_.dim(), x.size());
  std::vector<double> scores(centroids_.num_classes());
  for (std::size_t c = 0; c < scores.size(); ++c)
    scores[c] = -std::sqrt(squared_l2(x, centroids_.instances(c)[0]));
  return make_prediction(std::move(scores));
}

CentroidModel centroid_train(const Dataset& ds) {
  require_nonempty(ds);
  std::vector<LabeledClass> means;
  means.reserve(ds.num_classes());
  for (const auto& cls : ds.classes()) {
    Feature mean(ds.dim(), 0.0);
    for (const auto& x : cls.instances)
      for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += x[d];
    for (double& v : mean) v /= static_cast<double>(cls.instances.size());
    means.push_back({cls.label, {std::move(mean)}});
  }
  return CentroidModel(Dataset(std::move(means)), class_counts(ds));
}

// --- variant helpers ----------------------------------------------------------------

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

const Dataset& stored_vectors(const BaselineModel& m) {
  return std::visit(Overloaded{
                        [](const GaussianPnnModel& p) -> const Dataset& { return p.instances(); },
                        [](const ReducedPnnModel& p) -> const Dataset& { return p.centroids(); },
                        [](const KnnModel& p) -> const Dataset& { return p.instances(); },
                        [](const CentroidModel& p) -> const Dataset& { return p.centroids(); },
                    },
                    m);
}

}  // namespace

std::string baseline_kind(const BaselineModel& m) {
  return std::visit(Overloaded{
                        [](const GaussianPnnModel&) { return std::string("pnn"); },
                        [](const ReducedPnnModel&) { return std::string("reduced-pnn"); },
                        [](const KnnModel&) { return std::string("knn"); },
                        [](const CentroidModel&) { return std::string("centroid"); },
                    },
                    m);
}

std::size_t baseline_dim(const BaselineModel& m) { return stored_vectors(m).dim(); }

std::vector<std::string> baseline_labels(const BaselineModel& m) { return stored_vectors(m).labels(); }

Prediction predict(const BaselineModel& m, std::span<const double> x) {
  return std::visit([&](const auto& model) { return model.predict(x); }, m);
}

void save_baseline(const BaselineModel& m, std::ostream& out) {
  const Dataset& vectors = stored_vectors(m);
  double sigma = 0.0;
  std::size_t k = 0;
  std::vector<std::size_t> counts;
  std::visit(Overloaded{
                 [&](const GaussianPnnModel& p) {
                   sigma = p.sigma();
                   counts = class_counts(p.instances());
                 },
                 [&](const ReducedPnnModel& p) {
                   sigma = p.sigma();
                   counts = p.original_counts();
                 },
                 [&](const KnnModel& p) {
                   k = p.k();
                   counts = class_counts(p.instances());
                 },
                 [&](const CentroidModel& p) { counts = p.original_counts(); },
             },
             m);

  out << "BASELINE v1\n";
  out << "kind " << baseline_kind(m) << " classes " << vectors.num_classes() << " dim "
      << vectors.dim() << " sigma " << format_double(sigma) << " k " << k << '\n';
  for (std::size_t c = 0; c < vectors.num_classes(); ++c) {
    out << "class " << vectors.label(c) << " count " << counts[c] << " vectors " << vectors.count(c)
        << '\n';
    for (const auto& v : vectors.instances(c)) {
      for (std::size_t d = 0; d < v.size(); ++d) out << (d ? " " : "") << format_double(v[d]);
      out << '\n';
    }
  }
}

BaselineModel load_baseline(std::istream& in) {
  std::string line;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) throw FormatError(std::string("truncated model file: missing ") + what);
  };
  next_line("header");
  if (line.rfind("BASELINE v", 0) == 0 && line != "BASELINE v1")
    throw VersionError("unsupported baseline model version '" + line + "'");
  if (line != "BASELINE v1") throw FormatError("not a baseline model file");

  next_line("shape line");
  std::string kind;
  std::size_t num_classes = 0, dim = 0, k = 0;
  double sigma = 0.0;
  {
    std::istringstream ss(line);
    std::string kw[5], sigma_tok;
    if (!(ss >> kw[0] >> kind >> kw[1] >> num_classes >> kw[2] >> dim >> kw[3] >> sigma_tok >>
          kw[4] >> k) ||
        kw[0] != "kind" || kw[1] != "classes" || kw[2] != "dim" || kw[3] != "sigma" || kw[4] != "k" ||
        num_classes == 0 || dim == 0)
      throw FormatError("malformed shape line '" + line + "'");
    const auto s = parse_double(sigma_tok);
    if (!s) throw FormatError("malformed sigma '" + sigma_tok + "'");
    sigma = *s;
  }

  std::vector<LabeledClass> classes;
  std::vector<std::pair<std::string, std::size_t>> counts;
  for (std::size_t c = 0; c < num_classes; ++c) {
    next_line("class line");
    const auto count_tag = line.rfind(" count ");
    const auto vec_tag = line.rfind(" vectors ");
    if (line.rfind("class ", 0) != 0 || count_tag == std::string::npos || count_tag < 6 ||
        vec_tag == std::string::npos || vec_tag < count_tag)
      throw FormatError("malformed class line '" + line + "'");
    const std::string_view view(line);
    const auto count = parse_int(view.substr(count_tag + 7, vec_tag - count_tag - 7));
    const auto nvec = parse_int(view.substr(vec_tag + 9));
    if (!count || *count < 1 || !nvec || *nvec < 1)
      throw FormatError("malformed class line '" + line + "'");
    LabeledClass cls{line.substr(6, count_tag - 6), {}};
    for (long long v = 0; v < *nvec; ++v) {
      next_line("vector line");
      const auto tokens = split(line, ' ');
      if (tokens.size() != dim) throw FormatError("vector line has the wrong dimension");
      Feature x;
      x.reserve(dim);
      for (auto tok : tokens) {
        const auto value = parse_double(tok);
        if (!value) throw FormatError("malformed value '" + std::string(tok) + "'");
        x.push_back(*value);
      }
      cls.instances.push_back(std::move(x));
    }
    counts.emplace_back(cls.label, static_cast<std::size_t>(*count));
    classes.push_back(std::move(cls));
  }

  try {
    Dataset vectors(std::move(classes));
    std::sort(counts.begin(), counts.end());
    std::vector<std::size_t> ordered;
    for (const auto& [label, n] : counts) ordered.push_back(n);
    if (kind == "pnn") return GaussianPnnModel(std::move(vectors), SmoothingSigma(sigma));
    if (kind == "reduced-pnn")
      return ReducedPnnModel(std::move(vectors), std::move(ordered), SmoothingSigma(sigma));
    if (kind == "knn") return KnnModel(std::move(vectors), k);
    if (kind == "centroid") return CentroidModel(std::move(vectors), std::move(ordered));
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(e.what());
  }
  throw FormatError("unknown baseline kind '" + kind + "'");
}

}  // namespace fpnn
