#include "fpnn/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <tuple>

#include "fpnn/baselines.hpp"
#include "fpnn/errors.hpp"
#include "fpnn/fejer_pnn.hpp"
#include "fpnn/fourier_density.hpp"
#include "fpnn/numio.hpp"
#include "fpnn/pca.hpp"

namespace fpnn {

void SplitConfig::validate() const {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidParameter("split ratio must lie in (0, 1)");
  if (n_splits < 1) throw InvalidParameter("need at least one split");
}

TrainTestSplit stratified_split(const Dataset& ds, double ratio, Rng& rng) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidParameter("split ratio must lie in (0, 1)");
  std::vector<LabeledClass> train, test;
  for (const auto& cls : ds.classes()) {
    const std::size_t n = cls.instances.size();
    if (n < 2) throw ClassTooSmall("class '" + cls.label + "' has fewer than two instances");
    auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio + 0.5));
    n_train = std::min(std::max<std::size_t>(n_train, 1), n - 1);

    // Partial Fisher-Yates: the first n_train slots become the training draw.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = 0; i < n_train; ++i) std::swap(order[i], order[i + uniform_index(rng, n - i)]);
    std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());

    LabeledClass tr{cls.label, {}}, te{cls.label, {}};
    for (std::size_t i = 0; i < n; ++i)
      (i < n_train ? tr : te).instances.push_back(cls.instances[order[i]]);
    train.push_back(std::move(tr));
    test.push_back(std::move(te));
  }
  return {Dataset(std::move(train)), Dataset(std::move(test))};
}

TrainTestSplit split_for(const Dataset& ds, const SplitConfig& cfg, int index) {
  auto rng = make_stream(cfg.seed, static_cast<std::uint64_t>(index));
  return stratified_split(ds, cfg.ratio, rng);
}

double mean_recall(std::span<const std::size_t> predicted, std::span<const std::size_t> truth,
                   std::size_t num_classes) {
  if (predicted.size() != truth.size())
    throw LengthMismatch("predicted and true label lists differ in length");
  std::vector<std::size_t> correct(num_classes, 0), total(num_classes, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= num_classes) throw InvalidParameter("true label index out of range");
    ++total[truth[i]];
    if (predicted[i] == truth[i]) ++correct[truth[i]];
  }
  double acc = 0.0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (total[c] == 0) throw MissingClass("class " + std::to_string(c) + " is absent from the truth");
    acc += static_cast<double>(correct[c]) / static_cast<double>(total[c]);
  }
  return acc / static_cast<double>(num_classes);
}

std::string classifier_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::Fejer: return "fejer";
    case ClassifierKind::Pnn: return "pnn";
    case ClassifierKind::ReducedPnn: return "reduced-pnn";
    case ClassifierKind::Knn: return "knn";
    case ClassifierKind::Centroid: return "centroid";
  }
  return "?";
}

ClassifierKind parse_classifier_kind(const std::string& name) {
  for (auto kind : {ClassifierKind::Fejer, ClassifierKind::Pnn, ClassifierKind::ReducedPnn,
                    ClassifierKind::Knn, ClassifierKind::Centroid})
    if (classifier_name(kind) == name) return kind;
  throw InvalidParameter("unknown classifier '" + name + "'");
}

std::vector<ClassifierKind> parse_classifier_list(const std::string& comma_list) {
  std::vector<ClassifierKind> kinds;
  for (auto part : split(comma_list, ',')) {
    const auto name = std::string(trim(part));
    if (!name.empty()) kinds.push_back(parse_classifier_kind(name));
  }
  if (kinds.empty()) throw InvalidParameter("no classifiers selected");
  return kinds;
}

CutoffPolicy CutoffPolicy::parse(const std::string& text, int hart_jmax) {
  if (text == "fixed") return {Kind::Fixed, 0};
  if (text == "hart") {
    if (hart_jmax < 1) throw InvalidParameter("--jmax must be positive");
    return {Kind::Hart, hart_jmax};
  }
  const auto j = parse_int(text);
  if (!j || *j < 1 || *j > 1'000'000)
    throw InvalidParameter("cut-off must be 'fixed', 'hart' or a positive integer, got '" + text + "'");
  return {Kind::Explicit, static_cast<int>(*j)};
}

std::string CutoffPolicy::describe() const {
  switch (kind) {
    case Kind::Fixed: return "fixed";
    case Kind::Hart: return "hart(jmax=" + std::to_string(value) + ")";
    case Kind::Explicit: return std::to_string(value);
  }
  return "?";
}

int resolve_cutoff(const CutoffPolicy& policy, const Dataset& train) {
  switch (policy.kind) {
    case CutoffPolicy::Kind::Fixed:
      return fixed_cutoff(train.size(), train.num_classes());
    case CutoffPolicy::Kind::Explicit:
      return Cutoff(policy.value).value();
    case CutoffPolicy::Kind::Hart: {
      std::vector<int> per_pair;
      per_pair.reserve(train.num_classes() * train.dim());
      std::vector<double> column;
      for (const auto& cls : train.classes()) {
        column.resize(cls.instances.size());
        for (std::size_t d = 0; d < train.dim(); ++d) {
          for (std::size_t r = 0; r < cls.instances.size(); ++r) column[r] = cls.instances[r][d];
          per_pair.push_back(hart_cutoff(column, Cutoff(policy.value)));
        }
      }
      return median_cutoff(per_pair);
    }
  }
  throw InvalidParameter("unknown cut-off policy");
}

std::string ClassifierParams::describe(ClassifierKind kind) const {
  switch (kind) {
    case ClassifierKind::Fejer: return "cutoff=" + cutoff.describe();
    case ClassifierKind::Pnn: return "sigma=" + format_double(sigma);
    case ClassifierKind::ReducedPnn:
      return "sigma=" + format_double(sigma) + " centroids=" + std::to_string(centroids);
    case ClassifierKind::Knn: return "k=" + std::to_string(k);
    case ClassifierKind::Centroid: return "-";
  }
  return "";
}

namespace {

template <class Model>
class ModelPredictor final : public Predictor {
 public:
  explicit ModelPredictor(Model m) : model_(std::move(m)) {}
  Prediction predict(std::span<const double> x) const override { return model_.predict(x); }

 private:
  Model model_;
};

template <class Model>
std::unique_ptr<Predictor> wrap(Model m) {
  return std::make_unique<ModelPredictor<Model>>(std::move(m));
}

}  // namespace

std::unique_ptr<Predictor> train_classifier(ClassifierKind kind, const ClassifierParams& params,
                                            const Dataset& train) {
  switch (kind) {
    case ClassifierKind::Fejer:
      return wrap(train_fejer(train, Cutoff(resolve_cutoff(params.cutoff, train)),
                              {.table1_literal = params.table1_literal}));
    case ClassifierKind::Pnn:
      return wrap(pnn_train(train, SmoothingSigma(params.sigma)));
    case ClassifierKind::ReducedPnn:
      return wrap(reduced_pnn_train(train, params.centroids, SmoothingSigma(params.sigma), params.seed));
    case ClassifierKind::Knn:
      return wrap(knn_train(train, params.k));
    case ClassifierKind::Centroid:
      return wrap(centroid_train(train));
  }
  throw InvalidParameter("unknown classifier kind");
}

ParamGrid ParamGrid::standard() {
  ParamGrid grid;
  grid.sigma.push_back(0.001);
  for (int i = 1; i <= 200; ++i) grid.sigma.push_back(0.005 * i);
  grid.k = {1, 3, 5};
  grid.centroids = {1, 3, 5, 10};
  grid.cutoff = {CutoffPolicy::Kind::Fixed, 0};
  return grid;
}

std::vector<ClassifierParams> ParamGrid::candidates(ClassifierKind kind) const {
  std::vector<ClassifierParams> out;
  ClassifierParams base;
  base.cutoff = cutoff;
  switch (kind) {
    case ClassifierKind::Fejer:
    case ClassifierKind::Centroid:
      out.push_back(base);
      break;
    case ClassifierKind::Pnn:
      for (double s : sigma) {
        auto p = base;
        p.sigma = s;
        out.push_back(p);
      }
      break;
    case ClassifierKind::ReducedPnn:
      for (auto m : centroids)
        for (double s : sigma) {
          auto p = base;
          p.sigma = s;
          p.centroids = m;
          out.push_back(p);
        }
      break;
    case ClassifierKind::Knn:
      for (auto kk : k) {
        auto p = base;
        p.k = kk;
        out.push_back(p);
      }
      break;
  }
  if (out.empty())
    throw InvalidParameter("empty parameter grid for " + classifier_name(kind));
  return out;
}

namespace {

TrainTestSplit prepared_split(const Dataset& ds, const SplitConfig& cfg, int index,
                              const BenchOptions& options) {
  auto split = split_for(ds, cfg, index);
  if (options.pca_dim) {
    const auto pca = fit_pca(split.train, *options.pca_dim);
    split.train = apply_pca(pca, split.train);
    split.test = apply_pca(pca, split.test);
  }
  return split;
}

ClassifierParams with_split_seed(ClassifierParams params, const SplitConfig& cfg, int index) {
  params.seed = splitmix64(splitmix64(cfg.seed) ^ static_cast<std::uint64_t>(index));
  return params;
}

struct Flattened {
  std::vector<const Feature*> queries;
  std::vector<std::size_t> truth;
};

Flattened flatten(const Dataset& test) {
  Flattened f;
  for (std::size_t c = 0; c < test.num_classes(); ++c)
    for (const auto& x : test.instances(c)) {
      f.queries.push_back(&x);
      f.truth.push_back(c);
    }
  return f;
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

double evaluate_recall(ClassifierKind kind, const ClassifierParams& params, const Dataset& ds,
                       const SplitConfig& cfg, const BenchOptions& options) {
  cfg.validate();
  double total = 0.0;
  for (int s = 0; s < cfg.n_splits; ++s) {
    const auto split = prepared_split(ds, cfg, s, options);
    const auto model = train_classifier(kind, with_split_seed(params, cfg, s), split.train);
    const auto flat = flatten(split.test);
    std::vector<std::size_t> predicted(flat.queries.size());
    for (std::size_t i = 0; i < flat.queries.size(); ++i)
      predicted[i] = model->predict(*flat.queries[i]).class_index;
    total += mean_recall(predicted, flat.truth, split.test.num_classes());
  }
  return total / cfg.n_splits;
}

BenchResult run_benchmark(const Dataset& ds, const SplitConfig& cfg, const ParamGrid& grid,
                          std::span<const ClassifierKind> classifiers, const Dataset* tuning,
                          const BenchOptions& options) {
  cfg.validate();
  if (classifiers.empty()) throw InvalidParameter("no classifiers selected");

  BenchResult result{cfg, {}};
  for (auto kind : classifiers) {
    const auto candidates = grid.candidates(kind);
    ClassifierParams chosen = candidates.front();
    if (candidates.size() > 1) {
      if (tuning == nullptr)
        throw MissingTuningSet(classifier_name(kind) + " has " + std::to_string(candidates.size()) +
                               " grid candidates; supply a tuning dataset");
      double best = -1.0;
      for (const auto& p : candidates) {
        const double r = evaluate_recall(kind, p, *tuning, cfg, options);
        if (r > best) {
          best = r;
          chosen = p;
        }
      }
    }
    ClassifierResult cr;
    cr.kind = kind;
    cr.params = chosen;
    result.classifiers.push_back(std::move(cr));
  }

  // Splits run sequentially so that timings never overlap.
  for (int s = 0; s < cfg.n_splits; ++s) {
    const auto split = prepared_split(ds, cfg, s, options);
    const auto flat = flatten(split.test);
    for (auto& cr : result.classifiers) {
      const auto model = train_classifier(cr.kind, with_split_seed(cr.params, cfg, s), split.train);
      std::vector<std::size_t> predicted(flat.queries.size());
      for (std::size_t i = 0; i < flat.queries.size(); ++i)
        predicted[i] = model->predict(*flat.queries[i]).class_index;

      using Clock = std::chrono::steady_clock;
      Clock::duration elapsed{};
      for (std::size_t i = 0; i < flat.queries.size(); ++i) {
        const auto start = Clock::now();
        const auto p = model->predict(*flat.queries[i]);
        elapsed += Clock::now() - start;
        predicted[i] = p.class_index;
      }
      const double ms = std::chrono::duration<double, std::milli>(elapsed).count() /
                        static_cast<double>(flat.queries.size());
      cr.splits.push_back({s, mean_recall(predicted, flat.truth, split.test.num_classes()), ms});
    }
  }

  for (auto& cr : result.classifiers) {
    std::vector<double> recalls, times;
    for (const auto& sp : cr.splits) {
      recalls.push_back(sp.recall);
      times.push_back(sp.mean_predict_ms);
    }
    std::tie(cr.mean_recall, cr.std_recall) = mean_std(recalls);
    std::tie(cr.mean_ms, cr.std_ms) = mean_std(times);
  }
  return result;
}

void write_results_csv(const BenchResult& result, std::ostream& out) {
  out << "# seed=" << result.config.seed << " rng=" << kRngName
      << " ratio=" << format_double(result.config.ratio) << '\n';
  for (const auto& cr : result.classifiers)
    out << "# params " << classifier_name(cr.kind) << ' ' << cr.params.describe(cr.kind) << '\n';
  out << "classifier,split,recall,mean_predict_ms\n";
  for (const auto& cr : result.classifiers)
    for (const auto& sp : cr.splits)
      out << classifier_name(cr.kind) << ',' << sp.split << ',' << fixed6(sp.recall) << ','
          << fixed6(sp.mean_predict_ms) << '\n';
  out << "classifier,AGG,mean_recall±std,mean_ms±std\n";
  for (const auto& cr : result.classifiers)
    out << classifier_name(cr.kind) << ",AGG," << fixed6(cr.mean_recall) << "±"
        << fixed6(cr.std_recall) << ',' << fixed6(cr.mean_ms) << "±" << fixed6(cr.std_ms)
        << '\n';
}

void write_results_table(const BenchResult& result, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof line, "%-14s %-22s %-20s %s\n", "Classifier", "Mean accuracy (%)",
                "Time (ms)", "Parameters");
  out << line;
  for (const auto& cr : result.classifiers) {
    char acc[64], ms[64];
    std::snprintf(acc, sizeof acc, "%.1f±%.1f", 100.0 * cr.mean_recall, 100.0 * cr.std_recall);
    std::snprintf(ms, sizeof ms, "%.3f±%.3f", cr.mean_ms, cr.std_ms);
    std::snprintf(line, sizeof line, "%-14s %-23s %-21s %s\n", classifier_name(cr.kind).c_str(), acc,
                  ms, cr.params.describe(cr.kind).c_str());
    out << line;
  }
}

}  // namespace fpnn
