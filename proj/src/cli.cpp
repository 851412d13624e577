#include "fpnn/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <variant>

#include "fpnn/baselines.hpp"
#include "fpnn/bench.hpp"
#include "fpnn/errors.hpp"
#include "fpnn/fejer_pnn.hpp"
#include "fpnn/fourier_density.hpp"
#include "fpnn/numio.hpp"
#include "fpnn/pca.hpp"

namespace fpnn {

namespace {

namespace fs = std::filesystem;

// PCA transforms travel next to the model they were fitted for.
fs::path pca_sidecar(const fs::path& model) { return fs::path(model.string() + ".pca"); }

std::optional<std::size_t> parse_pca_flag(const std::string& text) {
  if (text.empty() || text == "none") return std::nullopt;
  const auto v = parse_int(text);
  if (!v || *v < 1) throw InvalidParameter("--pca expects a positive integer or 'none'");
  return static_cast<std::size_t>(*v);
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  for (auto part : split(text, ',')) {
    if (trim(part).empty()) continue;
    if constexpr (std::is_floating_point_v<T>) {
      const auto v = parse_double(part);
      if (!v || *v <= 0.0) throw InvalidParameter(std::string(flag) + ": bad value '" + std::string(part) + "'");
      out.push_back(*v);
    } else {
      const auto v = parse_int(part);
      if (!v || *v < 1) throw InvalidParameter(std::string(flag) + ": bad value '" + std::string(part) + "'");
      out.push_back(static_cast<T>(*v));
    }
  }
  if (out.empty()) throw InvalidParameter(std::string(flag) + " must not be empty");
  return out;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  return out;
}

using AnyModel = std::variant<FejerPnnModel, BaselineModel>;

AnyModel read_model(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open model file " + path.string());
  std::string first;
  std::getline(in, first);
  in.clear();
  in.seekg(0);
  if (first.rfind("BASELINE", 0) == 0) return load_baseline(in);
  return load_model(in);
}

std::size_t model_dim(const AnyModel& m) {
  if (const auto* f = std::get_if<FejerPnnModel>(&m)) return f->dim();
  return baseline_dim(std::get<BaselineModel>(m));
}

std::vector<FeatureRow> load_query_rows(const fs::path& features, const fs::path& model,
                                        bool normalize) {
  auto rows = load_feature_rows(features, normalize);
  const auto sidecar = pca_sidecar(model);
  if (fs::exists(sidecar)) {
    const auto pca = load_pca(sidecar);
    for (auto& row : rows) row.values = apply_pca(pca, row.values);
  }
  return rows;
}

struct TrainArgs {
  std::string features, classifier = "fejer", cutoff = "fixed", pca = "none", out;
  double sigma = 0.1;
  std::size_t k = 1, centroids = 1;
  int jmax = 32;
  std::uint64_t seed = 0;
  bool no_normalize = false, table1_literal = false;
};

int run_train(const TrainArgs& a, std::ostream& out) {
  auto ds = load_dataset(a.features, !a.no_normalize);
  const auto sidecar = pca_sidecar(a.out);
  if (const auto dim = parse_pca_flag(a.pca)) {
    const auto pca = fit_pca(ds, *dim);
    ds = apply_pca(pca, ds);
    save_pca(pca, sidecar);
  } else if (fs::exists(sidecar)) {
    fs::remove(sidecar);
  }

  const auto kind = parse_classifier_kind(a.classifier);
  auto file = open_output(a.out);
  switch (kind) {
    case ClassifierKind::Fejer: {
      const int J = resolve_cutoff(CutoffPolicy::parse(a.cutoff, a.jmax), ds);
      const auto model = train_fejer(ds, Cutoff(J), {.table1_literal = a.table1_literal});
      save_model(model, file);
      out << "trained fejer: classes=" << model.num_classes() << " dim=" << model.dim()
          << " cutoff=" << J << " weights=" << model.weight_count() << '\n';
      break;
    }
    case ClassifierKind::Pnn:
      save_baseline(pnn_train(ds, SmoothingSigma(a.sigma)), file);
      break;
    case ClassifierKind::ReducedPnn:
      save_baseline(reduced_pnn_train(ds, a.centroids, SmoothingSigma(a.sigma), a.seed), file);
      break;
    case ClassifierKind::Knn:
      save_baseline(knn_train(ds, a.k), file);
      break;
    case ClassifierKind::Centroid:
      save_baseline(centroid_train(ds), file);
      break;
  }
  if (kind != ClassifierKind::Fejer)
    out << "trained " << a.classifier << ": classes=" << ds.num_classes() << " dim=" << ds.dim()
        << " instances=" << ds.size() << '\n';
  if (!file) throw FormatError("failed writing " + a.out);
  return 0;
}

struct PredictArgs {
  std::string model, features, out;
  bool no_normalize = false;
};

int run_predict(const PredictArgs& a, std::ostream& out) {
  const auto model = read_model(a.model);
  const auto rows = load_query_rows(a.features, a.model, !a.no_normalize);
  std::vector<std::string> labels;
  std::function<Prediction(std::span<const double>)> classify;
  if (const auto* f = std::get_if<FejerPnnModel>(&model)) {
    for (std::size_t c = 0; c < f->num_classes(); ++c) labels.push_back(f->label(c));
    classify = [f](std::span<const double> x) { return f->predict(x); };
  } else {
    const auto& b = std::get<BaselineModel>(model);
    labels = baseline_labels(b);
    classify = [&b](std::span<const double> x) { return predict(b, x); };
  }
  if (!rows.empty() && rows.front().values.size() != model_dim(model))
    throw DimensionMismatch("features have dimension " + std::to_string(rows.front().values.size()) +
                            ", model expects " + std::to_string(model_dim(model)));

  auto file = open_output(a.out);
  std::size_t labeled = 0, correct = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& predicted = labels[classify(rows[i].values).class_index];
    file << i << ',' << rows[i].label << ',' << predicted << '\n';
    if (rows[i].label != "?") {
      ++labeled;
      if (rows[i].label == predicted) ++correct;
    }
  }
  out << "predicted " << rows.size() << " rows";
  if (labeled > 0) out << ", accuracy " << correct << '/' << labeled;
  out << '\n';
  return 0;
}

struct UpdateArgs {
  std::string model, features, out;
  bool no_normalize = false, create_classes = false;
};

int run_update(const UpdateArgs& a, std::ostream& out) {
  auto any = read_model(a.model);
  auto* model = std::get_if<FejerPnnModel>(&any);
  if (model == nullptr) throw FormatError("update supports fejer models only");
  const auto rows = load_query_rows(a.features, a.model, !a.no_normalize);
  for (const auto& row : rows) model->add_instance(row.values, row.label, a.create_classes);
  if (fs::exists(pca_sidecar(a.model)) && fs::absolute(a.model) != fs::absolute(a.out))
    fs::copy_file(pca_sidecar(a.model), pca_sidecar(a.out), fs::copy_options::overwrite_existing);
  auto file = open_output(a.out);
  save_model(*model, file);
  out << "applied " << rows.size() << " updates; classes=" << model->num_classes() << '\n';
  return 0;
}

struct BenchArgs {
  std::string features, tuning_features, classifiers = "fejer", out, pca = "none", cutoff = "fixed";
  std::string sigma_grid, k_grid, centroids_grid;
  double ratio = 0.0;
  int splits = 10, jmax = 32;
  std::uint64_t seed = 0;
  bool no_normalize = false;
};

int run_bench(const BenchArgs& a, std::ostream& out) {
  const auto ds = load_dataset(a.features, !a.no_normalize);
  std::optional<Dataset> tuning;
  if (!a.tuning_features.empty()) tuning = load_dataset(a.tuning_features, !a.no_normalize);

  auto grid = ParamGrid::standard();
  if (!a.sigma_grid.empty()) grid.sigma = parse_list<double>(a.sigma_grid, "--sigma-grid");
  if (!a.k_grid.empty()) grid.k = parse_list<std::size_t>(a.k_grid, "--k-grid");
  if (!a.centroids_grid.empty())
    grid.centroids = parse_list<std::size_t>(a.centroids_grid, "--centroids-grid");
  grid.cutoff = CutoffPolicy::parse(a.cutoff, a.jmax);

  const SplitConfig cfg{a.ratio, a.splits, a.seed};
  const auto kinds = parse_classifier_list(a.classifiers);
  BenchOptions options;
  options.pca_dim = parse_pca_flag(a.pca);
  const auto result =
      run_benchmark(ds, cfg, grid, kinds, tuning ? &*tuning : nullptr, options);
  auto file = open_output(a.out);
  write_results_csv(result, file);
  write_results_table(result, out);
  return 0;
}

struct TuneArgs {
  std::string features, policy = "fixed";
  int jmax = 32;
  bool no_normalize = false;
};

int run_tune(const TuneArgs& a, std::ostream& out) {
  const auto ds = load_dataset(a.features, !a.no_normalize);
  if (a.policy != "fixed" && a.policy != "hart")
    throw InvalidParameter("--policy must be 'fixed' or 'hart'");
  out << resolve_cutoff(CutoffPolicy::parse(a.policy, a.jmax), ds) << '\n';
  return 0;
}

struct PcaArgs {
  std::string features, out, transformed;
  std::size_t dim = 0;
  bool no_normalize = false;
};

int run_pca(const PcaArgs& a, std::ostream& out) {
  const auto ds = load_dataset(a.features, !a.no_normalize);
  const auto pca = fit_pca(ds, a.dim);
  save_pca(pca, a.out);
  if (!a.transformed.empty()) {
    auto file = open_output(a.transformed);
    write_feature_rows(file, apply_pca(pca, ds));
  }
  out << "fitted PCA: " << pca.input_dim() << " -> " << pca.output_dim() << '\n';
  return 0;
}

}  // namespace

int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fejer-kernel probabilistic neural network and baseline classifiers", "fpnn"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a classifier on a feature CSV");
  train_cmd->add_option("--features", train.features, "Training feature CSV")->required();
  train_cmd->add_option("--classifier", train.classifier, "fejer|pnn|reduced-pnn|knn|centroid")
      ->check(CLI::IsMember({"fejer", "pnn", "reduced-pnn", "knn", "centroid"}));
  train_cmd->add_option("--cutoff", train.cutoff, "fixed|hart|<int>");
  train_cmd->add_option("--jmax", train.jmax, "Largest cut-off tried by the hart policy");
  train_cmd->add_option("--sigma", train.sigma, "Gaussian smoothing parameter");
  train_cmd->add_option("--k", train.k, "Neighbourhood size for knn");
  train_cmd->add_option("--centroids", train.centroids, "Centroids per class for reduced-pnn");
  train_cmd->add_option("--pca", train.pca, "Principal components to keep, or 'none'");
  train_cmd->add_option("--seed", train.seed, "Seed for k-medians");
  train_cmd->add_option("--out", train.out, "Model output path")->required();
  train_cmd->add_flag("--no-normalize", train.no_normalize, "Skip L2 normalization of rows");
  train_cmd->add_flag("--table1-literal", train.table1_literal,
                      "Store W_cos[0] = 1/R_c instead of 1 (comparison runs)");

  PredictArgs pred;
  auto* pred_cmd = app.add_subcommand("predict", "Classify the rows of a feature CSV");
  pred_cmd->add_option("--model", pred.model, "Model file")->required();
  pred_cmd->add_option("--features", pred.features, "Feature CSV; label '?' when unknown")->required();
  pred_cmd->add_option("--out", pred.out, "Output CSV: row,true-label,predicted-label")->required();
  pred_cmd->add_flag("--no-normalize", pred.no_normalize, "Skip L2 normalization of rows");

  UpdateArgs upd;
  auto* upd_cmd = app.add_subcommand("update", "Fold new labeled rows into a fejer model");
  upd_cmd->add_option("--model", upd.model, "Model file")->required();
  upd_cmd->add_option("--features", upd.features, "Feature CSV with new instances")->required();
  upd_cmd->add_option("--out", upd.out, "Updated model path")->required();
  upd_cmd->add_flag("--create-classes", upd.create_classes, "Allow labels unknown to the model");
  upd_cmd->add_flag("--no-normalize", upd.no_normalize, "Skip L2 normalization of rows");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Random-subsampling cross-validation benchmark");
  bench_cmd->add_option("--features", bench.features, "Evaluation feature CSV")->required();
  bench_cmd->add_option("--tuning-features", bench.tuning_features, "Separate feature CSV for grid tuning");
  bench_cmd->add_option("--ratio", bench.ratio, "Training share per class, in (0, 1)")->required();
  bench_cmd->add_option("--splits", bench.splits, "Number of random splits");
  bench_cmd->add_option("--seed", bench.seed, "Split seed");
  bench_cmd->add_option("--classifiers", bench.classifiers, "Comma-separated classifier list");
  bench_cmd->add_option("--out", bench.out, "Results CSV")->required();
  bench_cmd->add_option("--sigma-grid", bench.sigma_grid, "Comma-separated sigma candidates");
  bench_cmd->add_option("--k-grid", bench.k_grid, "Comma-separated k candidates");
  bench_cmd->add_option("--centroids-grid", bench.centroids_grid, "Comma-separated centroid counts");
  bench_cmd->add_option("--cutoff", bench.cutoff, "fixed|hart|<int> for fejer");
  bench_cmd->add_option("--jmax", bench.jmax, "Largest cut-off tried by the hart policy");
  bench_cmd->add_option("--pca", bench.pca, "Principal components fitted per split, or 'none'");
  bench_cmd->add_flag("--no-normalize", bench.no_normalize, "Skip L2 normalization of rows");

  TuneArgs tune;
  auto* tune_cmd = app.add_subcommand("tune-cutoff", "Print the cut-off chosen by a policy");
  tune_cmd->add_option("--features", tune.features, "Feature CSV")->required();
  tune_cmd->add_option("--policy", tune.policy, "fixed|hart")
      ->check(CLI::IsMember({"fixed", "hart"}));
  tune_cmd->add_option("--jmax", tune.jmax, "Largest cut-off tried by the hart policy");
  tune_cmd->add_flag("--no-normalize", tune.no_normalize, "Skip L2 normalization of rows");

  PcaArgs pca;
  auto* pca_cmd = app.add_subcommand("pca-fit", "Fit a PCA transform on a feature CSV");
  pca_cmd->add_option("--features", pca.features, "Feature CSV")->required();
  pca_cmd->add_option("--dim", pca.dim, "Number of components")->required();
  pca_cmd->add_option("--out", pca.out, "Transform output path")->required();
  pca_cmd->add_option("--transform-out", pca.transformed, "Also write the projected features here");
  pca_cmd->add_flag("--no-normalize", pca.no_normalize, "Skip L2 normalization of rows");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return 2;
  }

  try {
    if (train_cmd->parsed()) return run_train(train, out);
    if (pred_cmd->parsed()) return run_predict(pred, out);
    if (upd_cmd->parsed()) return run_update(upd, out);
    if (bench_cmd->parsed()) return run_bench(bench, out);
    if (tune_cmd->parsed()) return run_tune(tune, out);
    if (pca_cmd->parsed()) return run_pca(pca, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace fpnn
