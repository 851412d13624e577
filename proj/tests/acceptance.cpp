// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fpnn/baselines.hpp"
#include "fpnn/cli.hpp"
#include "fpnn/fejer_pnn.hpp"
#include "fpnn/fourier_density.hpp"
#include "fpnn/kernels.hpp"
#include "fpnn/numio.hpp"
#include "test_support.hpp"

using namespace fpnn;
using std::numbers::pi;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Raised cosine centred at c, cut to [-1, 1] and renormalised.
struct RaisedCosine {
  double c;
  double z;

  explicit RaisedCosine(double centre) : c(centre), z(0.0) {
    const double lo = std::max(-1.0, c - 1.0), hi = std::min(1.0, c + 1.0);
    // Closed-form antiderivative of (1 + cos(pi (x - c))) / 2.
    auto F = [&](double x) { return 0.5 * (x + std::sin(pi * (x - c)) / pi); };
    z = F(hi) - F(lo);
  }
  double operator()(double x) const {
    if (x < -1.0 || x > 1.0 || std::abs(x - c) > 1.0) return 0.0;
    return 0.5 * (1.0 + std::cos(pi * (x - c))) / z;
  }
  double sample(std::mt19937_64& rng) const {
    const double lo = std::max(-1.0, c - 1.0), hi = std::min(1.0, c + 1.0);
    std::uniform_real_distribution<double> u(lo, hi), accept(0.0, 1.0);
    for (;;) {
      const double x = u(rng);
      if (accept(rng) <= 0.5 * (1.0 + std::cos(pi * (x - c)))) return x;
    }
  }
};

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

double trapezoid(const std::function<double(double)>& f, int n) {
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) acc += ((i == 0 || i == n) ? 0.5 : 1.0) * f(-1.0 + 2.0 * i / n);
  return acc * 2.0 / n;
}

std::vector<double> column(const Dataset& ds, std::size_t c, std::size_t d) {
  std::vector<double> out;
  for (const auto& x : ds.instances(c)) out.push_back(x[d]);
  return out;
}

// Multi-class problem with per-class box distributions; `queries` are fresh
// draws from randomly chosen classes.
struct Problem {
  Dataset train;
  std::vector<Feature> queries;
};

Problem random_problem(std::mt19937_64& rng, std::size_t classes, std::size_t dim, std::size_t max_count,
                       std::size_t n_queries) {
  std::uniform_real_distribution<double> centre(-0.6, 0.6), noise(-0.4, 0.4);
  std::uniform_int_distribution<std::size_t> count(3, max_count), pick(0, classes - 1);
  std::vector<Feature> mus(classes, Feature(dim));
  for (auto& mu : mus)
    for (auto& m : mu) m = centre(rng);
  auto draw = [&](std::size_t c) {
    Feature x(dim);
    for (std::size_t d = 0; d < dim; ++d) x[d] = std::clamp(mus[c][d] + noise(rng), -1.0, 1.0);
    return x;
  };
  std::vector<LabeledClass> cls;
  for (std::size_t c = 0; c < classes; ++c) {
    LabeledClass lc{"c" + std::to_string(c), {}};
    const auto n = count(rng);
    for (std::size_t r = 0; r < n; ++r) lc.instances.push_back(draw(c));
    cls.push_back(std::move(lc));
  }
  Problem p{Dataset(std::move(cls)), {}};
  for (std::size_t q = 0; q < n_queries; ++q) p.queries.push_back(draw(pick(rng)));
  return p;
}

// ---------------------------------------------------------------------------

Outcome dirichlet_identity() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> jd(1, 16);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng), y = u(rng);
    const int J = jd(rng);
    double oracle = 0.0;
    for (int j = -J; j <= J; ++j) oracle += std::cos(j * pi * (x - y));
    worst = std::max(worst, std::abs(dirichlet(x, y, Cutoff(J)) - oracle));
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-9 && secs < 1.0,
          fmt("max |dirichlet - cosine sum| = %.3g over 10000 cases (limit 1e-9), %.2f s (limit 1 s)", worst,
              secs)};
}

Outcome fejer_properties() {
  const auto t0 = Clock::now();
  double min_value = 1e300, worst = 0.0;
  std::vector<double> partial(33);
  for (int i = 0; i <= 40000; ++i) {
    const double delta = -2.0 + i * 1e-4;
    const double x = 0.5 * delta, y = -0.5 * delta;
    // partial[k] = sum_{m=0..k} D_m with D_0 = 1
    partial[0] = 1.0;
    for (int k = 1; k <= 32; ++k) partial[k] = partial[k - 1] + dirichlet(x, y, Cutoff(k));
    for (int J = 1; J <= 32; ++J) {
      const double f = fejer(x, y, Cutoff(J));
      min_value = std::min(min_value, f);
      worst = std::max(worst, std::abs(f - partial[J] / (J + 1)));
    }
  }
  const double secs = seconds_since(t0);
  return {min_value >= -1e-12 && worst < 1e-9 && secs < 10.0,
          fmt("min fejer = %.3g (limit -1e-12), max |fejer - mean of Dirichlet partial sums| = %.3g (limit "
              "1e-9), %.2f s (limit 10 s)",
              min_value, worst, secs)};
}

Outcome canonical_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(103);
  std::uniform_int_distribution<int> rd(1, 50), jd(1, 12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    const auto samples = fixtures::uniform_samples(rng, static_cast<std::size_t>(rd(rng)));
    const Cutoff J(jd(rng));
    const auto coeffs = fourier_coeffs(samples, J);
    for (int q = 0; q < 100; ++q) {
      const double x = u(rng);
      worst = std::max(worst, std::abs(density_noncanonical(x, coeffs) - density_canonical(x, samples, J)));
    }
  }

  std::uniform_int_distribution<std::size_t> cd(2, 5), dd(1, 8);
  std::size_t queries = 0, mismatches = 0;
  for (int prob = 0; prob < 50; ++prob) {
    const auto p = random_problem(rng, cd(rng), dd(rng), 50, 40);
    const Cutoff J(jd(rng));
    const auto model = train_fejer(p.train, J);
    for (const auto& x : p.queries) {
      std::vector<double> oracle(p.train.num_classes());
      for (std::size_t c = 0; c < oracle.size(); ++c) {
        oracle[c] = std::log(static_cast<double>(p.train.count(c)));
        for (std::size_t d = 0; d < p.train.dim(); ++d)
          oracle[c] += std::log(std::max(FejerPnnModel::kDensityFloor,
                                         density_canonical(x[d], column(p.train, c, d), J)));
      }
      ++queries;
      mismatches += model.predict(x).class_index != argmax(oracle);
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-9 && mismatches == 0 && secs < 30.0,
          fmt("max density difference %.3g over 20000 queries (limit 1e-9), %zu/%zu label mismatches "
              "against the kernel-sum MAP oracle, %.2f s (limit 30 s)",
              worst, mismatches, queries, secs)};
}

Outcome incremental_batch() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(104);
  std::uniform_int_distribution<std::size_t> cd(1, 5), dd(1, 8), extra_class(0, 4);
  std::uniform_int_distribution<int> jd(1, 12);
  double worst = 0.0;
  for (int prob = 0; prob < 100; ++prob) {
    const std::size_t C = cd(rng);
    const auto p = random_problem(rng, C, dd(rng), 30, 10);
    const Cutoff J(jd(rng));
    auto model = train_fejer(p.train, J);
    auto all = p.train.classes();
    for (const auto& x : p.queries) {
      const std::size_t c = extra_class(rng) % C;
      model.add_instance(x, all[c].label);
      all[c].instances.push_back(x);
    }
    const auto batch = train_fejer(Dataset(all), J);
    for (std::size_t c = 0; c < C; ++c) {
      if (model.count(c) != batch.count(c)) worst = 1e300;
      const auto& a = model.classes()[c].weights;
      const auto& b = batch.classes()[c].weights;
      for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-12 && secs < 10.0,
          fmt("max weight difference %.3g after 10 updates on 100 problems (limit 1e-12), %.2f s (limit 10 s)",
              worst, secs)};
}

Outcome normalization() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(105);
  std::uniform_int_distribution<int> rd(1, 200), jd(1, 40);
  std::uniform_real_distribution<double> bound(-1.0, 1.0);
  double worst = 0.0;
  for (int set = 0; set < 50; ++set) {
    double lo = bound(rng), hi = bound(rng);
    if (lo > hi) std::swap(lo, hi);
    const auto samples = fixtures::uniform_samples(rng, static_cast<std::size_t>(rd(rng)), lo, hi);
    const auto coeffs = fourier_coeffs(samples, Cutoff(jd(rng)));
    const double mass = trapezoid([&](double x) { return density_noncanonical(x, coeffs); }, 10000);
    worst = std::max(worst, std::abs(mass - 1.0));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-3 && secs < 5.0,
          fmt("max |integral - 1| = %.3g over 50 coefficient sets (limit 1e-3), %.2f s (limit 5 s)", worst,
              secs)};
}

Outcome bayes_convergence() {
  const auto t0 = Clock::now();
  const RaisedCosine fa(-0.3), fb(0.3);
  const double bayes = 1.0 - 0.5 * simpson([&](double x) { return std::min(fa(x), fb(x)); }, -1.0, 1.0, 200000);

  std::mt19937_64 rng(106);
  const std::size_t per_class = 2000;
  std::vector<LabeledClass> cls{{"A", {}}, {"B", {}}};
  for (std::size_t r = 0; r < per_class; ++r) {
    cls[0].instances.push_back({fa.sample(rng)});
    cls[1].instances.push_back({fb.sample(rng)});
  }
  const int J = fixed_cutoff(2 * per_class, 2);
  const auto model = train_fejer(Dataset(std::move(cls)), Cutoff(J));

  std::bernoulli_distribution coin(0.5);
  int correct = 0;
  const int n_test = 10000;
  for (int i = 0; i < n_test; ++i) {
    const std::size_t truth = coin(rng) ? 1 : 0;
    const double x = truth ? fb.sample(rng) : fa.sample(rng);
    correct += model.predict(std::vector<double>{x}).class_index == truth;
  }
  const double acc = static_cast<double>(correct) / n_test;
  const double secs = seconds_since(t0);
  return {std::abs(acc - bayes) <= 0.02 && secs < 30.0,
          fmt("J = %d, test accuracy %.4f vs Bayes %.4f (gap %.2f points, limit 2), %.2f s (limit 30 s)", J, acc,
              bayes, 100.0 * std::abs(acc - bayes), secs)};
}

Outcome mise_decay() {
  const auto t0 = Clock::now();
  const RaisedCosine f(-0.3);
  std::mt19937_64 rng(107);
  auto median_ise = [&](std::size_t R) {
    const int J = static_cast<int>(std::ceil(std::cbrt(static_cast<double>(R)) - 1e-9));
    std::vector<double> ise;
    for (int t = 0; t < 20; ++t) {
      std::vector<double> s(R);
      for (auto& v : s) v = f.sample(rng);
      const auto c = fourier_coeffs(s, Cutoff(J));
      ise.push_back(trapezoid(
          [&](double x) {
            const double e = density_noncanonical(x, c) - f(x);
            return e * e;
          },
          10000));
    }
    std::nth_element(ise.begin(), ise.begin() + 10, ise.end());
    const double upper = ise[10];
    const double lower = *std::max_element(ise.begin(), ise.begin() + 10);
    return std::pair{0.5 * (lower + upper), J};
  };
  const auto [small, j_small] = median_ise(100);
  const auto [large, j_large] = median_ise(800);
  const double secs = seconds_since(t0);
  return {large < small && secs < 30.0,
          fmt("median ISE %.3g at R = 100 (J = %d) vs %.3g at R = 800 (J = %d), %.2f s (limit 30 s)", small,
              j_small, large, j_large, secs)};
}

// Mean per-query latency in ms: one warm-up pass, then the median of five
// timed passes (each timed around the predict call only).
double latency_ms(const std::function<Prediction(std::span<const double>)>& predict,
                  const std::vector<Feature>& queries) {
  std::size_t sink = 0;
  for (const auto& q : queries) sink += predict(q).class_index;
  std::vector<double> passes;
  for (int rep = 0; rep < 5; ++rep) {
    Clock::duration elapsed{};
    for (const auto& q : queries) {
      const auto start = Clock::now();
      sink += predict(q).class_index;
      elapsed += Clock::now() - start;
    }
    passes.push_back(std::chrono::duration<double, std::milli>(elapsed).count() / queries.size());
  }
  if (sink == static_cast<std::size_t>(-1)) std::puts("");
  std::sort(passes.begin(), passes.end());
  return passes[2];
}

Outcome runtime_scaling() {
  const auto t0 = Clock::now();
  const std::size_t C = 10, D = 256;
  std::mt19937_64 rng(108);
  const auto big = fixtures::normalized_blobs(rng, C, D, 640, 0.5);
  std::vector<LabeledClass> small_cls;
  for (const auto& cls : big.classes())
    small_cls.push_back({cls.label, {cls.instances.begin(), cls.instances.begin() + 10}});
  const Dataset small(std::move(small_cls));
  const int J = fixed_cutoff(small.size(), C);

  const auto queries = fixtures::normalized_blobs(rng, C, D, 20, 0.5);
  std::vector<Feature> q;
  for (const auto& cls : queries.classes()) q.insert(q.end(), cls.instances.begin(), cls.instances.end());

  const auto f_small = train_fejer(small, Cutoff(J)), f_big = train_fejer(big, Cutoff(J));
  const auto p_small = pnn_train(small, SmoothingSigma(0.1)), p_big = pnn_train(big, SmoothingSigma(0.1));
  const double fs = latency_ms([&](std::span<const double> x) { return f_small.predict(x); }, q);
  const double fb = latency_ms([&](std::span<const double> x) { return f_big.predict(x); }, q);
  const double ps = latency_ms([&](std::span<const double> x) { return p_small.predict(x); }, q);
  const double pb = latency_ms([&](std::span<const double> x) { return p_big.predict(x); }, q);
  const double secs = seconds_since(t0);
  const double fr = fb / fs, pr = pb / ps;
  return {fr <= 2.0 && pr >= 16.0 && secs < 120.0,
          fmt("J = %d; fejer %.4f -> %.4f ms (ratio %.2f, limit 2); pnn %.4f -> %.4f ms (ratio %.1f, limit 16); "
              "%.1f s (limit 120 s)",
              J, fs, fb, fr, ps, pb, pr, secs)};
}

Outcome model_size() {
  std::mt19937_64 rng(109);
  const std::size_t C = 4, D = 16;
  const int J = 6;
  const auto ds = fixtures::normalized_blobs(rng, C, D, 9, 0.3);
  const auto model = train_fejer(ds, Cutoff(J));
  std::ostringstream first;
  save_model(model, first);
  const std::string text = first.str();

  std::size_t values = 0;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no <= 2 || line.rfind("class ", 0) == 0) continue;
    for (auto tok : split(line, ' ')) values += parse_double(tok).has_value();
  }
  std::istringstream back_in(text);
  const auto loaded = load_model(back_in);
  std::ostringstream second;
  save_model(loaded, second);
  bool bits = true;
  for (std::size_t c = 0; c < C; ++c) bits &= loaded.classes()[c].weights == model.classes()[c].weights;
  const std::size_t expected = C * D * (2 * J + 1);
  return {values == expected && model.weight_count() == expected && second.str() == text && bits,
          fmt("%zu serialized weights for C = %zu, D = %zu, J = %d (expected %zu); round trip %s", values, C, D, J,
              expected, (second.str() == text && bits) ? "byte-exact" : "differs")};
}

Outcome fixed_rule() {
  bool ok = true;
  std::string seen;
  for (std::size_t C : {1u, 4u, 10u, 102u}) {
    const int j = fixed_cutoff(25 * C, C);
    ok &= j == 6;
    seen += (seen.empty() ? "" : " ") + std::to_string(j);
  }
  return {ok, "J for R/C = 25 with C in {1, 4, 10, 102}: " + seen + " (expected 6)"};
}

Outcome bench_protocol() {
  const auto t0 = Clock::now();
  fixtures::TempDir dir;
  std::mt19937_64 rng(111);
  auto to_csv = [](const Dataset& ds) {
    std::ostringstream s;
    for (const auto& cls : ds.classes())
      for (const auto& x : cls.instances) {
        s << cls.label;
        for (double v : x) s << ',' << format_double(v);
        s << '\n';
      }
    return s.str();
  };
  const auto eval = dir.write("eval.csv", to_csv(fixtures::normalized_blobs(rng, 6, 16, 20, 0.35)));
  const auto tune = dir.write("tune.csv", to_csv(fixtures::normalized_blobs(rng, 6, 16, 20, 0.35)));

  auto run = [&](const std::string& out_name, std::string& table) {
    const std::vector<std::string> args{"bench", "--features", eval.string(), "--tuning-features",
                                        tune.string(), "--ratio", "0.25", "--splits", "10", "--seed", "2024",
                                        "--classifiers", "fejer,pnn,reduced-pnn,knn,centroid", "--out",
                                        dir.file(out_name).string()};
    std::ostringstream out, err;
    const int code = cli_main(args, out, err);
    table = out.str();
    if (code != 0) std::cerr << err.str();
    return code;
  };
  std::string table1, table2;
  const int c1 = run("a.csv", table1), c2 = run("b.csv", table2);
  if (c1 != 0 || c2 != 0) return {false, "bench exited with a nonzero status"};

  auto parse = [](const std::string& text, std::vector<std::string>& recalls, std::size_t& aggs, bool& header) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    header = line.rfind("# seed=2024 rng=", 0) == 0 && line.find(" ratio=0.25") != std::string::npos;
    while (std::getline(in, line)) {
      const auto cols = split(line, ',');
      if (cols.size() != 4 || cols[0] == "classifier") continue;
      if (cols[1] == "AGG") {
        aggs += cols[2].find("±") != std::string_view::npos && cols[3].find("±") != std::string_view::npos;
      } else {
        recalls.push_back(std::string(cols[0]) + "," + std::string(cols[1]) + "," + std::string(cols[2]));
      }
    }
  };
  std::vector<std::string> r1, r2;
  std::size_t agg1 = 0, agg2 = 0;
  bool h1 = false, h2 = false;
  parse(fixtures::read_file(dir.file("a.csv")), r1, agg1, h1);
  parse(fixtures::read_file(dir.file("b.csv")), r2, agg2, h2);
  const bool layout = h1 && h2 && r1.size() == 50 && agg1 == 5 && agg2 == 5 &&
                      table1.find("Mean accuracy") != std::string::npos;
  const bool same = r1 == r2;
  const double secs = seconds_since(t0);
  return {layout && same,
          fmt("%zu split rows and %zu aggregate rows per run, recall columns %s across two runs with seed 2024, "
              "%.1f s",
              r1.size(), agg1, same ? "byte-identical" : "differ", secs)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "Dirichlet identity", dirichlet_identity},
      {2, "Fejer kernel properties", fejer_properties},
      {3, "canonical and series forms agree", canonical_equivalence},
      {4, "incremental update equals batch training", incremental_batch},
      {5, "density normalization", normalization},
      {6, "Bayes convergence", bayes_convergence},
      {7, "MISE decay", mise_decay},
      {8, "prediction cost scaling", runtime_scaling},
      {9, "model size and round trip", model_size},
      {10, "fixed cut-off rule", fixed_rule},
      {11, "benchmark protocol and determinism", bench_protocol},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail
              << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
