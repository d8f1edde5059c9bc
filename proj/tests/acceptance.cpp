// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Usage: acceptance [criterion ...]   (no arguments runs all twelve)

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bground/bground.hpp"

using namespace bground;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  std::function<Verdict()> run;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

unsigned worker_threads() { return resolve_threads(std::nullopt); }

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// ---------------------------------------------------------------------------

Verdict oracle_equivalence() {
  const Stopwatch clock;
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> size(1, 12);
  const std::array<double, 3> heights{0.5, 1.0, 8.0};
  double worst = 0.0;
  std::size_t failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double b = heights[static_cast<std::size_t>(trial) % heights.size()];
    std::bernoulli_distribution zero(0.5);
    std::vector<double> values(size(rng));
    for (double& v : values) v = zero(rng) ? 0.0 : b;
    const SchrodingerOperator h(PotentialRealization::from_values(values, b));
    const double diff = std::abs(ground_energy(h) - dense_spectrum_oracle(h).front());
    worst = std::max(worst, diff);
    failures += diff > 1e-10;
  }
  const double elapsed = clock.seconds();
  return {failures == 0 && elapsed < 10.0,
          fmt("max |E0 - oracle| = %.2e (gate 1e-10), %zu failures, %.2f s (gate 10 s)", worst,
              failures, elapsed)};
}

EnsembleConfig desk_ensemble(std::size_t n_samples, bool vectors, double b = 1.0) {
  EnsembleConfig config;
  config.params = {10'000, 0.5, b, 2002};
  config.n_samples = n_samples;
  config.solve_vectors = vectors;
  config.threads = worker_threads();
  return config;
}

Verdict upper_sandwich() {
  const auto summary = run_ensemble(desk_ensemble(10'000, false));
  std::size_t violations = 0;
  for (const auto& r : summary.records) {
    if (!r.upper_exact) continue;
    const double ell1 = static_cast<double>(r.ell + 1);
    const bool ok = r.energy <= *r.upper_exact + 1e-9 &&
                    *r.upper_exact <= kPi * kPi / (ell1 * ell1) + 1e-9;
    violations += !ok;
    violations += ok != r.upper_ok;
  }
  return {violations == 0 && summary.records.size() == 10'000,
          fmt("%zu realizations, %zu violations, median ratio %.6f", summary.records.size(),
              violations, summary.ratio.median)};
}

Verdict barrier_mass_check() {
  std::size_t violations = 0;
  double worst_energy_gap = -std::numeric_limits<double>::infinity();
  double worst_bound_gap = -std::numeric_limits<double>::infinity();
  const auto summary = run_ensemble(desk_ensemble(500, true));
  for (const auto& r : summary.records) {
    const double b = summary.config.params.b;
    const double ell1 = static_cast<double>(r.ell + 1);
    const double energy_gap = b * *r.barrier_mass - r.energy;
    const double bound_gap = *r.barrier_mass - kPi * kPi / (b * ell1 * ell1);
    worst_energy_gap = std::max(worst_energy_gap, energy_gap);
    worst_bound_gap = std::max(worst_bound_gap, bound_gap);
    violations += energy_gap > 1e-9 || bound_gap > 1e-9 || !r.barrier_ok;
  }
  return {violations == 0,
          fmt("500 eigenvector solves, %zu violations, max(b m_B - E0) = %.3e, "
              "max(m_B - bound) = %.3e",
              violations, worst_energy_gap, worst_bound_gap)};
}

Verdict heavy_mass_check() {
  struct Tally {
    std::size_t nonvacuous = 0;
    std::size_t violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
  };
  auto tally = [](double b) {
    Tally t;
    const auto summary = run_ensemble(desk_ensemble(500, true, b));
    for (const auto& r : summary.records) {
      const double bound =
          1.0 - 3.0 * kPi * kPi / (b * std::pow(static_cast<double>(r.ell), 0.5));
      if (bound > 0.0) {
        ++t.nonvacuous;
        t.min_margin = std::min(t.min_margin, *r.heavy_mass - bound);
        t.violations += *r.heavy_mass < bound - 1e-9;
      }
      t.violations += !r.heavy_ok;
    }
    return t;
  };
  const Tally unit = tally(1.0);
  const Tally tall = tally(100.0);
  return {unit.violations == 0 && tall.violations == 0,
          fmt("b=1: bound positive in %zu/500, %zu violations; b=100: positive in %zu/500, "
              "%zu violations, min margin %.4f",
              unit.nonvacuous, unit.violations, tall.nonvacuous, tall.violations,
              tall.min_margin)};
}

Verdict single_island_certificate() {
  std::string detail;
  bool pass = true;
  double previous_ratio = 0.0;
  for (std::size_t length : {900u, 2000u, 10'000u}) {
    std::vector<double> values(length + 200, 1.0);
    std::fill_n(values.begin() + 100, length, 0.0);
    const auto report = analyze(PotentialRealization::from_values(values, 1.0));
    const double lower = report.lower->value;
    const double ratio = lower / report.upper->asymptotic;
    const bool ok = report.lower->valid && lower <= report.energy + 1e-12 &&
                    report.energy <= report.upper->exact + 1e-12 && ratio > previous_ratio;
    pass = pass && ok;
    previous_ratio = ratio;
    detail += fmt("L=%zu: %.6e <= %.6e <= %.6e, cert/asym %.4f%s; ", length, lower,
                  report.energy, report.upper->exact, ratio, ok ? "" : " FAIL");
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

// Median ratios frozen from the pilot run (seed 2006 + decade index).
constexpr std::array<std::size_t, 4> kTrendSizes{1'000, 10'000, 100'000, 1'000'000};
constexpr std::array<double, 4> kTrendBaselines{0.760228, 0.812957, 0.845376, 0.869829};

Verdict ratio_trend() {
  std::string detail;
  bool pass = true;
  double previous = 0.0;
  for (std::size_t i = 0; i < kTrendSizes.size(); ++i) {
    EnsembleConfig config;
    config.params = {kTrendSizes[i], 0.5, 1.0, 2006 + i};
    config.n_samples = 2000;
    config.threads = worker_threads();
    const auto summary = run_ensemble(config);
    const double median = summary.ratio.median;
    const bool ok = median > 0.0 && median <= 1.0 && median > previous &&
                    std::abs(median - kTrendBaselines[i]) <= 0.01;
    pass = pass && ok && summary.violations.total() == 0;
    previous = median;
    detail += fmt("N=%zu median %.6f (baseline %.6f)%s; ", kTrendSizes[i], median,
                  kTrendBaselines[i], ok ? "" : " FAIL");
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Verdict top_spectrum() {
  std::mt19937_64 rng(1007);
  std::bernoulli_distribution zero(0.5);
  const std::array<double, 3> heights{0.5, 1.0, 8.0};
  double worst = 0.0;
  std::size_t violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double b = heights[static_cast<std::size_t>(trial) % heights.size()];
    std::vector<double> values(1000);
    for (double& v : values) v = zero(rng) ? 0.0 : b;
    const auto report = top_spectrum_check(PotentialRealization::from_values(values, b));
    worst = std::max(worst, report.residual);
    violations += report.residual > 1e-9;
  }
  return {violations == 0,
          fmt("1000 instances, max residual %.2e (gate 1e-9), %zu violations", worst, violations)};
}

Verdict limit_law() {
  const Stopwatch clock;
  const PotentialParams params{100'000, 0.5, 1.0, 2008};
  const auto stats = collect_run_statistics(params, 20'000, 0, worker_threads());
  const auto result = limit_law_from_statistics(stats, params);
  const double elapsed = clock.seconds();
  return {result.report.sup_distance <= 0.05 && elapsed < 60.0,
          fmt("sup distance %.4f (gate 0.05), theta %.4f, mu_hat %.5f, %.1f s (gate 60 s)",
              result.report.sup_distance, result.report.theta, result.density.mu_hat, elapsed)};
}

Verdict island_density() {
  const PotentialParams params{1'000'000, 0.5, 1.0, 2009};
  const auto stats = collect_run_statistics(params, 100, 0, worker_threads());
  std::vector<IslandCount> counts;
  for (const auto& s : stats) counts.push_back({s.n_islands, params.n_sites});
  const auto est = island_density_estimate(std::span<const IslandCount>(counts), params.p);
  return {std::abs(est.mu_hat - 0.25) <= 0.001,
          fmt("mu_hat %.6f +- %.6f (gate 0.25 +- 0.001); pq = %.4f, 1/(2+1/(pq)) = %.4f",
              est.mu_hat, est.halfwidth, est.combinatorial, est.alternative)};
}

Verdict small_n_law() {
  double worst = 0.0;
  std::size_t worst_n = 0;
  for (std::size_t n = 1; n <= 12; ++n) {
    const double p = 0.5;
    const PotentialParams params{n, p, 1.0, 2010 + n};
    std::vector<double> freq(n + 1, 0.0);
    constexpr std::size_t kDraws = 1'000'000;
    for (std::uint64_t k = 0; k < kDraws; ++k) {
      freq[sample_run_statistics(params, k).longest_run] += 1.0;
    }
    const auto law = longest_run_distribution(n, p);
    double tv = 0.0;
    for (std::size_t m = 0; m <= n; ++m) {
      tv += std::abs(freq[m] / static_cast<double>(kDraws) - law[m]);
    }
    tv *= 0.5;
    if (tv > worst) {
      worst = tv;
      worst_n = n;
    }
  }
  return {worst <= 0.005,
          fmt("N=1..12, 10^6 draws each: max total variation %.5f at N=%zu (gate 0.005)", worst,
              worst_n)};
}

Verdict determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "bground_acceptance";
  std::filesystem::create_directories(dir);
  std::array<std::string, 2> csv, json;
  const std::array<unsigned, 2> threads{1, 8};
  for (std::size_t i = 0; i < threads.size(); ++i) {
    EnsembleConfig config = desk_ensemble(100, true);
    config.threads = threads[i];
    const auto summary = run_ensemble(config);
    const auto csv_path = dir / fmt("threads%u.csv", threads[i]);
    const auto json_path = dir / fmt("threads%u.json", threads[i]);
    emit_report(summary, ReportFormat::csv, csv_path.string());
    emit_report(summary, ReportFormat::json, json_path.string());
    csv[i] = read_bytes(csv_path);
    json[i] = read_bytes(json_path);
  }
  return {csv[0] == csv[1] && json[0] == json[1] && !csv[0].empty(),
          fmt("threads 1 vs 8: CSV %s (%zu bytes), JSON %s (%zu bytes)",
              csv[0] == csv[1] ? "identical" : "DIFFER", csv[0].size(),
              json[0] == json[1] ? "identical" : "DIFFER", json[0].size())};
}

Verdict performance() {
  const auto potential = sample_bernoulli({1'000'000, 0.5, 1.0, 2012}, 0);
  const Stopwatch energy_clock;
  const SchrodingerOperator h(potential);
  const double e0 = ground_energy(h);
  const double energy_seconds = energy_clock.seconds();

  const Stopwatch vector_clock;
  const SchrodingerOperator h2(potential);
  const auto state = ground_vector(h2, ground_energy(h2));
  const double vector_seconds = vector_clock.seconds();
  return {energy_seconds < 5.0 && vector_seconds < 20.0 && state.residual <= 1e-10,
          fmt("N=10^6: energy %.3f s (gate 5 s), energy + vector %.3f s (gate 20 s), "
              "E0 %.6e, residual %.1e",
              energy_seconds, vector_seconds, e0, state.residual)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "dense oracle equivalence", oracle_equivalence},
      {2, "upper-bound sandwich", upper_sandwich},
      {3, "barrier mass bound", barrier_mass_check},
      {4, "heavy island mass bound", heavy_mass_check},
      {5, "single-island lower certificate", single_island_certificate},
      {6, "ground-energy ratio trend", ratio_trend},
      {7, "top-of-spectrum identity", top_spectrum},
      {8, "longest-run limit law", limit_law},
      {9, "island density", island_density},
      {10, "exhaustive small-N longest-run law", small_n_law},
      {11, "thread-count determinism", determinism},
      {12, "single-solve performance", performance},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    const Stopwatch clock;
    Verdict verdict;
    try {
      verdict = c.run();
    } catch (const std::exception& e) {
      verdict = {false, std::string("exception: ") + e.what()};
    }
    failures += !verdict.pass;
    std::printf("[%s] criterion %2d %s: %s [%.1f s]\n", verdict.pass ? "PASS" : "FAIL", c.id,
                c.title, verdict.detail.c_str(), clock.seconds());
    std::fflush(stdout);
  }
  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
