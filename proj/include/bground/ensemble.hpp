#ifndef BGROUND_ENSEMBLE_HPP
#define BGROUND_ENSEMBLE_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bground/asymptotics.hpp"
#include "bground/bounds.hpp"
#include "bground/errors.hpp"
#include "bground/islands.hpp"
#include "bground/potential.hpp"

namespace bground {

struct EnsembleConfig {
  PotentialParams params;
  std::size_t n_samples = 1;
  std::uint64_t first_index = 0;
  double gamma = 0.5;
  bool solve_vectors = false;
  unsigned threads = 1;
  double tol = kDefaultTolerance;

  void validate() const {
    params.validate();
    detail::require(n_samples >= 1, "n_samples must be positive");
    ClassificationParams{gamma}.validate();
    detail::require(threads >= 1, "threads must be positive");
    detail::require(tol > 0.0, "tolerance must be positive");
  }
};

/// Per-realization view of every check. Optional fields are empty when the
/// realization has no island or when eigenvectors were not requested.
struct SampleRecord {
  std::uint64_t sample_index = 0;
  std::size_t ell = 0;
  std::size_t n_islands = 0;
  double energy = 0.0;
  std::optional<double> theorem1_ratio;
  std::optional<double> upper_exact;
  std::optional<double> lower_certificate;
  std::optional<bool> lower_valid;
  std::optional<double> barrier_mass;
  std::optional<double> heavy_mass;
  std::optional<std::size_t> heavy_count;
  std::optional<double> profile_s;
  std::optional<double> overlap_sq;
  std::size_t longest_b_run = 0;
  bool upper_ok = true;
  bool barrier_ok = true;
  bool heavy_ok = true;
  bool sandwich_ok = true;
  bool ratio_ok = true;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

inline SampleRecord make_record(std::uint64_t sample_index, const BoundsReport& report) {
  SampleRecord record;
  record.sample_index = sample_index;
  record.ell = report.longest_run;
  record.n_islands = report.n_islands;
  record.energy = report.energy;
  record.theorem1_ratio = report.theorem1_ratio;
  if (report.upper) record.upper_exact = report.upper->exact;
  if (report.lower) {
    record.lower_certificate = report.lower->value;
    record.lower_valid = report.lower->valid;
  }
  record.barrier_mass = report.barrier_mass;
  record.heavy_mass = report.heavy_mass;
  record.heavy_count = report.heavy_count;
  record.profile_s = report.profile_s;
  record.overlap_sq = report.overlap_sq;
  record.longest_b_run = report.longest_b_run;
  record.upper_ok = report.checks.upper;
  record.barrier_ok = report.checks.barrier;
  record.heavy_ok = report.checks.heavy;
  record.sandwich_ok = report.checks.sandwich;
  record.ratio_ok = report.checks.ratio;
  return record;
}

inline SampleRecord analyze_sample(const EnsembleConfig& config, std::uint64_t sample_index) {
  const PotentialRealization potential = sample_bernoulli(config.params, sample_index);
  const BoundsReport report =
      analyze(potential, AnalysisOptions{config.gamma, config.solve_vectors, config.tol});
  return make_record(sample_index, report);
}

/// Order statistics with linear interpolation between closest ranks.
struct Quantiles {
  double min = 0.0;
  double q01 = 0.0;
  double q10 = 0.0;
  double median = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

inline double quantile_sorted(const std::vector<double>& sorted, double level) {
  if (sorted.empty()) return std::nan("");
  const double position = level * static_cast<double>(sorted.size() - 1);
  const auto below = static_cast<std::size_t>(std::floor(position));
  const std::size_t above = std::min(below + 1, sorted.size() - 1);
  const double weight = position - static_cast<double>(below);
  return sorted[below] + weight * (sorted[above] - sorted[below]);
}

inline Quantiles quantiles(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  Quantiles q;
  q.count = values.size();
  q.min = quantile_sorted(values, 0.0);
  q.q01 = quantile_sorted(values, 0.01);
  q.q10 = quantile_sorted(values, 0.10);
  q.median = quantile_sorted(values, 0.5);
  q.q90 = quantile_sorted(values, 0.90);
  q.q99 = quantile_sorted(values, 0.99);
  q.max = quantile_sorted(values, 1.0);
  return q;
}

struct ViolationCounts {
  std::size_t upper = 0;
  std::size_t barrier = 0;
  std::size_t heavy = 0;
  std::size_t sandwich = 0;
  std::size_t ratio = 0;

  std::size_t total() const noexcept { return upper + barrier + heavy + sandwich + ratio; }
};

struct EnsembleSummary {
  EnsembleConfig config;
  std::vector<SampleRecord> records;  // ordered by sample_index
  Quantiles ratio;
  Quantiles ell;
  ViolationCounts violations;
  std::size_t valid_certificates = 0;
  std::optional<DensityEstimate> density;
  std::optional<LimitLawReport> limit_law;
};

/// Derives every aggregate from the records. The result depends only on the
/// record multiset, never on the order in which samples finished.
inline EnsembleSummary summarize(const EnsembleConfig& config, std::vector<SampleRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const SampleRecord& a, const SampleRecord& b) {
              return a.sample_index < b.sample_index;
            });
  EnsembleSummary summary;
  summary.config = config;
  summary.config.threads = 1;  // scheduling is not part of the result
  std::vector<double> ratios, ells;
  std::vector<IslandCount> counts;
  std::vector<std::size_t> runs;
  for (const SampleRecord& r : records) {
    if (r.theorem1_ratio) ratios.push_back(*r.theorem1_ratio);
    ells.push_back(static_cast<double>(r.ell));
    runs.push_back(r.ell);
    counts.push_back({r.n_islands, config.params.n_sites});
    summary.violations.upper += !r.upper_ok;
    summary.violations.barrier += !r.barrier_ok;
    summary.violations.heavy += !r.heavy_ok;
    summary.violations.sandwich += !r.sandwich_ok;
    summary.violations.ratio += !r.ratio_ok;
    summary.valid_certificates += r.lower_valid.value_or(false);
  }
  summary.ratio = quantiles(std::move(ratios));
  summary.ell = quantiles(std::move(ells));
  const double p = config.params.p;
  if (counts.size() >= 2) {
    summary.density = island_density_estimate(std::span<const IslandCount>(counts), p);
    if (p > 0.0 && p < 1.0 && summary.density->mu_hat > 0.0) {
      summary.limit_law =
          limit_law_report(runs, config.params.n_sites, p, summary.density->mu_hat);
    }
  }
  summary.records = std::move(records);
  return summary;
}

namespace detail {

// Applies `work(i)` for i in [0, count) on `threads` workers. The lowest
// failing index is rethrown after all workers finish.
template <typename Work>
void parallel_for_indices(std::size_t count, unsigned threads, Work&& work,
                          const std::string& failure_prefix) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        work(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned pool = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(pool);
    for (unsigned t = 0; t < pool; ++t) workers.emplace_back(worker);
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const SolverError& e) {
      throw SolverError(failure_prefix + std::to_string(i) + ": " + e.what());
    }
  }
}

}  // namespace detail

/// Solves and analyzes samples first_index .. first_index + n_samples - 1.
/// Each sample is keyed by its index, so the summary is identical for any
/// thread count.
inline EnsembleSummary run_ensemble(const EnsembleConfig& config) {
  config.validate();
  std::vector<SampleRecord> records(config.n_samples);
  detail::parallel_for_indices(
      config.n_samples, config.threads,
      [&](std::size_t i) { records[i] = analyze_sample(config, config.first_index + i); },
      "solver failure in sample offset ");
  return summarize(config, std::move(records));
}

/// Combines two runs over disjoint index ranges of the same ensemble.
inline EnsembleSummary merge(const EnsembleSummary& a, const EnsembleSummary& b) {
  const auto& ca = a.config;
  const auto& cb = b.config;
  detail::require(ca.params.n_sites == cb.params.n_sites && ca.params.p == cb.params.p &&
                      ca.params.b == cb.params.b && ca.params.seed == cb.params.seed &&
                      ca.gamma == cb.gamma && ca.solve_vectors == cb.solve_vectors &&
                      ca.tol == cb.tol,
                  "cannot merge summaries of different ensembles");
  std::vector<SampleRecord> records = a.records;
  records.insert(records.end(), b.records.begin(), b.records.end());
  EnsembleConfig config = ca;
  config.first_index = std::min(ca.first_index, cb.first_index);
  config.n_samples = ca.n_samples + cb.n_samples;
  return summarize(config, std::move(records));
}

/// Run statistics only (no eigen-solves) for samples
/// first_index .. first_index + n_samples - 1.
inline std::vector<RunStatistics> collect_run_statistics(const PotentialParams& params,
                                                         std::size_t n_samples,
                                                         std::uint64_t first_index = 0,
                                                         unsigned threads = 1) {
  params.validate();
  detail::require(n_samples >= 1, "n_samples must be positive");
  std::vector<RunStatistics> stats(n_samples);
  detail::parallel_for_indices(
      n_samples, threads,
      [&](std::size_t i) { stats[i] = sample_run_statistics(params, first_index + i); },
      "failure in sample offset ");
  return stats;
}

struct LimitLawResult {
  DensityEstimate density;
  LimitLawReport report;
};

inline LimitLawResult limit_law_from_statistics(std::span<const RunStatistics> stats,
                                                const PotentialParams& params) {
  std::vector<IslandCount> counts;
  std::vector<std::size_t> runs;
  counts.reserve(stats.size());
  runs.reserve(stats.size());
  for (const auto& s : stats) {
    counts.push_back({s.n_islands, params.n_sites});
    runs.push_back(s.longest_run);
  }
  LimitLawResult result;
  result.density = island_density_estimate(std::span<const IslandCount>(counts), params.p);
  result.report = limit_law_report(runs, params.n_sites, params.p, result.density.mu_hat);
  return result;
}

/// Worker count: explicit flag, else the THREADS environment variable, else
/// the hardware concurrency.
inline unsigned resolve_threads(std::optional<unsigned> flag) {
  if (flag) {
    detail::require(*flag >= 1, "threads must be positive");
    return *flag;
  }
  if (const char* env = std::getenv("THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long value = std::strtoul(env, &end, 10);
    detail::require(*end == '\0' && value >= 1, "THREADS must be a positive integer");
    return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace bground

#endif  // BGROUND_ENSEMBLE_HPP
