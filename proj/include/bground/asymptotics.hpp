#ifndef BGROUND_ASYMPTOTICS_HPP
#define BGROUND_ASYMPTOTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bground/errors.hpp"
#include "bground/islands.hpp"

namespace bground {

/// P[L = k] = p^(k-1) (1 - p) for the length of a single island.
inline double geometric_island_law(std::size_t k, double p) {
  detail::require(k >= 1, "island length must be at least 1");
  detail::require(p >= 0.0 && p <= 1.0, "p must lie in [0, 1]");
  return std::pow(p, static_cast<double>(k - 1)) * (1.0 - p);
}

struct LimitLawParams {
  double p = 0.5;
  double theta = 0.0;
  double mu_hat = 0.25;

  void validate() const {
    detail::require(p > 0.0 && p < 1.0, "p must lie in (0, 1)");
    detail::require(theta >= 0.0 && theta < 1.0, "theta must lie in [0, 1)");
    detail::require(mu_hat > 0.0, "island density must be positive");
  }
};

inline double fractional_part(double x) { return x - std::floor(x); }

/// exp(-p^(tau - frac(tau + theta))): the subsequential limit law of the
/// centered longest run.
inline double limit_cdf(double tau, double theta, double p) {
  detail::require(p > 0.0 && p < 1.0, "p must lie in (0, 1)");
  detail::require(theta >= 0.0 && theta < 1.0, "theta must lie in [0, 1)");
  return std::exp(-std::pow(p, tau - fractional_part(tau + theta)));
}

/// log(mu N) / |log p|, the centering of the longest run.
inline double run_centering(std::size_t n_sites, double p, double mu_hat) {
  detail::require(n_sites >= 1, "n_sites must be positive");
  detail::require(p > 0.0 && p < 1.0, "p must lie in (0, 1)");
  detail::require(mu_hat > 0.0, "island density must be positive");
  return std::log(mu_hat * static_cast<double>(n_sites)) / std::abs(std::log(p));
}

struct CenteredRun {
  double tau = 0.0;    // ell - centering
  double theta = 0.0;  // frac(centering)
};

inline CenteredRun centered_longest_run(std::size_t ell, std::size_t n_sites, double p,
                                        double mu_hat) {
  const double centering = run_centering(n_sites, p, mu_hat);
  return {static_cast<double>(ell) - centering, fractional_part(centering)};
}

struct IslandCount {
  std::size_t n_islands = 0;
  std::size_t n_sites = 1;
};

struct DensityEstimate {
  double mu_hat = 0.0;
  double halfwidth = 0.0;      // normal-approximation 95% half-width
  double combinatorial = 0.0;  // p q, the density of island starts
  double alternative = 0.0;    // 1 / (2 + 1/(p q))
  std::size_t n_samples = 0;
};

/// Mean islands-per-site over samples, with the two closed-form candidates
/// evaluated at `p` for comparison.
inline DensityEstimate island_density_estimate(std::span<const IslandCount> samples, double p) {
  detail::require(!samples.empty(), "empty input");
  detail::require(samples.size() >= 2, "island density needs at least two samples");
  DensityEstimate estimate;
  estimate.n_samples = samples.size();
  double sum = 0.0;
  for (const auto& s : samples) {
    sum += static_cast<double>(s.n_islands) / static_cast<double>(s.n_sites);
  }
  const double k = static_cast<double>(samples.size());
  estimate.mu_hat = sum / k;
  double sq = 0.0;
  for (const auto& s : samples) {
    const double d =
        static_cast<double>(s.n_islands) / static_cast<double>(s.n_sites) - estimate.mu_hat;
    sq += d * d;
  }
  estimate.halfwidth = 1.96 * std::sqrt(sq / (k - 1.0) / k);
  const double pq = p * (1.0 - p);
  estimate.combinatorial = pq;
  estimate.alternative = pq > 0.0 ? 1.0 / (2.0 + 1.0 / pq) : 0.0;
  return estimate;
}

inline DensityEstimate island_density_estimate(std::span<const IslandDecomposition> samples,
                                               double p) {
  std::vector<IslandCount> counts;
  counts.reserve(samples.size());
  for (const auto& dec : samples) counts.push_back({dec.n_islands(), dec.n_sites});
  return island_density_estimate(std::span<const IslandCount>(counts), p);
}

struct CdfTable {
  std::vector<double> grid;
  std::vector<double> values;
};

/// Grid tau_k = k + 1/2 - theta, k = -half_span..half_span: midway between
/// consecutive jump points of both the limit law and the empirical law.
inline std::vector<double> comparison_grid(double theta, int half_span = 8) {
  std::vector<double> grid;
  for (int k = -half_span; k <= half_span; ++k) {
    grid.push_back(static_cast<double>(k) + 0.5 - theta);
  }
  return grid;
}

inline CdfTable limit_cdf_table(std::vector<double> grid, double theta, double p) {
  CdfTable table{std::move(grid), {}};
  table.values.reserve(table.grid.size());
  for (double tau : table.grid) table.values.push_back(limit_cdf(tau, theta, p));
  return table;
}

inline CdfTable empirical_cdf_table(std::span<const double> taus, std::vector<double> grid) {
  std::vector<double> sorted(taus.begin(), taus.end());
  std::sort(sorted.begin(), sorted.end());
  CdfTable table{std::move(grid), {}};
  table.values.reserve(table.grid.size());
  for (double tau : table.grid) {
    const auto below = std::upper_bound(sorted.begin(), sorted.end(), tau) - sorted.begin();
    table.values.push_back(sorted.empty() ? 0.0
                                          : static_cast<double>(below) /
                                                static_cast<double>(sorted.size()));
  }
  return table;
}

/// Largest absolute difference between two tables on a shared grid.
inline double ks_distance(const CdfTable& empirical, const CdfTable& theoretical) {
  detail::require(empirical.grid == theoretical.grid &&
                      empirical.values.size() == empirical.grid.size() &&
                      theoretical.values.size() == theoretical.grid.size(),
                  "grid mismatch");
  double sup = 0.0;
  for (std::size_t i = 0; i < empirical.values.size(); ++i) {
    sup = std::max(sup, std::abs(empirical.values[i] - theoretical.values[i]));
  }
  return sup;
}

struct LimitLawReport {
  double p = 0.5;
  std::size_t n_sites = 0;
  std::size_t n_samples = 0;
  double mu_hat = 0.0;
  double centering = 0.0;
  double theta = 0.0;
  CdfTable empirical;
  CdfTable theoretical;
  double sup_distance = 0.0;
  double mu_combinatorial = 0.0;
  double mu_alternative = 0.0;
};

/// Compares the centered longest-run sample against the limit law with the
/// realized theta = frac(centering).
inline LimitLawReport limit_law_report(std::span<const std::size_t> longest_runs,
                                       std::size_t n_sites, double p, double mu_hat) {
  detail::require(!longest_runs.empty(), "empty input");
  LimitLawParams{p, 0.0, mu_hat}.validate();
  LimitLawReport report;
  report.p = p;
  report.n_sites = n_sites;
  report.n_samples = longest_runs.size();
  report.mu_hat = mu_hat;
  report.centering = run_centering(n_sites, p, mu_hat);
  report.theta = fractional_part(report.centering);
  std::vector<double> taus;
  taus.reserve(longest_runs.size());
  for (std::size_t ell : longest_runs) {
    taus.push_back(static_cast<double>(ell) - report.centering);
  }
  const auto grid = comparison_grid(report.theta);
  report.empirical = empirical_cdf_table(taus, grid);
  report.theoretical = limit_cdf_table(grid, report.theta, p);
  report.sup_distance = ks_distance(report.empirical, report.theoretical);
  report.mu_combinatorial = p * (1.0 - p);
  report.mu_alternative = 1.0 / (2.0 + 1.0 / report.mu_combinatorial);
  return report;
}

/// Exact law of the longest zero run on N i.i.d. sites: entry m is P[l_N = m].
/// Dynamic program over the length of the current trailing run.
inline std::vector<double> longest_run_distribution(std::size_t n_sites, double p) {
  detail::require(p >= 0.0 && p <= 1.0, "p must lie in [0, 1]");
  const double q = 1.0 - p;
  std::vector<double> at_most(n_sites + 1);
  for (std::size_t cap = 0; cap <= n_sites; ++cap) {
    // state[r]: probability that the trailing run has length r and no run exceeded cap
    std::vector<double> state(cap + 1, 0.0), next(cap + 1);
    state[0] = 1.0;
    for (std::size_t j = 0; j < n_sites; ++j) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t r = 0; r <= cap; ++r) {
        next[0] += state[r] * q;
        if (r + 1 <= cap) next[r + 1] += state[r] * p;
      }
      state.swap(next);
    }
    double total = 0.0;
    for (double v : state) total += v;
    at_most[cap] = total;
  }
  std::vector<double> law(n_sites + 1);
  law[0] = at_most[0];
  for (std::size_t m = 1; m <= n_sites; ++m) law[m] = at_most[m] - at_most[m - 1];
  return law;
}

}  // namespace bground

#endif  // BGROUND_ASYMPTOTICS_HPP
