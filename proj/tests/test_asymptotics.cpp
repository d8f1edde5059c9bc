#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bground/asymptotics.hpp"
#include "bground/ensemble.hpp"
#include "oracles.hpp"

using namespace bground;

TEST(GeometricLaw, Examples) {
  EXPECT_DOUBLE_EQ(geometric_island_law(1, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(geometric_island_law(3, 0.5), 0.125);
  double total = 0.0;
  for (std::size_t k = 1; k <= 60; ++k) total += geometric_island_law(k, 0.5);
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_THROW(geometric_island_law(0, 0.5), ValidationError);
}

TEST(GeometricLaw, MatchesSampledIslandLengths) {
  const double p = 0.6;
  const auto dec = decompose(sample_bernoulli({1'000'000, p, 1.0, 3}, 0));
  std::vector<double> counts(6, 0.0);
  for (const auto& island : dec.islands) {
    if (island.length <= 5) counts[island.length] += 1.0;
  }
  const double n = static_cast<double>(dec.n_islands());
  for (std::size_t k = 1; k <= 5; ++k) {
    const double expected = geometric_island_law(k, p);
    const double sigma = std::sqrt(expected * (1 - expected) / n);
    EXPECT_NEAR(counts[k] / n, expected, 5 * sigma) << k;
  }
}

TEST(LimitCdf, Examples) {
  EXPECT_NEAR(limit_cdf(0.0, 0.0, 0.5), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(limit_cdf(0.0, 0.0, 0.5), 0.367879, 1e-6);
  EXPECT_NEAR(limit_cdf(1.0, 0.0, 0.5), 0.606531, 1e-6);
  EXPECT_NEAR(limit_cdf(0.5, 0.0, 0.5), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(limit_cdf(0.999, 0.0, 0.5), std::exp(-1.0), 1e-15);
  EXPECT_THROW(limit_cdf(0.0, 1.0, 0.5), ValidationError);
  EXPECT_THROW(limit_cdf(0.0, 0.0, 1.0), ValidationError);
}

TEST(LimitCdf, Properties) {
  for (double p : {0.2, 0.5, 0.9}) {
    for (double theta : {0.0, 0.3, 0.77}) {
      const auto grid = comparison_grid(theta, 40);
      double previous = 0.0;
      for (double tau : grid) {
        const double value = limit_cdf(tau, theta, p);
        EXPECT_GE(value, previous);
        const bool representable = std::pow(p, tau - fractional_part(tau + theta)) < 700.0;
        if (representable) {
          EXPECT_GT(value, 0.0);
        }
        EXPECT_LT(value, 1.0 + 1e-15);
        EXPECT_NEAR(limit_cdf(tau + 1.0, theta, p), std::pow(value, p), 1e-12);
        previous = value;
      }
      EXPECT_LT(limit_cdf(-200.5, theta, p), 1e-12);
      EXPECT_GT(limit_cdf(200.5, theta, p), 1.0 - 1e-8);
    }
  }
}

TEST(DensityEstimate, Deterministic) {
  const auto v = PotentialRealization::from_values({0, 1, 0, 1, 0, 1, 0, 1}, 1.0);
  const std::vector<IslandDecomposition> decs{decompose(v), decompose(v)};
  const auto est = island_density_estimate(std::span<const IslandDecomposition>(decs), 0.5);
  EXPECT_EQ(est.mu_hat, 0.5);
  EXPECT_EQ(est.halfwidth, 0.0);
  EXPECT_EQ(est.combinatorial, 0.25);
  EXPECT_NEAR(est.alternative, 1.0 / 6.0, 1e-15);
  EXPECT_THROW(island_density_estimate(std::span<const IslandCount>(), 0.5), ValidationError);
  const std::vector<IslandCount> one{{3, 10}};
  EXPECT_THROW(island_density_estimate(std::span<const IslandCount>(one), 0.5), ValidationError);
}

TEST(DensityEstimate, MonteCarlo) {
  for (auto [p, expected, tol] : {std::tuple{0.5, 0.25, 0.001}, std::tuple{0.9, 0.09, 0.002}}) {
    const PotentialParams params{1'000'000, p, 1.0, 101};
    const auto stats = collect_run_statistics(params, 100);
    std::vector<IslandCount> counts;
    for (const auto& s : stats) counts.push_back({s.n_islands, params.n_sites});
    const auto est = island_density_estimate(std::span<const IslandCount>(counts), p);
    EXPECT_NEAR(est.mu_hat, expected, tol) << p;
    EXPECT_LT(est.halfwidth, tol);
  }
}

TEST(CenteredRun, Examples) {
  const double mu = 0.25;
  const std::size_t n = 1u << 22;  // mu N = 2^20
  const auto exact = centered_longest_run(20, n, 0.5, mu);
  EXPECT_NEAR(exact.tau, 0.0, 1e-12);
  const auto shifted = centered_longest_run(25, n, 0.5, mu);
  EXPECT_NEAR(shifted.tau, 5.0, 1e-12);
  EXPECT_NEAR(run_centering(n, 0.5, mu), 20.0, 1e-12);
  const auto fractional = centered_longest_run(10, 3000, 0.5, 0.25);
  EXPECT_NEAR(fractional.theta, fractional_part(std::log2(750.0)), 1e-12);
  EXPECT_THROW(run_centering(0, 0.5, 0.25), ValidationError);
  EXPECT_THROW(run_centering(10, 0.0, 0.25), ValidationError);
}

TEST(KsDistance, Examples) {
  const auto grid = comparison_grid(0.0);
  ASSERT_EQ(grid.size(), 17u);
  const auto law = limit_cdf_table(grid, 0.0, 0.5);
  EXPECT_EQ(ks_distance(law, law), 0.0);

  CdfTable bumped = law;
  bumped.values[5] += 0.03;
  EXPECT_NEAR(ks_distance(bumped, law), 0.03, 1e-15);

  // Point mass at tau = 1 against the law with theta = 0, read at tau = 0 and 1.
  const std::vector<double> at_one(100, 1.0);
  const std::vector<double> integer_grid{0.0, 1.0};
  const double expected = std::max(std::exp(-1.0), 1.0 - std::exp(-0.5));
  EXPECT_NEAR(ks_distance(empirical_cdf_table(at_one, integer_grid),
                          limit_cdf_table(integer_grid, 0.0, 0.5)),
              expected, 1e-15);
  EXPECT_NEAR(expected, 0.393469, 1e-6);

  // Point mass at tau = 0 on the half-integer grid: the worst gap sits at tau = 1/2.
  const std::vector<double> at_zero(100, 0.0);
  EXPECT_NEAR(ks_distance(empirical_cdf_table(at_zero, grid), law), 1.0 - std::exp(-1.0), 1e-15);

  CdfTable other = law;
  other.grid = comparison_grid(0.25);
  EXPECT_THROW(ks_distance(law, other), ValidationError);
}

TEST(LongestRunLaw, DynamicProgramMatchesEnumeration) {
  for (std::size_t n = 1; n <= 12; ++n) {
    for (double p : {0.1, 0.5, 0.73}) {
      const auto dp = longest_run_distribution(n, p);
      const auto brute = oracle::enumerate_longest_run_law(n, p);
      ASSERT_EQ(dp.size(), brute.size());
      for (std::size_t m = 0; m <= n; ++m) EXPECT_NEAR(dp[m], brute[m], 1e-14);
    }
  }
}

TEST(LongestRunLaw, SamplerMatchesExactLaw) {
  const std::size_t n = 10;
  const double p = 0.5;
  const std::size_t draws = 200'000;
  const auto law = longest_run_distribution(n, p);
  std::vector<double> freq(n + 1, 0.0);
  for (std::uint64_t k = 0; k < draws; ++k) {
    freq[sample_run_statistics({n, p, 1.0, 7}, k).longest_run] += 1.0;
  }
  double tv = 0.0;
  for (std::size_t m = 0; m <= n; ++m) tv += std::abs(freq[m] / draws - law[m]);
  EXPECT_LE(0.5 * tv, 0.01);
}

TEST(LongestRunLaw, FirstPercentileGrowsWithN) {
  double previous = -1.0;
  for (std::size_t n : {1000u, 10000u, 100000u}) {
    const auto stats = collect_run_statistics({n, 0.5, 1.0, 13}, 1000);
    std::vector<double> runs;
    for (const auto& s : stats) runs.push_back(static_cast<double>(s.longest_run));
    const double q01 = quantiles(runs).q01;
    EXPECT_GE(q01, previous) << n;
    previous = q01;
  }
}

TEST(LimitLaw, ReportAtModerateSize) {
  const PotentialParams params{100'000, 0.5, 1.0, 17};
  const auto stats = collect_run_statistics(params, 4000);
  const auto result = limit_law_from_statistics(stats, params);
  EXPECT_NEAR(result.density.mu_hat, 0.25, 0.001);
  EXPECT_EQ(result.report.empirical.grid.size(), 17u);
  EXPECT_LE(result.report.sup_distance, 0.05);
  for (std::size_t i = 1; i < 17; ++i) {
    EXPECT_GE(result.report.empirical.values[i], result.report.empirical.values[i - 1]);
    EXPECT_GE(result.report.theoretical.values[i], result.report.theoretical.values[i - 1]);
  }
}
