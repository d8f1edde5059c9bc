#ifndef BGROUND_ISLANDS_HPP
#define BGROUND_ISLANDS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "bground/errors.hpp"
#include "bground/potential.hpp"
#include "bground/rng.hpp"

namespace bground {

inline constexpr std::size_t kNoIsland = std::numeric_limits<std::size_t>::max();

/// Maximal run of zero-potential sites. `start` is 1-based.
struct Island {
  std::size_t start = 0;
  std::size_t length = 0;
  double delta_left = 0.0;   // state on the barrier site left of the island, 0 at the lattice edge
  double delta_right = 0.0;  // same, right side
  double mass_sq = 0.0;      // squared norm of the state restricted to the island

  double delta_max() const noexcept { return std::max(delta_left, delta_right); }
};

struct IslandDecomposition {
  std::size_t n_sites = 0;
  std::vector<Island> islands;
  std::size_t longest_run = 0;
  std::size_t longest_index = kNoIsland;  // leftmost longest island
  std::size_t longest_b_run = 0;
  bool has_state = false;
  double barrier_mass_sq = 0.0;

  std::size_t n_islands() const noexcept { return islands.size(); }
  const Island* longest() const noexcept {
    return longest_index == kNoIsland ? nullptr : &islands[longest_index];
  }
};

/// 1-based start and length of a run; {0, 0} means "no run".
struct Run {
  std::size_t start = 0;
  std::size_t length = 0;

  friend bool operator==(const Run&, const Run&) = default;
};

/// Summary of the zero/barrier run structure, without storing the islands.
struct RunStatistics {
  std::size_t longest_run = 0;
  std::size_t n_islands = 0;
  std::size_t longest_b_run = 0;

  friend bool operator==(const RunStatistics&, const RunStatistics&) = default;
};

namespace detail {

class RunTracker {
 public:
  void push(bool zero) noexcept {
    if (zero) {
      if (zero_run_ == 0) ++stats_.n_islands;
      ++zero_run_;
      barrier_run_ = 0;
      stats_.longest_run = std::max(stats_.longest_run, zero_run_);
    } else {
      ++barrier_run_;
      zero_run_ = 0;
      stats_.longest_b_run = std::max(stats_.longest_b_run, barrier_run_);
    }
  }
  const RunStatistics& stats() const noexcept { return stats_; }

 private:
  RunStatistics stats_;
  std::size_t zero_run_ = 0;
  std::size_t barrier_run_ = 0;
};

inline void require_unit_state(std::span<const double> psi, std::size_t n_sites) {
  require(psi.size() == n_sites, "state length " + std::to_string(psi.size()) +
                                     " does not match potential length " +
                                     std::to_string(n_sites));
  const double norm_sq = std::inner_product(psi.begin(), psi.end(), psi.begin(), 0.0);
  require(std::abs(norm_sq - 1.0) <= 1e-9, "state is not unit-normalised");
}

}  // namespace detail

/// Island decomposition of the potential alone.
inline IslandDecomposition decompose(const PotentialRealization& potential) {
  IslandDecomposition dec;
  dec.n_sites = potential.size();
  std::size_t barrier_run = 0;
  for (std::size_t j = 0; j < potential.size(); ++j) {
    if (potential.is_zero(j)) {
      barrier_run = 0;
      if (j == 0 || !potential.is_zero(j - 1)) {
        dec.islands.push_back(Island{j + 1, 0});
      }
      Island& island = dec.islands.back();
      ++island.length;
      if (island.length > dec.longest_run) {
        dec.longest_run = island.length;
        dec.longest_index = dec.islands.size() - 1;
      }
    } else {
      ++barrier_run;
      dec.longest_b_run = std::max(dec.longest_b_run, barrier_run);
    }
  }
  return dec;
}

/// Island decomposition with boundary values and masses taken from a unit state.
inline IslandDecomposition decompose(const PotentialRealization& potential,
                                     std::span<const double> psi) {
  detail::require_unit_state(psi, potential.size());
  IslandDecomposition dec = decompose(potential);
  dec.has_state = true;
  const std::size_t n = potential.size();
  for (Island& island : dec.islands) {
    const std::size_t first = island.start - 1;  // 0-based
    const std::size_t last = first + island.length - 1;
    island.delta_left = first == 0 ? 0.0 : psi[first - 1];
    island.delta_right = last + 1 == n ? 0.0 : psi[last + 1];
    double mass = 0.0;
    for (std::size_t j = first; j <= last; ++j) mass += psi[j] * psi[j];
    island.mass_sq = mass;
  }
  double barrier = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!potential.is_zero(j)) barrier += psi[j] * psi[j];
  }
  dec.barrier_mass_sq = barrier;
  return dec;
}

/// Leftmost longest zero run of the potential.
inline Run longest_run(const PotentialRealization& potential) {
  Run best;
  std::size_t run = 0;
  for (std::size_t j = 0; j < potential.size(); ++j) {
    run = potential.is_zero(j) ? run + 1 : 0;
    if (run > best.length) {
      best.length = run;
      best.start = j + 2 - run;
    }
  }
  return best;
}

/// Run statistics of sample `sample_index`, streamed straight from the RNG
/// without materialising the potential. Agrees with
/// decompose(sample_bernoulli(params, sample_index)).
inline RunStatistics sample_run_statistics(const PotentialParams& params,
                                           std::uint64_t sample_index) {
  params.validate();
  const CounterStream stream(params.seed, sample_index);
  detail::RunTracker tracker;
  for (std::size_t j = 0; j < params.n_sites; ++j) {
    tracker.push(stream.uniform(j) < params.p);
  }
  return tracker.stats();
}

/// Sum of psi(j)^2 over barrier sites.
inline double barrier_mass(const PotentialRealization& potential, std::span<const double> psi) {
  detail::require(psi.size() == potential.size(), "state length does not match potential");
  double mass = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    if (!potential.is_zero(j)) mass += psi[j] * psi[j];
  }
  return mass;
}

/// Rebuilds the potential values from the islands: zeros on islands, b elsewhere.
inline std::vector<double> reassemble(const IslandDecomposition& dec, double b) {
  std::vector<double> values(dec.n_sites, b);
  for (const Island& island : dec.islands) {
    std::fill_n(values.begin() + static_cast<std::ptrdiff_t>(island.start - 1), island.length,
                0.0);
  }
  return values;
}

struct ClassificationParams {
  double gamma = 0.5;

  void validate() const {
    detail::require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
  }
};

/// Mass threshold above which an island counts as heavy:
/// max(delta_L, delta_R)^2 (L + 1) (longest + 1)^(1 - gamma).
inline double heavy_threshold(const Island& island, std::size_t longest, double gamma) {
  const double delta = island.delta_max();
  return delta * delta * static_cast<double>(island.length + 1) *
         std::pow(static_cast<double>(longest + 1), 1.0 - gamma);
}

struct HeavyPartition {
  std::vector<std::size_t> heavy;  // indices into IslandDecomposition::islands
  std::vector<std::size_t> light;
  double heavy_mass_sq = 0.0;
};

/// Splits islands into heavy (mass at or above the threshold) and light.
inline HeavyPartition classify_heavy(const IslandDecomposition& dec,
                                     const ClassificationParams& params) {
  params.validate();
  detail::require(dec.has_state, "classification needs a decomposition with a state");
  HeavyPartition partition;
  for (std::size_t i = 0; i < dec.islands.size(); ++i) {
    const Island& island = dec.islands[i];
    if (island.mass_sq >= heavy_threshold(island, dec.longest_run, params.gamma)) {
      partition.heavy.push_back(i);
      partition.heavy_mass_sq += island.mass_sq;
    } else {
      partition.light.push_back(i);
    }
  }
  return partition;
}

/// c sin(s pi j / (L + 1) + t) on j = 1..L.
struct SineProfile {
  double amplitude = 0.0;        // c
  double frequency_scale = 1.0;  // s
  double phase = 0.0;            // t
  double residual = 0.0;         // RMS deviation from the fitted data

  std::vector<double> values(std::size_t length) const {
    std::vector<double> out(length);
    const double omega = frequency_scale * std::numbers::pi / static_cast<double>(length + 1);
    for (std::size_t j = 1; j <= length; ++j) {
      out[j - 1] = amplitude * std::sin(omega * static_cast<double>(j) + phase);
    }
    return out;
  }
};

/// Frequency scale forced by the boundary values once the amplitude is known:
/// s = 1 - (asin(delta_L / c) + asin(delta_R / c)) / pi.
inline double frequency_scale(double amplitude, double delta_left, double delta_right) {
  detail::require(amplitude > 0.0 && delta_left <= amplitude && delta_right <= amplitude,
                  "boundary values exceed the amplitude");
  return 1.0 - (std::asin(delta_left / amplitude) + std::asin(delta_right / amplitude)) /
                   std::numbers::pi;
}

/// Fits c sin(s pi j/(L+1) + t) to island data with fixed boundary values.
///
/// The boundary conditions c sin(t) = delta_L and c sin(s pi + t) = delta_R
/// (taking the descending branch for the right end) fix t and s as functions
/// of c, so the only free unknown is c. It is found by bisection on
/// sum_j profile(j)^2 = sum_j data(j)^2.
inline SineProfile fit_sine_profile(std::span<const double> island_data, double delta_left,
                                    double delta_right) {
  detail::require(!island_data.empty(), "empty island");
  detail::require(delta_left >= 0.0 && delta_right >= 0.0, "boundary values must be nonnegative");
  const double peak = *std::max_element(island_data.begin(), island_data.end());
  const double delta = std::max(delta_left, delta_right);
  if (!(peak > delta)) {
    throw ValidationError("monotone data: island peak does not exceed the boundary values");
  }
  const std::size_t length = island_data.size();
  const double target = std::inner_product(island_data.begin(), island_data.end(),
                                           island_data.begin(), 0.0);
  auto profile_at = [&](double c) {
    SineProfile profile;
    profile.amplitude = c;
    profile.phase = std::asin(delta_left / c);
    profile.frequency_scale = frequency_scale(c, delta_left, delta_right);
    return profile;
  };
  auto excess_mass = [&](double c) {
    const auto values = profile_at(c).values(length);
    return std::inner_product(values.begin(), values.end(), values.begin(), 0.0) - target;
  };

  double lower = delta;
  if (lower > 0.0 && excess_mass(lower) >= 0.0) {
    throw SolverError("no convergence: boundary values too large for the island mass");
  }
  double upper = std::max(peak, 2.0 * delta);
  int expansions = 0;
  while (excess_mass(upper) < 0.0) {
    upper *= 2.0;
    if (++expansions > 200) throw SolverError("no convergence: amplitude bracket not found");
  }
  int iterations = 0;
  while (upper - lower > 1e-15 * upper) {
    const double mid = 0.5 * (lower + upper);
    if (mid <= lower || mid >= upper) break;
    (excess_mass(mid) < 0.0 ? lower : upper) = mid;
    if (++iterations > 400) throw SolverError("no convergence in amplitude bisection");
  }

  SineProfile profile = profile_at(0.5 * (lower + upper));
  const auto fitted = profile.values(length);
  double sq = 0.0;
  for (std::size_t j = 0; j < length; ++j) {
    const double diff = island_data[j] - fitted[j];
    sq += diff * diff;
  }
  profile.residual = std::sqrt(sq / static_cast<double>(length));
  return profile;
}

}  // namespace bground

#endif  // BGROUND_ISLANDS_HPP
