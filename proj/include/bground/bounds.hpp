#ifndef BGROUND_BOUNDS_HPP
#define BGROUND_BOUNDS_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "bground/errors.hpp"
#include "bground/islands.hpp"
#include "bground/potential.hpp"
#include "bground/schrodinger_operator.hpp"

namespace bground {

/// Numerical slack allowed when checking a proven inequality on solver output.
inline constexpr double kBoundSlack = 1e-9;

/// 2 - 2cos(x), evaluated as 4 sin^2(x/2) to avoid cancellation at small x.
inline double sine_energy(double x) {
  const double half = std::sin(0.5 * x);
  return 4.0 * half * half;
}

struct UpperBound {
  double exact;       // 2 - 2cos(pi/(l+1)): energy of the half-sine test function
  double asymptotic;  // pi^2/(l+1)^2
};

inline UpperBound upper_bound(std::size_t ell) {
  detail::require(ell >= 1, "no island: the upper bound needs a zero-potential site");
  const double ell1 = static_cast<double>(ell + 1);
  return {sine_energy(std::numbers::pi / ell1),
          std::numbers::pi * std::numbers::pi / (ell1 * ell1)};
}

/// Unit-norm half-sine sqrt(2/(L+1)) sin(pi i/(L+1)) on `run`, zero elsewhere.
inline std::vector<double> island_test_function(std::size_t n_sites, Run run) {
  detail::require(run.length >= 1 && run.start >= 1 && run.start + run.length - 1 <= n_sites,
                  "run outside the lattice");
  std::vector<double> phi(n_sites, 0.0);
  const double l1 = static_cast<double>(run.length + 1);
  const double scale = std::sqrt(2.0 / l1);
  for (std::size_t i = 1; i <= run.length; ++i) {
    phi[run.start - 1 + i - 1] = scale * std::sin(std::numbers::pi * static_cast<double>(i) / l1);
  }
  return phi;
}

/// Upper bound on the squared ground-state mass sitting on barrier sites.
inline double barrier_mass_bound(std::size_t ell, double b) {
  detail::require(ell >= 1, "no island");
  detail::require(b > 0.0, "b must be positive");
  const double ell1 = static_cast<double>(ell + 1);
  return std::numbers::pi * std::numbers::pi / (b * ell1 * ell1);
}

/// Lower bound on the total mass of heavy islands, 1 - 3 pi^2 / (b l^gamma).
/// Nonpositive values are vacuous.
inline double heavy_mass_bound(std::size_t ell, double b, double gamma) {
  detail::require(ell >= 1, "no island");
  return 1.0 - 3.0 * std::numbers::pi * std::numbers::pi /
                   (b * std::pow(static_cast<double>(ell), gamma));
}

/// Same bound with (l + 1)^gamma in the denominator. Always at least as
/// large as heavy_mass_bound.
inline double heavy_mass_bound_shifted(std::size_t ell, double b, double gamma) {
  return 1.0 - 3.0 * std::numbers::pi * std::numbers::pi /
                   (b * std::pow(static_cast<double>(ell + 1), gamma));
}

struct LowerCertificate {
  double value = 0.0;
  bool valid = false;
  double frequency_floor = 0.0;  // minimal admissible frequency scale s
};

/// Lower bound on the ground energy from the heavy-island argument.
///
/// value = heavy_mass_bound * (2 - 2cos(s pi/(l+1))), s = 1 - l^(-(1-gamma)/2),
/// using the exact discrete sine energy at the minimal frequency scale in
/// place of pi^2 s^2/(l+1)^2 + O(l^-4). Valid when l > (3 pi^2/b)^(1/gamma) - 1.
inline LowerCertificate lower_bound_certificate(std::size_t ell, double b, double gamma) {
  detail::require(ell >= 1, "no island");
  detail::require(b > 0.0, "b must be positive");
  detail::require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
  const double ell_d = static_cast<double>(ell);
  LowerCertificate cert;
  cert.valid = ell_d > std::pow(3.0 * std::numbers::pi * std::numbers::pi / b, 1.0 / gamma) - 1.0;
  cert.frequency_floor = 1.0 - std::pow(ell_d, -(1.0 - gamma) / 2.0);
  cert.value = heavy_mass_bound(ell, b, gamma) *
               sine_energy(cert.frequency_floor * std::numbers::pi / (ell_d + 1.0));
  return cert;
}

/// E0 / (pi^2/(l+1)^2).
inline double theorem1_ratio(double e0, std::size_t ell) {
  detail::require(ell >= 1, "no island");
  const double ell1 = static_cast<double>(ell + 1);
  return e0 * ell1 * ell1 / (std::numbers::pi * std::numbers::pi);
}

struct TopSpectrumReport {
  double residual = 0.0;          // |E_max(H) - (4 + b - E_min(-Lap + b - V))|
  double e_max = 0.0;
  double e_min_complement = 0.0;
  std::size_t longest_b_run = 0;
  double asymptotic = 0.0;        // 4 + b - pi^2/(l'+1)^2, NaN when there is no barrier run
};

/// Checks the staggered-sign conjugation identity
/// U H U^{-1} = (4 + b) - (-Lap + (b - V)), U phi(j) = (-1)^j phi(j),
/// by comparing the top of the spectrum of H with the bottom of the complementary operator.
inline TopSpectrumReport top_spectrum_check(const PotentialRealization& potential,
                                            double tol = kDefaultTolerance) {
  const SchrodingerOperator op(potential);
  const PotentialRealization flipped = potential.complement();
  const SchrodingerOperator complement_op(flipped);
  TopSpectrumReport report;
  report.e_max = kth_eigenvalue(op, op.size() - 1, tol);
  report.e_min_complement = kth_eigenvalue(complement_op, 0, tol);
  report.residual =
      std::abs(report.e_max - (4.0 + potential.b() - report.e_min_complement));
  report.longest_b_run = longest_run(flipped).length;
  if (report.longest_b_run > 0) {
    report.asymptotic = 4.0 + potential.b() - upper_bound(report.longest_b_run).asymptotic;
  } else {
    report.asymptotic = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

struct AnalysisOptions {
  double gamma = 0.5;
  bool solve_vector = true;
  double tol = kDefaultTolerance;
};

/// Every certificate evaluated on one realization, plus pass flags.
struct BoundsReport {
  std::size_t n_sites = 0;
  double b = 0.0;
  double gamma = 0.5;
  std::size_t longest_run = 0;
  std::size_t longest_start = 0;
  std::size_t n_islands = 0;
  std::size_t longest_b_run = 0;
  double energy = 0.0;

  // Present when longest_run >= 1.
  std::optional<UpperBound> upper;
  std::optional<LowerCertificate> lower;
  std::optional<double> theorem1_ratio;
  std::optional<double> barrier_mass_bound;
  std::optional<double> heavy_mass_bound;

  // Present when the ground-state vector was computed.
  std::optional<double> barrier_mass;
  std::optional<double> heavy_mass;
  std::optional<std::size_t> heavy_count;
  std::optional<double> profile_s;  // fitted frequency scale on the longest island
  std::optional<double> overlap_sq; // <psi, longest-island half-sine>^2
  std::optional<double> residual;
  std::optional<int> iterations;

  struct Checks {
    bool upper = true;     // E0 <= 2 - 2cos <= pi^2/(l+1)^2
    bool barrier = true;   // b |psi_B|^2 <= E0 and |psi_B|^2 <= pi^2/(b (l+1)^2)
    bool heavy = true;     // heavy mass >= heavy_mass_bound when positive
    bool sandwich = true;  // valid certificate <= E0
    bool ratio = true;     // 0 < ratio <= 1
  } checks;

  bool all_pass() const noexcept {
    return checks.upper && checks.barrier && checks.heavy && checks.sandwich &&
           checks.ratio;
  }
};

inline BoundsReport analyze(const PotentialRealization& potential,
                            const AnalysisOptions& options = {}) {
  ClassificationParams{options.gamma}.validate();
  BoundsReport report;
  report.n_sites = potential.size();
  report.b = potential.b();
  report.gamma = options.gamma;

  const SchrodingerOperator op(potential);
  report.energy = ground_energy(op, options.tol);

  std::optional<GroundState> state;
  IslandDecomposition dec;
  if (options.solve_vector) {
    state = ground_vector(op, report.energy);
    dec = decompose(potential, state->vector);
    report.residual = state->residual;
    report.iterations = state->iterations;
    report.barrier_mass = dec.barrier_mass_sq;
  } else {
    dec = decompose(potential);
  }
  report.longest_run = dec.longest_run;
  report.n_islands = dec.n_islands();
  report.longest_b_run = dec.longest_b_run;
  const std::size_t ell = dec.longest_run;
  if (ell == 0) {
    return report;
  }
  const Island& longest = *dec.longest();
  report.longest_start = longest.start;

  report.upper = upper_bound(ell);
  report.lower = lower_bound_certificate(ell, report.b, options.gamma);
  report.theorem1_ratio = theorem1_ratio(report.energy, ell);
  report.barrier_mass_bound = barrier_mass_bound(ell, report.b);
  report.heavy_mass_bound = heavy_mass_bound(ell, report.b, options.gamma);

  auto& checks = report.checks;
  checks.upper = report.energy <= report.upper->exact + kBoundSlack &&
                 report.upper->exact <= report.upper->asymptotic + kBoundSlack;
  checks.ratio = *report.theorem1_ratio > 0.0 && *report.theorem1_ratio <= 1.0 + kBoundSlack;
  checks.sandwich = !report.lower->valid || report.lower->value <= report.energy + kBoundSlack;

  if (state) {
    const auto& psi = state->vector;
    const HeavyPartition partition = classify_heavy(dec, ClassificationParams{options.gamma});
    report.heavy_mass = partition.heavy_mass_sq;
    report.heavy_count = partition.heavy.size();
    checks.barrier = report.b * dec.barrier_mass_sq <= report.energy + kBoundSlack &&
                        dec.barrier_mass_sq <= *report.barrier_mass_bound + kBoundSlack;
    checks.heavy = *report.heavy_mass_bound <= 0.0 ||
                    partition.heavy_mass_sq >= *report.heavy_mass_bound - kBoundSlack;

    const auto test = island_test_function(potential.size(), Run{longest.start, longest.length});
    double overlap = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) overlap += psi[j] * test[j];
    report.overlap_sq = overlap * overlap;

    try {
      const auto first = psi.begin() + static_cast<std::ptrdiff_t>(longest.start - 1);
      const SineProfile profile = fit_sine_profile(
          std::span<const double>(&*first, longest.length), longest.delta_left,
          longest.delta_right);
      report.profile_s = profile.frequency_scale;
    } catch (const std::exception&) {
      // the longest island can be monotone or light; the fit is then undefined
    }
  }
  return report;
}

}  // namespace bground

#endif  // BGROUND_BOUNDS_HPP
