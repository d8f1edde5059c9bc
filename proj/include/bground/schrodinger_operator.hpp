#ifndef BGROUND_SCHRODINGER_OPERATOR_HPP
#define BGROUND_SCHRODINGER_OPERATOR_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "bground/errors.hpp"
#include "bground/potential.hpp"

namespace bground {

/// Absolute eigenvalue tolerance used when callers do not pass one.
inline constexpr double kDefaultTolerance = 1e-12;
/// Sturm pivots with magnitude below this are replaced by +kPivotFloor, which
/// counts an eigenvalue sitting exactly at the shift as not below it.
inline constexpr double kPivotFloor = 1e-300;
/// Inverse iteration factors H - (E - kInverseIterationShift).
inline constexpr double kInverseIterationShift = 1e-10;
inline constexpr int kMaxInverseIterations = 500;
inline constexpr double kResidualTarget = 1e-10;
/// Ground-state entries in [-kNegativeClamp, 0) are rounded to zero; anything
/// more negative is reported as a solver failure.
inline constexpr double kNegativeClamp = 1e-8;
/// Uniform positive floor under the start profile of inverse iteration. It keeps
/// a nonzero overlap with a ground state localized far from the longest island.
inline constexpr double kStartBackground = 1e-3;
/// Largest matrix accepted by dense_spectrum_oracle.
inline constexpr std::size_t kDenseOracleMaxSize = 16;

/// H = -Laplacian + V on {1..N} with Dirichlet ends: diagonal 2 + V(j),
/// unit negative couplings between neighbours.
class SchrodingerOperator {
 public:
  explicit SchrodingerOperator(const PotentialRealization& potential)
      : potential_(potential.values().begin(), potential.values().end()),
        diagonal_(potential.size()),
        b_(potential.b()) {
    for (std::size_t j = 0; j < potential_.size(); ++j) {
      diagonal_[j] = 2.0 + potential_[j];
    }
  }

  std::size_t size() const noexcept { return diagonal_.size(); }
  std::span<const double> diagonal() const noexcept { return diagonal_; }
  std::span<const double> potential() const noexcept { return potential_; }
  /// Off-diagonal coupling; constant across the chain.
  static constexpr double coupling() noexcept { return -1.0; }
  double b() const noexcept { return b_; }
  /// Gershgorin upper end of the spectrum.
  double spectral_upper() const noexcept { return 4.0 + b_; }

  /// y = H x
  void apply(std::span<const double> x, std::span<double> y) const {
    detail::require(x.size() == size() && y.size() == size(), "dimension mismatch");
    const std::size_t n = size();
    for (std::size_t j = 0; j < n; ++j) {
      double value = diagonal_[j] * x[j];
      if (j > 0) value -= x[j - 1];
      if (j + 1 < n) value -= x[j + 1];
      y[j] = value;
    }
  }

 private:
  std::vector<double> potential_;
  std::vector<double> diagonal_;
  double b_;
};

inline SchrodingerOperator build_operator(const PotentialRealization& potential) {
  return SchrodingerOperator(potential);
}

struct Bracket {
  double lower;
  double upper;
};

struct GroundState {
  double energy = 0.0;
  std::vector<double> vector;
  double residual = 0.0;
  int iterations = 0;
};

namespace detail {

inline constexpr std::size_t kSturmLanes = 4;

inline double guard_pivot(double pivot) noexcept {
  return std::abs(pivot) < kPivotFloor ? kPivotFloor : pivot;
}

// Negative-pivot counts of the LDL^T factorisation of H - shift for several
// shifts in one sweep. The chains are independent, which hides the divide
// latency of the serial recurrence.
template <std::size_t Lanes>
std::array<std::size_t, Lanes> sturm_counts(std::span<const double> diagonal,
                                            const std::array<double, Lanes>& shifts) {
  std::array<double, Lanes> pivot{};
  std::array<double, Lanes> negatives{};
  if (diagonal.empty()) return {};
  for (std::size_t l = 0; l < Lanes; ++l) {
    pivot[l] = guard_pivot(diagonal[0] - shifts[l]);
    negatives[l] = pivot[l] < 0.0 ? 1.0 : 0.0;
  }
  for (std::size_t j = 1; j < diagonal.size(); ++j) {
    const double a = diagonal[j];
    for (std::size_t l = 0; l < Lanes; ++l) {
      double d = (a - shifts[l]) - 1.0 / pivot[l];
      d = guard_pivot(d);
      pivot[l] = d;
      negatives[l] += d < 0.0 ? 1.0 : 0.0;
    }
  }
  std::array<std::size_t, Lanes> counts{};
  for (std::size_t l = 0; l < Lanes; ++l) {
    counts[l] = static_cast<std::size_t>(negatives[l]);
  }
  return counts;
}

// Leftmost maximal run of unperturbed (diagonal == 2) sites: {start, length}.
inline std::pair<std::size_t, std::size_t> longest_free_run(std::span<const double> diagonal) {
  std::size_t best_start = 0, best_length = 0, run = 0;
  for (std::size_t j = 0; j < diagonal.size(); ++j) {
    run = diagonal[j] == 2.0 ? run + 1 : 0;
    if (run > best_length) {
      best_length = run;
      best_start = j + 1 - run;
    }
  }
  return {best_start, best_length};
}

}  // namespace detail

/// Number of eigenvalues strictly below `lambda` (Sturm count).
inline std::size_t count_eigenvalues_below(const SchrodingerOperator& op, double lambda) {
  return detail::sturm_counts<1>(op.diagonal(), {lambda})[0];
}

/// Eigenvalue number k (0-based, ascending) by multisection on `bracket`.
/// The bracket must satisfy count(lower) <= k < count(upper); otherwise the
/// full Gershgorin interval [0, 4 + b] is used.
inline double kth_eigenvalue(const SchrodingerOperator& op, std::size_t k, double tol,
                             Bracket bracket) {
  detail::require(tol > 0.0, "tolerance must be positive");
  detail::require(k < op.size(), "eigenvalue index out of range");
  constexpr std::size_t lanes = detail::kSturmLanes;
  double lower = bracket.lower;
  double upper = bracket.upper;
  if (!(lower < upper) || (lower > 0.0 && count_eigenvalues_below(op, lower) > k) ||
      (upper < op.spectral_upper() && count_eigenvalues_below(op, upper) <= k)) {
    lower = 0.0;
    upper = op.spectral_upper();
  }
  while (upper - lower > tol) {
    std::array<double, lanes> shifts{};
    const double step = (upper - lower) / static_cast<double>(lanes + 1);
    for (std::size_t l = 0; l < lanes; ++l) {
      shifts[l] = lower + step * static_cast<double>(l + 1);
    }
    const auto counts = detail::sturm_counts<lanes>(op.diagonal(), shifts);
    double next_lower = lower;
    double next_upper = upper;
    for (std::size_t l = 0; l < lanes; ++l) {
      if (counts[l] <= k) {
        next_lower = std::max(next_lower, shifts[l]);
      } else {
        next_upper = std::min(next_upper, shifts[l]);
        break;
      }
    }
    if (next_lower == lower && next_upper == upper) {
      break;  // interval at floating-point resolution
    }
    lower = next_lower;
    upper = next_upper;
  }
  return 0.5 * (lower + upper);
}

inline double kth_eigenvalue(const SchrodingerOperator& op, std::size_t k,
                             double tol = kDefaultTolerance) {
  return kth_eigenvalue(op, k, tol, Bracket{0.0, op.spectral_upper()});
}

/// Smallest eigenvalue. Equivalent to kth_eigenvalue(op, 0, tol); the search
/// starts from [0, 2 - 2cos(pi/(l+1))] where l is the longest unperturbed run,
/// since the sine test function on that run already bounds the ground energy.
inline double ground_energy(const SchrodingerOperator& op, double tol = kDefaultTolerance) {
  const auto [start, length] = detail::longest_free_run(op.diagonal());
  double upper = op.spectral_upper();
  if (length > 0) {
    const double test_energy =
        2.0 - 2.0 * std::cos(std::numbers::pi / static_cast<double>(length + 1));
    upper = std::min(upper, test_energy + 1e-9);
  }
  return kth_eigenvalue(op, 0, tol, Bracket{0.0, upper});
}

/// <phi, H phi> / <phi, phi> in quadratic-form representation:
///   sum_j V(j) phi(j)^2 + sum_{j=0}^{N} (phi(j+1) - phi(j))^2, phi(0) = phi(N+1) = 0.
inline double rayleigh_quotient(const SchrodingerOperator& op, std::span<const double> phi) {
  detail::require(phi.size() == op.size(), "dimension mismatch");
  const auto potential = op.potential();
  double norm_sq = 0.0;
  double energy = 0.0;
  double previous = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    norm_sq += phi[j] * phi[j];
    energy += potential[j] * phi[j] * phi[j];
    const double step = phi[j] - previous;
    energy += step * step;
    previous = phi[j];
  }
  energy += previous * previous;
  detail::require(norm_sq > 0.0, "zero vector");
  return energy / norm_sq;
}

/// Euclidean norm of (H - energy) x.
inline double eigen_residual(const SchrodingerOperator& op, std::span<const double> x,
                             double energy) {
  const auto diagonal = op.diagonal();
  const std::size_t n = x.size();
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double r = (diagonal[j] - energy) * x[j];
    if (j > 0) r -= x[j - 1];
    if (j + 1 < n) r -= x[j + 1];
    sum += r * r;
  }
  return std::sqrt(sum);
}

/// Nonnegative unit ground-state vector by shifted inverse iteration.
///
/// Starts from the half-sine on the longest unperturbed run (or the whole
/// chain when there is none) and repeatedly solves
/// (H - (energy - kInverseIterationShift)) x_new = x with an LDL^T
/// factorisation until ||(H - energy) x|| <= kResidualTarget.
inline GroundState ground_vector(const SchrodingerOperator& op, double energy) {
  const std::size_t n = op.size();
  const auto diagonal = op.diagonal();
  const double shift = energy - kInverseIterationShift;

  // Pivots of H - shift; all positive iff shift lies below the spectrum.
  std::vector<double> inverse_pivot(n);
  double pivot = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    pivot = (diagonal[j] - shift) - (j > 0 ? 1.0 / pivot : 0.0);
    if (!(pivot > 0.0)) {
      throw SolverError("inverse iteration shift is not below the ground state");
    }
    inverse_pivot[j] = 1.0 / pivot;
  }

  GroundState state;
  state.energy = energy;
  auto& x = state.vector;
  x.assign(n, kStartBackground);
  auto [start, length] = detail::longest_free_run(diagonal);
  if (length == 0) {
    start = 0;
    length = n;
  }
  for (std::size_t i = 0; i < length; ++i) {
    x[start + i] += std::sin(std::numbers::pi * static_cast<double>(i + 1) /
                            static_cast<double>(length + 1));
  }

  auto normalize = [&x] {
    const double norm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    for (double& v : x) v /= norm;
  };
  normalize();

  std::vector<double> z(n);
  state.residual = eigen_residual(op, x, energy);
  while (state.residual > kResidualTarget) {
    if (state.iterations >= kMaxInverseIterations) {
      throw SolverError("inverse iteration not converged after " +
                        std::to_string(kMaxInverseIterations) + " sweeps (residual " +
                        format_double(state.residual) + ")");
    }
    // L z = x, then D L^T x = z.
    z[0] = x[0];
    for (std::size_t j = 1; j < n; ++j) {
      z[j] = x[j] + z[j - 1] * inverse_pivot[j - 1];
    }
    x[n - 1] = z[n - 1] * inverse_pivot[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) {
      x[j] = (z[j] + x[j + 1]) * inverse_pivot[j];
    }
    normalize();
    ++state.iterations;
    state.residual = eigen_residual(op, x, energy);
  }

  if (std::accumulate(x.begin(), x.end(), 0.0) < 0.0) {
    for (double& v : x) v = -v;
  }
  bool clamped = false;
  for (double& v : x) {
    if (v < -kNegativeClamp) {
      throw SolverError("negative ground state entry " + format_double(v));
    }
    if (v < 0.0) {
      v = 0.0;
      clamped = true;
    }
  }
  if (clamped) {
    normalize();
    state.residual = eigen_residual(op, x, energy);
  }
  return state;
}

/// All eigenvalues of a small operator, ascending, for cross-checking.
///
/// Works only with the characteristic polynomials p_k of the leading k x k
/// blocks (p_k = (d_k - x) p_{k-1} - p_{k-2}). Roots of p_{k-1} strictly
/// interlace those of p_k, so each root of p_k is isolated between two
/// consecutive roots of p_{k-1} and found by sign bisection on p_k alone.
inline std::vector<double> dense_spectrum_oracle(const SchrodingerOperator& op) {
  const std::size_t n = op.size();
  if (n > kDenseOracleMaxSize) {
    throw ValidationError("N too large for dense oracle (max " +
                          std::to_string(kDenseOracleMaxSize) + ")");
  }
  const auto diagonal = op.diagonal();
  auto characteristic = [&](std::size_t order, double x) {
    double previous = 1.0;
    double current = diagonal[0] - x;
    for (std::size_t k = 1; k < order; ++k) {
      const double next = (diagonal[k] - x) * current - previous;
      previous = current;
      current = next;
    }
    return current;
  };
  const auto [lo_it, hi_it] = std::minmax_element(diagonal.begin(), diagonal.end());
  const double outer_lower = *lo_it - 3.0;
  const double outer_upper = *hi_it + 3.0;

  std::vector<double> roots;
  for (std::size_t order = 1; order <= n; ++order) {
    std::vector<double> fences;
    fences.reserve(order + 1);
    fences.push_back(outer_lower);
    fences.insert(fences.end(), roots.begin(), roots.end());
    fences.push_back(outer_upper);
    std::vector<double> next_roots;
    next_roots.reserve(order);
    for (std::size_t i = 0; i + 1 < fences.size(); ++i) {
      double a = fences[i];
      double c = fences[i + 1];
      const bool a_positive = characteristic(order, a) > 0.0;
      for (int iter = 0; iter < 2000; ++iter) {
        const double mid = 0.5 * (a + c);
        if (mid <= a || mid >= c || c - a <= 1e-15) break;
        if ((characteristic(order, mid) > 0.0) == a_positive) {
          a = mid;
        } else {
          c = mid;
        }
      }
      next_roots.push_back(0.5 * (a + c));
    }
    roots = std::move(next_roots);
  }
  return roots;
}

}  // namespace bground

#endif  // BGROUND_SCHRODINGER_OPERATOR_HPP
