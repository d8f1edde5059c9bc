#ifndef BGROUND_POTENTIAL_HPP
#define BGROUND_POTENTIAL_HPP

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "bground/errors.hpp"
#include "bground/format.hpp"
#include "bground/rng.hpp"

namespace bground {

/// Parameters of the i.i.d. Bernoulli potential: each site is 0 with
/// probability p and b with probability 1 - p.
struct PotentialParams {
  std::size_t n_sites = 1;
  double p = 0.5;
  double b = 1.0;
  std::uint64_t seed = 0;

  void validate() const {
    detail::require(n_sites >= 1, "n_sites must be positive");
    detail::require(p >= 0.0 && p <= 1.0, "p must lie in [0, 1]");
    detail::require(b > 0.0, "b must be positive");
  }

  double q() const noexcept { return 1.0 - p; }
};

struct ExplicitProvenance {};

struct SampledProvenance {
  PotentialParams params;
  std::uint64_t sample_index = 0;
};

struct PeriodicProvenance {
  std::size_t period = 1;
  std::size_t zeros_per_period = 0;
};

using Provenance =
    std::variant<ExplicitProvenance, SampledProvenance, PeriodicProvenance>;

/// A potential taking only the values 0 and b. Immutable once built.
class PotentialRealization {
 public:
  /// Validating factory. Entries must equal 0 or b bit-for-bit.
  static PotentialRealization from_values(std::vector<double> values, double b,
                                          Provenance provenance = ExplicitProvenance{}) {
    detail::require(b > 0.0, "b must be positive");
    detail::require(!values.empty(), "empty potential");
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (values[j] != 0.0 && values[j] != b) {
        throw ValidationError("invalid potential value " + format_double(values[j]) +
                              " at site " + std::to_string(j + 1));
      }
    }
    return PotentialRealization(std::move(values), b, std::move(provenance));
  }

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double b() const noexcept { return b_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  bool is_zero(std::size_t j) const noexcept { return values_[j] == 0.0; }
  const Provenance& provenance() const noexcept { return provenance_; }

  /// Site order reversed (j -> N + 1 - j).
  PotentialRealization reversed() const {
    return PotentialRealization({values_.rbegin(), values_.rend()}, b_, ExplicitProvenance{});
  }

  /// The complementary potential b - V; zeros and barriers swap roles.
  PotentialRealization complement() const {
    std::vector<double> swapped(values_.size());
    for (std::size_t j = 0; j < values_.size(); ++j) {
      swapped[j] = values_[j] == 0.0 ? b_ : 0.0;
    }
    return PotentialRealization(std::move(swapped), b_, ExplicitProvenance{});
  }

  friend bool operator==(const PotentialRealization& lhs, const PotentialRealization& rhs) {
    return lhs.b_ == rhs.b_ && lhs.values_ == rhs.values_;
  }

 private:
  PotentialRealization(std::vector<double> values, double b, Provenance provenance)
      : values_(std::move(values)), b_(b), provenance_(std::move(provenance)) {}

  std::vector<double> values_;
  double b_;
  Provenance provenance_;
};

/// Draws realization number `sample_index` of the ensemble described by
/// `params`. Site j (0-based) is zero iff CounterStream(seed, sample_index)
/// .uniform(j) < p.
inline PotentialRealization sample_bernoulli(const PotentialParams& params,
                                             std::uint64_t sample_index) {
  params.validate();
  const CounterStream stream(params.seed, sample_index);
  std::vector<double> values(params.n_sites);
  for (std::size_t j = 0; j < params.n_sites; ++j) {
    values[j] = stream.uniform(j) < params.p ? 0.0 : params.b;
  }
  return PotentialRealization::from_values(std::move(values), params.b,
                                           SampledProvenance{params, sample_index});
}

/// Repeating block of `zeros_per_period` zeros followed by barriers, cut to
/// `n_sites` sites.
inline PotentialRealization periodic(std::size_t n_sites, std::size_t period,
                                     std::size_t zeros_per_period, double b) {
  detail::require(period >= 1, "period must be positive");
  detail::require(zeros_per_period <= period, "zeros_per_period exceeds period");
  detail::require(period <= n_sites, "period exceeds n_sites");
  std::vector<double> values(n_sites);
  for (std::size_t j = 0; j < n_sites; ++j) {
    values[j] = (j % period) < zeros_per_period ? 0.0 : b;
  }
  return PotentialRealization::from_values(std::move(values), b,
                                           PeriodicProvenance{period, zeros_per_period});
}

// Potential file: {"b": <real>, "values": [<real>, ...]}

inline std::string potential_to_json(const PotentialRealization& potential) {
  std::string out = "{\"b\": " + format_double(potential.b()) + ", \"values\": [";
  const auto values = potential.values();
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (j > 0) {
      out += ", ";
    }
    out += format_double(values[j]);
  }
  out += "]}\n";
  return out;
}

inline PotentialRealization potential_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("malformed potential file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("b") || !doc.contains("values") ||
      !doc["b"].is_number() || !doc["values"].is_array()) {
    throw ValidationError("potential file must contain numeric \"b\" and array \"values\"");
  }
  std::vector<double> values;
  values.reserve(doc["values"].size());
  for (const auto& entry : doc["values"]) {
    if (!entry.is_number()) {
      throw ValidationError("invalid potential value (not a number)");
    }
    values.push_back(entry.get<double>());
  }
  return PotentialRealization::from_values(std::move(values), doc["b"].get<double>());
}

inline void save_potential(const PotentialRealization& potential, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << potential_to_json(potential);
  if (!out) {
    throw std::runtime_error("write failed for '" + path + "'");
  }
}

inline PotentialRealization load_potential(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open potential file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return potential_from_json(buffer.str());
}

}  // namespace bground

#endif  // BGROUND_POTENTIAL_HPP
