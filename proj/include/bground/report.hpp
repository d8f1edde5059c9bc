#ifndef BGROUND_REPORT_HPP
#define BGROUND_REPORT_HPP

#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bground/asymptotics.hpp"
#include "bground/bounds.hpp"
#include "bground/ensemble.hpp"
#include "bground/format.hpp"

namespace bground {

using Json = nlohmann::ordered_json;

namespace detail {

template <typename T>
Json optional_json(const std::optional<T>& value) {
  return value ? Json(*value) : Json(nullptr);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// JSON views

inline Json to_json(const PotentialParams& params) {
  return Json{{"n_sites", params.n_sites},
              {"p", params.p},
              {"b", params.b},
              {"seed", params.seed}};
}

inline Json to_json(const SampleRecord& r) {
  return Json{{"sample_index", r.sample_index},
              {"ell_N", r.ell},
              {"n_islands", r.n_islands},
              {"E0", r.energy},
              {"theorem1_ratio", detail::optional_json(r.theorem1_ratio)},
              {"upper_exact", detail::optional_json(r.upper_exact)},
              {"lower_certificate", detail::optional_json(r.lower_certificate)},
              {"lower_valid", detail::optional_json(r.lower_valid)},
              {"barrier_mass", detail::optional_json(r.barrier_mass)},
              {"heavy_mass", detail::optional_json(r.heavy_mass)},
              {"heavy_count", detail::optional_json(r.heavy_count)},
              {"profile_s", detail::optional_json(r.profile_s)},
              {"overlap_sq", detail::optional_json(r.overlap_sq)},
              {"longest_b_run", r.longest_b_run},
              {"upper_ok", r.upper_ok},
              {"barrier_ok", r.barrier_ok},
              {"heavy_ok", r.heavy_ok},
              {"sandwich_ok", r.sandwich_ok},
              {"ratio_ok", r.ratio_ok}};
}

inline Json to_json(const BoundsReport& r) {
  Json upper = nullptr;
  if (r.upper) upper = Json{{"exact", r.upper->exact}, {"asymptotic", r.upper->asymptotic}};
  Json lower = nullptr;
  if (r.lower) {
    lower = Json{{"value", r.lower->value},
                 {"valid", r.lower->valid},
                 {"frequency_floor", r.lower->frequency_floor}};
  }
  return Json{{"n_sites", r.n_sites},
              {"b", r.b},
              {"gamma", r.gamma},
              {"ell_N", r.longest_run},
              {"longest_start", r.longest_start},
              {"n_islands", r.n_islands},
              {"longest_b_run", r.longest_b_run},
              {"E0", r.energy},
              {"upper_bound", upper},
              {"lower_certificate", lower},
              {"theorem1_ratio", detail::optional_json(r.theorem1_ratio)},
              {"barrier_mass_bound", detail::optional_json(r.barrier_mass_bound)},
              {"heavy_mass_bound", detail::optional_json(r.heavy_mass_bound)},
              {"barrier_mass", detail::optional_json(r.barrier_mass)},
              {"heavy_mass", detail::optional_json(r.heavy_mass)},
              {"heavy_count", detail::optional_json(r.heavy_count)},
              {"profile_s", detail::optional_json(r.profile_s)},
              {"overlap_sq", detail::optional_json(r.overlap_sq)},
              {"residual", detail::optional_json(r.residual)},
              {"iterations", detail::optional_json(r.iterations)},
              {"checks",
               Json{{"upper", r.checks.upper},
                    {"barrier", r.checks.barrier},
                    {"heavy", r.checks.heavy},
                    {"sandwich", r.checks.sandwich},
                    {"ratio", r.checks.ratio}}},
              {"all_pass", r.all_pass()}};
}

inline Json to_json(const TopSpectrumReport& r) {
  return Json{{"residual", r.residual},
              {"E_max", r.e_max},
              {"E_min_complement", r.e_min_complement},
              {"longest_b_run", r.longest_b_run},
              {"asymptotic", std::isnan(r.asymptotic) ? Json(nullptr) : Json(r.asymptotic)}};
}

inline Json to_json(const Quantiles& q) {
  return Json{{"count", q.count}, {"min", q.min},       {"q01", q.q01}, {"q10", q.q10},
              {"median", q.median}, {"q90", q.q90}, {"q99", q.q99}, {"max", q.max}};
}

inline Json to_json(const DensityEstimate& d) {
  return Json{{"mu_hat", d.mu_hat},
              {"halfwidth_95", d.halfwidth},
              {"pq", d.combinatorial},
              {"one_over_two_plus_inverse_pq", d.alternative},
              {"n_samples", d.n_samples}};
}

inline Json to_json(const LimitLawReport& r) {
  Json table = Json::array();
  for (std::size_t i = 0; i < r.empirical.grid.size(); ++i) {
    table.push_back(Json{{"tau", r.empirical.grid[i]},
                         {"empirical", r.empirical.values[i]},
                         {"theoretical", r.theoretical.values[i]}});
  }
  return Json{{"p", r.p},
              {"n_sites", r.n_sites},
              {"n_samples", r.n_samples},
              {"mu_hat", r.mu_hat},
              {"centering", r.centering},
              {"theta", r.theta},
              {"sup_distance", r.sup_distance},
              {"mu_pq", r.mu_combinatorial},
              {"mu_one_over_two_plus_inverse_pq", r.mu_alternative},
              {"cdf", table}};
}

inline Json to_json(const EnsembleSummary& s) {
  const auto& c = s.config;
  return Json{
      {"config",
       Json{{"params", to_json(c.params)},
            {"n_samples", c.n_samples},
            {"first_index", c.first_index},
            {"gamma", c.gamma},
            {"solve_vectors", c.solve_vectors},
            {"tol", c.tol}}},
      {"theorem1_ratio", to_json(s.ratio)},
      {"ell_N", to_json(s.ell)},
      {"violations",
       Json{{"upper", s.violations.upper},
            {"barrier", s.violations.barrier},
            {"heavy", s.violations.heavy},
            {"sandwich", s.violations.sandwich},
            {"ratio", s.violations.ratio},
            {"total", s.violations.total()}}},
      {"valid_certificates", s.valid_certificates},
      {"island_density", s.density ? to_json(*s.density) : Json(nullptr)},
      {"limit_law", s.limit_law ? to_json(*s.limit_law) : Json(nullptr)}};
}

// ---------------------------------------------------------------------------
// CSV: one row per sample, columns in the order below. Empty cells mark
// absent optional values; booleans are 0/1.

inline constexpr std::array<std::string_view, 19> kCsvColumns = {
    "sample_index", "ell_N",        "n_islands",     "E0",         "theorem1_ratio",
    "upper_exact",  "lower_certificate", "lower_valid", "barrier_mass", "heavy_mass",
    "heavy_count",  "profile_s",    "overlap_sq",    "longest_b_run", "upper_ok",
    "barrier_ok", "heavy_ok",   "sandwich_ok",   "ratio_ok"};

inline std::string csv_header() {
  std::string line;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (i > 0) line += ',';
    line += kCsvColumns[i];
  }
  return line;
}

namespace detail {

inline std::string cell(double v) { return format_double(v); }
inline std::string cell(std::size_t v) { return std::to_string(v); }
inline std::string cell(bool v) { return v ? "1" : "0"; }
template <typename T>
std::string cell(const std::optional<T>& v) {
  return v ? cell(*v) : std::string();
}

}  // namespace detail

inline std::string csv_row(const SampleRecord& r) {
  using detail::cell;
  const std::array<std::string, kCsvColumns.size()> cells = {
      std::to_string(r.sample_index), cell(r.ell),           cell(r.n_islands),
      cell(r.energy),                 cell(r.theorem1_ratio), cell(r.upper_exact),
      cell(r.lower_certificate),      cell(r.lower_valid),    cell(r.barrier_mass),
      cell(r.heavy_mass),             cell(r.heavy_count),    cell(r.profile_s),
      cell(r.overlap_sq),             cell(r.longest_b_run),  cell(r.upper_ok),
      cell(r.barrier_ok),          cell(r.heavy_ok),      cell(r.sandwich_ok),
      cell(r.ratio_ok)};
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  return line;
}

inline std::string to_csv(const std::vector<SampleRecord>& records) {
  std::string out = csv_header() + '\n';
  for (const auto& r : records) out += csv_row(r) + '\n';
  return out;
}

/// Inverse of to_csv.
inline std::vector<SampleRecord> parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) {
    throw ValidationError("unexpected CSV header");
  }
  auto to_size = [](const std::string& s) {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw ValidationError("bad integer cell '" + s + "'");
    return static_cast<std::size_t>(v);
  };
  auto opt_double = [](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
  };
  std::vector<SampleRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t begin = 0;
    while (true) {
      const std::size_t comma = line.find(',', begin);
      cells.push_back(line.substr(begin, comma - begin));
      if (comma == std::string::npos) break;
      begin = comma + 1;
    }
    if (cells.size() != kCsvColumns.size()) {
      throw ValidationError("CSV row has " + std::to_string(cells.size()) + " cells");
    }
    SampleRecord r;
    r.sample_index = to_size(cells[0]);
    r.ell = to_size(cells[1]);
    r.n_islands = to_size(cells[2]);
    r.energy = parse_double(cells[3]);
    r.theorem1_ratio = opt_double(cells[4]);
    r.upper_exact = opt_double(cells[5]);
    r.lower_certificate = opt_double(cells[6]);
    if (!cells[7].empty()) r.lower_valid = cells[7] == "1";
    r.barrier_mass = opt_double(cells[8]);
    r.heavy_mass = opt_double(cells[9]);
    if (!cells[10].empty()) r.heavy_count = to_size(cells[10]);
    r.profile_s = opt_double(cells[11]);
    r.overlap_sq = opt_double(cells[12]);
    r.longest_b_run = to_size(cells[13]);
    r.upper_ok = cells[14] == "1";
    r.barrier_ok = cells[15] == "1";
    r.heavy_ok = cells[16] == "1";
    r.sandwich_ok = cells[17] == "1";
    r.ratio_ok = cells[18] == "1";
    records.push_back(r);
  }
  return records;
}

inline void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << contents;
  out.flush();
  if (!out) {
    throw std::runtime_error("write failed for '" + path + "'");
  }
}

enum class ReportFormat { csv, json };

/// Writes the per-sample CSV or the summary JSON.
inline void emit_report(const EnsembleSummary& summary, ReportFormat format,
                        const std::string& path) {
  if (format == ReportFormat::csv) {
    write_text_file(path, to_csv(summary.records));
  } else {
    write_text_file(path, to_json(summary).dump(2) + '\n');
  }
}

}  // namespace bground

#endif  // BGROUND_REPORT_HPP
