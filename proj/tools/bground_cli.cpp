// Command-line front end: single samples, ensembles, certificates for explicit
// potentials, the longest-run limit law and the top-of-spectrum identity.
//
// Exit status: 0 success, 1 validation or I/O error, 2 solver failure.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bground/bground.hpp"

namespace {

using namespace bground;

constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;

struct Common {
  std::size_t n_sites = 0;
  double p = 0.5;
  double b = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;

  PotentialParams params() const { return {n_sites, p, b, seed}; }
};

void add_params(CLI::App* cmd, Common& c, bool with_b = true) {
  cmd->add_option("--n", c.n_sites, "Lattice size N")->required();
  cmd->add_option("--p", c.p, "Probability of a zero site")->required();
  if (with_b) cmd->add_option("--b", c.b, "Barrier height")->required();
  cmd->add_option("--seed", c.seed, "Master seed")->required();
}

void print_json(const Json& doc, const std::string& path) {
  const std::string text = doc.dump(2) + '\n';
  if (!path.empty()) write_text_file(path, text);
  std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground-state energy of the 1D Schrodinger operator with Bernoulli potential"};
  app.require_subcommand(1);

  Common sample_args;
  double sample_gamma = 0.5;
  bool sample_vectors = false;
  std::string sample_json;
  auto* sample = app.add_subcommand("sample", "Analyze one realization");
  add_params(sample, sample_args);
  sample->add_option("--index", sample_args.index, "Sample index within the seeded ensemble");
  sample->add_option("--gamma", sample_gamma, "Heavy-island exponent in (0,1)");
  sample->add_flag("--vectors", sample_vectors, "Also compute the ground-state vector");
  sample->add_option("--json", sample_json, "Write the record to this path");

  Common ensemble_args;
  std::size_t ensemble_samples = 1;
  std::uint64_t ensemble_first = 0;
  double ensemble_gamma = 0.5;
  bool ensemble_vectors = false;
  std::optional<unsigned> ensemble_threads;
  std::string ensemble_csv, ensemble_json;
  auto* ensemble = app.add_subcommand("ensemble", "Analyze an ensemble of realizations");
  add_params(ensemble, ensemble_args);
  ensemble->add_option("--samples", ensemble_samples, "Number of realizations")->required();
  ensemble->add_option("--first-index", ensemble_first, "Index of the first realization");
  ensemble->add_option("--gamma", ensemble_gamma, "Heavy-island exponent in (0,1)");
  ensemble->add_flag("--vectors", ensemble_vectors, "Also compute ground-state vectors");
  ensemble->add_option("--threads", ensemble_threads, "Worker threads (overrides THREADS)");
  ensemble->add_option("--csv", ensemble_csv, "Per-sample CSV output")->required();
  ensemble->add_option("--json", ensemble_json, "Summary JSON output");

  std::string bounds_file;
  double bounds_gamma = 0.5;
  auto* bounds = app.add_subcommand("bounds", "Certificates for an explicit potential file");
  bounds->add_option("--potential-file", bounds_file, "JSON potential file")->required();
  bounds->add_option("--gamma", bounds_gamma, "Heavy-island exponent in (0,1)");

  Common law_args;
  std::size_t law_samples = 1;
  std::optional<unsigned> law_threads;
  std::string law_json;
  auto* law = app.add_subcommand("limit-law", "Longest-run limit law comparison");
  add_params(law, law_args, /*with_b=*/false);
  law->add_option("--samples", law_samples, "Number of realizations")->required();
  law->add_option("--threads", law_threads, "Worker threads (overrides THREADS)");
  law->add_option("--json", law_json, "Report output path")->required();

  Common top_args;
  auto* topspec = app.add_subcommand("topspec", "Top-of-spectrum conjugation identity");
  add_params(topspec, top_args);
  topspec->add_option("--index", top_args.index, "Sample index within the seeded ensemble");

  std::string potential_out;
  Common potential_args;
  std::size_t period = 0, zeros_per_period = 0;
  auto* potential = app.add_subcommand("potential", "Write a potential file");
  potential->add_option("--n", potential_args.n_sites, "Lattice size N")->required();
  potential->add_option("--b", potential_args.b, "Barrier height")->required();
  potential->add_option("--p", potential_args.p, "Probability of a zero site");
  potential->add_option("--seed", potential_args.seed, "Master seed");
  potential->add_option("--index", potential_args.index, "Sample index");
  potential->add_option("--period", period, "Periodic potential with this period");
  potential->add_option("--zeros", zeros_per_period, "Zeros per period");
  potential->add_option("--out", potential_out, "Output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*sample) {
      const auto realization = sample_bernoulli(sample_args.params(), sample_args.index);
      const auto report =
          analyze(realization, AnalysisOptions{sample_gamma, sample_vectors, kDefaultTolerance});
      Json doc = to_json(make_record(sample_args.index, report));
      doc["params"] = to_json(sample_args.params());
      doc["bounds"] = to_json(report);
      print_json(doc, sample_json);
    } else if (*ensemble) {
      EnsembleConfig config;
      config.params = ensemble_args.params();
      config.n_samples = ensemble_samples;
      config.first_index = ensemble_first;
      config.gamma = ensemble_gamma;
      config.solve_vectors = ensemble_vectors;
      config.threads = resolve_threads(ensemble_threads);
      const auto start = std::chrono::steady_clock::now();
      const EnsembleSummary summary = run_ensemble(config);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      emit_report(summary, ReportFormat::csv, ensemble_csv);
      if (!ensemble_json.empty()) {
        emit_report(summary, ReportFormat::json, ensemble_json);
      } else {
        std::cout << to_json(summary).dump(2) << '\n';
      }
      std::cerr << "ensemble: " << summary.records.size() << " samples, "
                << summary.violations.total() << " bound violations, median ratio "
                << format_double(summary.ratio.median) << ", " << config.threads
                << " threads, " << seconds << " s\n";
    } else if (*bounds) {
      const auto realization = load_potential(bounds_file);
      const auto report =
          analyze(realization, AnalysisOptions{bounds_gamma, true, kDefaultTolerance});
      print_json(to_json(report), "");
    } else if (*law) {
      PotentialParams params = law_args.params();
      params.b = 1.0;  // the run structure does not depend on b
      const auto stats =
          collect_run_statistics(params, law_samples, 0, resolve_threads(law_threads));
      const LimitLawResult result = limit_law_from_statistics(stats, params);
      Json doc = to_json(result.report);
      doc["island_density"] = to_json(result.density);
      write_text_file(law_json, doc.dump(2) + '\n');
      std::cout << "sup_distance " << format_double(result.report.sup_distance) << " theta "
                << format_double(result.report.theta) << " mu_hat "
                << format_double(result.density.mu_hat) << '\n';
    } else if (*topspec) {
      const auto realization = sample_bernoulli(top_args.params(), top_args.index);
      print_json(to_json(top_spectrum_check(realization)), "");
    } else if (*potential) {
      const auto realization =
          period > 0 ? periodic(potential_args.n_sites, period, zeros_per_period,
                                potential_args.b)
                     : sample_bernoulli(potential_args.params(), potential_args.index);
      save_potential(realization, potential_out);
    }
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
