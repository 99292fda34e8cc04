#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace entnum {

// One experiment run. Fields not used by an experiment are ignored; zero or
// empty values fall back to per-experiment defaults in `resolved()`.
struct ExperimentConfig {
  std::string experiment;  // sigma-decay | ball-entropy | duality-check | mp-duality | it1 | it2-octahedron
  std::optional<std::uint64_t> seed;

  double q = 2.0;  // ambient exponent (sigma-decay, duality-check, it2-octahedron)
  double p = 2.0;  // ball / subspace exponent (ball-entropy, it1)
  int n = 0;       // atoms, ball dimension, or |Omega_n|
  int dim = 0;     // ambient dimension of the dictionary (defaults to n)
  int N = 0;       // subspace dimension
  int s = 0;       // measure support size
  std::string dictionary = "canonical";  // canonical | gaussian
  std::string measure = "uniform";       // uniform | random
  double measure_spread = 2.0;

  std::vector<int> k_list;
  std::vector<int> m_list;
  std::vector<double> p_list;
  int m = 0;  // duality-check: sums over k = 0..m

  int samples = 0;
  int trials = 0;

  double solver_tol = 1e-11;
  double duality_tol_p2 = 1e-6;
  double duality_tol = 1e-4;
  double transfer_tol = 1e-8;
  bool fit_exclude_small_k = true;

  std::string out;
  std::string format = "csv";
  std::string certificate;  // it2-octahedron: optional path for the largest-k cover

  bool operator==(const ExperimentConfig&) const = default;
};

const std::vector<std::string>& experiment_names();

nlohmann::json config_to_json(const ExperimentConfig& config);
// Unknown keys and type mismatches are reported together as kInvalidArgument.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Applies "key=value" overrides using the JSON key names.
void apply_override(ExperimentConfig& config, const std::string& assignment);

// Every violated precondition, one message per offending field.
std::vector<std::string> validate(const ExperimentConfig& config);

// Defaults filled in (k_list, m_list, samples, ...). Call after validate.
ExperimentConfig resolved(const ExperimentConfig& config);

// A table of numeric and string cells plus summary values.
struct Report {
  std::string experiment;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
  nlohmann::json summary = nlohmann::json::object();
  nlohmann::json metadata = nlohmann::json::object();
  bool property_violation = false;

  bool operator==(const Report&) const = default;
};

// Runs the experiment; throws Error on validation failure (kInvalidArgument
// listing every field) and propagates module errors.
Report run(const ExperimentConfig& config);

// CSV: header line plus one line per row, numbers printed with %.17g.
std::string report_to_csv(const Report& report);
// JSON: columns, rows, summary, metadata and (k, value, envelope) triples.
std::string report_to_json(const Report& report);
Report report_from_json(const std::string& text);
// Short human-readable summary.
std::string report_summary(const Report& report);

// Writes report_to_csv / report_to_json to `path`; kIo when unwritable.
void emit(const Report& report, const std::string& format, const std::string& path);

std::string version_string();

}  // namespace entnum
