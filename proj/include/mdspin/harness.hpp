#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdspin/external_field.hpp"
#include "mdspin/format.hpp"

namespace mdspin::harness {

enum class Scenario { Homogeneous, Interferometer, SternGerlach, Coupled, Compare };

const char* to_string(Scenario s);
std::optional<Scenario> parse_scenario(const std::string& name);

// Raw sectioned key-value text: `[section]`, `key = value`, `#` comments.
// Keys before the first section header belong to section "experiment".
struct ConfigEntry {
  std::string value;
  int line = 0;
};
using ConfigSections = std::map<std::string, std::map<std::string, ConfigEntry>>;

ConfigSections parse_config_text(const std::string& text);

struct ExperimentConfig {
  Scenario scenario = Scenario::Homogeneous;
  // True when the scenario came from the file rather than the default.
  bool scenario_set = false;

  struct Units {
    double hbar = 1.0;
    double c = 1.0;
  } units;

  struct Particle {
    double rho0 = 1.0;
    double u0 = 1.0;
    double k0 = 1.0;
    double b0 = 1.0;
    double phase0 = 0.0;
  } particle;

  struct Field {
    double b_ext = 0.1;
    double theta = 0.0;
    double tau = 1.0;
    std::string profile = "affine";  // affine | quadratic | constant_force
    double profile_b0 = 1.0;
    double gradient = 0.01;
    double curvature = 0.0;
    double force = 1.0;
    double z_min = -10.0;
    double z_max = 10.0;
  } field;

  struct Interferometer {
    double path_length = 1.0;
  } interferometer;

  struct Geometry {
    double length_x = 1.0;
    double drift_x = 1.0;
    double z_entry = 0.0;
  } geometry;

  struct Beam {
    int n_particles = 1000;
    std::string policy = "phase";  // phase | plus | minus
  } beam;

  struct Sweep {
    std::string parameter;  // b_e for homogeneous/interferometer, scale for compare
    std::vector<double> values;
  } sweep;

  struct Numerics {
    int resolution = 256;
    double dt = 1e-3;
    std::uint64_t seed = 0;
  } numerics;

  struct Coupled {
    int nx = 64;
    int nt = 65;
    double length = 6.283185307179586;
    double dt = 0.01;
    double br_mean = 1.0;
    double br_amp = 0.25;
    double bi_mean = 0.5;
    double bi_amp = 0.1;
    int mode = 1;
    double safety_factor = 0.5;
    int stride = 8;
  } coupled;

  struct Output {
    std::string path = "out";
  } output;

  // Throws ConfigError naming the first invalid field.
  void validate() const;
  // Key-value text in the same grammar, including every default. Loading it
  // back gives an identical configuration.
  std::string to_text() const;
};

// Throws IoError if the file cannot be read, ConfigError for parse or
// validation failures. Scenario-dependent defaults are applied.
// A `scenario` argument forces that scenario; a file naming a different one
// is rejected with ConfigError on `experiment.scenario`.
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<Scenario> scenario = std::nullopt);
ExperimentConfig config_from_text(const std::string& text,
                                  std::optional<Scenario> scenario = std::nullopt);
void apply_scenario_defaults(ExperimentConfig& config);
// Inhomogeneous field described by the [field] section.
InhomogeneousField profile_from_config(const ExperimentConfig& config);

struct RunOutputs {
  std::filesystem::path data_file;
  std::filesystem::path metadata_file;
  std::vector<std::pair<std::string, std::string>> summary;
};

// Computes the scenario, then writes <out>/<scenario>.csv and
// <out>/<scenario>.meta. Module errors propagate; write failures raise IoError.
RunOutputs run_experiment(const ExperimentConfig& config);

struct ScalingFitResult {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int n_points = 0;
};

// Ordinary least squares on (ln s, ln |deflection|). Throws DomainError for
// fewer than 3 points, s <= 0, zero or mixed-sign deflections.
ScalingFitResult fit_scaling(const std::vector<std::pair<double, double>>& pairs);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

using mdspin::format_number;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
void write_csv(std::ostream& os, const CsvTable& table);
CsvTable read_csv(std::istream& is);

// Column headers written by each scenario.
const std::vector<std::string>& csv_header(Scenario s);

}  // namespace mdspin::harness
