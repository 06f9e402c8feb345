#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "mdspin/coupled_solver.hpp"
#include "mdspin/errors.hpp"
#include "mdspin/external_field.hpp"
#include "mdspin/harness.hpp"

namespace mdspin::harness {

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::Homogeneous:
      return "homogeneous";
    case Scenario::Interferometer:
      return "interferometer";
    case Scenario::SternGerlach:
      return "stern-gerlach";
    case Scenario::Coupled:
      return "coupled";
    case Scenario::Compare:
      return "compare";
  }
  return "?";
}

std::optional<Scenario> parse_scenario(const std::string& name) {
  for (auto s : {Scenario::Homogeneous, Scenario::Interferometer, Scenario::SternGerlach,
                 Scenario::Coupled, Scenario::Compare})
    if (name == to_string(s)) return s;
  return std::nullopt;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v, const std::string& field, int line) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError(field, "expected a number, got '" + v + "'", line);
  if (!std::isfinite(out)) throw ConfigError(field, "must be finite", line);
  return out;
}

long long to_integer(const std::string& v, const std::string& field, int line) {
  long long out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError(field, "expected an integer, got '" + v + "'", line);
  return out;
}

int to_int(const std::string& v, const std::string& field, int line) {
  const long long x = to_integer(v, field, line);
  if (x < -2147483647LL || x > 2147483647LL) throw ConfigError(field, "integer out of range", line);
  return static_cast<int>(x);
}

std::uint64_t to_u64(const std::string& v, const std::string& field, int line) {
  std::uint64_t out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end)
    throw ConfigError(field, "expected an unsigned integer, got '" + v + "'", line);
  return out;
}

std::vector<double> to_list(const std::string& v, const std::string& field, int line) {
  std::vector<double> out;
  std::istringstream is(v);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(to_double(trim(item), field, line));
  if (out.empty()) throw ConfigError(field, "list must not be empty", line);
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&, int)>;

template <typename Section, typename T>
Setter member(Section ExperimentConfig::*sec, T Section::*field) {
  return [sec, field](ExperimentConfig& c, const std::string& v, const std::string& name, int line) {
    if constexpr (std::is_same_v<T, double>)
      (c.*sec).*field = to_double(v, name, line);
    else if constexpr (std::is_same_v<T, int>)
      (c.*sec).*field = to_int(v, name, line);
    else if constexpr (std::is_same_v<T, std::uint64_t>)
      (c.*sec).*field = to_u64(v, name, line);
    else if constexpr (std::is_same_v<T, std::string>)
      (c.*sec).*field = v;
    else if constexpr (std::is_same_v<T, std::vector<double>>)
      (c.*sec).*field = to_list(v, name, line);
  };
}

const std::map<std::string, Setter>& setters() {
  using C = ExperimentConfig;
  static const std::map<std::string, Setter> table{
      {"experiment.scenario",
       [](C& c, const std::string& v, const std::string& name, int line) {
         auto s = parse_scenario(v);
         if (!s) throw ConfigError(name, "unknown scenario '" + v + "'", line);
         c.scenario = *s;
         c.scenario_set = true;
       }},
      {"units.hbar", member(&C::units, &C::Units::hbar)},
      {"units.c", member(&C::units, &C::Units::c)},
      {"particle.rho0", member(&C::particle, &C::Particle::rho0)},
      {"particle.u0", member(&C::particle, &C::Particle::u0)},
      {"particle.k0", member(&C::particle, &C::Particle::k0)},
      {"particle.b0", member(&C::particle, &C::Particle::b0)},
      {"particle.phase0", member(&C::particle, &C::Particle::phase0)},
      {"field.b_ext", member(&C::field, &C::Field::b_ext)},
      {"field.theta", member(&C::field, &C::Field::theta)},
      {"field.tau", member(&C::field, &C::Field::tau)},
      {"field.profile", member(&C::field, &C::Field::profile)},
      {"field.profile_b0", member(&C::field, &C::Field::profile_b0)},
      {"field.gradient", member(&C::field, &C::Field::gradient)},
      {"field.curvature", member(&C::field, &C::Field::curvature)},
      {"field.force", member(&C::field, &C::Field::force)},
      {"field.z_min", member(&C::field, &C::Field::z_min)},
      {"field.z_max", member(&C::field, &C::Field::z_max)},
      {"interferometer.path_length", member(&C::interferometer, &C::Interferometer::path_length)},
      {"geometry.length_x", member(&C::geometry, &C::Geometry::length_x)},
      {"geometry.drift_x", member(&C::geometry, &C::Geometry::drift_x)},
      {"geometry.z_entry", member(&C::geometry, &C::Geometry::z_entry)},
      {"beam.n_particles", member(&C::beam, &C::Beam::n_particles)},
      {"beam.policy", member(&C::beam, &C::Beam::policy)},
      {"sweep.parameter", member(&C::sweep, &C::Sweep::parameter)},
      {"sweep.values", member(&C::sweep, &C::Sweep::values)},
      {"numerics.resolution", member(&C::numerics, &C::Numerics::resolution)},
      {"numerics.dt", member(&C::numerics, &C::Numerics::dt)},
      {"numerics.seed", member(&C::numerics, &C::Numerics::seed)},
      {"coupled.nx", member(&C::coupled, &C::Coupled::nx)},
      {"coupled.nt", member(&C::coupled, &C::Coupled::nt)},
      {"coupled.length", member(&C::coupled, &C::Coupled::length)},
      {"coupled.dt", member(&C::coupled, &C::Coupled::dt)},
      {"coupled.br_mean", member(&C::coupled, &C::Coupled::br_mean)},
      {"coupled.br_amp", member(&C::coupled, &C::Coupled::br_amp)},
      {"coupled.bi_mean", member(&C::coupled, &C::Coupled::bi_mean)},
      {"coupled.bi_amp", member(&C::coupled, &C::Coupled::bi_amp)},
      {"coupled.mode", member(&C::coupled, &C::Coupled::mode)},
      {"coupled.safety_factor", member(&C::coupled, &C::Coupled::safety_factor)},
      {"coupled.stride", member(&C::coupled, &C::Coupled::stride)},
      {"output.path", member(&C::output, &C::Output::path)},
  };
  return table;
}

// Written by run_experiment into metadata files; skipped when loading.
bool informational_section(const std::string& name) { return name == "run" || name == "summary"; }

}  // namespace

ConfigSections parse_config_text(const std::string& text) {
  ConfigSections sections;
  std::string current = "experiment";
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = raw;
    if (auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("", "unterminated section header", line);
      current = trim(std::string_view(s).substr(1, s.size() - 2));
      if (current.empty()) throw ConfigError("", "empty section name", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("", "expected 'key = value'", line);
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (key.empty()) throw ConfigError("", "missing key before '='", line);
    auto& sec = sections[current];
    if (sec.count(key)) throw ConfigError(current + "." + key, "duplicate key", line);
    sec[key] = {value, line};
  }
  return sections;
}

void apply_scenario_defaults(ExperimentConfig& c) {
  switch (c.scenario) {
    case Scenario::Homogeneous:
    case Scenario::Interferometer:
      if (c.sweep.parameter.empty()) c.sweep.parameter = "b_e";
      if (c.sweep.values.empty()) c.sweep.values = {std::abs(c.field.b_ext)};
      break;
    case Scenario::Compare:
      if (c.sweep.parameter.empty()) c.sweep.parameter = "scale";
      if (c.sweep.values.empty()) c.sweep.values = {1.0, 2.0, 4.0, 8.0};
      break;
    case Scenario::SternGerlach:
    case Scenario::Coupled:
      break;
  }
}

ExperimentConfig config_from_text(const std::string& text, std::optional<Scenario> scenario) {
  const auto sections = parse_config_text(text);
  ExperimentConfig c;
  const auto& table = setters();
  for (const auto& [section, entries] : sections) {
    if (informational_section(section)) continue;
    for (const auto& [key, entry] : entries) {
      const std::string name = section + "." + key;
      auto it = table.find(name);
      if (it == table.end()) throw ConfigError(name, "unknown key", entry.line);
      it->second(c, entry.value, name, entry.line);
    }
  }
  if (scenario) {
    if (c.scenario_set && c.scenario != *scenario)
      throw ConfigError("experiment.scenario", std::string("config is for '") + to_string(c.scenario) +
                                                   "', not '" + to_string(*scenario) + "'");
    c.scenario = *scenario;
    c.scenario_set = true;
  }
  apply_scenario_defaults(c);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<Scenario> scenario) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("failed reading config file '" + path.string() + "'");
  return config_from_text(os.str(), scenario);
}

namespace {

void positive(double v, const char* name) {
  if (!(v > 0.0)) throw ConfigError(name, "must be positive");
}
void non_negative(double v, const char* name) {
  if (!(v >= 0.0)) throw ConfigError(name, "must be non-negative");
}

InhomogeneousField build_profile(const ExperimentConfig::Field& f) {
  try {
    if (f.profile == "affine")
      return InhomogeneousField::affine(f.profile_b0, f.gradient, f.z_min, f.z_max, f.tau);
    if (f.profile == "quadratic")
      return InhomogeneousField::quadratic(f.profile_b0, f.gradient, f.curvature, f.z_min, f.z_max, f.tau);
    if (f.profile == "constant_force")
      return InhomogeneousField::constant_force(f.profile_b0, f.force, f.z_min, f.z_max, f.tau);
  } catch (const DomainError& e) {
    throw ConfigError("field." + e.field(), e.message());
  }
  throw ConfigError("field.profile", "unknown profile '" + f.profile +
                                         "' (expected affine, quadratic or constant_force)");
}

}  // namespace

InhomogeneousField profile_from_config(const ExperimentConfig& c) { return build_profile(c.field); }

void ExperimentConfig::validate() const {
  positive(units.hbar, "units.hbar");
  positive(units.c, "units.c");

  if (scenario != Scenario::Coupled) {
    positive(particle.rho0, "particle.rho0");
    positive(particle.u0, "particle.u0");
    positive(particle.k0, "particle.k0");
    non_negative(particle.b0, "particle.b0");
    positive(field.tau, "field.tau");
  }

  auto check_sweep = [&](const char* expected) {
    if (sweep.parameter != expected)
      throw ConfigError("sweep.parameter", std::string("must be '") + expected + "' for scenario " +
                                               to_string(scenario));
    if (sweep.values.empty()) throw ConfigError("sweep.values", "must not be empty");
  };

  switch (scenario) {
    case Scenario::Homogeneous:
    case Scenario::Interferometer:
      check_sweep("b_e");
      for (double v : sweep.values) non_negative(v, "sweep.values");
      if (numerics.resolution < 16) throw ConfigError("numerics.resolution", "must be at least 16");
      positive(interferometer.path_length, "interferometer.path_length");
      break;
    case Scenario::SternGerlach:
    case Scenario::Compare: {
      if (scenario == Scenario::SternGerlach && !sweep.parameter.empty())
        throw ConfigError("sweep.parameter", "stern-gerlach runs take no sweep");
      if (scenario == Scenario::Compare) {
        check_sweep("scale");
        if (sweep.values.size() < 3) throw ConfigError("sweep.values", "need at least 3 scale factors");
        for (double v : sweep.values) positive(v, "sweep.values");
      }
      const auto profile = build_profile(field);
      positive(geometry.length_x, "geometry.length_x");
      non_negative(geometry.drift_x, "geometry.drift_x");
      if (!profile.contains(geometry.z_entry))
        throw ConfigError("geometry.z_entry", "must lie inside [field.z_min, field.z_max]");
      if (beam.n_particles < 1) throw ConfigError("beam.n_particles", "must be at least 1");
      if (beam.policy != "phase" && beam.policy != "plus" && beam.policy != "minus")
        throw ConfigError("beam.policy", "must be phase, plus or minus");
      positive(numerics.dt, "numerics.dt");
      break;
    }
    case Scenario::Coupled: {
      if (!sweep.parameter.empty()) throw ConfigError("sweep.parameter", "coupled runs take no sweep");
      if (coupled.nx < 3) throw ConfigError("coupled.nx", "must be at least 3");
      if (coupled.nt < 3) throw ConfigError("coupled.nt", "must be at least 3");
      positive(coupled.length, "coupled.length");
      positive(coupled.dt, "coupled.dt");
      if (coupled.mode < 1) throw ConfigError("coupled.mode", "must be at least 1");
      if (!(coupled.safety_factor > 0.0 && coupled.safety_factor <= 1.0))
        throw ConfigError("coupled.safety_factor", "must lie in (0, 1]");
      if (coupled.stride < 1) throw ConfigError("coupled.stride", "must be at least 1");
      const double limit = coupled::max_stable_dt(coupled.length / coupled.nx, UnitsLedger(units.hbar, units.c),
                                                  coupled.safety_factor);
      if (coupled.dt > limit * (1.0 + 1e-12))
        throw ConfigError("coupled.dt", "exceeds the step bound " + num(limit));
      break;
    }
  }
  if (output.path.empty()) throw ConfigError("output.path", "must not be empty");
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + num(v[k]);
    return s;
  };
  os << "[experiment]\nscenario = " << to_string(scenario) << "\n\n";
  os << "[units]\nhbar = " << num(units.hbar) << "\nc = " << num(units.c) << "\n\n";
  os << "[particle]\nrho0 = " << num(particle.rho0) << "\nu0 = " << num(particle.u0)
     << "\nk0 = " << num(particle.k0) << "\nb0 = " << num(particle.b0)
     << "\nphase0 = " << num(particle.phase0) << "\n\n";
  os << "[field]\nb_ext = " << num(field.b_ext) << "\ntheta = " << num(field.theta)
     << "\ntau = " << num(field.tau) << "\nprofile = " << field.profile
     << "\nprofile_b0 = " << num(field.profile_b0) << "\ngradient = " << num(field.gradient)
     << "\ncurvature = " << num(field.curvature) << "\nforce = " << num(field.force)
     << "\nz_min = " << num(field.z_min) << "\nz_max = " << num(field.z_max) << "\n\n";
  os << "[interferometer]\npath_length = " << num(interferometer.path_length) << "\n\n";
  os << "[geometry]\nlength_x = " << num(geometry.length_x) << "\ndrift_x = " << num(geometry.drift_x)
     << "\nz_entry = " << num(geometry.z_entry) << "\n\n";
  os << "[beam]\nn_particles = " << beam.n_particles << "\npolicy = " << beam.policy << "\n\n";
  if (!sweep.parameter.empty())
    os << "[sweep]\nparameter = " << sweep.parameter << "\nvalues = " << list(sweep.values) << "\n\n";
  os << "[numerics]\nresolution = " << numerics.resolution << "\ndt = " << num(numerics.dt)
     << "\nseed = " << numerics.seed << "\n\n";
  os << "[coupled]\nnx = " << coupled.nx << "\nnt = " << coupled.nt << "\nlength = " << num(coupled.length)
     << "\ndt = " << num(coupled.dt) << "\nbr_mean = " << num(coupled.br_mean)
     << "\nbr_amp = " << num(coupled.br_amp) << "\nbi_mean = " << num(coupled.bi_mean)
     << "\nbi_amp = " << num(coupled.bi_amp) << "\nmode = " << coupled.mode
     << "\nsafety_factor = " << num(coupled.safety_factor) << "\nstride = " << coupled.stride << "\n\n";
  os << "[output]\npath = " << output.path << "\n";
  return os.str();
}

}  // namespace mdspin::harness
