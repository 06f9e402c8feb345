#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mdspin/errors.hpp"
#include "mdspin/harness.hpp"

using namespace mdspin;
using namespace mdspin::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("mdspin_harness_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig with_output(ExperimentConfig c, const fs::path& dir) {
  c.output.path = dir.string();
  return c;
}

}  // namespace

TEST_CASE("config text parsing") {
  auto s = parse_config_text("scenario = homogeneous  # trailing\n\n[units]\nhbar = 2\n # note\n[sweep]\nvalues = 1, 2 ,3\n");
  CHECK(s["experiment"]["scenario"].value == "homogeneous");
  CHECK(s["units"]["hbar"].value == "2");
  CHECK(s["units"]["hbar"].line == 4);
  CHECK(s["sweep"]["values"].value == "1, 2 ,3");

  auto line_of = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("[units]\nhbar 2\n") == 2);
  CHECK(line_of("[units\n") == 1);
  CHECK(line_of("[a]\nx = 1\nx = 2\n") == 3);
  CHECK(line_of("[a]\n = 1\n") == 2);
}

TEST_CASE("defaults") {
  auto c = config_from_text("scenario = homogeneous\n");
  CHECK(c.units.hbar == 1.0);
  CHECK(c.units.c == 1.0);
  CHECK(c.numerics.resolution == 256);
  CHECK(c.sweep.parameter == "b_e");
  REQUIRE(c.sweep.values.size() == 1);
  auto cmp = config_from_text("", Scenario::Compare);
  CHECK(cmp.sweep.values == std::vector<double>{1, 2, 4, 8});
}

TEST_CASE("validation names the offending field") {
  auto field_of = [](const std::string& text) -> std::string {
    try {
      config_from_text(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return "";
  };
  CHECK(field_of("scenario = homogeneous\n[field]\ntau = 0\n") == "field.tau");
  CHECK(field_of("scenario = homogeneous\n[field]\ntau = -1\n") == "field.tau");
  CHECK(field_of("scenario = homogeneous\n[field]\nbogus = 1\n") == "field.bogus");
  CHECK(field_of("scenario = homogeneous\n[particle]\nrho0 = abc\n") == "particle.rho0");
  CHECK(field_of("scenario = warp\n") == "experiment.scenario");
  CHECK(field_of("scenario = compare\n[sweep]\nparameter = scale\nvalues = 1, 2\n") == "sweep.values");
  CHECK(field_of("scenario = coupled\n[coupled]\ndt = 1\n") == "coupled.dt");
  CHECK(field_of("scenario = stern-gerlach\n[geometry]\nz_entry = 50\n") == "geometry.z_entry");
  CHECK(field_of("scenario = stern-gerlach\n[field]\nprofile = spiral\n") == "field.profile");
  CHECK_THROWS_AS(config_from_text("scenario = coupled\n", Scenario::Homogeneous), ConfigError);
}

TEST_CASE("ten-value sweep is echoed in metadata") {
  const auto dir = scratch("sweep");
  auto c = config_from_text(
      "scenario = homogeneous\n[sweep]\nparameter = b_e\nvalues = 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0\n");
  REQUIRE(c.sweep.values.size() == 10);
  auto out = run_experiment(with_output(c, dir));
  auto back = load_config(out.metadata_file);
  CHECK(back.sweep.values == c.sweep.values);
  std::ifstream in(out.data_file);
  auto table = read_csv(in);
  CHECK(table.header == csv_header(Scenario::Homogeneous));
  CHECK(table.rows.size() == 10);
  fs::remove_all(dir);
}

TEST_CASE("csv headers") {
  CHECK(csv_header(Scenario::Homogeneous) ==
        std::vector<std::string>{"b_e", "delta_phi_em_plus", "delta_phi_k_plus", "delta_rho", "delta_u_plus",
                                 "delta_u_minus", "delta_phase_plus"});
  CHECK(csv_header(Scenario::Compare) ==
        std::vector<std::string>{"scale_s", "mean_deflection_md", "mean_deflection_qm"});
  CHECK(csv_header(Scenario::Coupled).front() == "t");
}

TEST_CASE("fit_scaling") {
  auto q = fit_scaling({{1, 1}, {2, 4}, {4, 16}, {8, 64}});
  CHECK(q.exponent == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(q.r_squared == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(q.n_points == 4);
  auto l = fit_scaling({{1, 3}, {2, 6}, {4, 12}});
  CHECK(l.exponent == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(l.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  auto neg = fit_scaling({{1, -2}, {2, -8}, {3, -18}});
  CHECK(neg.exponent == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(fit_scaling({{1, 1}, {2, 4}}), DomainError);
  CHECK_THROWS_AS(fit_scaling({{0, 1}, {2, 4}, {3, 9}}), DomainError);
  CHECK_THROWS_AS(fit_scaling({{1, 1}, {2, 0}, {3, 9}}), DomainError);
  CHECK_THROWS_AS(fit_scaling({{1, 1}, {2, -4}, {3, 9}}), DomainError);
  CHECK_THROWS_AS(fit_scaling({{2, 1}, {2, 4}, {2, 9}}), DomainError);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, -1.0 / 3.0, 6.02214076e23, 2.2250738585072014e-308, 1.7976931348623157e308, 0.0}) {
    const auto s = format_number(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_number(0.5) == "5.0000000000000000e-01");
}

TEST_CASE("csv round-trip") {
  CsvTable t{{"a", "b"}, {{"1", format_number(0.1)}, {"2", format_number(-2.5e-7)}}};
  std::stringstream ss;
  write_csv(ss, t);
  auto back = read_csv(ss);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
}

TEST_CASE("every scenario runs and its data re-parses exactly") {
  for (auto s : {Scenario::Homogeneous, Scenario::Interferometer, Scenario::SternGerlach, Scenario::Coupled,
                 Scenario::Compare}) {
    const auto dir = scratch(std::string("all_") + to_string(s));
    auto c = config_from_text("", s);
    c.beam.n_particles = 50;
    auto out = run_experiment(with_output(c, dir));
    CHECK(fs::exists(out.metadata_file));
    const auto text = slurp(out.data_file);
    std::istringstream in(text);
    auto table = read_csv(in);
    CHECK(table.header == csv_header(s));
    CHECK_FALSE(table.rows.empty());
    std::ostringstream again;
    write_csv(again, table);
    CHECK(again.str() == text);
    for (const auto& row : table.rows)
      for (const auto& cell : row) {
        const bool integral = cell.find('.') == std::string::npos;
        CHECK((integral || format_number(std::stod(cell)) == cell));
      }
    fs::remove_all(dir);
  }
}

TEST_CASE("seeded runs are byte-identical and reproducible from metadata") {
  const auto a = scratch("det_a"), b = scratch("det_b"), m = scratch("det_m");
  auto c = config_from_text("scenario = stern-gerlach\n[beam]\nn_particles = 1000\n[numerics]\nseed = 42\n");
  auto ra = run_experiment(with_output(c, a));
  auto rb = run_experiment(with_output(c, b));
  CHECK(slurp(ra.data_file) == slurp(rb.data_file));

  auto reloaded = load_config(ra.metadata_file);
  CHECK(reloaded.to_text() == with_output(c, a).to_text());
  auto rm = run_experiment(with_output(reloaded, m));
  CHECK(slurp(rm.data_file) == slurp(ra.data_file));

  auto other = c;
  other.numerics.seed = 43;
  auto ro = run_experiment(with_output(other, m));
  CHECK(slurp(ro.data_file) != slurp(ra.data_file));
  for (const auto& d : {a, b, m}) fs::remove_all(d);
}

TEST_CASE("config text round-trip keeps full precision") {
  auto c = config_from_text("", Scenario::Interferometer);
  c.particle.u0 = 1.0 / 3.0;
  c.field.b_ext = 0.1 + 0.2;
  c.sweep.values = {1e-3, 2e-3 / 3.0};
  auto back = config_from_text(c.to_text());
  CHECK(back.particle.u0 == c.particle.u0);
  CHECK(back.field.b_ext == c.field.b_ext);
  CHECK(back.sweep.values == c.sweep.values);
  CHECK(back.to_text() == c.to_text());
}

TEST_CASE("I/O failures") {
  CHECK_THROWS_AS(load_config("/nonexistent/mdspin.cfg"), IoError);
  const auto dir = scratch("io");
  fs::create_directories(dir);
  const auto blocker = dir / "file";
  std::ofstream(blocker) << "x";
  auto c = config_from_text("", Scenario::Homogeneous);
  c.output.path = (blocker / "sub").string();
  CHECK_THROWS_AS(run_experiment(c), IoError);
  fs::remove_all(dir);
}

TEST_CASE("compare scenario separates the force laws") {
  const auto dir = scratch("compare");
  auto c = config_from_text("", Scenario::Compare);
  c.beam.n_particles = 4;
  auto out = run_experiment(with_output(c, dir));
  double md = 0, qm = 0;
  for (const auto& [k, v] : out.summary) {
    if (k == "exponent_md") md = std::stod(v);
    if (k == "exponent_qm") qm = std::stod(v);
  }
  CHECK(md == doctest::Approx(2.0).epsilon(0.005));
  CHECK(qm == doctest::Approx(1.0).epsilon(0.01));
  CHECK(md - qm >= 0.9);
  fs::remove_all(dir);
}
