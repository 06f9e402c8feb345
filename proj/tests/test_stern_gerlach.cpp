#include <cmath>
#include <random>

#include "doctest.h"
#include "mdspin/errors.hpp"
#include "mdspin/stern_gerlach.hpp"
#include "oracles.hpp"

using namespace mdspin;
using namespace mdspin::stern_gerlach;

namespace {

InhomogeneousField linear(double b0, double g) { return InhomogeneousField::affine(b0, g, -10, 10); }

}  // namespace

TEST_CASE("inhomogeneous field construction") {
  CHECK_NOTHROW(InhomogeneousField::quadratic(1, 0.5, 0.1, -2, 2));
  // Gradient inconsistent with the profile.
  CHECK_THROWS_AS(InhomogeneousField([](double z) { return z * z; }, [](double z) { return z; }, 1, -1, 1),
                  DomainError);
  CHECK_THROWS_AS(InhomogeneousField::affine(1, 1, 1, 1), DomainError);
  CHECK_THROWS_AS(InhomogeneousField::affine(1, 1, -1, 1, 0.0), DomainError);
  CHECK_THROWS_AS(InhomogeneousField::constant_force(1, 1, -1, 1), DomainError);  // radicand hits 0
  auto f = linear(1, 2);
  CHECK_THROWS_AS(f.amplitude(10.5), RangeError);
  CHECK(f.scaled(3).amplitude(1.0) == 9.0);
  CHECK(f.scaled(3).gradient(1.0) == 6.0);
}

TEST_CASE("kinetic density change along z") {
  CHECK(kinetic_density_change_z(linear(0, 0), 1.0) == 0.0);
  CHECK(kinetic_density_change_z(linear(0, 1), 2.0) == 2.0);
  CHECK(kinetic_density_change_z(linear(3, 1), 1.0) == 8.0);
  CHECK_THROWS_AS(kinetic_density_change_z(linear(0, 1), 11.0), RangeError);
}

TEST_CASE("force laws") {
  CHECK(force_md(linear(2, 0), 1.3, Branch::Plus) == 0.0);
  CHECK(force_md(linear(0, 1), 2.0, Branch::Plus) == 2.0);
  CHECK(force_md(linear(1, 0.5), 2.0, Branch::Minus) == -1.0);
  CHECK(force_qm_baseline(linear(2, 0), 1.3, Branch::Plus) == 0.0);
  CHECK(force_qm_baseline(linear(0, 1), -4.0, Branch::Plus) == 0.5);
  CHECK(force_qm_baseline(linear(1, 0.5), 2.0, Branch::Minus) == -0.25);
  CHECK(force_md(linear(0, 1), 2.0, Branch::Plus, UnitsLedger(2.0, 3.0)) == 36.0);
  CHECK_THROWS_AS(force_md(linear(0, 1), -11, Branch::Plus), RangeError);
  CHECK_THROWS_AS(force_qm_baseline(linear(0, 1), 11, Branch::Plus), RangeError);
}

TEST_CASE("forces are odd in the branch and scale differently with amplitude") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-2, 2);
  for (int k = 0; k < 100; ++k) {
    auto f = InhomogeneousField::quadratic(d(rng), d(rng), d(rng), -3, 3);
    const double z = d(rng);
    const double s = std::abs(d(rng)) + 0.1;
    CHECK(force_md(f, z, Branch::Minus) == -force_md(f, z, Branch::Plus));
    CHECK(force_qm_baseline(f, z, Branch::Minus) == -force_qm_baseline(f, z, Branch::Plus));
    const auto g = f.scaled(s);
    CHECK(force_md(g, z, Branch::Plus) == doctest::Approx(s * s * force_md(f, z, Branch::Plus)).epsilon(1e-12));
    CHECK(force_qm_baseline(g, z, Branch::Plus) ==
          doctest::Approx(s * force_qm_baseline(f, z, Branch::Plus)).epsilon(1e-12));
  }
}

TEST_CASE("MD force is minus the gradient of the branch kinetic density") {
  auto f = InhomogeneousField::quadratic(1.0, 0.7, -0.2, -3, 3);
  const UnitsLedger u(1.5, 0.8);
  for (auto b : {Branch::Plus, Branch::Minus}) {
    const double z = 0.4;
    auto err = [&](double h) {
      const double fd = -(kinetic_density_branch_z(f, z + h, b, u) - kinetic_density_branch_z(f, z - h, b, u)) / (2 * h);
      return std::abs(fd - force_md(f, z, b, u));
    };
    // Quartic density: central differences carry an h^2 error term.
    CHECK(err(0.1) < 1e-2);
    CHECK(oracle::order(err(0.1), err(0.05)) == doctest::Approx(2.0).epsilon(0.02));
  }
}

TEST_CASE("trajectory through a field-free magnet") {
  auto s = make_particle(1, 2, 1, 1);
  MagnetGeometry g{1.0, 3.0, 0.25, linear(0, 0)};
  auto t = integrate_trajectory(s, g, Branch::Plus, ForceLaw::Microdynamic, 0.01);
  CHECK(t.detector_hit().z == 0.25);
  CHECK(t.detector_hit().u_z == 0.0);
  CHECK(t.detector_hit().x == 4.0);
  CHECK(t.detector_hit().t == 2.0);
  for (std::size_t k = 1; k < t.samples.size(); ++k) {
    CHECK(t.samples[k].t > t.samples[k - 1].t);
    CHECK(t.samples[k].u_x == 2.0);
  }
}

TEST_CASE("trajectory under constant force matches the parabola") {
  const double f = 0.3, rho0 = 2.0, u0 = 1.5, L = 2.0;
  auto s = make_particle(rho0, u0, 1, 1);
  MagnetGeometry g{L, 0.0, 0.0, InhomogeneousField::constant_force(1.0, f, -1, 1)};
  for (auto b : {Branch::Plus, Branch::Minus}) {
    auto t = integrate_trajectory(s, g, b, ForceLaw::Microdynamic, 0.013);
    const double T = L / u0;
    const double a = sign(b) * f / rho0;
    CHECK(oracle::relative(t.detector_hit().z, 0.5 * a * T * T) < 1e-10);
    CHECK(oracle::relative(t.detector_hit().u_z, a * T) < 1e-10);
    CHECK(t.detector_hit().x == L);
  }
}

TEST_CASE("trajectory on an affine profile: closed form and fourth order") {
  const double b0 = 0.5, gz = 0.8, rho0 = 1.0, u0 = 1.0, L = 2.0;
  auto s = make_particle(rho0, u0, 1, 1);
  MagnetGeometry g{L, 0.0, 0.1, linear(b0, gz)};
  for (auto b : {Branch::Plus, Branch::Minus}) {
    const auto exact = oracle::affine_md_solution(b0, gz, rho0, sign(b), 0.1, L / u0);
    auto err = [&](double dt) {
      return std::abs(integrate_trajectory(s, g, b, ForceLaw::Microdynamic, dt).detector_hit().z - exact.z);
    };
    CHECK(err(0.002) / std::abs(exact.z) < 1e-10);
    const double e1 = err(0.1), e2 = err(0.05), e3 = err(0.025);
    CHECK(oracle::order(e1, e2) > 3.9);
    CHECK(oracle::order(e2, e3) > 3.9);

    // Step-refinement reference.
    const double coarse = integrate_trajectory(s, g, b, ForceLaw::Microdynamic, 0.01).detector_hit().z;
    const double fine = integrate_trajectory(s, g, b, ForceLaw::Microdynamic, 0.001).detector_hit().z;
    CHECK(oracle::relative(coarse, fine) < 1e-8);
  }
}

TEST_CASE("escape from the field range") {
  auto s = make_particle(1, 1, 1, 1);
  MagnetGeometry g{5.0, 1.0, 0.0, InhomogeneousField::affine(1.0, 1.0, -0.5, 0.5)};
  try {
    integrate_trajectory(s, g, Branch::Plus, ForceLaw::Microdynamic, 0.01);
    FAIL("expected escape");
  } catch (const EscapeError& e) {
    CHECK(g.field.contains(e.last_valid().z));
    CHECK(e.last_valid().x < 5.0);
  }
  CHECK_THROWS_AS(integrate_trajectory(s, g, Branch::Plus, ForceLaw::Microdynamic, 0.0), DomainError);
  MagnetGeometry outside{1.0, 0.0, 2.0, InhomogeneousField::affine(1.0, 1.0, -0.5, 0.5)};
  CHECK_THROWS_AS(integrate_trajectory(s, outside, Branch::Plus, ForceLaw::Microdynamic, 0.1), DomainError);
}

TEST_CASE("beam through a field-free magnet") {
  BeamSpec beam{100, make_particle(1, 1, 1, 1), BranchPolicy::PhaseSampled, 9};
  MagnetGeometry g{1.0, 1.0, 0.3, linear(1, 0)};
  auto r = run_beam(beam, g, ForceLaw::Microdynamic, 0.01);
  REQUIRE(r.hits.size() == 100);
  for (std::size_t k = 0; k < r.hits.size(); ++k) {
    CHECK(r.hits[k].index == int(k));
    CHECK(r.hits[k].sample.z == 0.3);
  }
  CHECK(r.summary.separation == 0.0);
  CHECK(r.summary.plus.count + r.summary.minus.count == 100);
}

TEST_CASE("phase-sampled branch counts follow binomial statistics") {
  MagnetGeometry g{1.0, 1.0, 0.0, linear(1, 0.01)};
  const double sigma = std::sqrt(1000 * 0.25);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    BeamSpec beam{1000, make_particle(1, 1, 1, 1), BranchPolicy::PhaseSampled, seed};
    auto r = run_beam(beam, g, ForceLaw::Microdynamic, 0.05);
    CHECK(std::abs(r.summary.plus.count - 500) < 3 * sigma);
  }
}

TEST_CASE("beam runs are reproducible for a fixed seed") {
  MagnetGeometry g{1.0, 1.0, 0.0, linear(1, 0.2)};
  BeamSpec beam{500, make_particle(1, 1, 1, 1), BranchPolicy::PhaseSampled, 42};
  auto a = run_beam(beam, g, ForceLaw::Microdynamic, 0.01);
  auto b = run_beam(beam, g, ForceLaw::Microdynamic, 0.01);
  REQUIRE(a.hits.size() == b.hits.size());
  for (std::size_t k = 0; k < a.hits.size(); ++k) {
    CHECK(a.hits[k].phase == b.hits[k].phase);
    CHECK(a.hits[k].sample.z == b.hits[k].sample.z);
  }
  beam.seed = 43;
  auto c = run_beam(beam, g, ForceLaw::Microdynamic, 0.01);
  CHECK(c.hits[0].phase != a.hits[0].phase);
}

TEST_CASE("fixed-branch beams deflect symmetrically under constant force") {
  MagnetGeometry g{1.0, 2.0, 0.0, InhomogeneousField::constant_force(1.0, 0.2, -2, 2)};
  auto s = make_particle(1, 1, 1, 1);
  auto p = run_beam({50, s, BranchPolicy::FixedPlus, 1}, g, ForceLaw::Microdynamic, 0.01);
  auto m = run_beam({50, s, BranchPolicy::FixedMinus, 1}, g, ForceLaw::Microdynamic, 0.01);
  CHECK(p.summary.minus.count == 0);
  CHECK(m.summary.plus.count == 0);
  const double dp = p.summary.plus.mean_deflection, dm = m.summary.minus.mean_deflection;
  CHECK(dp > 0);
  CHECK(std::abs(dp + dm) <= 1e-9 * std::abs(dp));
}

TEST_CASE("escapes are recorded per particle, not fatal") {
  // + grows as cosh and leaves the range, - oscillates inside it.
  MagnetGeometry g{3.0, 0.0, 0.1, InhomogeneousField::affine(0.0, 1.0, -0.5, 0.5)};
  BeamSpec beam{10, make_particle(1, 1, 1, 1), BranchPolicy::PhaseSampled, 4};
  auto r = run_beam(beam, g, ForceLaw::Microdynamic, 0.01);
  CHECK(r.summary.plus.escaped == r.summary.plus.count);
  for (const auto& h : r.hits) CHECK(h.escaped == (h.branch == Branch::Plus));
}
