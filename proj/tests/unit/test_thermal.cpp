#include <doctest.h>

#include <cmath>
#include <vector>

#include "injphase/drive.hpp"
#include "injphase/thermal.hpp"
#include "injphase/units.hpp"

using namespace injphase;

namespace {

constexpr double pi = 3.14159265358979323846;

// ierfc(z) = integral of erfc from z to infinity, composite Simpson.
double ierfc_quadrature(double z) {
  const double span = 9.0;
  const int n = 20000;
  const double h = span / n;
  double s = std::erfc(z) + std::erfc(z + span);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * std::erfc(z + i * h);
  return s * h / 3.0;
}

// Slab heated by a surface flux at x = 0, held at the sink temperature at
// x = l; eigenfunction expansion of the surface temperature, scaled to the
// image-series normalisation (short-time limit sqrt(p)).
double y_fourier(double p) {
  double s = 0.0;
  for (int n = 0; n < 400000; ++n) {
    const double mu = (n + 0.5) * pi;
    const double term = 2.0 / (mu * mu) * std::exp(-mu * mu * p);
    s += term;
    if (term < 1e-18) break;
  }
  return 0.5 * std::sqrt(pi) * (1.0 - s);
}

}  // namespace

TEST_CASE("ierfc") {
  CHECK(ierfc(0.0) == doctest::Approx(1.0 / std::sqrt(pi)).epsilon(1e-15));
  CHECK(ierfc(0.0) == doctest::Approx(0.564190).epsilon(1e-6));
  for (double z : {0.1, 0.5, 1.0, 2.0, 3.5, 5.0})
    CHECK(std::abs(ierfc(z) - ierfc_quadrature(z)) <= 1e-10);
  CHECK(ierfc(1.0) == doctest::Approx(0.0502545).epsilon(1e-5));
  CHECK(ierfc(10.0) > 0.0);
  CHECK(ierfc(10.0) < 1e-40);
  // Smooth across the switch to the asymptotic branch.
  CHECK(ierfc(6.0 - 1e-9) == doctest::Approx(ierfc(6.0)).epsilon(1e-7));
  double prev = ierfc(0.0);
  for (double z = 0.25; z <= 12.0; z += 0.25) {
    CHECK(ierfc(z) < prev);
    prev = ierfc(z);
  }
}

TEST_CASE("slab heating function against the eigenfunction series") {
  for (double p : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0}) {
    CAPTURE(p);
    CHECK(y_exact(p) == doctest::Approx(y_fourier(p)).epsilon(1e-12));
  }
  CHECK(y_exact(0.01) == doctest::Approx(0.1).epsilon(1e-5));
  CHECK(y_exact(10.0) == doctest::Approx(0.87).epsilon(0.02));
  CHECK(y_exact(10.0) <= 0.5 * std::sqrt(pi));
  double prev = 0.0;
  for (double p = 0.01; p <= 10.0; p *= 1.1) {
    CHECK(y_exact(p) > prev);
    prev = y_exact(p);
  }
  CHECK_THROWS_AS(y_exact(0.0), DomainError);
}

TEST_CASE("exponential fit") {
  CHECK(f_fit(0.0) == 0.0);
  CHECK(f_fit(1.0) == doctest::Approx(0.8376).epsilon(1e-4));
  CHECK(f_fit(1e3) == doctest::Approx(0.87));
  CHECK(0.87 == doctest::Approx(0.5 * std::sqrt(pi)).epsilon(0.02));
  // The fit is close on the late-time part of the curve.
  for (double p = 1.0; p <= 10.0; p += 0.5) CHECK(std::abs(y_exact(p) - f_fit(p)) <= 0.02);
}

TEST_CASE("thermal constants") {
  ThermalMaterial m;
  m.k = 68;
  m.l = 1.5e-6;
  m.L_active = 500e-6;
  m.w_active = 2e-6;
  const auto c = thermal_constants(m);
  CHECK(c.r_h == doctest::Approx(11).epsilon(0.03));
  CHECK(c.r_h == doctest::Approx(0.87 * m.l / (m.k * 1e-9 * std::sqrt(pi))).epsilon(1e-12));
  CHECK(c.D == doctest::Approx(m.k / (m.rho * m.C_heat)).epsilon(1e-15));
  CHECK(c.tau_h == doctest::Approx(m.l * m.l / (3.9 * c.D)).epsilon(1e-15));
  CHECK(0.87 / std::sqrt(pi) == doctest::Approx(0.5).epsilon(0.02));

  ThermalMaterial g;
  g.k = 55;
  g.rho = 5317;
  g.C_heat = 330;
  g.l = 1.5e-6;
  const auto cg = thermal_constants(g);
  CHECK(cg.D == doctest::Approx(3.1e-5).epsilon(0.02));
  CHECK(cg.tau_h == doctest::Approx(18e-9).epsilon(0.03));

  ThermalMaterial thick = m;
  thick.l *= 2;
  CHECK(thermal_constants(thick).r_h == doctest::Approx(2 * c.r_h));
  ThermalMaterial wide = m;
  wide.w_active *= 2;
  CHECK(thermal_constants(wide).r_h == doctest::Approx(c.r_h / 2));
  ThermalMaterial bad = m;
  bad.k = 0;
  CHECK_THROWS_AS(thermal_constants(bad), ParamError);
}

TEST_CASE("heat power, frequency coupling and mu conversion") {
  CHECK(heat_power(30e-3, 1.55e-6, 0.3) == doctest::Approx(16.8e-3).epsilon(1e-3));
  CHECK(heat_power(30e-3, 1.55e-6, 1.0) == 0.0);
  CHECK(heat_power(0.0, 1.55e-6, 0.3) == 0.0);

  ThermalParams tp;
  CHECK(phase_rate_correction(0.0, tp) == 0.0);
  CHECK(phase_rate_correction(0.168, tp) == doctest::Approx(-2 * pi * 1.68e9).epsilon(1e-12));
  CHECK(phase_rate_correction(0.336, tp) == doctest::Approx(2 * phase_rate_correction(0.168, tp)));

  CHECK(convert_mu(0.08e-9, 1.55e-6) / (2 * pi) == doctest::Approx(10e9).epsilon(0.01));
  CHECK(convert_mu(0.0, 1.55e-6) == 0.0);
  CHECK(convert_mu(0.16e-9, 1.55e-6) == doctest::Approx(2 * convert_mu(0.08e-9, 1.55e-6)));
}

TEST_CASE("temperature response to drive steps") {
  ThermalParams tp;  // r_h 10 K/W, tau_h 10 ns, 1.55 um, eps 0.3
  const TimeGrid grid{0.0, 0.1e-9, 1001};

  const auto idle = integrate_dT(DriveWaveform::constant(tp.I_b), tp, grid);
  for (double v : idle) CHECK(v == 0.0);

  const auto step = integrate_dT(DriveWaveform::constant(30e-3), tp, grid);
  const double inf = tp.r_h * 1.24 / 1.55 * 30e-3 * 0.7;
  CHECK(inf == doctest::Approx(0.168).epsilon(1e-12));
  CHECK(tp.steady_dT(30e-3) == doctest::Approx(inf).epsilon(1e-14));
  for (std::size_t i = 1; i < grid.n; ++i) {
    const double expect = inf * (1.0 - std::exp(-grid.at(i) / tp.tau_h));
    CHECK(std::abs(step[i] - expect) <= 1e-12 * expect);
  }
  const double t39 = 3.9 * tp.tau_h;
  CHECK(step[390] / inf == doctest::Approx(1.0 - std::exp(-3.9)).epsilon(1e-12));
  CHECK(std::abs(step[static_cast<std::size_t>(std::lround(t39 / grid.dt))] / inf - 0.98) <= 1e-3);

  // Rectangular pulse: rise, then free decay, both in closed form.
  const auto pulse = build_slave_drive(200e-9, 20e-9, 0.0, 30e-3, 1, 10e-9);
  const auto r = integrate_dT(pulse, tp, grid);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double t = grid.at(i);
    double expect = 0.0;
    if (t > 10e-9) expect = inf * (1.0 - std::exp(-(std::min(t, 30e-9) - 10e-9) / tp.tau_h));
    if (t > 30e-9) expect *= std::exp(-(t - 30e-9) / tp.tau_h);
    CHECK(std::abs(r[i] - expect) <= 1e-12 * inf);
  }
}

TEST_CASE("single-pole stepper agrees with the segment integrator") {
  ThermalParams tp;
  const double dt = 0.05e-12;
  const ThermalStepper stepper(tp, dt);
  double dT = 0.0;
  for (int i = 0; i < 200000; ++i) dT = stepper.advance(dT, 30e-3);
  const double t = 200000 * dt;
  CHECK(dT == doctest::Approx(tp.steady_dT(30e-3) * (1 - std::exp(-t / tp.tau_h))).epsilon(1e-9));
}

TEST_CASE("thermal parameter validation") {
  ThermalParams tp;
  tp.tau_h = 0;
  CHECK_THROWS_AS(tp.validate(), ParamError);
  ThermalParams neg;
  neg.mu_omega = -1;
  CHECK_THROWS_AS(neg.validate(), ParamError);
}
