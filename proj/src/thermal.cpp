#include "injphase/thermal.hpp"

#include <algorithm>
#include <cmath>

#include "injphase/units.hpp"

namespace injphase {

using constants::pi;

namespace {

const double kSqrtPi = std::sqrt(pi);

void require_positive(double v, const char* key) {
  if (!(std::isfinite(v) && v > 0.0))
    throw ParamError(key, std::string(key) + ": must be > 0");
}

}  // namespace

void ThermalMaterial::validate() const {
  require_positive(k, "k");
  require_positive(rho, "rho");
  require_positive(C_heat, "C_heat");
  require_positive(l, "l");
  require_positive(L_active, "L_active");
  require_positive(w_active, "w_active");
}

void ThermalParams::validate() const {
  require_positive(r_h, "r_h");
  require_positive(tau_h, "tau_h");
  require_positive(lambda, "lambda");
  if (!(mu_omega >= 0.0)) throw ParamError("mu_omega", "mu_omega: must be >= 0");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ParamError("epsilon", "epsilon: must lie in (0, 1]");
  if (!(I_b >= 0.0)) throw ParamError("I_b", "I_b: must be >= 0");
}

double ThermalParams::steady_dT(double I) const {
  return r_h * (heat_power(I, lambda, epsilon) - heat_power(I_b, lambda, epsilon));
}

double ierfc(double z) {
  // The closed form cancels badly for large z; switch to the asymptotic series
  //   ierfc(z) ~ exp(-z^2)/sqrt(pi) * sum_{m>=1} (-1)^(m+1) (2m-1)!! / (2 z^2)^m
  // where its smallest term is below double precision.
  if (z < 6.0) return std::exp(-z * z) / kSqrtPi - z * std::erfc(z);

  const double x = 1.0 / (2.0 * z * z);
  double term = x;
  double sum = 0.0;
  for (int m = 1; m < 60; ++m) {
    sum += term;
    const double next = -term * (2.0 * m + 1.0) * x;
    if (std::abs(next) >= std::abs(term) || std::abs(next) < 1e-17 * std::abs(sum)) break;
    term = next;
  }
  return std::exp(-z * z) / kSqrtPi * sum;
}

double y_exact(double p) {
  if (!(p > 0.0)) throw DomainError("y_exact: p must be > 0");
  const double root = std::sqrt(p);
  double sum = 0.0;
  double sign = -1.0;
  for (int n = 1; n <= 10000; ++n, sign = -sign) {
    const double term = 2.0 * kSqrtPi * ierfc(n / root);
    if (term < 1e-12) break;
    sum += sign * term;
  }
  return std::clamp(root * (1.0 + sum), 0.0, 0.5 * kSqrtPi);
}

double f_fit(double p) { return 0.87 * (1.0 - std::exp(-3.29 * p)); }

ThermalConstants thermal_constants(const ThermalMaterial& m) {
  m.validate();
  ThermalConstants c;
  c.D = m.k / (m.rho * m.C_heat);
  c.r_h = 0.87 * m.l / (m.k * m.area() * kSqrtPi);
  c.tau_h = m.l * m.l / (3.9 * c.D);
  return c;
}

double heat_power(double I, double lambda, double epsilon) {
  const double lambda_um = lambda * 1e6;
  return 1.24 / lambda_um * I * (1.0 - epsilon);
}

std::vector<double> integrate_dT(const DriveWaveform& drive, const ThermalParams& tp,
                                 const TimeGrid& grid) {
  tp.validate();
  std::vector<double> out(grid.n, 0.0);
  if (grid.n == 0) return out;

  const auto segs = drive.segments();
  std::size_t seg = 0;
  while (seg + 1 < segs.size() && segs[seg + 1].start <= grid.t0) ++seg;

  double dT = 0.0;
  double t = grid.t0;
  for (std::size_t i = 1; i < grid.n; ++i) {
    const double t_next = grid.at(i);
    // Walk every constant-current piece inside [t, t_next).
    while (t < t_next) {
      const double piece_end = std::min(t_next, drive.segment_end(seg));
      const double target = tp.steady_dT(segs[seg].current);
      dT = target + (dT - target) * std::exp(-(piece_end - t) / tp.tau_h);
      t = piece_end;
      if (t >= drive.segment_end(seg) && seg + 1 < segs.size()) ++seg;
    }
    out[i] = dT;
  }
  return out;
}

double phase_rate_correction(double dT, const ThermalParams& tp) { return -tp.mu_omega * dT; }

double convert_mu(double mu_lambda, double lambda) {
  if (!(lambda > 0.0)) throw ParamError("lambda", "lambda: must be > 0");
  const double omega = 2.0 * pi * constants::speed_of_light / lambda;
  return omega * omega * mu_lambda / (2.0 * pi * constants::speed_of_light);
}

ThermalStepper::ThermalStepper(const ThermalParams& tp, double dt)
    : tp_(tp), decay_(std::exp(-dt / tp.tau_h)) {
  tp_.validate();
}

}  // namespace injphase
