#pragma once

// Active-layer heating. The exact slab solution (image series of iterated
// complementary error functions) is reduced to a single-pole model with a
// thermal resistance r_h and a rise time tau_h:
//
//   d(dT)/dt = -dT / tau_h + (r_h / tau_h) * P_heat(I) - (r_h / tau_h) * P_heat(I_b)
//
// with P_heat = (1.24 / lambda[um]) * I * (1 - epsilon). Joule heating in the
// cladding is not modelled. A temperature excursion only shifts the optical
// frequency (by -mu_omega * dT); it never enters the carrier or photon
// equations.

#include <cstddef>
#include <vector>

#include "injphase/drive.hpp"

namespace injphase {

/// Uniform sampling grid t_i = t0 + i * dt, i < n.
struct TimeGrid {
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t n = 0;
  double at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
};

struct ThermalMaterial {
  double k = 68.0;            // thermal conductivity [W/(m K)]
  double rho = 4810.0;        // density [kg/m^3]
  double C_heat = 310.0;      // specific heat [J/(kg K)]
  double l = 1.5e-6;          // clamping layer thickness [m]
  double L_active = 500e-6;   // active layer length [m]
  double w_active = 2e-6;     // active layer width [m]

  double area() const { return L_active * w_active; }
  void validate() const;
};

struct ThermalConstants {
  double r_h = 0.0;    // [K/W]
  double tau_h = 0.0;  // [s]
  double D = 0.0;      // heat diffusion coefficient [m^2/s]
};

struct ThermalParams {
  double r_h = 10.0;                 // [K/W]
  double tau_h = 10e-9;              // [s]
  double mu_omega = 2.0 * 3.14159265358979323846 * 10e9;  // [rad/(s K)]
  double lambda = 1.55e-6;           // [m]
  double epsilon = 0.3;
  double I_b = 0.0;                  // [A]
  double T0 = 293.15;                // [K]

  void validate() const;
  /// Steady-state excursion reached at constant current I.
  double steady_dT(double I) const;
};

/// First iterated integral of erfc: exp(-z^2)/sqrt(pi) - z erfc(z).
double ierfc(double z);

/// Dimensionless temperature at the end of a rectangular heat pulse,
/// y(p) = sqrt(p) {1 + 2 sqrt(pi) sum_n (-1)^n ierfc(n / sqrt(p))}, p = D t / l^2.
/// The series stops once the next term drops below 1e-12 (at most 1e4 terms).
double y_exact(double p);

/// Single-exponential fit 0.87 (1 - exp(-3.29 p)) to y_exact.
double f_fit(double p);

ThermalConstants thermal_constants(const ThermalMaterial& m);

/// Heat dissipated in the active layer at current I, in watts.
double heat_power(double I, double lambda, double epsilon);

/// dT sampled on `grid`, starting from dT(grid.t0) = 0. The drive is treated
/// exactly as piecewise constant, so the result has no time-step error.
std::vector<double> integrate_dT(const DriveWaveform& drive, const ThermalParams& tp,
                                 const TimeGrid& grid);

/// Frequency offset added to the phase rate: -mu_omega * dT.
double phase_rate_correction(double dT, const ThermalParams& tp);

/// mu_omega = omega^2 mu_lambda / (2 pi c).
double convert_mu(double mu_lambda, double lambda);

/// Exact one-step update of the single-pole thermal model at constant current.
class ThermalStepper {
 public:
  ThermalStepper(const ThermalParams& tp, double dt);
  double advance(double dT, double I) const {
    const double target = tp_.steady_dT(I);
    return target + (dT - target) * decay_;
  }

 private:
  ThermalParams tp_;
  double decay_;
};

}  // namespace injphase
