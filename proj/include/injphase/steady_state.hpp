#pragma once

#include <span>
#include <string>
#include <vector>

#include "injphase/units.hpp"

namespace injphase {

/// CW operating point of a solitary laser.
struct SteadyState {
  double N_s = 0.0;          // carrier number
  double Q_s = 0.0;          // photon number
  double omega_shift = 0.0;  // omega_s - omega_0 [rad/s]
};

enum class DipiMethod { numerical, first_order, simple };

DipiMethod parse_dipi_method(const std::string& name);
std::string to_string(DipiMethod m);

struct PhaseDesign {
  double d = 0.0;           // perturbation duration [s]
  double delta_phi = 0.0;   // phase difference the design produces [rad]
  double delta_I_pi = 0.0;  // current excursion for a pi shift [A]
  DipiMethod method = DipiMethod::numerical;
};

/// Relative residuals of the carrier and photon balance equations.
struct SteadyResiduals {
  double carrier = 0.0;
  double photon = 0.0;
};

/// Exact CW operating point at pump current I_s > 0.
///
/// The photon balance is solved for Q in closed form as a function of N, which
/// leaves a strictly decreasing scalar carrier balance in N. That is bracketed,
/// bisected and finished with guarded Newton steps. Throws ConvergenceError if
/// the bracket cannot be established within the iteration budget.
SteadyState solve_operating_point(const LaserParams& p, double I_s);

/// First-order expansion in C_sp and chi_Q around the ideal above-threshold
/// laser. Requires I_s > I_th.
SteadyState approx_operating_point(const LaserParams& p, double I_s);

SteadyResiduals steady_residuals(const LaserParams& p, double I_s, const SteadyState& s);

/// Phase difference d * (omega_s(I_s2) - omega_s(I_s1)) accumulated over a
/// perturbation window of length d. Both currents must exceed threshold.
double pair_phase_shift(const LaserParams& p, double I_s1, double I_s2, double d,
                        DipiMethod method = DipiMethod::numerical);

/// Master current excursion that shifts the pair phase by pi.
double delta_I_pi(const LaserParams& p, double I_s, double d,
                  DipiMethod method = DipiMethod::numerical);

PhaseDesign phase_design(const LaserParams& p, double I_s, double d,
                         DipiMethod method = DipiMethod::numerical);

/// Magnitude of the spontaneous-emission correction to delta_I_pi, in watts.
/// Scales as d^2.
double spontaneous_scale_estimate(const LaserParams& p, double d);

struct DipiSweepRow {
  double chi = 0.0;
  double alpha = 0.0;
  double numerical = 0.0;  // [A]
  double simple = 0.0;     // [A]
};

/// delta_I_pi over a grid of compression factors and Henry factors. Rows are
/// ordered chi-major, alpha-minor.
std::vector<DipiSweepRow> sweep_delta_I_pi(const LaserParams& p, std::span<const double> chi_grid,
                                           std::span<const double> alpha_list, double I_s,
                                           double d);

}  // namespace injphase
