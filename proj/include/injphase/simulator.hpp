#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "injphase/drive.hpp"
#include "injphase/thermal.hpp"
#include "injphase/units.hpp"

namespace injphase {

/// Instantaneous state of one laser. phi is unbounded (never wrapped).
struct LaserState {
  double N = 0.0;    // carrier number
  double Q = 0.0;    // photon number
  double phi = 0.0;  // optical phase in the laser's own omega_0 frame [rad]
  double dT = 0.0;   // active-layer temperature excursion [K]
};

struct Derivative {
  double dN = 0.0;
  double dQ = 0.0;
  double dphi = 0.0;
};

struct RatePair {
  Derivative master;
  Derivative slave;
};

/// Master + slave pair. master_thermal holds the heating model applied to
/// the master's phase when thermal coupling is switched on.
struct SystemParams {
  LaserParams master = LaserParams::reference();
  LaserParams slave = LaserParams::reference();
  CouplingParams coupling;
  std::optional<ThermalParams> master_thermal;

  void validate() const;
};

/// Photon number substituted wherever 1/sqrt(Q) appears.
inline constexpr double kQFloor = 1e-2;

/// Drift of the six rate equations (carrier, photon, phase for each laser).
/// The slave sees the injected master field; amplitude lines use the
/// compressed gain, phase lines the linear gain.
RatePair deterministic_rhs(const LaserState& master, const LaserState& slave, double I_M,
                           double I_S, const SystemParams& params, double t,
                           bool thermal = false);

/// Langevin contributions (dN, dQ, dphi) over one step of length dt for the
/// standard normals xi = (W^A, W^B, W^C) / sqrt(dt). The spontaneous parts of
/// dN and dQ cancel exactly; W^C drives independent carrier shot noise.
Derivative langevin_increments(const LaserState& state, const LaserParams& p,
                               const std::array<double, 3>& xi, double dt);

/// Uniformly sampled record of both lasers and their drives.
struct Trajectory {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<LaserState> master;
  std::vector<LaserState> slave;
  std::vector<double> I_M;
  std::vector<double> I_S;

  std::size_t size() const { return master.size(); }
  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  /// Index of the sample nearest to t (clamped to the record).
  std::size_t index_of(double t) const;
};

struct SimOptions {
  double dt = 0.05e-12;      // integration step [s]
  double t_end = 10e-9;      // must be a multiple of dt
  bool noise = false;
  bool thermal = false;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::size_t record_stride = 1;  // keep every k-th step
  double record_from = 0.0;       // samples before this time are discarded
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(std::size_t step, const std::string& what)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// CW operating point at current I used as the initial condition
/// (all zero for I <= 0), with phi = 0 and dT = 0.
LaserState initial_state(const LaserParams& p, double I);

/// Fixed-step Euler-Maruyama integration of the coupled master/slave system
/// from t = 0 to opts.t_end. The master temperature is advanced with the
/// exact single-pole update. Output is a pure function of the arguments.
Trajectory simulate(const SystemParams& params, const DriveWaveform& master_drive,
                    const DriveWaveform& slave_drive, const SimOptions& opts);

/// Injection-to-noise ratio
///   R = kappa_ex (2 tau_e / C_sp) mean_j sqrt(Q^M_j Q_j) / N_j
/// over the last `period` of a noise-free trajectory.
double compute_R(const Trajectory& traj, const LaserParams& slave, const CouplingParams& coupling,
                 double period);

/// kappa_ex ~ t_MS / tau_L.
double estimate_kappa(double t_MS, double tau_L);

}  // namespace injphase
