#pragma once

// Device parameters, physical constants and the small unit conversions the
// rest of the library is built on. Everything here is strict SI: seconds,
// amperes, watts, kelvin, radians and plain photon/carrier counts.

#include <optional>
#include <stdexcept>
#include <string>

namespace injphase {

namespace constants {
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double hbar = 1.054571817e-34;               // J s
inline constexpr double speed_of_light = 2.99792458e8;        // m/s
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

/// Thrown when a parameter set or an argument violates a documented
/// invariant. `key()` names the offending field or config key.
class ParamError : public std::invalid_argument {
 public:
  ParamError(std::string key, const std::string& what)
      : std::invalid_argument(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Operation called outside the domain where its formula is defined
/// (e.g. an above-threshold expansion evaluated below threshold).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative solver failed to converge or to bracket a root.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rate-equation constants of one single-mode semiconductor laser.
struct LaserParams {
  double tau_ph = 1.0e-12;  // photon lifetime [s]
  double tau_e = 1.0e-9;    // electron lifetime [s]
  double epsilon = 0.3;     // differential quantum output
  double N_tr = 4.0e7;      // transparency carrier number
  double N_th = 5.5e7;      // threshold carrier number
  double C_sp = 1.0e-5;     // spontaneous emission coupling
  double Gamma = 0.12;      // confinement factor
  double alpha = 5.0;       // linewidth enhancement (Henry) factor
  double chi = 30.0;        // gain compression [1/W]
  double lambda = 1.55e-6;  // lasing wavelength [m]
  std::optional<double> V_active;  // active volume [m^3]

  /// Parameter set used for both lasers in the reference simulations.
  static LaserParams reference() { return {}; }

  /// Throws ParamError naming the first field that breaks an invariant.
  void validate() const;

  double omega0() const { return 2.0 * constants::pi * constants::speed_of_light / lambda; }
  double photon_energy() const { return constants::hbar * omega0(); }
  /// Dimensionless compression factor: G = G_L (1 - chi_Q Q).
  double chi_Q() const;
  /// Linear gain G_L = (N - N_tr) / (N_th - N_tr).
  double linear_gain(double N) const { return (N - N_tr) / (N_th - N_tr); }
};

struct CouplingParams {
  double kappa_ex = 1.0e10;    // injection rate [1/s]
  double delta_omega = 0.0;    // master - slave detuning [rad/s]
  std::optional<double> t_MS;  // facet amplitude transmittance
  std::optional<double> tau_L; // cavity round-trip time [s]

  void validate() const;
};

enum class CurrentRole { bias, steady, perturbed };

struct CurrentPoint {
  double I = 0.0;  // [A]
  CurrentRole role = CurrentRole::steady;
};

double threshold_current(const LaserParams& p);
double transparency_current(const LaserParams& p);

/// Single-facet output power carried by Q intracavity photons.
double photon_to_power(double Q, const LaserParams& p);

enum class ChiKind {
  chi,    // per output power [1/W]
  chi_Q,  // per photon number [dimensionless]
  chi_q   // per photon density [m^3]
};

/// Converts a gain compression factor between its power, photon-number and
/// photon-density forms. Conversions touching chi_q need p.V_active.
double chi_convert(double value, ChiKind from, ChiKind to, const LaserParams& p);

ChiKind parse_chi_kind(const std::string& name);

}  // namespace injphase
