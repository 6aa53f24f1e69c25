#include "injphase/units.hpp"

#include <cmath>

namespace injphase {

namespace {

void require(bool ok, const char* key, const std::string& msg) {
  if (!ok) throw ParamError(key, std::string(key) + ": " + msg);
}

// Power carried per intracavity photon, eps * hbar * w0 / (2 Gamma tau_ph).
double watts_per_photon(const LaserParams& p) {
  return p.epsilon * p.photon_energy() / (2.0 * p.Gamma * p.tau_ph);
}

}  // namespace

void LaserParams::validate() const {
  require(std::isfinite(tau_ph) && tau_ph > 0, "tau_ph", "photon lifetime must be > 0");
  require(std::isfinite(tau_e) && tau_e > 0, "tau_e", "electron lifetime must be > 0");
  require(epsilon > 0 && epsilon <= 1, "epsilon", "must lie in (0, 1]");
  require(std::isfinite(N_tr) && N_tr >= 0, "N_tr", "must be >= 0");
  require(std::isfinite(N_th) && N_th > N_tr, "N_th", "must exceed N_tr");
  require(std::isfinite(C_sp) && C_sp >= 0, "C_sp", "must be >= 0");
  require(Gamma > 0 && Gamma <= 1, "Gamma", "must lie in (0, 1]");
  require(std::isfinite(alpha), "alpha", "must be finite");
  require(std::isfinite(chi) && chi >= 0, "chi", "must be >= 0");
  require(std::isfinite(lambda) && lambda > 0, "lambda", "wavelength must be > 0");
  if (V_active) require(std::isfinite(*V_active) && *V_active > 0, "V_active", "must be > 0");
}

double LaserParams::chi_Q() const { return chi * watts_per_photon(*this); }

void CouplingParams::validate() const {
  require(std::isfinite(kappa_ex) && kappa_ex >= 0, "kappa_ex", "must be >= 0");
  require(std::isfinite(delta_omega), "delta_omega", "must be finite");
  if (t_MS) require(*t_MS >= 0 && *t_MS <= 1, "t_MS", "must lie in [0, 1]");
  if (tau_L) require(*tau_L > 0, "tau_L", "must be > 0");
}

double threshold_current(const LaserParams& p) {
  return p.N_th * constants::elementary_charge / p.tau_e;
}

double transparency_current(const LaserParams& p) {
  return p.N_tr * constants::elementary_charge / p.tau_e;
}

double photon_to_power(double Q, const LaserParams& p) { return Q * watts_per_photon(p); }

double chi_convert(double value, ChiKind from, ChiKind to, const LaserParams& p) {
  if (from == to) return value;
  const bool needs_volume = from == ChiKind::chi_q || to == ChiKind::chi_q;
  if (needs_volume && !p.V_active)
    throw ParamError("V_active", "V_active: required for chi_q conversions");

  // Route everything through chi_Q.
  double chi_Q = value;
  switch (from) {
    case ChiKind::chi: chi_Q = value * watts_per_photon(p); break;
    case ChiKind::chi_q: chi_Q = value / *p.V_active; break;
    case ChiKind::chi_Q: break;
  }
  switch (to) {
    case ChiKind::chi: return chi_Q / watts_per_photon(p);
    case ChiKind::chi_q: return chi_Q * *p.V_active;
    case ChiKind::chi_Q: return chi_Q;
  }
  return chi_Q;
}

ChiKind parse_chi_kind(const std::string& name) {
  if (name == "chi") return ChiKind::chi;
  if (name == "chi_Q") return ChiKind::chi_Q;
  if (name == "chi_q") return ChiKind::chi_q;
  throw ParamError("kind", "unknown compression factor kind '" + name + "'");
}

}  // namespace injphase
