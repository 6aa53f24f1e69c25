#include "injphase/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "injphase/rng.hpp"
#include "injphase/steady_state.hpp"

namespace injphase {

using constants::elementary_charge;

namespace {

constexpr double kTwoPi = 2.0 * constants::pi;

// Per-laser coefficients hoisted out of the time loop.
struct Coeffs {
  double inv_e, inv_tau_e, N_tr, inv_gain_span, chi_Q, inv_Gamma_tau_ph, inv_tau_ph, spont_rate,
      half_alpha_rate, half_spont_rate, shot_rate;

  explicit Coeffs(const LaserParams& p)
      : inv_e(1.0 / elementary_charge),
        inv_tau_e(1.0 / p.tau_e),
        N_tr(p.N_tr),
        inv_gain_span(1.0 / (p.N_th - p.N_tr)),
        chi_Q(p.chi_Q()),
        inv_Gamma_tau_ph(1.0 / (p.Gamma * p.tau_ph)),
        inv_tau_ph(1.0 / p.tau_ph),
        spont_rate(p.C_sp / p.tau_e),
        half_alpha_rate(p.alpha / (2.0 * p.tau_ph)),
        half_spont_rate(p.C_sp / (2.0 * p.tau_e)),
        shot_rate(2.0 / p.tau_e) {}

  // Carrier/photon/phase drift of a solitary laser.
  Derivative drift(const LaserState& s, double I) const {
    const double G_L = (s.N - N_tr) * inv_gain_span;
    const double G = G_L * (1.0 - chi_Q * s.Q);
    return {I * inv_e - s.N * inv_tau_e - s.Q * G * inv_Gamma_tau_ph,
            (G - 1.0) * s.Q * inv_tau_ph + spont_rate * s.N, half_alpha_rate * (G_L - 1.0)};
  }

  Derivative noise(const LaserState& state, const std::array<double, 3>& xi, double sqdt) const {
    const double dWA = xi[0] * sqdt;
    const double dWB = xi[1] * sqdt;
    const double dWC = xi[2] * sqdt;
    const double N = std::max(state.N, 0.0);
    const double Q = std::max(state.Q, 0.0);
    const double c = std::cos(state.phi);
    const double s = std::sin(state.phi);
    const double spont = half_spont_rate * N;
    const double dQ = 2.0 * std::sqrt(spont * Q) * (c * dWA + s * dWB);
    const double dphi = std::sqrt(spont / std::max(Q, kQFloor)) * (c * dWB - s * dWA);
    const double dN = -dQ + std::sqrt(shot_rate * N) * dWC;
    return {dN, dQ, dphi};
  }
};

struct System {
  Coeffs master, slave;
  double kappa, delta_omega;
  std::optional<ThermalParams> thermal;

  explicit System(const SystemParams& p)
      : master(p.master),
        slave(p.slave),
        kappa(p.coupling.kappa_ex),
        delta_omega(p.coupling.delta_omega),
        thermal(p.master_thermal) {}

  RatePair rhs(const LaserState& m, const LaserState& s, double I_M, double I_S, double t,
               bool with_thermal) const {
    RatePair out{master.drift(m, I_M), slave.drift(s, I_S)};
    if (with_thermal && thermal) out.master.dphi += phase_rate_correction(m.dT, *thermal);
    if (kappa != 0.0) {
      const double theta = std::remainder(s.phi - m.phi - delta_omega * t, kTwoPi);
      const double Q_M = std::max(m.Q, 0.0);
      const double Q_S = std::max(s.Q, 0.0);
      out.slave.dQ += 2.0 * kappa * std::sqrt(Q_M * Q_S) * std::cos(theta);
      out.slave.dphi -= kappa * std::sqrt(Q_M / std::max(Q_S, kQFloor)) * std::sin(theta);
    }
    return out;
  }
};

}  // namespace

void SystemParams::validate() const {
  master.validate();
  slave.validate();
  coupling.validate();
  if (master_thermal) master_thermal->validate();
}

RatePair deterministic_rhs(const LaserState& m, const LaserState& s, double I_M, double I_S,
                           const SystemParams& params, double t, bool thermal) {
  return System(params).rhs(m, s, I_M, I_S, t, thermal);
}

Derivative langevin_increments(const LaserState& state, const LaserParams& p,
                               const std::array<double, 3>& xi, double dt) {
  return Coeffs(p).noise(state, xi, std::sqrt(dt));
}

std::size_t Trajectory::index_of(double t) const {
  if (size() == 0) return 0;
  const double x = std::round((t - t0) / dt);
  if (x <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(x), size() - 1);
}

LaserState initial_state(const LaserParams& p, double I) {
  if (!(I > 0.0)) return {};
  const auto ss = solve_operating_point(p, I);
  return {ss.N_s, ss.Q_s, 0.0, 0.0};
}

Trajectory simulate(const SystemParams& params, const DriveWaveform& master_drive,
                    const DriveWaveform& slave_drive, const SimOptions& opts) {
  params.validate();
  const double dt = opts.dt;
  if (!(dt > 0.0)) throw ParamError("dt", "dt: must be > 0");
  const double dt_cap = 0.1 * std::min(params.master.tau_ph, params.slave.tau_ph);
  if (dt > dt_cap * (1.0 + 1e-12))
    throw ParamError("dt", "dt: exceeds the stability cap of 0.1 tau_ph");
  if (!(opts.t_end > 0.0)) throw ParamError("t_end", "t_end: must be > 0");
  const double steps_real = opts.t_end / dt;
  const auto n_steps = static_cast<std::size_t>(std::llround(steps_real));
  if (n_steps == 0 || std::abs(steps_real - static_cast<double>(n_steps)) > 1e-6)
    throw ParamError("t_end", "t_end: must be a positive multiple of dt");
  if (opts.record_stride == 0) throw ParamError("record_stride", "record_stride: must be >= 1");
  if (opts.thermal && !params.master_thermal)
    throw ParamError("thermal", "thermal: coupling requested without thermal parameters");

  const std::size_t stride = opts.record_stride;
  const auto first_record = static_cast<std::size_t>(
      std::max(0.0, std::ceil(opts.record_from / dt - 1e-9)));

  Trajectory traj;
  traj.t0 = static_cast<double>(first_record) * dt;
  traj.dt = static_cast<double>(stride) * dt;
  if (first_record <= n_steps) {
    const std::size_t n_rec = (n_steps - first_record) / stride + 1;
    traj.master.reserve(n_rec);
    traj.slave.reserve(n_rec);
    traj.I_M.reserve(n_rec);
    traj.I_S.reserve(n_rec);
  }

  DriveWaveform::Cursor cur_M(master_drive);
  DriveWaveform::Cursor cur_S(slave_drive);
  LaserState m = initial_state(params.master, master_drive.at(0.0));
  LaserState s = initial_state(params.slave, slave_drive.at(0.0));

  std::optional<ThermalStepper> heat;
  if (opts.thermal) heat.emplace(*params.master_thermal, dt);
  const NoiseStream noise(opts.seed, opts.stream);
  const System sys(params);
  const double sqdt = std::sqrt(dt);

  auto record = [&](std::size_t k, double I_M, double I_S) {
    if (k < first_record || (k - first_record) % stride != 0) return;
    traj.master.push_back(m);
    traj.slave.push_back(s);
    traj.I_M.push_back(I_M);
    traj.I_S.push_back(I_S);
  };

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double I_M = cur_M.at(t);
    const double I_S = cur_S.at(t);
    record(k, I_M, I_S);

    const auto rates = sys.rhs(m, s, I_M, I_S, t, opts.thermal);
    LaserState m_next{m.N + rates.master.dN * dt, m.Q + rates.master.dQ * dt,
                      m.phi + rates.master.dphi * dt, m.dT};
    LaserState s_next{s.N + rates.slave.dN * dt, s.Q + rates.slave.dQ * dt,
                      s.phi + rates.slave.dphi * dt, s.dT};

    if (opts.noise) {
      const auto fm = sys.master.noise(m, noise.normals(k, 0), sqdt);
      const auto fs = sys.slave.noise(s, noise.normals(k, 1), sqdt);
      m_next.N += fm.dN;
      m_next.Q += fm.dQ;
      m_next.phi += fm.dphi;
      s_next.N += fs.dN;
      s_next.Q += fs.dQ;
      s_next.phi += fs.dphi;
    }

    m_next.N = std::abs(m_next.N);
    m_next.Q = std::abs(m_next.Q);
    s_next.N = std::abs(s_next.N);
    s_next.Q = std::abs(s_next.Q);
    if (heat) m_next.dT = heat->advance(m.dT, I_M);

    if (!std::isfinite(m_next.N + m_next.Q + m_next.phi + s_next.N + s_next.Q + s_next.phi))
      throw SimulationError(k, "simulate: non-finite state");
    m = m_next;
    s = s_next;
  }
  const double t_last = static_cast<double>(n_steps) * dt;
  record(n_steps, cur_M.at(t_last), cur_S.at(t_last));
  return traj;
}

double compute_R(const Trajectory& traj, const LaserParams& slave, const CouplingParams& coupling,
                 double period) {
  if (!(traj.dt > 0.0)) throw ParamError("trajectory", "compute_R: empty trajectory");
  const auto Z = static_cast<std::size_t>(std::llround(period / traj.dt));
  if (Z < 1) throw ParamError("period", "compute_R: period shorter than one sample (Z < 1)");
  if (traj.size() < Z) throw ParamError("period", "compute_R: trajectory shorter than one period");
  if (!(slave.C_sp > 0.0)) throw DomainError("compute_R: C_sp must be > 0");

  double sum = 0.0;
  for (std::size_t j = traj.size() - Z; j < traj.size(); ++j) {
    const auto& s = traj.slave[j];
    sum += std::sqrt(std::max(traj.master[j].Q, 0.0) * std::max(s.Q, 0.0)) / s.N;
  }
  return coupling.kappa_ex * (2.0 * slave.tau_e / slave.C_sp) * sum / static_cast<double>(Z);
}

double estimate_kappa(double t_MS, double tau_L) {
  if (!(tau_L > 0.0)) throw ParamError("tau_L", "tau_L: must be > 0");
  if (!(t_MS >= 0.0 && t_MS <= 1.0)) throw ParamError("t_MS", "t_MS: must lie in [0, 1]");
  return t_MS / tau_L;
}

}  // namespace injphase
