#include "injphase/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace injphase {

using constants::elementary_charge;
using constants::pi;

namespace {

constexpr int kMaxIterations = 200;

// Photon number satisfying the photon balance at fixed N:
//   (G_L (1 - chi_Q Q) - 1) Q / tau_ph + C_sp N / tau_e = 0,
// i.e. A Q^2 - B Q - s = 0 with A = G_L chi_Q, B = G_L - 1. Returns the
// non-negative root, +inf where the balance has none (B > 0, A = 0).
struct PhotonBalance {
  double Q;
  double dQ_dN;
};

PhotonBalance photon_balance(const LaserParams& p, double chi_Q, double N) {
  const double dN = p.N_th - p.N_tr;
  const double G_L = p.linear_gain(N);
  const double s = p.C_sp * N * p.tau_ph / p.tau_e;
  const double A = G_L * chi_Q;
  const double B = G_L - 1.0;
  const double disc = std::sqrt(std::max(0.0, B * B + 4.0 * A * s));

  double Q;
  if (B <= 0.0) {
    const double den = -B + disc;
    Q = den > 0.0 ? 2.0 * s / den : 0.0;
  } else if (A > 0.0) {
    Q = (B + disc) / (2.0 * A);
  } else {
    return {std::numeric_limits<double>::infinity(), 0.0};
  }

  // Implicit derivative of F(Q, N) = -A Q^2 + B Q + s.
  const double F_N = -(chi_Q / dN) * Q * Q + Q / dN + p.C_sp * p.tau_ph / p.tau_e;
  const double F_Q = -2.0 * A * Q + B;
  const double dQ_dN = F_Q != 0.0 ? -F_N / F_Q : 0.0;
  return {Q, dQ_dN};
}

// Carrier balance with the gain term eliminated through the photon balance:
//   I/e - N/tau_e - (Q(N) - s(N)) / (Gamma tau_ph).
// Strictly decreasing in N.
double carrier_balance(const LaserParams& p, double chi_Q, double I, double N) {
  const double Q = photon_balance(p, chi_Q, N).Q;
  if (std::isinf(Q)) return -std::numeric_limits<double>::infinity();
  const double s = p.C_sp * N * p.tau_ph / p.tau_e;
  return I / elementary_charge - N / p.tau_e - (Q - s) / (p.Gamma * p.tau_ph);
}

double omega_shift_at(const LaserParams& p, double N) {
  return p.alpha / (2.0 * p.tau_ph) * (p.linear_gain(N) - 1.0);
}

void require_above_threshold(const LaserParams& p, double I, const char* what) {
  if (!(I > threshold_current(p)))
    throw DomainError(std::string(what) + ": current must exceed the threshold current");
}

}  // namespace

DipiMethod parse_dipi_method(const std::string& name) {
  if (name == "numerical") return DipiMethod::numerical;
  if (name == "first_order") return DipiMethod::first_order;
  if (name == "simple") return DipiMethod::simple;
  throw ParamError("method", "unknown delta_I_pi method '" + name + "'");
}

std::string to_string(DipiMethod m) {
  switch (m) {
    case DipiMethod::numerical: return "numerical";
    case DipiMethod::first_order: return "first_order";
    case DipiMethod::simple: return "simple";
  }
  return "numerical";
}

SteadyState solve_operating_point(const LaserParams& p, double I_s) {
  p.validate();
  if (!(I_s > 0.0)) throw DomainError("solve_operating_point: I_s must be > 0");

  // Ideal laser: the photon balance is degenerate at N = N_th.
  if (p.C_sp == 0.0 && p.chi == 0.0) {
    const double I_th = threshold_current(p);
    if (I_s <= I_th) return {I_s * p.tau_e / elementary_charge, 0.0, omega_shift_at(p, I_s * p.tau_e / elementary_charge)};
    return {p.N_th, p.Gamma * p.tau_ph * (I_s - I_th) / elementary_charge, 0.0};
  }

  const double chi_Q = p.chi_Q();
  auto f = [&](double N) { return carrier_balance(p, chi_Q, I_s, N); };

  double lo = 0.0;
  double hi = p.N_th * (1.0 + p.Gamma);
  int it = 0;
  while (f(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++it > kMaxIterations || !std::isfinite(hi))
      throw ConvergenceError("solve_operating_point: could not bracket the carrier number");
  }

  for (; it < kMaxIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    (fm > 0.0 ? lo : hi) = mid;
  }
  if (it >= kMaxIterations)
    throw ConvergenceError("solve_operating_point: bisection exceeded the iteration budget");

  // Newton polish, kept only while it stays in the bracket and improves |f|.
  double N = 0.5 * (lo + hi);
  for (int k = 0; k < 3; ++k) {
    const double fN = f(N);
    if (fN == 0.0) break;
    const auto pb = photon_balance(p, chi_Q, N);
    const double df = -1.0 / p.tau_e -
                      (pb.dQ_dN - p.C_sp * p.tau_ph / p.tau_e) / (p.Gamma * p.tau_ph);
    if (!(df < 0.0) || !std::isfinite(df)) break;
    const double next = N - fN / df;
    if (next < lo || next > hi || !(std::abs(f(next)) < std::abs(fN))) break;
    N = next;
  }

  const double Q = photon_balance(p, chi_Q, N).Q;
  if (!std::isfinite(Q) || Q < 0.0)
    throw ConvergenceError("solve_operating_point: no physical root (Q_s < 0)");
  return {N, Q, omega_shift_at(p, N)};
}

SteadyState approx_operating_point(const LaserParams& p, double I_s) {
  p.validate();
  require_above_threshold(p, I_s, "approx_operating_point");
  const double e = elementary_charge;
  const double I_th = threshold_current(p);
  const double I_tr = transparency_current(p);
  const double over = I_s - I_th;
  const double chi_Q = p.chi_Q();
  const double g = p.Gamma * p.tau_ph / e;

  SteadyState s;
  s.Q_s = g * over *
          (1.0 + I_th * (I_s - I_tr) / (over * over * p.Gamma) * p.C_sp - g * (I_th - I_tr) * chi_Q);
  s.N_s = I_th * p.tau_e / e *
          (1.0 - (I_th - I_tr) / (over * p.Gamma) * p.C_sp + g / I_th * (I_th - I_tr) * over * chi_Q);
  s.omega_shift = -p.alpha / (2.0 * p.Gamma * p.tau_ph) * I_th / over * p.C_sp +
                  p.alpha / (2.0 * e) * p.Gamma * over * chi_Q;
  return s;
}

SteadyResiduals steady_residuals(const LaserParams& p, double I_s, const SteadyState& s) {
  const double G_L = p.linear_gain(s.N_s);
  const double G = G_L * (1.0 - p.chi_Q() * s.Q_s);

  auto relative = [](double sum, double scale) { return scale > 0.0 ? sum / scale : 0.0; };

  const double pump = I_s / elementary_charge;
  const double decay = s.N_s / p.tau_e;
  const double stim = s.Q_s * G / (p.Gamma * p.tau_ph);
  const double spont = p.C_sp * s.N_s / p.tau_e;
  const double gain = G * s.Q_s / p.tau_ph;
  const double loss = s.Q_s / p.tau_ph;
  return {relative(pump - decay - stim, std::abs(pump) + std::abs(decay) + std::abs(stim)),
          relative(gain - loss + spont, std::abs(gain) + loss + spont)};
}

double pair_phase_shift(const LaserParams& p, double I_s1, double I_s2, double d,
                        DipiMethod method) {
  p.validate();
  require_above_threshold(p, I_s1, "pair_phase_shift");
  require_above_threshold(p, I_s2, "pair_phase_shift");
  if (I_s1 == I_s2) return 0.0;

  if (method == DipiMethod::numerical)
    return d * (solve_operating_point(p, I_s2).omega_shift -
                solve_operating_point(p, I_s1).omega_shift);

  const double I_th = threshold_current(p);
  const double dI = I_s2 - I_s1;
  const double compression =
      p.alpha * d / (4.0 * p.tau_ph) * dI * p.epsilon * p.photon_energy() / elementary_charge * p.chi;
  if (method == DipiMethod::simple) return compression;
  const double spontaneous = p.alpha * d / (2.0 * p.tau_ph) * I_th * dI /
                             ((I_s1 - I_th) * (I_s2 - I_th)) * p.C_sp / p.Gamma;
  return spontaneous + compression;
}

double delta_I_pi(const LaserParams& p, double I_s, double d, DipiMethod method) {
  p.validate();
  if (!(d > 0.0)) throw DomainError("delta_I_pi: d must be > 0");
  if (!(p.alpha > 0.0)) throw DomainError("delta_I_pi: alpha must be > 0");

  const double e = elementary_charge;
  const double photon = p.epsilon * p.photon_energy();

  switch (method) {
    case DipiMethod::simple:
      if (p.chi == 0.0)
        throw DomainError("delta_I_pi: chi = 0 makes the simple estimate diverge");
      return 4.0 * pi / p.chi * e / photon * p.tau_ph / (p.alpha * d);

    case DipiMethod::first_order: {
      require_above_threshold(p, I_s, "delta_I_pi");
      if (p.chi == 0.0)
        throw DomainError("delta_I_pi: chi = 0 makes the first-order estimate diverge");
      const double I_th = threshold_current(p);
      const double bracket =
          2.0 * pi * p.tau_ph / (p.alpha * d) - p.C_sp / p.Gamma * I_th / (I_s - I_th);
      if (!(bracket > 0.0))
        throw DomainError("delta_I_pi: first-order bracket is non-positive this close to threshold");
      return 2.0 / p.chi * e / photon * bracket +
             p.C_sp / p.Gamma * p.alpha * d / (2.0 * pi * p.tau_ph) * I_th;
    }

    case DipiMethod::numerical: {
      require_above_threshold(p, I_s, "delta_I_pi");
      const double I_th = threshold_current(p);
      const double omega1 = solve_operating_point(p, I_s).omega_shift;
      auto g = [&](double dI) {
        return d * (solve_operating_point(p, I_s + dI).omega_shift - omega1) - pi;
      };
      double lo = 0.0;
      double hi = p.chi > 0.0 ? 10.0 * delta_I_pi(p, I_s, d, DipiMethod::simple) : 100.0 * I_th;
      if (!(g(hi) > 0.0))
        throw ConvergenceError("delta_I_pi: no sign change in the current bracket");
      const double tol = 1e-6 * I_th;
      for (int it = 0; hi - lo > tol; ++it) {
        if (it >= kMaxIterations)
          throw ConvergenceError("delta_I_pi: bisection exceeded the iteration budget");
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? hi : lo) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

PhaseDesign phase_design(const LaserParams& p, double I_s, double d, DipiMethod method) {
  PhaseDesign out;
  out.d = d;
  out.method = method;
  out.delta_I_pi = delta_I_pi(p, I_s, d, method);
  out.delta_phi = pair_phase_shift(p, I_s, I_s + out.delta_I_pi, d, method);
  return out;
}

double spontaneous_scale_estimate(const LaserParams& p, double d) {
  const double ratio = p.alpha * d / p.tau_ph;
  return p.C_sp / (8.0 * pi * pi * p.Gamma) * ratio * ratio *
         (threshold_current(p) / elementary_charge) * p.epsilon * p.photon_energy();
}

std::vector<DipiSweepRow> sweep_delta_I_pi(const LaserParams& p, std::span<const double> chi_grid,
                                           std::span<const double> alpha_list, double I_s,
                                           double d) {
  if (chi_grid.empty()) throw ParamError("chi_grid", "chi_grid: must not be empty");
  if (alpha_list.empty()) throw ParamError("alpha_list", "alpha_list: must not be empty");

  std::vector<DipiSweepRow> rows;
  rows.reserve(chi_grid.size() * alpha_list.size());
  for (double chi : chi_grid) {
    if (!(chi > 0.0)) throw ParamError("chi_grid", "chi_grid: values must be > 0");
    for (double alpha : alpha_list) {
      LaserParams q = p;
      q.chi = chi;
      q.alpha = alpha;
      rows.push_back({chi, alpha, delta_I_pi(q, I_s, d, DipiMethod::numerical),
                      delta_I_pi(q, I_s, d, DipiMethod::simple)});
    }
  }
  return rows;
}

}  // namespace injphase
