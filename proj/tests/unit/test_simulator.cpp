#include <doctest.h>

#include <cmath>
#include <vector>

#include "injphase/drive.hpp"
#include "injphase/rng.hpp"
#include "injphase/simulator.hpp"
#include "injphase/steady_state.hpp"

using namespace injphase;

namespace {

constexpr double pi = 3.14159265358979323846;

SystemParams uncoupled() {
  SystemParams sp;
  sp.coupling.kappa_ex = 0.0;
  return sp;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("drift vanishes at the CW operating point") {
  const SystemParams sp = uncoupled();
  const auto ss = solve_operating_point(sp.master, 30e-3);
  const LaserState st{ss.N_s, ss.Q_s, 0.3, 0.0};
  const auto r = deterministic_rhs(st, st, 30e-3, 30e-3, sp, 0.0);
  const double carrier_scale = 30e-3 / 1.602176634e-19;
  const double photon_scale = ss.Q_s / sp.master.tau_ph;
  for (const auto& d : {r.master, r.slave}) {
    CHECK(std::abs(d.dN) <= 1e-8 * carrier_scale);
    CHECK(std::abs(d.dQ) <= 1e-8 * photon_scale);
    // Phase rate in the omega_0 frame is the lasing frequency shift.
    CHECK(d.dphi == doctest::Approx(ss.omega_shift).epsilon(1e-12));
  }
}

TEST_CASE("injection terms") {
  SystemParams sp;
  sp.coupling.kappa_ex = 1e10;
  const LaserState m{5.6e7, 1.5e4, 0.7, 0.0};
  const LaserState s{5.5e7, 3.0e3, 0.7, 0.0};
  const auto with = deterministic_rhs(m, s, 30e-3, 20e-3, sp, 0.0);
  const auto without = deterministic_rhs(m, s, 30e-3, 20e-3, uncoupled(), 0.0);
  CHECK(with.slave.dQ - without.slave.dQ == doctest::Approx(2e10 * std::sqrt(1.5e4 * 3.0e3)));
  CHECK(with.slave.dphi == doctest::Approx(without.slave.dphi).epsilon(1e-14));
  CHECK(with.slave.dN == without.slave.dN);
  CHECK(with.master.dQ == without.master.dQ);

  const LaserState s_off{5.5e7, 3.0e3, 0.7 - pi / 2, 0.0};
  const auto quarter = deterministic_rhs(m, s_off, 30e-3, 20e-3, sp, 0.0);
  const auto quarter0 = deterministic_rhs(m, s_off, 30e-3, 20e-3, uncoupled(), 0.0);
  CHECK(quarter.slave.dphi - quarter0.slave.dphi == doctest::Approx(1e10 * std::sqrt(1.5e4 / 3.0e3)));

  // Detuning enters only through phi - phi_M - delta_omega t.
  SystemParams det = sp;
  det.coupling.delta_omega = 2 * pi * 1e9;
  const double t = 0.25e-9;  // delta_omega t = pi/2
  const auto a = deterministic_rhs(m, s, 30e-3, 20e-3, det, t);
  const LaserState s_shift{s.N, s.Q, s.phi - pi / 2, 0.0};
  const auto b = deterministic_rhs(m, s_shift, 30e-3, 20e-3, sp, t);
  CHECK(a.slave.dQ == doctest::Approx(b.slave.dQ).epsilon(1e-9));
}

TEST_CASE("uncoupled slave ignores the master") {
  const SystemParams sp = uncoupled();
  const LaserState s{5.5e7, 3.0e3, 1.0, 0.0};
  const auto a = deterministic_rhs({5.6e7, 1.5e4, 0.2, 0.0}, s, 30e-3, 20e-3, sp, 0.0);
  const auto b = deterministic_rhs({4.0e7, 10.0, -2.0, 0.3}, s, 10e-3, 20e-3, sp, 1e-9);
  CHECK(a.slave.dN == b.slave.dN);
  CHECK(a.slave.dQ == b.slave.dQ);
  CHECK(a.slave.dphi == b.slave.dphi);
}

TEST_CASE("thermal term on the master phase") {
  SystemParams sp = uncoupled();
  sp.master_thermal = ThermalParams{};
  const LaserState m{5.6e7, 1.5e4, 0.0, 0.168};
  const auto hot = deterministic_rhs(m, m, 30e-3, 30e-3, sp, 0.0, true);
  const auto cold = deterministic_rhs(m, m, 30e-3, 30e-3, sp, 0.0, false);
  CHECK(hot.master.dphi - cold.master.dphi == doctest::Approx(-2 * pi * 10e9 * 0.168));
  CHECK(hot.slave.dphi == cold.slave.dphi);
  CHECK(hot.master.dQ == cold.master.dQ);
}

TEST_CASE("Langevin increments") {
  const LaserParams p;
  const LaserState st{5.6e7, 1.5e4, 0.4, 0.0};
  const auto zero = langevin_increments(st, p, {0, 0, 0}, 0.05e-12);
  CHECK(zero.dN == 0.0);
  CHECK(zero.dQ == 0.0);
  CHECK(zero.dphi == 0.0);

  for (double a : {-1.3, 0.2, 2.5})
    for (double b : {-0.7, 1.1}) {
      const auto f = langevin_increments(st, p, {a, b, 0.0}, 0.05e-12);
      CHECK(f.dN + f.dQ == doctest::Approx(0.0).scale(std::abs(f.dQ)));
    }

  // Frozen-coefficient phase diffusion over 1e5 draws.
  const double dt = 0.05e-12;
  const NoiseStream rng(11, 3);
  const int n = 100000;
  double s1 = 0, s2 = 0;
  for (int k = 0; k < n; ++k) {
    const double x = langevin_increments(st, p, rng.normals(k, 0), dt).dphi;
    s1 += x;
    s2 += x * x;
  }
  const double var = s2 / n - (s1 / n) * (s1 / n);
  const double expect = p.C_sp * st.N / (2 * st.Q * p.tau_e) * dt;
  CHECK(var == doctest::Approx(expect).epsilon(0.05));

  // Floor on 1/sqrt(Q).
  const LaserState dark{5.0e7, 0.0, 0.0, 0.0};
  const auto f = langevin_increments(dark, p, {0.0, 1.0, 0.0}, dt);
  CHECK(f.dphi == doctest::Approx(std::sqrt(p.C_sp * dark.N / (2 * kQFloor * p.tau_e) * dt)));
}

TEST_CASE("simulation is deterministic per seed") {
  const SystemParams sp;
  const auto slave = build_slave_drive(2.5e-9, 1e-9, 8e-3, 50e-3, 2, 0.5e-9);
  const auto master = DriveWaveform::constant(30e-3);
  SimOptions o;
  o.t_end = 5e-9;
  o.noise = true;
  o.seed = 9;
  o.record_stride = 10;
  const auto a = simulate(sp, master, slave, o);
  const auto b = simulate(sp, master, slave, o);
  REQUIRE(a.size() == b.size());
  bool identical = true;
  for (std::size_t i = 0; i < a.size(); ++i)
    identical = identical && a.slave[i].phi == b.slave[i].phi && a.slave[i].Q == b.slave[i].Q &&
                a.master[i].N == b.master[i].N;
  CHECK(identical);

  o.seed = 10;
  const auto c = simulate(sp, master, slave, o);
  CHECK(c.slave.back().phi != a.slave.back().phi);
  o.seed = 9;
  o.stream = 1;
  CHECK(simulate(sp, master, slave, o).slave.back().phi != a.slave.back().phi);
}

TEST_CASE("recording grid and option checks") {
  const SystemParams sp;
  const auto I = DriveWaveform::constant(20e-3);
  SimOptions o;
  o.t_end = 1e-9;
  o.record_stride = 100;
  o.record_from = 0.5e-9;
  const auto tr = simulate(sp, I, I, o);
  CHECK(tr.size() == 101);
  CHECK(tr.t0 == doctest::Approx(0.5e-9));
  CHECK(tr.dt == doctest::Approx(5e-12));
  CHECK(tr.time(tr.size() - 1) == doctest::Approx(1e-9));
  CHECK(tr.index_of(0.7e-9) == 40);
  CHECK(tr.index_of(-1.0) == 0);
  CHECK(tr.index_of(1.0) == 100);

  SimOptions bad = o;
  bad.dt = 0.2e-12;
  CHECK_THROWS_AS(simulate(sp, I, I, bad), ParamError);
  bad = o;
  bad.t_end = 1.00001e-9 + 0.013e-12;
  CHECK_THROWS_AS(simulate(sp, I, I, bad), ParamError);
  bad = o;
  bad.thermal = true;
  CHECK_THROWS_AS(simulate(sp, I, I, bad), ParamError);

  const DriveWaveform blowup({{0.0, 20e-3}, {0.1e-9, 1e300}});
  try {
    simulate(sp, I, blowup, o);
    FAIL("expected a non-finite state");
  } catch (const SimulationError& e) {
    CHECK(e.step() >= 2000);
  }
}

TEST_CASE("noise-free CW run settles on the operating point") {
  const SystemParams sp = uncoupled();
  const DriveWaveform step({{0.0, 20e-3}, {0.05e-9, 30e-3}});
  SimOptions o;
  o.t_end = 21e-9;
  o.record_stride = 1000;
  const auto tr = simulate(sp, step, step, o);
  const auto ss = solve_operating_point(sp.master, 30e-3);
  CHECK(rel(tr.master.back().N, ss.N_s) <= 1e-6);
  CHECK(rel(tr.master.back().Q, ss.Q_s) <= 1e-6);
  CHECK(rel(tr.slave.back().Q, ss.Q_s) <= 1e-6);
}

TEST_CASE("locking angle") {
  SystemParams sp;
  sp.master.chi = 0;
  sp.slave.chi = 0;
  sp.coupling.kappa_ex = 1e9;
  const auto I = DriveWaveform::constant(30e-3);
  SimOptions o;
  o.t_end = 20e-9;
  o.record_stride = 1000;
  const auto tr = simulate(sp, I, I, o);
  const double dphi = std::remainder(tr.slave.back().phi - tr.master.back().phi, 2 * pi);
  CHECK(std::abs(dphi + std::atan(5.0)) <= 1e-3);
  CHECK(std::abs(dphi - (-1.3734)) <= 1e-3);
}

TEST_CASE("first-order convergence in dt") {
  SystemParams sp;
  const auto slave = build_slave_drive(2.5e-9, 1e-9, 8e-3, 50e-3, 1, 0.2e-9);
  const auto master = DriveWaveform::constant(30e-3);
  auto run = [&](double dt) {
    SimOptions o;
    o.dt = dt;
    o.t_end = 1.0e-9;
    o.record_stride = static_cast<std::size_t>(std::llround(0.05e-9 / dt));
    return simulate(sp, master, slave, o);
  };
  const auto a = run(0.1e-12), b = run(0.05e-12), c = run(0.025e-12);
  REQUIRE(a.size() == b.size());
  REQUIRE(b.size() == c.size());
  double e1 = 0, e2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    e1 = std::max(e1, std::abs(a.slave[i].Q - b.slave[i].Q));
    e2 = std::max(e2, std::abs(b.slave[i].Q - c.slave[i].Q));
  }
  CHECK(e2 > 0);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("weak moments barely move when dt halves") {
  const SystemParams sp = uncoupled();
  const auto I = DriveWaveform::constant(30e-3);
  auto mean_Q = [&](double dt) {
    double sum = 0;
    std::size_t n = 0;
    for (std::uint64_t m = 0; m < 8; ++m) {
      SimOptions o;
      o.dt = dt;
      o.t_end = 1e-9;
      o.noise = true;
      o.seed = 21;
      o.stream = m;
      o.record_from = 0.5e-9;
      o.record_stride = static_cast<std::size_t>(std::llround(1e-12 / dt));
      const auto tr = simulate(sp, I, I, o);
      for (const auto& s : tr.master) sum += s.Q, ++n;
    }
    return sum / static_cast<double>(n);
  };
  CHECK(mean_Q(0.05e-12) == doctest::Approx(mean_Q(0.025e-12)).epsilon(0.01));
}

TEST_CASE("free-running phase diffusion") {
  // CW slave without injection; phase increments over short windows grow
  // linearly with the frozen-coefficient slope C_sp N / (2 Q tau_e). alpha = 0
  // removes the carrier-noise contribution to the frequency.
  SystemParams sp = uncoupled();
  sp.master.alpha = 0;
  sp.slave.alpha = 0;
  const auto I = DriveWaveform::constant(30e-3);
  const auto ss = solve_operating_point(sp.slave, 30e-3);
  const double window = 2e-12;
  std::vector<double> var_by_lag(3, 0.0);
  std::size_t count = 0;
  for (std::uint64_t m = 0; m < 100; ++m) {
    SimOptions o;
    o.t_end = 0.2e-9;
    o.noise = true;
    o.seed = 5;
    o.stream = m;
    o.record_stride = static_cast<std::size_t>(std::llround(window / o.dt));
    const auto tr = simulate(sp, I, I, o);
    for (std::size_t i = 0; i + 3 < tr.size(); i += 3) {
      for (std::size_t lag = 1; lag <= 3; ++lag) {
        const double drift = ss.omega_shift * window * static_cast<double>(lag);
        const double x = tr.slave[i + lag].phi - tr.slave[i].phi - drift;
        var_by_lag[lag - 1] += x * x;
      }
      ++count;
    }
  }
  const double slope = sp.slave.C_sp * ss.N_s / (2 * ss.Q_s * sp.slave.tau_e);
  for (std::size_t lag = 1; lag <= 3; ++lag) {
    CAPTURE(lag);
    const double v = var_by_lag[lag - 1] / static_cast<double>(count);
    CHECK(v / (window * static_cast<double>(lag)) == doctest::Approx(slope).epsilon(0.3));
  }
}

TEST_CASE("injection-to-noise ratio") {
  Trajectory tr;
  tr.dt = 1e-12;
  for (int i = 0; i < 100; ++i) {
    tr.master.push_back({5.5e7, 1e4, 0, 0});
    tr.slave.push_back({5.5e7, 1e4, 0, 0});
    tr.I_M.push_back(0);
    tr.I_S.push_back(0);
  }
  const LaserParams p;
  CouplingParams c;
  c.kappa_ex = 1e10;
  CHECK(compute_R(tr, p, c, 50e-12) == doctest::Approx(1e10 * 2e-9 / 1e-5 * 1e4 / 5.5e7).epsilon(1e-12));
  CHECK(compute_R(tr, p, c, 50e-12) == doctest::Approx(364).epsilon(0.002));
  CouplingParams c2 = c;
  c2.kappa_ex = 3e10;
  CHECK(compute_R(tr, p, c2, 50e-12) == doctest::Approx(3 * compute_R(tr, p, c, 50e-12)));
  c2.kappa_ex = 0;
  CHECK(compute_R(tr, p, c2, 50e-12) == 0.0);
  CHECK_THROWS_AS(compute_R(tr, p, c, 0.1e-12), ParamError);
  CHECK_THROWS_AS(compute_R(tr, p, c, 1e-9), ParamError);
}

TEST_CASE("coupling rate estimate") {
  CHECK(estimate_kappa(0.1, 10e-12) == doctest::Approx(1e10));
  CHECK(estimate_kappa(0.0, 10e-12) == 0.0);
  CHECK(estimate_kappa(0.1, 5e-12) == doctest::Approx(2 * estimate_kappa(0.1, 10e-12)));
  CHECK_THROWS_AS(estimate_kappa(0.1, 0.0), ParamError);
}
