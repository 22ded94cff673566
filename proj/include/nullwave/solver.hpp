#pragma once

// Method-of-lines evolution of the reduced radial Cauchy problem
//
//     psiddot = psi'' + 4 psi'/r + chi(psi),   u = x psi,
//
// with classical RK4 on (psi, psidot).  The quasilinear second-derivative
// terms inside chi are evaluated explicitly; CFL <= 0.5 leaves margin in
// the small-data regime.  Blowup is detected as a gradient catastrophe:
// sup |grad u| exceeding a configured multiple of its initial value (or
// non-finite values), with the growth history kept for diagnosis.  The
// outer boundary carries no condition; configs must keep the domain of
// dependence inside r < R and the run aborts if the containment check
// fails.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "coefficients.hpp"
#include "energies.hpp"
#include "grid.hpp"
#include "initial_data.hpp"
#include "lift.hpp"
#include "nullform.hpp"
#include "rhs.hpp"

namespace nullwave {

struct ScenarioConfig {
  // grid
  double R = 40.0;
  int n = 1024;
  // time
  double cfl = 0.4;       // dt = cfl * h unless dt_override > 0
  double dt_override = 0.0;
  double T_final = 10.0;
  // material
  CoefficientSet material;
  // data
  DataParams data;
  double eps = 1e-3;
  // output
  double cadence = 1.0;
  std::vector<double> snapshot_times;
  std::uint64_t seed = 1;
  bool store_states = false;
  // thresholds
  double blowup_factor = 1e3;
  double smallness_theta = 0.1;

  double h() const { return R / n; }
  double dt() const {
    const double base = dt_override > 0.0 ? dt_override : cfl * h();
    // land exactly on T_final
    const int steps = std::max(1, (int)std::ceil(T_final / base - 1e-12));
    return T_final / steps;
  }

  std::vector<std::string> violations() const {
    std::vector<std::string> v;
    if (n < 8) v.push_back("grid.n: need at least 8 cells");
    if (!(R > 0.0)) v.push_back("grid.R: must be positive");
    if (!(T_final > 0.0)) v.push_back("time.T_final: must be positive");
    if (dt_override > 0.0) {
      if (dt_override / h() > 0.5)
        v.push_back("time.dt: CFL = dt/h exceeds 0.5");
    } else if (!(cfl > 0.0) || cfl > 0.5) {
      v.push_back("time.cfl: must lie in (0, 0.5]");
    }
    if (!(0.0 < material.c2 && material.c2 < material.c1))
      v.push_back("material: requires 0 < c2 < c1");
    if (eps < 0.0) v.push_back("data.eps: must be nonnegative");
    if (R < T_final + data.support_radius() + 1.0)
      v.push_back("grid.R: containment requires R >= T_final + support + 1");
    if (!(cadence > 0.0)) v.push_back("output.cadence: must be positive");
    if (blowup_factor <= 1.0)
      v.push_back("thresholds.blowup_factor: must exceed 1");
    if (!(smallness_theta > 0.0))
      v.push_back("thresholds.smallness: must be positive");
    return v;
  }
};

enum class Outcome { Completed, Blowup, BoundaryViolation };

inline std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Completed: return "completed";
    case Outcome::Blowup: return "blowup";
    case Outcome::BoundaryViolation: return "boundary_violation";
  }
  return "?";
}

struct Trajectory {
  Outcome outcome = Outcome::Completed;
  double t_end = 0.0;
  double t_star = std::numeric_limits<double>::quiet_NaN();
  double eps = 0.0;
  std::vector<EnergyReport> reports;
  std::vector<StateVector> states;       // at output cadence if store_states
  std::vector<double> grad_history;      // sup |grad u| at detection checks
  std::vector<double> grad_history_t;
  bool grad_monotone_tail() const {
    const int m = (int)grad_history.size();
    if (m < 5) return false;
    for (int q = m - 4; q < m; ++q)
      if (!(grad_history[q] >= grad_history[q - 1])) return false;
    return true;
  }
};

class RadialSolver {
 public:
  RadialSolver(const RadialGrid& grid, const NullFormTensor& tensor)
      : grid_(grid), chi_(grid, tensor) {}

  const ChiTable& chi_table() const { return chi_; }

  // psidot and psiddot of the first-order system
  void rhs(const RadialProfile& psi, RadialProfile& out_acc) const {
    const auto d1 = differentiate(psi, 1);
    const auto d2 = differentiate(psi, 2);
    for (int j = 0; j < grid_.n; ++j)
      out_acc[j] = d2[j] + 4.0 * d1[j] / grid_.r(j);
    if (!chi_.zero()) {
      RadialProfile chi(grid_);
      chi_.apply(psi, d1, d2, chi);
      for (int j = 0; j < grid_.n; ++j) out_acc[j] += chi[j];
    }
  }

  // one classical RK4 step; deterministic, returns false on non-finite state
  bool step(StateVector& s, double dt) const {
    const int n = grid_.n;
    RadialProfile a1(grid_), a2(grid_), a3(grid_), a4(grid_);
    RadialProfile p2(grid_), p3(grid_), p4(grid_);
    // k1
    rhs(s.psi, a1);
    // k2: y + dt/2 * k1
    for (int j = 0; j < n; ++j) p2[j] = s.psi[j] + 0.5 * dt * s.psidot[j];
    rhs(p2, a2);
    // k3
    for (int j = 0; j < n; ++j)
      p3[j] = s.psi[j] + 0.5 * dt * (s.psidot[j] + 0.5 * dt * a1[j]);
    rhs(p3, a3);
    // k4
    for (int j = 0; j < n; ++j)
      p4[j] = s.psi[j] + dt * (s.psidot[j] + 0.5 * dt * a2[j]);
    rhs(p4, a4);

    bool finite = true;
    for (int j = 0; j < n; ++j) {
      const double v1 = s.psidot[j];
      const double v2 = s.psidot[j] + 0.5 * dt * a1[j];
      const double v3 = s.psidot[j] + 0.5 * dt * a2[j];
      const double v4 = s.psidot[j] + dt * a3[j];
      s.psi[j] += dt / 6.0 * (v1 + 2.0 * v2 + 2.0 * v3 + v4);
      s.psidot[j] += dt / 6.0 * (a1[j] + 2.0 * a2[j] + 2.0 * a3[j] + a4[j]);
      if (!std::isfinite(s.psi[j]) || !std::isfinite(s.psidot[j]))
        finite = false;
    }
    s.t += dt;
    return finite;
  }

 private:
  RadialGrid grid_;
  ChiTable chi_;
};

// full run: integrate, emit energy reports at the output cadence, stop on
// blowup or containment violation
inline Trajectory run(const ScenarioConfig& cfg) {
  {
    const auto v = cfg.violations();
    if (!v.empty()) {
      std::string msg = "invalid config:";
      for (const auto& s : v) msg += " [" + s + "]";
      throw std::invalid_argument(msg);
    }
  }
  const RadialGrid grid(cfg.R, cfg.n);
  const auto tensor = build_tensor(cfg.material);
  RadialSolver solver(grid, tensor);
  EnergyEvaluator ev;

  const auto data = make_initial_data(grid, cfg.data, cfg.eps);
  StateVector s(data.psi0, data.psi1, 0.0);

  Trajectory traj;
  traj.eps = data.eps;

  const double dt = cfg.dt();
  const int total_steps = (int)std::llround(cfg.T_final / dt);
  const int report_every = std::max(1, (int)std::llround(cfg.cadence / dt));
  const int check_every = 5;

  const double grad0 = sup_grad_norm(s);
  const double blowup_level =
      cfg.blowup_factor * std::max(grad0, 1e-300);
  const double psi_sup0 = [&] {
    double m = 0.0;
    for (int j = 0; j < grid.n; ++j) m = std::max(m, std::abs(s.psi[j]));
    return m;
  }();

  double M3 = 0.0, L3 = 0.0, prevN3 = 0.0, prevL3d = 0.0, prev_t = 0.0;
  bool have_prev = false;

  auto emit = [&](const StateVector& st) {
    RadialTable tab(st, psi_ddot(st, solver.chi_table()));
    EnergyReport rep;
    rep.t = st.t;
    rep.E3 = ev.E3(tab);
    rep.ghost_E3 = ev.ghost_E3(tab);
    rep.X3 = ev.X3(tab);
    rep.N3 = ev.N3(tab);
    rep.Etilde3 = ev.Etilde3(tab, tensor);
    rep.smallness_eps = data.eps;
    const double l3d = ev.L3_density(tab);
    if (have_prev) {
      M3 += 0.5 * (prevN3 + rep.N3) * (st.t - prev_t);
      L3 += 0.5 * (prevL3d + l3d) * (st.t - prev_t);
    }
    prevN3 = rep.N3;
    prevL3d = l3d;
    prev_t = st.t;
    have_prev = true;
    rep.M3_running = M3;
    rep.L3_running = L3;
    traj.reports.push_back(rep);
    if (cfg.store_states) traj.states.push_back(st);
  };

  auto check_boundary = [&](const StateVector& st) {
    const int tail = std::max(1, grid.n / 20);
    double m = 0.0;
    for (int j = grid.n - tail; j < grid.n; ++j)
      m = std::max({m, std::abs(st.psi[j]), std::abs(st.psidot[j])});
    return m <= 1e-13 * std::max(psi_sup0, 1e-300);
  };

  emit(s);
  traj.grad_history.push_back(grad0);
  traj.grad_history_t.push_back(0.0);

  for (int step = 1; step <= total_steps; ++step) {
    const bool finite = solver.step(s, dt);
    if (!finite) {
      traj.outcome = Outcome::Blowup;
      traj.t_star = s.t;
      traj.t_end = s.t;
      return traj;
    }
    if (step % check_every == 0 || step == total_steps) {
      const double gn = sup_grad_norm(s);
      traj.grad_history.push_back(gn);
      traj.grad_history_t.push_back(s.t);
      if (cfg.eps > 0.0 && gn > blowup_level) {
        traj.outcome = Outcome::Blowup;
        traj.t_star = s.t;
        traj.t_end = s.t;
        return traj;
      }
    }
    if (step % report_every == 0 || step == total_steps) {
      if (!check_boundary(s)) {
        traj.outcome = Outcome::BoundaryViolation;
        traj.t_star = s.t;
        traj.t_end = s.t;
        return traj;
      }
      emit(s);
    }
  }
  traj.outcome = Outcome::Completed;
  traj.t_end = s.t;
  return traj;
}

}  // namespace nullwave
