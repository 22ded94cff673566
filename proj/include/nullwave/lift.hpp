#pragma once

// Lifting of radial scalar profiles to 3-D vector jets through the radial
// ansatz u(t,x) = x psi(t,r), and the scaling field S = t d_t + r d_r,
// under which Su = x (t psidot + r psi' + psi) is again radial.

#include <array>
#include <cmath>
#include <stdexcept>

#include "grid.hpp"
#include "nullform.hpp"

namespace nullwave {

struct StateVector {
  RadialProfile psi;
  RadialProfile psidot;
  double t = 0.0;

  StateVector() = default;
  StateVector(RadialProfile p, RadialProfile pd, double time)
      : psi(std::move(p)), psidot(std::move(pd)), t(time) {
    if (!(psi.grid == psidot.grid))
      throw std::invalid_argument("StateVector: profiles on different grids");
  }
  const RadialGrid& grid() const { return psi.grid; }
};

// Scalar radial data needed for a full second-order jet at one point.
struct RadialJet {
  double psi = 0, dpsi = 0, ddpsi = 0;     // psi, psi', psi''
  double psit = 0, dpsit = 0;              // psidot, psidot'
  double psitt = 0;                        // psiddot (equation-substituted)
};

// Chain rule for u = x psi(t,r) at x = r w (|w| = 1):
//   d_a u^i      = delta_ai psi + x_i w_a psi'
//   d_a d_b u^i  = delta_ia w_b psi' + delta_ib w_a psi'
//                  + x_i [ (delta_ab - w_a w_b) psi'/r + w_a w_b psi'' ]
//   d_t u^i = x_i psidot,  d_t d_a u^i = delta_ai psidot + x_i w_a psidot',
//   d_t^2 u^i = x_i psiddot.
inline VectorJet2 lift_jet(const RadialJet& s, double r, const double w[3]) {
  if (!(r > 0.0)) throw std::invalid_argument("lift_jet: r must be positive");
  VectorJet2 J;
  const double x[3] = {r * w[0], r * w[1], r * w[2]};
  for (int i = 0; i < 3; ++i) {
    J.u[i] = x[i] * s.psi;
    J.du[0][i] = x[i] * s.psit;
    J.ddu[0][0][i] = x[i] * s.psitt;
    for (int a = 0; a < 3; ++a) {
      J.du[a + 1][i] = (a == i ? s.psi : 0.0) + x[i] * w[a] * s.dpsi;
      const double dt_da = (a == i ? s.psit : 0.0) + x[i] * w[a] * s.dpsit;
      J.ddu[0][a + 1][i] = dt_da;
      J.ddu[a + 1][0][i] = dt_da;
      for (int b = 0; b < 3; ++b) {
        double v = 0.0;
        if (i == a) v += w[b] * s.dpsi;
        if (i == b) v += w[a] * s.dpsi;
        v += x[i] * (((a == b ? 1.0 : 0.0) - w[a] * w[b]) * s.dpsi / r +
                     w[a] * w[b] * s.ddpsi);
        J.ddu[a + 1][b + 1][i] = v;
      }
    }
  }
  return J;
}

// Per-node radial jet data for a whole state (derivatives by the
// fourth-order stencils; psiddot supplied by the caller, normally through
// the evolution equation).  Owns its data.
struct StateJets {
  RadialGrid grid;
  double t = 0.0;
  RadialProfile psi, dpsi, ddpsi, psit, dpsit, psidd;

  StateJets(const StateVector& s, RadialProfile psiddot)
      : grid(s.grid()),
        t(s.t),
        psi(s.psi),
        dpsi(differentiate(s.psi, 1)),
        ddpsi(differentiate(s.psi, 2)),
        psit(s.psidot),
        dpsit(differentiate(s.psidot, 1)),
        psidd(std::move(psiddot)) {
    if (!(psidd.grid == grid))
      throw std::invalid_argument("StateJets: psiddot grid mismatch");
  }

  RadialJet at(int j) const {
    if (j < 0 || j >= grid.n)
      throw std::out_of_range("StateJets: node index out of range");
    return RadialJet{psi[j], dpsi[j], ddpsi[j], psit[j], dpsit[j], psidd[j]};
  }
};

// Jet of u at node j on the x1-axis.
inline VectorJet2 lift_to_jet(const StateJets& jets, int j) {
  static const double e1[3] = {1.0, 0.0, 0.0};
  return lift_jet(jets.at(j), jets.grid.r(j), e1);
}

// Su reduced back to scalar form: Su = x chi with chi = t psidot + r psi' + psi,
// and d_t(Su) = x (t psiddot + r psidot' + 2 psidot) via the evolution equation.
struct ScaledState {
  RadialProfile chi;      // scalar profile of Su
  RadialProfile chidot;   // scalar profile of d_t Su
};

inline ScaledState apply_scaling(const StateVector& s,
                                 const RadialProfile& psiddot) {
  const auto& g = s.grid();
  const RadialProfile dpsi = differentiate(s.psi, 1);
  const RadialProfile dpsit = differentiate(s.psidot, 1);
  ScaledState out{RadialProfile(g), RadialProfile(g)};
  for (int j = 0; j < g.n; ++j) {
    const double r = g.r(j);
    out.chi[j] = s.t * s.psidot[j] + r * dpsi[j] + s.psi[j];
    out.chidot[j] = s.t * psiddot[j] + r * dpsit[j] + 2.0 * s.psidot[j];
  }
  return out;
}

// sup over nodes of |grad u| for u = x psi:
//   |grad u|^2 = 3 psi^2 + 2 r psi psi' + r^2 psi'^2 (pointwise radial).
inline double sup_grad_norm(const StateVector& s) {
  const RadialProfile dpsi = differentiate(s.psi, 1);
  double worst = 0.0;
  for (int j = 0; j < s.grid().n; ++j) {
    const double r = s.grid().r(j);
    const double a = s.psi[j], b = dpsi[j];
    const double m2 = 3.0 * a * a + 2.0 * r * a * b + r * r * b * b;
    worst = std::max(worst, m2);
  }
  return std::sqrt(worst);
}

}  // namespace nullwave
