#pragma once

// Scalar reduction of the vector nonlinearity.  On radial fields N(u,u) is
// parallel to x, so the reduced equation for psi reads
//
//     psiddot = psi'' + 4 psi'/r + chi(r),   chi = N(u,u)^1 / x_1  at x = r e1.
//
// The paper never writes the closed scalar form; chi is obtained by on-axis
// evaluation of the tensor contraction, which only involves the spatial jet
// (psi, psi', psi'').  Since the jet is linear in those three values with
// r-dependent coefficients and N is bilinear, chi(r_j) is a quadratic form
// p^T C_j p in p = (psi, psi', psi''): C_j is identified once per grid by
// polarization over basis jets and reused every step.

#include <array>
#include <vector>

#include "grid.hpp"
#include "lift.hpp"
#include "nullform.hpp"

namespace nullwave {

// psi'' + 4 psi'/r (the radial form of Delta(x psi)/x)
inline RadialProfile laplacian_radial(const RadialProfile& psi) {
  const auto d1 = differentiate(psi, 1);
  const auto d2 = differentiate(psi, 2);
  RadialProfile out(psi.grid);
  for (int j = 0; j < psi.grid.n; ++j)
    out[j] = d2[j] + 4.0 * d1[j] / psi.grid.r(j);
  return out;
}

class ChiTable {
 public:
  ChiTable() = default;

  ChiTable(const RadialGrid& grid, const NullFormTensor& tensor)
      : grid_(grid), zero_(tensor.max_abs() == 0.0) {
    if (zero_) return;
    c_.resize(grid.n);
    static const double e1[3] = {1.0, 0.0, 0.0};
    auto n1 = [&](double r, const std::array<double, 3>& p) {
      RadialJet s;
      s.psi = p[0];
      s.dpsi = p[1];
      s.ddpsi = p[2];
      const auto J = lift_jet(s, r, e1);
      return evaluate_N(tensor, J, J)[0];
    };
    for (int j = 0; j < grid.n; ++j) {
      const double r = grid.r(j);
      std::array<double, 3> diag;
      for (int a = 0; a < 3; ++a) {
        std::array<double, 3> p{};
        p[a] = 1.0;
        diag[a] = n1(r, p);
      }
      auto& C = c_[j];
      C[0] = diag[0];
      C[1] = diag[1];
      C[2] = diag[2];
      int q = 3;
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b, ++q) {
          std::array<double, 3> p{};
          p[a] = 1.0;
          p[b] = 1.0;
          // cross term C_ab + C_ba from polarization
          C[q] = n1(r, p) - diag[a] - diag[b];
        }
    }
  }

  bool zero() const { return zero_; }

  // chi_j = N(u,u)^1 / x_1 at x = r_j e1, divided by x_1 = r_j
  void apply(const RadialProfile& psi, const RadialProfile& dpsi,
             const RadialProfile& ddpsi, RadialProfile& chi) const {
    const int n = psi.grid.n;
    if (zero_) {
      for (int j = 0; j < n; ++j) chi[j] = 0.0;
      return;
    }
    for (int j = 0; j < n; ++j) {
      const double p0 = psi[j], p1 = dpsi[j], p2 = ddpsi[j];
      const auto& C = c_[j];
      const double n1 = C[0] * p0 * p0 + C[1] * p1 * p1 + C[2] * p2 * p2 +
                        C[3] * p0 * p1 + C[4] * p0 * p2 + C[5] * p1 * p2;
      chi[j] = n1 / psi.grid.r(j);
    }
  }

 private:
  RadialGrid grid_;
  bool zero_ = true;
  std::vector<std::array<double, 6>> c_;  // (00,11,22,01,02,12)
};

// slow-path chi by direct on-axis jet evaluation (diagnostics and tests)
inline RadialProfile scalar_rhs_chi(const StateVector& s,
                                    const NullFormTensor& tensor) {
  const auto& g = s.grid();
  const auto dpsi = differentiate(s.psi, 1);
  const auto ddpsi = differentiate(s.psi, 2);
  RadialProfile chi(g);
  static const double e1[3] = {1.0, 0.0, 0.0};
  for (int j = 0; j < g.n; ++j) {
    RadialJet jet;
    jet.psi = s.psi[j];
    jet.dpsi = dpsi[j];
    jet.ddpsi = ddpsi[j];
    const auto J = lift_jet(jet, g.r(j), e1);
    chi[j] = evaluate_N(tensor, J, J)[0] / g.r(j);
  }
  return chi;
}

// equation-substituted second time derivative
inline RadialProfile psi_ddot(const StateVector& s, const ChiTable& chi_table) {
  RadialProfile out = laplacian_radial(s.psi);
  if (!chi_table.zero()) {
    const auto dpsi = differentiate(s.psi, 1);
    const auto ddpsi = differentiate(s.psi, 2);
    RadialProfile chi(s.grid());
    chi_table.apply(s.psi, dpsi, ddpsi, chi);
    for (int j = 0; j < s.grid().n; ++j) out[j] += chi[j];
  }
  return out;
}

// Off-axis radiality diagnostic: components of N(u,u)^i / x_i at
// x = r (1,1,1)/sqrt(3).  All three agree on radial fields.
inline std::array<double, 3> rhs_component_ratios(const StateVector& s,
                                                  const NullFormTensor& tensor,
                                                  int node) {
  const auto dpsi = differentiate(s.psi, 1);
  const auto ddpsi = differentiate(s.psi, 2);
  RadialJet jet;
  jet.psi = s.psi[node];
  jet.dpsi = dpsi[node];
  jet.ddpsi = ddpsi[node];
  const double inv = 1.0 / std::sqrt(3.0);
  const double w[3] = {inv, inv, inv};
  const double r = s.grid().r(node);
  const auto J = lift_jet(jet, r, w);
  const auto N = evaluate_N(tensor, J, J);
  return {N[0] / (r * w[0]), N[1] / (r * w[1]), N[2] / (r * w[2])};
}

}  // namespace nullwave
