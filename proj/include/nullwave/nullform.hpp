#pragma once

// The quadratic null-form structure of the reduced equation
//
//     box u = N(u,u),    N(u,v)^i = d_l( g^{ijk}_{lmn} d_m u^j d_n v^k ),
//
// where g is the rank-6 coefficient tensor determined by N(u,u) = Q(u,grad u)
// for the cubic-elasticity nonlinearity
//
//   Q(u,grad u)^i = (2d3+d4) ( Q_ij(d_k u^k, u^j) - Q_jk(d_i u^k, u^j) )
//                 + d5 ( Q_ij(d_j u^k, u^k) + 2 Q_jk(d_j u^i, u^k)
//                        - Q_jk(d_j u^k, u^i) ),
//   Q_ab(f,g) = d_a f d_b g - d_b f d_a g,
//
// plus the dilatational part 3 d1 grad((div u)^2), which is the term the
// null condition d1 = 0 removes.  Each null form is expanded in divergence
// form via Q_ab(f,g) = d_a(f d_b g) - d_b(f d_a g) and the result is
// symmetrized over the index pairs (i,l),(j,m),(k,n).  The symmetrized
// representative keeps N(u,u) = Q(u,grad u) pointwise and satisfies
//
//   g^{ijk}_{lmn} = g^{jik}_{mln} = g^{kji}_{nml}         (pair symmetry)
//   g^{ijk}_{lmn} w_l w_m w_n = 0  on |w| = 1  when d1 = 0 (null condition).
//
// Index/layout conventions used throughout:
//   gradient matrices  grad[a][b] = d_a u^b   (derivative index first),
//   tensor storage     row-major in (i,j,k,l,m,n).

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "coefficients.hpp"

namespace nullwave {

using Grad3 = std::array<std::array<double, 3>, 3>;  // [a][b] = d_a u^b

// Full second-order space-time jet of a 3-vector field at one point.
// Derivative index 0 is time, 1..3 are space.
struct VectorJet2 {
  std::array<double, 3> u{};
  double du[4][3]{};      // du[a][i]    = d_a u^i
  double ddu[4][4][3]{};  // ddu[a][b][i] = d_a d_b u^i (symmetric in a,b)

  Grad3 spatial_grad() const {
    Grad3 m{};
    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < 3; ++i) m[a][i] = du[a + 1][i];
    return m;
  }
};

class NullFormTensor {
 public:
  NullFormTensor() { g_.fill(0.0); }

  static constexpr int index(int i, int j, int k, int l, int m, int n) {
    return ((((i * 3 + j) * 3 + k) * 3 + l) * 3 + m) * 3 + n;
  }

  double operator()(int i, int j, int k, int l, int m, int n) const {
    return g_[index(i, j, k, l, m, n)];
  }
  double& at(int i, int j, int k, int l, int m, int n) {
    return g_[index(i, j, k, l, m, n)];
  }

  const std::array<double, 729>& flat() const { return g_; }
  std::array<double, 729>& flat() { return g_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : g_) m = std::max(m, std::abs(v));
    return m;
  }

  struct Entry {
    int i, j, k, l, m, n;
    double v;
  };
  // nonzero entries, in row-major order (deterministic)
  std::vector<Entry> nonzeros() const {
    std::vector<Entry> e;
    int idx = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            for (int m = 0; m < 3; ++m)
              for (int n = 0; n < 3; ++n, ++idx)
                if (g_[idx] != 0.0) e.push_back({i, j, k, l, m, n, g_[idx]});
    return e;
  }

  // flat 729-entry row-major text block (one value per line)
  std::string serialize() const {
    std::string out;
    out.reserve(729 * 24);
    char buf[32];
    for (double v : g_) {
      std::snprintf(buf, sizeof buf, "%.17g\n", v);
      out += buf;
    }
    return out;
  }

 private:
  std::array<double, 729> g_;
};

namespace detail {

// Accumulate r * Q_ab(d_c u^d, u^e) in divergence form:
//   Q_ab(d_c u^d, u^e) = d_a (d_c u^d d_b u^e) - d_b (d_c u^d d_a u^e)
// The first u-factor occupies the (j,m) slot pair, the second the (k,n) pair.
inline void add_null_form(NullFormTensor& t, int i, double r, int a, int b,
                          int c, int d, int e) {
  t.at(i, d, e, a, c, b) += r;
  t.at(i, d, e, b, c, a) -= r;
}

inline NullFormTensor raw_divergence_tensor(const CoefficientSet& cs) {
  NullFormTensor t;
  const double alpha = 2.0 * cs.d3 + cs.d4;
  const double beta = cs.d5;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        add_null_form(t, i, alpha, i, j, k, k, j);   // +Q_ij(d_k u^k, u^j)
        add_null_form(t, i, -alpha, j, k, i, k, j);  // -Q_jk(d_i u^k, u^j)
        add_null_form(t, i, beta, i, j, j, k, k);    // +Q_ij(d_j u^k, u^k)
        add_null_form(t, i, 2.0 * beta, j, k, j, i, k);  // +2Q_jk(d_j u^i, u^k)
        add_null_form(t, i, -beta, j, k, j, k, i);   // -Q_jk(d_j u^k, u^i)
      }
    // 3 d1 grad((div u)^2): already in divergence form with l = i
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) t.at(i, j, k, i, j, k) += 3.0 * cs.d1;
  }
  return t;
}

inline NullFormTensor pair_symmetrize(const NullFormTensor& t) {
  // Average over the six permutations of the slot pairs (i,l),(j,m),(k,n).
  // Each orbit is accumulated once and the same double written to all six
  // positions, so the symmetry identities hold bit-exactly.
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  NullFormTensor s;
  std::array<bool, 729> done{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) {
              if (done[NullFormTensor::index(i, j, k, l, m, n)]) continue;
              const int comp[3] = {i, j, k};
              const int der[3] = {l, m, n};
              double acc = 0.0;
              for (const auto& p : perms)
                acc += t(comp[p[0]], comp[p[1]], comp[p[2]], der[p[0]],
                         der[p[1]], der[p[2]]);
              acc /= 6.0;
              for (const auto& p : perms) {
                const int idx = NullFormTensor::index(
                    comp[p[0]], comp[p[1]], comp[p[2]], der[p[0]], der[p[1]],
                    der[p[2]]);
                s.flat()[idx] = acc;
                done[idx] = true;
              }
            }
  return s;
}

}  // namespace detail

// Divergence-form expansion of the nonlinearity, then pair symmetrization.
// d2 never enters (its terms vanish identically on curl-free fields) and
// neither do the wave speeds.  With d1 = 0 the result depends only on
// (2 d3 + d4) and d5.
inline NullFormTensor build_tensor(const CoefficientSet& coeffs) {
  return detail::pair_symmetrize(detail::raw_divergence_tensor(coeffs));
}

// Contraction g^{ijk}_{lmn} w_l w_m w_n over the derivative slots.
// Requires |w| = 1 within 1e-12.
inline std::array<double, 27> null_contraction(const NullFormTensor& t,
                                               const double w[3]) {
  const double n2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
  if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
    throw std::invalid_argument("null_contraction: direction is not a unit vector");
  std::array<double, 27> out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double acc = 0.0;
        for (int l = 0; l < 3; ++l)
          for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n)
              acc += t(i, j, k, l, m, n) * w[l] * w[m] * w[n];
        out[(i * 3 + j) * 3 + k] = acc;
      }
  return out;
}

// Quasi-uniform deterministic sphere sample (Fibonacci lattice), k in [0,count).
inline void fibonacci_sphere_point(int k, int count, double w[3]) {
  const double golden = 2.39996322972865332;  // 2*pi*(1 - 1/phi)
  const double z = 1.0 - (2.0 * k + 1.0) / count;
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = golden * k;
  w[0] = rho * std::cos(phi);
  w[1] = rho * std::sin(phi);
  w[2] = z;
}

// max_{i,j,k} sup over a Fibonacci lattice of |g w w w|
inline double max_null_contraction(const NullFormTensor& t, int samples = 10000) {
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    double w[3];
    fibonacci_sphere_point(s, samples, w);
    const auto c = null_contraction(t, w);
    for (double v : c) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

// Pointwise N(u,v)^i = g^{ijk}_{lmn} ( d_l d_m u^j d_n v^k + d_m u^j d_l d_n v^k ).
// Only spatial derivative slots appear; the coefficients are constant so the
// outer derivative acts through the product rule on the jets.
inline std::array<double, 3> evaluate_N(const NullFormTensor& t,
                                        const VectorJet2& u,
                                        const VectorJet2& v) {
  std::array<double, 3> out{};
  for (const auto& e : t.nonzeros()) {
    const int l = e.l + 1, m = e.m + 1, n = e.n + 1;  // spatial jet indices
    out[e.i] += e.v * (u.ddu[l][m][e.j] * v.du[n][e.k] +
                       u.du[m][e.j] * v.ddu[l][n][e.k]);
  }
  return out;
}

// Trilinear form  Ntilde(u,v,w) = g^{ijk}_{lmn} d_l u^i d_m v^j d_n w^k
// on three first-order (gradient) jets.
inline double evaluate_trilinear(const NullFormTensor& t, const Grad3& gu,
                                 const Grad3& gv, const Grad3& gw) {
  double acc = 0.0;
  for (const auto& e : t.nonzeros())
    acc += e.v * gu[e.l][e.i] * gv[e.m][e.j] * gw[e.n][e.k];
  return acc;
}

// Radial-angular split of the trilinear form at a point x != 0.  Writing
// grad = w d_r - (w/r)^Omega, the value decomposes into three terms carrying
// one angular factor each plus the pure-radial term g w w w d_r d_r d_r; the
// four returned scalars sum to evaluate_trilinear(t,gu,gv,gw).  With d1 = 0
// the fourth term vanishes.
struct RadialAngularTerms {
  double angular_u, angular_v, angular_w, radial;
  double sum() const { return angular_u + angular_v + angular_w + radial; }
};

inline RadialAngularTerms radial_angular_terms(const NullFormTensor& t,
                                               const Grad3& gu, const Grad3& gv,
                                               const Grad3& gw,
                                               const double x[3]) {
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  if (r <= 0.0)
    throw std::invalid_argument("radial_angular_terms: x = 0 rejected");
  const double w[3] = {x[0] / r, x[1] / r, x[2] / r};

  auto radial_part = [&](const Grad3& m) {
    // w_l (w . grad) u^i
    Grad3 out{};
    for (int i = 0; i < 3; ++i) {
      double dr = 0.0;
      for (int p = 0; p < 3; ++p) dr += w[p] * m[p][i];
      for (int l = 0; l < 3; ++l) out[l][i] = w[l] * dr;
    }
    return out;
  };
  auto angular_part = [&](const Grad3& m) {
    Grad3 rad = radial_part(m), out{};
    for (int l = 0; l < 3; ++l)
      for (int i = 0; i < 3; ++i) out[l][i] = m[l][i] - rad[l][i];
    return out;
  };

  const Grad3 ua = angular_part(gu), ur = radial_part(gu);
  const Grad3 va = angular_part(gv), vr = radial_part(gv);
  const Grad3 wa = angular_part(gw), wr = radial_part(gw);

  RadialAngularTerms out{};
  out.angular_u = evaluate_trilinear(t, ua, gv, gw);
  out.angular_v = evaluate_trilinear(t, ur, va, gw);
  out.angular_w = evaluate_trilinear(t, ur, vr, wa);
  out.radial = evaluate_trilinear(t, ur, vr, wr);
  return out;
}

// Stored-energy density W = l2 + l3 evaluated on a gradient matrix,
//   l2 = (c2^2/2)|grad u|^2 + ((c1^2-c2^2)/2)(div u)^2
//   l3 = d1 (div u)^3 + d2 (div u)|curl u|^2 + d3 (div u) Q_ij(u^i,u^j)
//      + d4 (d_k u^j) Q_ij(u^i,u^k) + d5 (d_k u^j) Q_ik(u^i,u^j).
inline double stored_energy(const CoefficientSet& cs, const Grad3& g) {
  double frob = 0.0, div = 0.0;
  for (int a = 0; a < 3; ++a) {
    div += g[a][a];
    for (int b = 0; b < 3; ++b) frob += g[a][b] * g[a][b];
  }
  const double curl[3] = {g[1][2] - g[2][1], g[2][0] - g[0][2],
                          g[0][1] - g[1][0]};
  const double curl2 = curl[0] * curl[0] + curl[1] * curl[1] + curl[2] * curl[2];

  auto Q = [&](int a, int b, int c, int d) {
    // Q_ab(u^c, u^d) = d_a u^c d_b u^d - d_b u^c d_a u^d
    return g[a][c] * g[b][d] - g[b][c] * g[a][d];
  };

  double l3 = cs.d1 * div * div * div + cs.d2 * div * curl2;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      l3 += cs.d3 * div * Q(i, j, i, j);
      for (int k = 0; k < 3; ++k) {
        l3 += cs.d4 * g[k][j] * Q(i, j, i, k);
        l3 += cs.d5 * g[k][j] * Q(i, k, i, j);
      }
    }

  const double l2 = 0.5 * cs.c2 * cs.c2 * frob +
                    0.5 * (cs.c1 * cs.c1 - cs.c2 * cs.c2) * div * div;
  return l2 + l3;
}

}  // namespace nullwave
