#pragma once

// Cell-centered radial grid on (0,R]: nodes r_j = (j+1/2)h, j = 0..n-1.
// The origin is never a node; regularity there is enforced through the
// even extension psi(-r) = psi(r), which mirrors exactly onto the cell
// centers.  Derivatives use fourth-order centered stencils with even
// reflection across r = 0 and one-sided stencils at the outer edge.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace nullwave {

struct RadialGrid {
  double R = 1.0;
  int n = 0;

  RadialGrid() = default;
  RadialGrid(double R_, int n_) : R(R_), n(n_) {
    if (n < 8) throw std::invalid_argument("RadialGrid: need at least 8 cells");
    if (!(R > 0.0)) throw std::invalid_argument("RadialGrid: R must be positive");
  }

  double h() const { return R / n; }
  double r(int j) const { return (j + 0.5) * h(); }

  bool operator==(const RadialGrid& o) const { return R == o.R && n == o.n; }
};

struct RadialProfile {
  RadialGrid grid;
  std::vector<double> v;

  RadialProfile() = default;
  explicit RadialProfile(const RadialGrid& g) : grid(g), v(g.n, 0.0) {}
  RadialProfile(const RadialGrid& g, std::vector<double> vals)
      : grid(g), v(std::move(vals)) {
    if ((int)v.size() != g.n)
      throw std::invalid_argument("RadialProfile: size mismatch");
  }

  template <class F>
  static RadialProfile sample(const RadialGrid& g, F&& f) {
    RadialProfile p(g);
    for (int j = 0; j < g.n; ++j) p.v[j] = f(g.r(j));
    return p;
  }

  double operator[](int j) const { return v[j]; }
  double& operator[](int j) { return v[j]; }
  int size() const { return grid.n; }
};

namespace detail {

// Fornberg's algorithm: weights for the m-th derivative at point z from
// values at the points xs.  Used for the one-sided edge stencils so no
// hand-typed coefficient table is needed.
inline std::vector<double> fd_weights(double z, std::span<const double> xs,
                                      int m) {
  const int nd = (int)xs.size();
  std::vector<double> c(nd * (m + 1), 0.0);
  auto C = [&](int i, int k) -> double& { return c[i * (m + 1) + k]; };
  double c1 = 1.0, c4 = xs[0] - z;
  C(0, 0) = 1.0;
  for (int i = 1; i < nd; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
        C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k)
        C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
      C(j, 0) = c4 * C(j, 0) / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(nd);
  for (int i = 0; i < nd; ++i) w[i] = C(i, m);
  return w;
}

}  // namespace detail

// parity of a profile under the reflection r -> -r; derivatives alternate it
enum class Parity { Even, Odd };

inline Parity flip(Parity p) { return p == Parity::Even ? Parity::Odd : Parity::Even; }

// First or second radial derivative.  Interior: fourth-order centered
// stencils with ghost values from the reflection r -> -r near the origin
// (sign per the profile's parity; psi is even, psi' odd, and so on).  The
// two outermost nodes use one-sided fifth/sixth-point stencils of the same
// order.
inline RadialProfile differentiate(const RadialProfile& p, int order,
                                   Parity parity = Parity::Even) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("differentiate: order must be 1 or 2");
  const int n = p.size();
  if (n < 8) throw std::invalid_argument("differentiate: grid too small");
  const double h = p.grid.h();
  const double sign = (parity == Parity::Even) ? 1.0 : -1.0;

  RadialProfile out(p.grid);
  auto val = [&](int j) {
    // reflection: node -1-j mirrors node j
    return (j >= 0) ? p.v[j] : sign * p.v[-1 - j];
  };

  if (order == 1) {
    for (int j = 0; j < n - 2; ++j)
      out.v[j] = (-val(j + 2) + 8.0 * val(j + 1) - 8.0 * val(j - 1) + val(j - 2)) /
                 (12.0 * h);
  } else {
    for (int j = 0; j < n - 2; ++j)
      out.v[j] = (-val(j + 2) + 16.0 * val(j + 1) - 30.0 * val(j) +
                  16.0 * val(j - 1) - val(j - 2)) /
                 (12.0 * h * h);
  }

  // one-sided stencils at the outer edge (order-4, so 5 resp. 6 points)
  const int width = (order == 1) ? 5 : 6;
  std::vector<double> xs(width);
  for (int j = n - 2; j < n; ++j) {
    const int j0 = n - width;
    for (int q = 0; q < width; ++q) xs[q] = p.grid.r(j0 + q);
    const auto w = detail::fd_weights(p.grid.r(j), xs, order);
    double acc = 0.0;
    for (int q = 0; q < width; ++q) acc += w[q] * p.v[j0 + q];
    out.v[j] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Radial quadrature.
//
// Integrands g(r) here are even in r and vanish near the outer edge
// (domain-of-dependence containment), so the midpoint sum h * sum g(r_j)
// is the trapezoid rule on the even extension over (-R,R) with no boundary
// nodes: by Euler-Maclaurin every correction term drops and the rule
// converges faster than any fixed order on smooth contained integrands.
// ---------------------------------------------------------------------------

inline double integrate_radial(const RadialGrid& g, std::span<const double> f) {
  double acc = 0.0;
  for (int j = 0; j < g.n; ++j) acc += f[j];
  return acc * g.h();
}

// Pointwise weight w(r,t) = <r>^a r^b <t-r>^c * (ghost ? e^{-arctan(t-r)} : 1),
// with <x> = sqrt(1+x^2).  Covers every weight used by the functionals.
struct WeightSpec {
  double ang_r = 0.0;    // exponent a on <r>
  double pow_r = 0.0;    // exponent b on r
  double ang_sig = 0.0;  // exponent c on <t-r>
  bool ghost = false;    // e^{-q(t-r)}, q = arctan

  static WeightSpec one() { return {}; }

  double operator()(double r, double t) const {
    double w = 1.0;
    if (ang_r != 0.0) w *= std::pow(std::sqrt(1.0 + r * r), ang_r);
    if (pow_r != 0.0) w *= std::pow(r, pow_r);
    const double s = t - r;
    if (ang_sig != 0.0) w *= std::pow(std::sqrt(1.0 + s * s), ang_sig);
    if (ghost) w *= std::exp(-std::atan(s));
    return w;
  }
};

// integral over R^3 of [w(r,t) f(r)]^2 for a radial scalar f:
//   int_0^R w^2 f^2 4 pi r^2 dr
inline double weighted_norm_sq(const RadialProfile& f, const WeightSpec& w,
                               double t, double r_max = -1.0) {
  const auto& g = f.grid;
  double acc = 0.0;
  for (int j = 0; j < g.n; ++j) {
    const double r = g.r(j);
    if (r_max > 0.0 && r > r_max) break;
    const double wf = w(r, t) * f.v[j];
    acc += wf * wf * r * r;
  }
  return acc * 4.0 * M_PI * g.h();
}

}  // namespace nullwave
