#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nullwave/angular.hpp"
#include "nullwave/multiindex.hpp"
#include "nullwave/rng.hpp"

using namespace nullwave;

namespace {

// Gauss-Legendre x trig product rule on the sphere, exact for spherical
// polynomials up to the rule degree: an independent oracle for the moments.
double sphere_quad_mono(int p, int q, int s) {
  const int ntheta = 16, nphi = 33;
  std::vector<double> x(ntheta), w(ntheta);
  for (int i = 0; i < ntheta; ++i) {
    // Newton iteration for the Gauss-Legendre nodes of P_16
    double t = std::cos(M_PI * (i + 0.75) / (ntheta + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= ntheta; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = ntheta * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= ntheta; ++k) {
      const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dpf = ntheta * (t * p1 - p0) / (t * t - 1.0);
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dpf * dpf);
  }
  double acc = 0.0;
  for (int i = 0; i < ntheta; ++i) {
    const double z = x[i], rho = std::sqrt(1.0 - z * z);
    for (int j = 0; j < nphi; ++j) {
      const double phi = 2.0 * M_PI * j / nphi;
      const double wv[3] = {rho * std::cos(phi), rho * std::sin(phi), z};
      acc += w[i] * (2.0 * M_PI / nphi) * std::pow(wv[0], p) *
             std::pow(wv[1], q) * std::pow(wv[2], s);
    }
  }
  return acc / (4.0 * M_PI);
}

struct AnalyticPsi {
  // psi(t,r) = (1 + 0.5 t) * e^{-r^2} * (1 + 0.2 r^2)
  static double psi(double t, double r) {
    return (1.0 + 0.5 * t) * std::exp(-r * r) * (1.0 + 0.2 * r * r);
  }
  static double psit(double /*t*/, double r) {
    return 0.5 * std::exp(-r * r) * (1.0 + 0.2 * r * r);
  }
};

}  // namespace

TEST_CASE("mono_moment: matches quadrature oracle, odd moments vanish") {
  REQUIRE(mono_moment(mono_key(0, 0, 0)) == Catch::Approx(1.0));
  REQUIRE(mono_moment(mono_key(2, 0, 0)) == Catch::Approx(1.0 / 3.0));
  REQUIRE(mono_moment(mono_key(2, 2, 0)) == Catch::Approx(1.0 / 15.0));
  REQUIRE(mono_moment(mono_key(4, 0, 0)) == Catch::Approx(1.0 / 5.0));
  REQUIRE(mono_moment(mono_key(1, 0, 0)) == 0.0);
  REQUIRE(mono_moment(mono_key(3, 2, 1)) == 0.0);
  for (auto [p, q, s] : {std::array<int, 3>{2, 4, 6}, {0, 2, 8}, {6, 6, 0},
                         {4, 4, 4}, {10, 2, 0}}) {
    REQUIRE(mono_moment(mono_key(p, q, s)) ==
            Catch::Approx(sphere_quad_mono(p, q, s)).margin(1e-12));
  }
}

TEST_CASE("OmegaPoly: eval and pair averages") {
  Poly p;
  p.add(mono_key(1, 0, 0), 2.0);
  p.add(mono_key(0, 0, 1), -1.0);
  const double w[3] = {0.6, 0.0, 0.8};
  REQUIRE(p.eval(w) == Catch::Approx(2.0 * 0.6 - 0.8));
  // avg (2 w1 - w3)^2 = 4/3 + 1/3
  REQUIRE(sphere_avg_pair(p, p) == Catch::Approx(5.0 / 3.0));
}

TEST_CASE("field calculus: derivatives match the chain-rule jets") {
  RadialGrid g(8.0, 1024);
  const double t = 0.7;
  StateVector s(
      RadialProfile::sample(g, [&](double r) { return AnalyticPsi::psi(t, r); }),
      RadialProfile::sample(g, [&](double r) { return AnalyticPsi::psit(t, r); }),
      t);
  const auto psidd =
      RadialProfile::sample(g, [](double r) { return 0.3 * std::exp(-0.8 * r * r); });
  RadialTable tab(s, psidd);
  StateJets jets(s, psidd);

  Rng rng(11);
  const auto u = field_u();
  std::array<VectorField, 3> du = {d_x(u, 0), d_x(u, 1), d_x(u, 2)};
  const auto dtu = d_t(u);

  for (int trial = 0; trial < 20; ++trial) {
    const int node = 32 + (int)(rng.uniform() * 400);
    double w[3];
    rng.unit_vector(w);
    const auto J = lift_jet(jets.at(node), g.r(node), w);

    Poly poly;
    for (int i = 0; i < 3; ++i) {
      eval_field(u[i], tab, node, poly);
      REQUIRE(poly.eval(w) == Catch::Approx(J.u[i]).margin(1e-10));
      eval_field(dtu[i], tab, node, poly);
      REQUIRE(poly.eval(w) == Catch::Approx(J.du[0][i]).margin(1e-10));
      for (int a = 0; a < 3; ++a) {
        eval_field(du[a][i], tab, node, poly);
        REQUIRE(poly.eval(w) == Catch::Approx(J.du[a + 1][i]).margin(1e-8));
        for (int b = 0; b < 3; ++b) {
          eval_field(d_x(du[a][i], b), tab, node, poly);
          REQUIRE(poly.eval(w) ==
                  Catch::Approx(J.ddu[b + 1][a + 1][i]).margin(1e-6));
        }
      }
    }
  }
}

TEST_CASE("field calculus: third derivative against 3-D finite differences") {
  RadialGrid g(8.0, 2048);
  StateVector s(
      RadialProfile::sample(g, [](double r) { return AnalyticPsi::psi(0, r); }),
      RadialProfile{g}, 0.0);
  RadialTable tab(s, RadialProfile{g});

  // d_1 d_2 d_3 u^0 via the term calculus
  auto f = d_x(d_x(d_x(field_u(), 0), 1), 2)[0];

  auto lifted = [](const double x[3]) {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    return x[0] * AnalyticPsi::psi(0, r);
  };
  const int node = 300;
  const double r = g.r(node);
  double w[3] = {0.48, 0.6, 0.64};
  const double x0[3] = {r * w[0], r * w[1], r * w[2]};
  const double e = 0.02;
  double acc = 0.0;
  for (int s1 : {-1, 1})
    for (int s2 : {-1, 1})
      for (int s3 : {-1, 1}) {
        double x[3] = {x0[0] + s1 * e, x0[1] + s2 * e, x0[2] + s3 * e};
        acc += s1 * s2 * s3 * lifted(x);
      }
  acc /= 8.0 * e * e * e;

  Poly poly;
  eval_field(f, tab, node, poly);
  REQUIRE(poly.eval(w) == Catch::Approx(acc).margin(5e-3));
}

TEST_CASE("field calculus: Su and its time derivative") {
  RadialGrid g(8.0, 1024);
  const double t = 1.4;
  StateVector s(
      RadialProfile::sample(g, [&](double r) { return AnalyticPsi::psi(t, r); }),
      RadialProfile::sample(g, [&](double r) { return AnalyticPsi::psit(t, r); }),
      t);
  const auto psidd =
      RadialProfile::sample(g, [](double r) { return 0.2 * std::exp(-r * r); });
  RadialTable tab(s, psidd);
  const auto scaled = apply_scaling(s, psidd);

  const auto Su = field_Su();
  const auto dtSu = d_t(Su);
  Poly poly;
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int node = 10 + (int)(rng.uniform() * 700);
    double w[3];
    rng.unit_vector(w);
    const double r = g.r(node);
    for (int i = 0; i < 3; ++i) {
      eval_field(Su[i], tab, node, poly);
      REQUIRE(poly.eval(w) ==
              Catch::Approx(r * w[i] * scaled.chi[node]).margin(1e-9));
      eval_field(dtSu[i], tab, node, poly);
      REQUIRE(poly.eval(w) ==
              Catch::Approx(r * w[i] * scaled.chidot[node]).margin(1e-9));
    }
  }

  // d_1 (Su)^2 = x_2 w_1 chi'(r); vanishes where w_1 = 0
  const auto d1Su = d_x(Su, 0);
  const auto dchi = differentiate(scaled.chi, 1);
  const int node = 200;
  double wz[3] = {0.0, 0.6, 0.8};
  eval_field(d1Su[1], tab, node, poly);
  REQUIRE(poly.eval(wz) == Catch::Approx(0.0).margin(1e-10));
  double w2[3] = {0.48, 0.6, 0.64};
  REQUIRE(poly.eval(w2) ==
          Catch::Approx(g.r(node) * w2[1] * w2[0] * dchi[node]).margin(1e-7));
}

TEST_CASE("sphere averages: |grad u|^2 reproduces the radial closed form") {
  RadialGrid g(8.0, 512);
  auto psi_f = [](double r) { return std::exp(-r * r) * (1.0 + 0.1 * r); };
  StateVector s(RadialProfile::sample(g, psi_f), RadialProfile{g}, 0.0);
  RadialTable tab(s, RadialProfile{g});
  const auto dpsi = differentiate(s.psi, 1);

  const auto u = field_u();
  std::array<VectorField, 3> du = {d_x(u, 0), d_x(u, 1), d_x(u, 2)};
  for (int node : {3, 77, 250, 479}) {
    double acc = 0.0;
    Poly poly;
    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < 3; ++i) {
        eval_field(du[a][i], tab, node, poly);
        acc += sphere_avg_pair(poly, poly);
      }
    const double r = g.r(node), p = s.psi[node], dp = dpsi[node];
    const double expect = 3.0 * p * p + 2.0 * r * p * dp + r * r * dp * dp;
    REQUIRE(acc == Catch::Approx(expect).margin(1e-9));
  }
}

TEST_CASE("multi_index_set: 14 indices for k = 3") {
  const auto set = multi_index_set(3);
  REQUIRE(set.size() == 14);
  int with_s = 0, order2 = 0;
  for (const auto& a : set) {
    REQUIRE(a.order() <= 2);
    REQUIRE(a.s <= 1);
    if (a.s) ++with_s;
    if (a.order() == 2) ++order2;
  }
  REQUIRE(with_s == 4);  // S, d1 S, d2 S, d3 S
  REQUIRE(order2 == 9);  // six d_i d_j plus three d_i S
}

TEST_CASE("commuted_nonlinearity: hand-checked decompositions") {
  auto t0 = commuted_nonlinearity(MultiIndex{});
  REQUIRE(t0.size() == 1);
  REQUIRE(t0[0].kappa == 1.0);

  // a = S: N(Su,u) + N(u,Su) - N(u,u)
  MultiIndex S;
  S.s = 1;
  auto ts = commuted_nonlinearity(S);
  REQUIRE(ts.size() == 3);
  double sum = 0.0;
  for (const auto& t : ts) sum += t.kappa;
  REQUIRE(sum == Catch::Approx(1.0));

  // a = 2 e1: N(d1d1 u, u) + 2 N(d1 u, d1 u) + N(u, d1d1 u)
  MultiIndex a2;
  a2.sp = {2, 0, 0};
  auto t2 = commuted_nonlinearity(a2);
  REQUIRE(t2.size() == 3);
  for (const auto& t : t2) {
    if (t.b.spatial_order() == 1)
      REQUIRE(t.kappa == 2.0);
    else
      REQUIRE(t.kappa == 1.0);
  }

  // a = d1 S: six terms, the lower-order pair with kappa = -1
  MultiIndex a1s;
  a1s.sp = {1, 0, 0};
  a1s.s = 1;
  auto t1s = commuted_nonlinearity(a1s);
  REQUIRE(t1s.size() == 6);
  int neg = 0;
  for (const auto& t : t1s)
    if (t.kappa == -1.0) ++neg;
  REQUIRE(neg == 2);
}

TEST_CASE("build_Z_field: d_i S u equals d_i applied to Su") {
  RadialGrid g(8.0, 512);
  const double t = 0.9;
  StateVector s(
      RadialProfile::sample(g, [&](double r) { return AnalyticPsi::psi(t, r); }),
      RadialProfile::sample(g, [&](double r) { return AnalyticPsi::psit(t, r); }),
      t);
  const auto psidd =
      RadialProfile::sample(g, [](double r) { return 0.1 * std::exp(-r * r); });
  RadialTable tab(s, psidd);

  MultiIndex a;
  a.sp = {0, 1, 0};
  a.s = 1;
  const auto lhs = build_Z_field(a);
  const auto rhs = d_x(field_Su(), 1);
  Poly p1, p2;
  double w[3] = {0.2, 0.9, std::sqrt(1.0 - 0.04 - 0.81)};
  for (int i = 0; i < 3; ++i) {
    eval_field(lhs[i], tab, 120, p1);
    eval_field(rhs[i], tab, 120, p2);
    REQUIRE(p1.eval(w) == Catch::Approx(p2.eval(w)).margin(1e-12));
  }
}
