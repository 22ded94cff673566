#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "nullwave/lift.hpp"
#include "nullwave/rng.hpp"

using namespace nullwave;

namespace {

// 3-D central finite differences of the lifted field x -> x psi(|x|),
// used as an independent oracle for the chain-rule jets.
struct Lift3D {
  std::function<double(double)> psi;
  std::array<double, 3> eval(const double x[3]) const {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const double p = psi(r);
    return {x[0] * p, x[1] * p, x[2] * p};
  }
  std::array<double, 3> d(int a, const double x[3], double eps) const {
    double xp[3] = {x[0], x[1], x[2]}, xm[3] = {x[0], x[1], x[2]};
    xp[a] += eps;
    xm[a] -= eps;
    const auto fp = eval(xp), fm = eval(xm);
    return {(fp[0] - fm[0]) / (2 * eps), (fp[1] - fm[1]) / (2 * eps),
            (fp[2] - fm[2]) / (2 * eps)};
  }
  std::array<double, 3> dd(int a, int b, const double x[3], double eps) const {
    double xp[3] = {x[0], x[1], x[2]}, xm[3] = {x[0], x[1], x[2]};
    xp[b] += eps;
    xm[b] -= eps;
    const auto fp = d(a, xp, eps), fm = d(a, xm, eps);
    return {(fp[0] - fm[0]) / (2 * eps), (fp[1] - fm[1]) / (2 * eps),
            (fp[2] - fm[2]) / (2 * eps)};
  }
};

}  // namespace

TEST_CASE("lift_jet: constant profile gives grad u = c I, no curvature") {
  RadialJet s;
  s.psi = 2.5;
  double w[3] = {0.6, 0.0, 0.8};
  const auto J = lift_jet(s, 1.7, w);
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i) {
      REQUIRE(J.du[a + 1][i] == Catch::Approx(a == i ? 2.5 : 0.0).margin(1e-14));
      for (int b = 0; b < 3; ++b)
        REQUIRE(std::abs(J.ddu[a + 1][b + 1][i]) <= 1e-14);
    }
  REQUIRE(J.du[0][0] == 0.0);
}

TEST_CASE("lift_jet: psi = r^2 on the x1 axis by hand") {
  RadialJet s;
  s.psi = 1.0;   // r = 1
  s.dpsi = 2.0;  // psi' = 2r
  s.ddpsi = 2.0;
  double e1[3] = {1, 0, 0};
  const auto J = lift_jet(s, 1.0, e1);
  REQUIRE(J.du[1][0] == Catch::Approx(3.0));  // psi + r psi' = 3
  REQUIRE(J.du[2][1] == Catch::Approx(1.0));  // psi
  REQUIRE(J.du[3][2] == Catch::Approx(1.0));
  REQUIRE(J.du[2][0] == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("lift_jet: matches 3-D finite differences of the lifted field") {
  Rng rng(99);
  auto psi = [](double r) { return std::exp(-0.7 * r * r) * (1.0 + 0.3 * r * r); };
  auto dpsi = [&](double r) {
    return std::exp(-0.7 * r * r) * (0.6 * r - 1.4 * r * (1.0 + 0.3 * r * r));
  };
  auto ddpsi = [&](double r) {
    const double e = std::exp(-0.7 * r * r);
    const double f = 1.0 + 0.3 * r * r;
    return e * (0.6 - 1.4 * f - 1.4 * r * (0.6 * r) - 1.4 * r * (0.6 * r) +
                1.96 * r * r * f);
  };
  Lift3D oracle{psi};

  for (int trial = 0; trial < 100; ++trial) {
    double w[3];
    rng.unit_vector(w);
    const double r = rng.uniform(0.3, 3.0);
    double x[3] = {r * w[0], r * w[1], r * w[2]};

    RadialJet s;
    s.psi = psi(r);
    s.dpsi = dpsi(r);
    s.ddpsi = ddpsi(r);
    const auto J = lift_jet(s, r, w);

    const double eps = 1e-5;
    for (int a = 0; a < 3; ++a) {
      const auto da = oracle.d(a, x, eps);
      for (int i = 0; i < 3; ++i)
        REQUIRE(J.du[a + 1][i] == Catch::Approx(da[i]).margin(5e-9));
      for (int b = a; b < 3; ++b) {
        const auto dab = oracle.dd(a, b, x, 1e-4);
        for (int i = 0; i < 3; ++i) {
          REQUIRE(J.ddu[a + 1][b + 1][i] == Catch::Approx(dab[i]).margin(5e-6));
          REQUIRE(J.ddu[a + 1][b + 1][i] == J.ddu[b + 1][a + 1][i]);
        }
      }
    }
  }
}

TEST_CASE("StateJets + lift_to_jet: grid path agrees with analytic jets") {
  RadialGrid g(8.0, 512);
  auto psi_f = [](double r) { return std::exp(-r * r); };
  StateVector s(RadialProfile::sample(g, psi_f),
                RadialProfile::sample(g, [](double r) { return 0.1 * std::exp(-2 * r * r); }),
                0.0);
  RadialProfile psidd(g);  // arbitrary for this test
  for (int j = 0; j < g.n; ++j) psidd[j] = 0.25 * psi_f(g.r(j));

  StateJets jets(s, psidd);
  const int j = 37;
  const double r = g.r(j);
  const auto J = lift_to_jet(jets, j);
  REQUIRE(J.u[0] == Catch::Approx(r * psi_f(r)).epsilon(1e-12));
  REQUIRE(J.du[1][0] ==
          Catch::Approx(psi_f(r) + r * (-2 * r * psi_f(r))).margin(1e-6));
  REQUIRE(J.ddu[0][0][0] == Catch::Approx(r * 0.25 * psi_f(r)).epsilon(1e-12));
  REQUIRE_THROWS_AS(jets.at(g.n), std::out_of_range);
}

TEST_CASE("apply_scaling: zero state, static state, and the [S,d_t] commutator") {
  RadialGrid g(8.0, 256);
  StateVector zero(RadialProfile{g}, RadialProfile{g}, 1.0);
  const auto sz = apply_scaling(zero, RadialProfile{g});
  for (int j = 0; j < g.n; ++j) {
    REQUIRE(sz.chi[j] == 0.0);
    REQUIRE(sz.chidot[j] == 0.0);
  }

  // static psi at t = 0: Su = x (r psi' + psi)
  auto psi_f = [](double r) { return std::cos(r) * std::exp(-0.3 * r * r); };
  StateVector st(RadialProfile::sample(g, psi_f), RadialProfile(g), 0.0);
  const auto sc = apply_scaling(st, RadialProfile(g));
  // oracle: 3-D evaluation of (S u)^1 / x_1 = t psidot + r psi' + psi at
  // off-axis points via finite differences of psi
  for (int j : {5, 60, 120}) {
    const double r = g.r(j);
    const double eps = 1e-6;
    const double dpsi = (psi_f(r + eps) - psi_f(r - eps)) / (2 * eps);
    REQUIRE(sc.chi[j] == Catch::Approx(r * dpsi + psi_f(r)).margin(1e-8));
  }

  // commutator: S(d_t u) - d_t(S u) = -d_t u as scalar profiles.
  // chi of the (psidot, psiddot) state minus chidot equals -psidot.
  auto psit_f = [](double r) { return std::sin(0.5 * r) * std::exp(-0.4 * r * r) * 0.2; };
  auto psitt_f = [](double r) { return 0.05 * std::exp(-0.6 * r * r); };
  const double t = 1.3;
  StateVector s(RadialProfile::sample(g, psi_f), RadialProfile::sample(g, psit_f), t);
  const auto psidd = RadialProfile::sample(g, psitt_f);
  const auto Su = apply_scaling(s, psidd);

  StateVector sdot(s.psidot, psidd, t);
  RadialProfile unused(g);
  const auto Sut = apply_scaling(sdot, unused);
  for (int j = 0; j < g.n - 4; ++j)
    REQUIRE(Sut.chi[j] - Su.chidot[j] == Catch::Approx(-psit_f(g.r(j))).margin(1e-9));
}

TEST_CASE("sup_grad_norm: matches the lifted Frobenius norm") {
  RadialGrid g(8.0, 256);
  auto psi_f = [](double r) { return std::exp(-r * r) * (1 + 0.2 * r); };
  StateVector s(RadialProfile::sample(g, psi_f), RadialProfile(g), 0.0);
  const double sup = sup_grad_norm(s);

  StateJets jets(s, RadialProfile(g));
  double worst = 0.0;
  for (int j = 0; j < g.n; ++j) {
    const auto J = lift_to_jet(jets, j);
    double fro = 0.0;
    for (int a = 1; a < 4; ++a)
      for (int i = 0; i < 3; ++i) fro += J.du[a][i] * J.du[a][i];
    worst = std::max(worst, std::sqrt(fro));
  }
  REQUIRE(sup == Catch::Approx(worst).epsilon(1e-12));
}
