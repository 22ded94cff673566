#pragma once

// Exact angular reduction for fields built from the radial ansatz.
//
// Every field this project integrates is obtained from u = x psi(t,r) (or
// Su) by applying d_t, d_1..d_3 and contractions, so each component is a
// finite sum of terms
//
//     (c0 + c1 t) * r^p * B^(k)(r) * w^m,
//
// where B is one of the radial profiles psi, d_t psi, d_t^2 psi, the
// exponent m is a monomial in the direction w = x/r, and k counts radial
// derivatives.  The derivative rules
//
//     d_a [ r^p B^(k) w^m ] = (p - |m|) r^{p-1} B^(k) w^{m+e_a}
//                           + r^p B^(k+1) w^{m+e_a}
//                           + m_a r^{p-1} B^(k) w^{m-e_a}
//
// close on this class, so operators like d_i d_j S are applied symbolically
// once, and sphere integrals of products reduce to exact monomial moments
//
//     avg_{S^2} w1^p w2^q w3^s = (p-1)!!(q-1)!!(s-1)!!/(p+q+s+1)!!
//
// (zero when any exponent is odd).  Radial profiles enter only through
// per-node tables, so nothing here touches a discretization stencil.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "lift.hpp"

namespace nullwave {

// ---------------------------------------------------------------------------
// monomials and sphere moments
// ---------------------------------------------------------------------------

// exponents packed 5 bits per axis: key = p | q<<5 | s<<10
using MonoKey = std::uint16_t;

constexpr MonoKey mono_key(int p, int q, int s) {
  return (MonoKey)(p | (q << 5) | (s << 10));
}
constexpr int mono_exp(MonoKey k, int axis) { return (k >> (5 * axis)) & 31; }
constexpr int mono_degree(MonoKey k) {
  return mono_exp(k, 0) + mono_exp(k, 1) + mono_exp(k, 2);
}
constexpr MonoKey mono_times(MonoKey k, int axis) {
  return (MonoKey)(k + (1 << (5 * axis)));
}
constexpr MonoKey mono_div(MonoKey k, int axis) {
  return (MonoKey)(k - (1 << (5 * axis)));
}
// any odd exponent => the sphere moment vanishes
constexpr bool mono_odd(MonoKey k) { return (k & 0x0421) != 0; }

// average over S^2 of w^m
inline double mono_moment(MonoKey k) {
  static const std::vector<double> table = [] {
    std::vector<double> t(1 << 15, 0.0);
    auto dfact = [](int n) {  // (n)!! with (-1)!! = 1
      double v = 1.0;
      for (int q = n; q > 1; q -= 2) v *= q;
      return v;
    };
    for (int p = 0; p <= 24; p += 2)
      for (int q = 0; p + q <= 24; q += 2)
        for (int s = 0; p + q + s <= 24; s += 2)
          t[mono_key(p, q, s)] = dfact(p - 1) * dfact(q - 1) * dfact(s - 1) /
                                 dfact(p + q + s + 1);
    return t;
  }();
  if (mono_odd(k)) return 0.0;
  return table[k];
}

// ---------------------------------------------------------------------------
// per-node numeric polynomials in w
// ---------------------------------------------------------------------------

template <int CAP>
struct OmegaPoly {
  int n = 0;
  std::array<MonoKey, CAP> key;
  std::array<double, CAP> c;

  void clear() { n = 0; }
  void add(MonoKey k, double v) {
    if (v == 0.0) return;
    for (int i = 0; i < n; ++i)
      if (key[i] == k) {
        c[i] += v;
        return;
      }
    if (n == CAP) throw std::runtime_error("OmegaPoly capacity exceeded");
    key[n] = k;
    c[n] = v;
    ++n;
  }
  double eval(const double w[3]) const {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      double m = c[i];
      for (int ax = 0; ax < 3; ++ax)
        for (int e = mono_exp(key[i], ax); e > 0; --e) m *= w[ax];
      acc += m;
    }
    return acc;
  }
};

using Poly = OmegaPoly<48>;
using PolyWide = OmegaPoly<192>;

// avg over S^2 of P*Q
template <int A, int B>
inline double sphere_avg_pair(const OmegaPoly<A>& p, const OmegaPoly<B>& q) {
  double acc = 0.0;
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < q.n; ++j) {
      const MonoKey k = (MonoKey)(p.key[i] + q.key[j]);
      if (mono_odd(k)) continue;
      acc += p.c[i] * q.c[j] * mono_moment(k);
    }
  return acc;
}

template <int A>
inline double sphere_avg(const OmegaPoly<A>& p) {
  double acc = 0.0;
  for (int i = 0; i < p.n; ++i)
    if (!mono_odd(p.key[i])) acc += p.c[i] * mono_moment(p.key[i]);
  return acc;
}

template <int A, int B, int C>
inline void poly_mul(const OmegaPoly<A>& p, const OmegaPoly<B>& q,
                     OmegaPoly<C>& out) {
  out.clear();
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < q.n; ++j)
      out.add((MonoKey)(p.key[i] + q.key[j]), p.c[i] * q.c[j]);
}

// avg over S^2 of P*Q*R
template <int A, int B, int C>
inline double sphere_avg_triple(const OmegaPoly<A>& p, const OmegaPoly<B>& q,
                                const OmegaPoly<C>& r) {
  PolyWide pq;
  poly_mul(p, q, pq);
  return sphere_avg_pair(pq, r);
}

// ---------------------------------------------------------------------------
// symbolic fields
// ---------------------------------------------------------------------------

// radial profile chain: psi, d_t psi, d_t^2 psi
enum class Slot : std::uint8_t { Psi = 0, PsiT = 1, PsiTT = 2 };
constexpr int kSlots = 3;
// radial-derivative depth kept per slot (enough for third space
// derivatives of Su and second derivatives of psiddot-bearing fields)
constexpr int kMaxDr[kSlots] = {4, 4, 3};

struct Term {
  double c0 = 0.0, c1 = 0.0;  // coefficient c0 + c1 * t
  std::int8_t rpow = 0;
  Slot slot = Slot::Psi;
  std::int8_t dr = 0;
  MonoKey mono = 0;
};

struct ScalarField {
  std::vector<Term> terms;

  ScalarField& operator+=(const ScalarField& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    return *this;
  }
  ScalarField scaled(double f) const {
    ScalarField out = *this;
    for (auto& t : out.terms) {
      t.c0 *= f;
      t.c1 *= f;
    }
    return out;
  }
  // multiply the angular part by w_axis (used to form T = w d_t + grad)
  ScalarField times_omega(int axis) const {
    ScalarField out = *this;
    for (auto& t : out.terms) t.mono = mono_times(t.mono, axis);
    return out;
  }

  void normalize() {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
      if (a.slot != b.slot) return a.slot < b.slot;
      if (a.dr != b.dr) return a.dr < b.dr;
      if (a.rpow != b.rpow) return a.rpow < b.rpow;
      return a.mono < b.mono;
    });
    std::vector<Term> merged;
    for (const auto& t : terms) {
      if (!merged.empty()) {
        auto& m = merged.back();
        if (m.slot == t.slot && m.dr == t.dr && m.rpow == t.rpow &&
            m.mono == t.mono) {
          m.c0 += t.c0;
          m.c1 += t.c1;
          continue;
        }
      }
      merged.push_back(t);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const Term& t) {
                                  return t.c0 == 0.0 && t.c1 == 0.0;
                                }),
                 merged.end());
    terms = std::move(merged);
  }
};

inline ScalarField d_t(const ScalarField& f) {
  ScalarField out;
  for (const auto& t : f.terms) {
    if (t.c1 != 0.0) {
      Term a = t;
      a.c0 = t.c1;
      a.c1 = 0.0;
      out.terms.push_back(a);
    }
    Term b = t;
    if (b.slot == Slot::PsiTT)
      throw std::runtime_error("d_t: time-derivative depth exceeded");
    b.slot = (Slot)((int)b.slot + 1);
    out.terms.push_back(b);
  }
  out.normalize();
  return out;
}

inline ScalarField d_x(const ScalarField& f, int axis) {
  ScalarField out;
  for (const auto& t : f.terms) {
    const int deg = mono_degree(t.mono);
    // (rpow - |m|) r^{p-1} B^(k) w^{m+e_a}
    if (t.rpow - deg != 0) {
      Term a = t;
      a.c0 *= (t.rpow - deg);
      a.c1 *= (t.rpow - deg);
      a.rpow = (std::int8_t)(t.rpow - 1);
      a.mono = mono_times(t.mono, axis);
      out.terms.push_back(a);
    }
    // r^p B^(k+1) w^{m+e_a}
    Term b = t;
    b.dr = (std::int8_t)(t.dr + 1);
    if (b.dr > kMaxDr[(int)b.slot])
      throw std::runtime_error("d_x: radial-derivative depth exceeded");
    b.mono = mono_times(t.mono, axis);
    out.terms.push_back(b);
    // m_a r^{p-1} B^(k) w^{m-e_a}
    const int ea = mono_exp(t.mono, axis);
    if (ea > 0) {
      Term c = t;
      c.c0 *= ea;
      c.c1 *= ea;
      c.rpow = (std::int8_t)(t.rpow - 1);
      c.mono = mono_div(t.mono, axis);
      out.terms.push_back(c);
    }
  }
  out.normalize();
  return out;
}

using VectorField = std::array<ScalarField, 3>;

inline VectorField d_t(const VectorField& f) {
  return {d_t(f[0]), d_t(f[1]), d_t(f[2])};
}
inline VectorField d_x(const VectorField& f, int axis) {
  return {d_x(f[0], axis), d_x(f[1], axis), d_x(f[2], axis)};
}

// u^i = x_i psi = r w_i psi
inline VectorField field_u() {
  VectorField f;
  for (int i = 0; i < 3; ++i) {
    Term t;
    t.c0 = 1.0;
    t.rpow = 1;
    t.slot = Slot::Psi;
    t.mono = mono_key(i == 0 ? 1 : 0, i == 1 ? 1 : 0, i == 2 ? 1 : 0);
    f[i].terms.push_back(t);
  }
  return f;
}

// (Su)^i = x_i ( t psidot + r psi' + psi )
inline VectorField field_Su() {
  VectorField f;
  for (int i = 0; i < 3; ++i) {
    const MonoKey wi = mono_key(i == 0 ? 1 : 0, i == 1 ? 1 : 0, i == 2 ? 1 : 0);
    Term a;  // t * r * psidot
    a.c1 = 1.0;
    a.rpow = 1;
    a.slot = Slot::PsiT;
    a.mono = wi;
    Term b;  // r^2 * psi'
    b.c0 = 1.0;
    b.rpow = 2;
    b.slot = Slot::Psi;
    b.dr = 1;
    b.mono = wi;
    Term c;  // r * psi
    c.c0 = 1.0;
    c.rpow = 1;
    c.slot = Slot::Psi;
    c.mono = wi;
    f[i].terms = {a, b, c};
  }
  return f;
}

// ---------------------------------------------------------------------------
// radial evaluation tables
// ---------------------------------------------------------------------------

// Values of the slot profiles and their radial derivatives at every node.
// psidd must be the equation-substituted second time derivative whenever
// time derivatives of the state are evaluated.
struct RadialTable {
  RadialGrid grid;
  double t = 0.0;
  // values[slot][dr] over nodes
  std::array<std::vector<RadialProfile>, kSlots> values;

  RadialTable(const StateVector& s, const RadialProfile& psidd)
      : grid(s.grid()), t(s.t) {
    fill((int)Slot::Psi, s.psi);
    fill((int)Slot::PsiT, s.psidot);
    fill((int)Slot::PsiTT, psidd);
  }

  double value(Slot slot, int dr, int node) const {
    return values[(int)slot][dr][node];
  }

 private:
  void fill(int slot, const RadialProfile& base) {
    // base profiles are even in r; each derivative flips the parity
    auto& chain = values[slot];
    chain.push_back(base);
    Parity par = Parity::Even;
    for (int k = 1; k <= kMaxDr[slot]; ++k) {
      chain.push_back(differentiate(chain.back(), 1, par));
      par = flip(par);
    }
  }
};

// evaluate a symbolic field at one node into a numeric polynomial in w
template <int CAP>
inline void eval_field(const ScalarField& f, const RadialTable& tab, int node,
                       OmegaPoly<CAP>& out) {
  out.clear();
  const double r = tab.grid.r(node);
  for (const auto& t : f.terms) {
    double coeff = t.c0 + t.c1 * tab.t;
    if (coeff == 0.0) continue;
    coeff *= std::pow(r, (double)t.rpow) * tab.value(t.slot, t.dr, node);
    out.add(t.mono, coeff);
  }
}

}  // namespace nullwave
