#pragma once

// The commuted-field plan: Z = (d_1, d_2, d_3, S), Z^a = d^{a_s} S^{a_4}
// over the index set { |a| <= 2, a_4 <= 1 }, together with the Leibniz
// decomposition used when Z^a is commuted through box u = N(u,u):
//
//     box Z^a u = sum_{b+c+d=a} N_d(Z^b u, Z^c u),
//
// where every N_d is +/- N.  The only commutator source is S
// (box S u = (S+2) box u and S N(u,v) = N(Su,v) + N(u,Sv) - 3 N(u,v)),
// which contributes the base decomposition { (S,0,+1), (0,S,+1), (0,0,-1) };
// spatial derivatives distribute by plain Leibniz.

#include <array>
#include <string>
#include <vector>

#include "angular.hpp"

namespace nullwave {

struct MultiIndex {
  std::array<int, 3> sp{0, 0, 0};  // spatial multi-index a_1..a_3
  int s = 0;                       // a_4 (scaling), 0 or 1

  int spatial_order() const { return sp[0] + sp[1] + sp[2]; }
  int order() const { return spatial_order() + s; }

  bool operator==(const MultiIndex& o) const { return sp == o.sp && s == o.s; }

  std::string name() const {
    std::string out;
    static const char* dn[3] = {"d1", "d2", "d3"};
    for (int ax = 0; ax < 3; ++ax)
      for (int q = 0; q < sp[ax]; ++q) out += dn[ax];
    if (s) out += "S";
    if (out.empty()) out = "id";
    return out;
  }
};

// all multi-indices with |a| <= k-1, a_4 <= 1, in a fixed deterministic order
inline std::vector<MultiIndex> multi_index_set(int k) {
  std::vector<MultiIndex> out;
  const int maxo = k - 1;
  for (int total = 0; total <= maxo; ++total)
    for (int s = 0; s <= std::min(1, total); ++s) {
      const int so = total - s;
      for (int a1 = so; a1 >= 0; --a1)
        for (int a2 = so - a1; a2 >= 0; --a2) {
          const int a3 = so - a1 - a2;
          out.push_back(MultiIndex{{a1, a2, a3}, s});
        }
    }
  return out;
}

// symbolic field Z^a u (S applied first, then the spatial derivatives)
inline VectorField build_Z_field(const MultiIndex& a) {
  VectorField f = a.s ? field_Su() : field_u();
  for (int ax = 0; ax < 3; ++ax)
    for (int q = 0; q < a.sp[ax]; ++q) f = d_x(f, ax);
  return f;
}

// one term of box Z^a u = sum kappa * N(Z^b u, Z^c u)
struct CommutedTerm {
  MultiIndex b, c;
  double kappa = 1.0;
};

// full decomposition for one multi-index (duplicates merged)
inline std::vector<CommutedTerm> commuted_nonlinearity(const MultiIndex& a) {
  std::vector<CommutedTerm> terms;
  if (a.s == 0) {
    terms.push_back({MultiIndex{}, MultiIndex{}, 1.0});
  } else {
    MultiIndex S;
    S.s = 1;
    terms.push_back({S, MultiIndex{}, 1.0});
    terms.push_back({MultiIndex{}, S, 1.0});
    terms.push_back({MultiIndex{}, MultiIndex{}, -1.0});
  }
  // distribute the spatial derivatives by Leibniz
  for (int ax = 0; ax < 3; ++ax)
    for (int q = 0; q < a.sp[ax]; ++q) {
      std::vector<CommutedTerm> next;
      for (const auto& t : terms) {
        CommutedTerm left = t;
        left.b.sp[ax] += 1;
        next.push_back(left);
        CommutedTerm right = t;
        right.c.sp[ax] += 1;
        next.push_back(right);
      }
      terms = std::move(next);
    }
  // merge duplicates (deterministic order)
  std::vector<CommutedTerm> merged;
  for (const auto& t : terms) {
    bool found = false;
    for (auto& m : merged)
      if (m.b == t.b && m.c == t.c) {
        m.kappa += t.kappa;
        found = true;
        break;
      }
    if (!found) merged.push_back(t);
  }
  return merged;
}

}  // namespace nullwave
