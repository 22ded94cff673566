#pragma once

// Initial-data families for the Cauchy problem, all even in r and
// effectively compactly supported.  Amplitudes are solved so the data's
// smallness norm equals a prescribed epsilon (the norm is homogeneous of
// degree one in the amplitude, so one Newton step is exact).

#include <cmath>
#include <stdexcept>
#include <string>

#include "energies.hpp"
#include "grid.hpp"

namespace nullwave {

enum class DataFamily { Gaussian, Bump, Ring };

inline DataFamily data_family_from_string(const std::string& s) {
  if (s == "gaussian") return DataFamily::Gaussian;
  if (s == "bump") return DataFamily::Bump;
  if (s == "ring") return DataFamily::Ring;
  throw std::invalid_argument("unknown data family: " + s);
}

inline std::string to_string(DataFamily f) {
  switch (f) {
    case DataFamily::Gaussian: return "gaussian";
    case DataFamily::Bump: return "bump";
    case DataFamily::Ring: return "ring";
  }
  return "?";
}

struct DataParams {
  DataFamily family = DataFamily::Gaussian;
  double width = 1.0;   // gaussian/ring width; bump transition half of [a,b]
  double center = 3.0;  // ring center; bump plateau edge a = center, b = center+width

  // radius beyond which the profile is below ~1e-17 of its peak
  double support_radius() const {
    switch (family) {
      case DataFamily::Gaussian: return 6.5 * width;
      case DataFamily::Bump: return center + width;
      case DataFamily::Ring: return center + 6.5 * width;
    }
    return 0.0;
  }

  // unit-amplitude shape
  double shape(double r) const {
    switch (family) {
      case DataFamily::Gaussian:
        return std::exp(-(r / width) * (r / width));
      case DataFamily::Bump: {
        // C^infty plateau: 1 on [0,a], 0 beyond b = a + width
        const double a = center, b = center + width;
        const double ar = std::abs(r);
        if (ar <= a) return 1.0;
        if (ar >= b) return 0.0;
        const double x = (ar - a) / (b - a);
        auto phi = [](double y) { return y > 0.0 ? std::exp(-1.0 / y) : 0.0; };
        return phi(1.0 - x) / (phi(x) + phi(1.0 - x));
      }
      case DataFamily::Ring: {
        const double dm = (r - center) / width, dp = (r + center) / width;
        return std::exp(-dm * dm) + std::exp(-dp * dp);
      }
    }
    return 0.0;
  }
};

struct InitialData {
  RadialProfile psi0, psi1;
  double amplitude = 0.0;   // scaling applied to the unit shape
  double eps = 0.0;         // achieved smallness norm
};

// data with smallness_norm(u0, u1) = eps; u1 = 0
inline InitialData make_initial_data(const RadialGrid& grid,
                                     const DataParams& params, double eps) {
  InitialData out{RadialProfile(grid), RadialProfile(grid), 0.0, 0.0};
  if (eps == 0.0) return out;
  if (eps < 0.0) throw std::invalid_argument("make_initial_data: eps < 0");
  auto unit = RadialProfile::sample(grid, [&](double r) { return params.shape(r); });
  const double unit_norm =
      EnergyEvaluator::smallness_norm(unit, RadialProfile{grid});
  if (!(unit_norm > 0.0))
    throw std::invalid_argument("make_initial_data: degenerate shape");
  const double amp = eps / unit_norm;
  for (int j = 0; j < grid.n; ++j) out.psi0[j] = amp * unit[j];
  out.amplitude = amp;
  out.eps = eps;
  return out;
}

}  // namespace nullwave
