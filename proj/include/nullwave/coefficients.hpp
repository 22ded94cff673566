#pragma once

// Material constants of the cubic stored-energy model.
//
// c1, c2 are the pressure and shear wave speeds of the linear part
// (0 < c2 < c1; c1 is normalized to 1 for the reduced radial dynamics).
// d1..d5 parameterize the cubic part of the stored energy.  d1 = 0 is
// the null condition; d2 multiplies vorticity terms that vanish
// identically on curl-free fields and never enters the reduced dynamics.

#include <stdexcept>
#include <string>

namespace nullwave {

struct CoefficientSet {
  double c1 = 1.0;  // pressure wave speed
  double c2 = 0.5;  // shear wave speed
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
  double d4 = 0.0;
  double d5 = 0.0;

  bool null_condition() const { return d1 == 0.0; }

  void validate() const {
    if (!(0.0 < c2 && c2 < c1))
      throw std::invalid_argument("CoefficientSet: requires 0 < c2 < c1, got c1=" +
                                  std::to_string(c1) + " c2=" + std::to_string(c2));
  }
};

}  // namespace nullwave
