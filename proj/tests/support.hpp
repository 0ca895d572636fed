#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qcurv/integrator.hpp"
#include "qcurv/taylor.hpp"
#include "qcurv/transforms.hpp"

namespace qcurv::test {

// Jet of (cosh t)^-gamma at t, the cylinder picture of the bubble.
inline Jet6 bubble_jet(const DimensionParams& params, double t) {
  const auto j = pow(cosh(TaylorSeries::variable(t, 6)), -params.gamma).to_jet();
  Jet6 out{};
  std::copy_n(j.begin(), 6, out.begin());
  return out;
}

inline double relative_error(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Jets of a positive profile given as a function built from TaylorSeries operations.
template <class F>
RadialProfile profile_from(int n, const std::vector<double>& grid, F&& f) {
  RadialProfile p;
  p.n = n;
  p.order = 6;
  p.r = grid;
  for (double r : grid) {
    const auto j = f(TaylorSeries::variable(r, 6)).to_jet();
    Jet7 jet{};
    std::copy_n(j.begin(), 7, jet.begin());
    p.u.push_back(jet[0]);
    p.jets.push_back(jet);
  }
  return p;
}

}  // namespace qcurv::test
