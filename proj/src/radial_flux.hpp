// Shared discrete geometry of the radial flux form
//   (v')^{n-1} (v' + s v'') = s^{1-n}/n d/ds [ s^n (v')^n ].
// solve_ma_radial and the radial ma_density use the same midpoint
// derivatives, half-node powers and cell weights, which makes them exact
// discrete inverses of each other: the monotonicity of the iteration's
// Lyapunov product then holds to roundoff instead of O(h^2).
#pragma once

#include <cmath>
#include <vector>

#include "cmae/geometry.hpp"

namespace cmae::detail {

inline double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

// (s_{i+1/2})^n for i = 0 .. N-2.
inline std::vector<double> halfnode_powers(const RadialDomain& d) {
  const int N = d.num_nodes();
  std::vector<double> sp(N - 1);
  for (int i = 0; i + 1 < N; ++i) sp[i] = ipow(d.s[i] + 0.5 * d.h, d.spec.n);
  return sp;
}

// Midpoint derivatives D_{i+1/2} = (v_{i+1} - v_i)/h for i = 0 .. N-2.
inline std::vector<double> midpoint_derivatives(const RadialDomain& d,
                                                const std::vector<double>& v) {
  const int N = d.num_nodes();
  std::vector<double> D(N - 1);
  for (int i = 0; i + 1 < N; ++i) D[i] = (v[i + 1] - v[i]) / d.h;
  return D;
}

}  // namespace cmae::detail
