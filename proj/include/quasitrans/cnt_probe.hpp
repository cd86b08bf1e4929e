#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>

#include "quasitrans/curves.hpp"

namespace quasitrans {

using PointEvaluator = std::function<Complex(Complex)>;

struct CntTolerance {
  double increment = 1e-8;     ///< last Richardson increment on each ray
  double disagreement = 1e-7;  ///< |limit along ray 1 − limit along ray 2|
};

struct LimitEstimate {
  Complex value;  ///< mean of the two ray limits
  std::array<Complex, 2> ray_limits{};
  double last_increment = 0.0;
  double ray_disagreement = 0.0;
  bool converged = false;
};

/// Limit of f at `vertex` along the two rays vertex + d·inward·e^{±i·half_angle}
/// sampled at the given decreasing distances. Each ray sequence is
/// Richardson-extrapolated assuming geometric ratio 2 between distances.
LimitEstimate approach_limit(const PointEvaluator& f, Complex vertex,
                             Complex inward, double half_angle,
                             std::span<const double> distances,
                             const CntTolerance& tol = {});

/// Non-tangential limit at p ∈ 𝕊¹ of a function on the unit disk, probed
/// along two rays inside the Stolz angle {arg(1 − p̄z) < alpha}: the rays
/// z = p(1 − ρe^{±iα/2}) at ρ = 2^{−k}, k = 1..n_steps.
LimitEstimate cnt_probe(const PointEvaluator& f, Complex boundary_point,
                        double alpha, int n_steps, const CntTolerance& tol = {});

}  // namespace quasitrans
