#include "quasitrans/cnt_probe.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "quasitrans/error.hpp"

namespace quasitrans {

namespace {

constexpr int kMaxRichardsonOrder = 4;

struct RayLimit {
  Complex value;
  double increment;
};

RayLimit extrapolate(const std::vector<Complex>& values) {
  const std::size_t n = values.size();
  const int order = std::min<int>(kMaxRichardsonOrder, static_cast<int>(n) - 2);
  std::vector<Complex> col = values;
  for (int j = 1; j <= order; ++j) {
    const double factor = std::ldexp(1.0, j) - 1.0;
    std::vector<Complex> next(col.size() - 1);
    for (std::size_t k = 1; k < col.size(); ++k) {
      next[k - 1] = col[k] + (col[k] - col[k - 1]) / factor;
    }
    col = std::move(next);
  }
  return {col.back(), std::abs(col.back() - col[col.size() - 2])};
}

}  // namespace

LimitEstimate approach_limit(const PointEvaluator& f, Complex vertex,
                             Complex inward, double half_angle,
                             std::span<const double> distances,
                             const CntTolerance& tol) {
  if (distances.size() < 3) throw InvalidArgument("approach_limit needs >= 3 distances");
  inward /= std::abs(inward);
  LimitEstimate est;
  double worst_increment = 0.0;
  for (int side = 0; side < 2; ++side) {
    const Complex dir = inward * std::polar(1.0, side == 0 ? half_angle : -half_angle);
    std::vector<Complex> values;
    values.reserve(distances.size());
    for (double d : distances) values.push_back(f(vertex + d * dir));
    const auto ray = extrapolate(values);
    est.ray_limits[side] = ray.value;
    worst_increment = std::max(worst_increment, ray.increment);
  }
  est.last_increment = worst_increment;
  est.ray_disagreement = std::abs(est.ray_limits[0] - est.ray_limits[1]);
  est.value = 0.5 * (est.ray_limits[0] + est.ray_limits[1]);
  est.converged = std::isfinite(est.last_increment) &&
                  est.last_increment < tol.increment &&
                  est.ray_disagreement < tol.disagreement;
  return est;
}

LimitEstimate cnt_probe(const PointEvaluator& f, Complex boundary_point,
                        double alpha, int n_steps, const CntTolerance& tol) {
  if (std::abs(std::abs(boundary_point) - 1.0) > 1e-12) {
    throw InvalidArgument("cnt_probe: boundary point must lie on the unit circle");
  }
  if (!(alpha > 0.0 && alpha < 0.5 * M_PI)) {
    throw InvalidArgument("cnt_probe: alpha must lie in (0, pi/2)");
  }
  if (n_steps < 8) throw InvalidArgument("cnt_probe: n_steps must be >= 8");
  std::vector<double> radii(n_steps);
  for (int k = 1; k <= n_steps; ++k) radii[k - 1] = std::ldexp(1.0, -k);
  // z = p(1 − ρe^{iβ}) = p + ρ·(−p)·e^{iβ}
  return approach_limit(f, boundary_point, -boundary_point, 0.5 * alpha, radii, tol);
}

}  // namespace quasitrans
