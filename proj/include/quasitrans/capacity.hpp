#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "quasitrans/curves.hpp"

namespace quasitrans {

/// Closed arc {start + s : 0 ≤ s ≤ length} of the unit circle, angles in
/// radians. Length 0 is a single point; length 2π is the whole circle.
struct Arc {
  double start = 0.0;
  double length = 0.0;

  double end() const { return start + length; }
};

/// Closed subset of 𝕊¹ as a finite union of arcs. Normalization reduces
/// starts to [0, 2π), sorts them, and merges overlapping or touching arcs.
class BoundarySet {
 public:
  BoundarySet() = default;

  /// Arcs given as angle intervals [θ₁, θ₂] with θ₁ ≤ θ₂ ≤ θ₁ + 2π.
  static BoundarySet from_intervals(const std::vector<std::pair<double, double>>& intervals);
  static BoundarySet full_circle();

  const std::vector<Arc>& arcs() const { return arcs_; }
  bool empty() const { return arcs_.empty(); }
  bool is_full_circle() const;
  double measure() const;
  bool contains(double theta) const;

 private:
  explicit BoundarySet(std::vector<Arc> arcs);

  std::vector<Arc> arcs_;
};

struct FeketeOptions {
  int candidates = 4096;
  int exchange_sweeps = 3;
};

/// Near-Fekete points of the set: greedy Leja selection on a candidate grid
/// (Chebyshev-clustered toward arc endpoints), refined by single-point
/// exchange sweeps. Returned as angles.
std::vector<double> fekete_points(const BoundarySet& set, int n,
                                  const FeketeOptions& options = {});

/// Transfinite-diameter estimate d_n = (Π_{i<j}|x_i − x_j|)^{2/(n(n−1))}
/// over the near-Fekete points. Decreases toward the logarithmic capacity as
/// n grows. Returns 0 for the empty set; throws InvalidArgument for n < 3.
double fekete_capacity(const BoundarySet& set, int n, const FeketeOptions& options = {});

/// Orientation-preserving circle homeomorphism given by a strictly increasing
/// lift φ with φ(θ + 2π) = φ(θ) + 2π, sampled at knots covering one period
/// and interpolated linearly.
class CircleMap {
 public:
  /// Throws InvalidArgument when there are fewer than 256 knots or the
  /// samples are not strictly increasing within one period.
  CircleMap(std::vector<double> knots, std::vector<double> values);

  /// Samples `lift` at `knots` equispaced angles over [0, 2π).
  static CircleMap sample(const std::function<double(double)>& lift, int knots = 1024);
  static CircleMap identity(int knots = 1024);
  static CircleMap rotation(double angle, int knots = 1024);
  /// Boundary map of the disk automorphism z ↦ (z − p)/(1 − p̄z).
  static CircleMap disk_automorphism(Complex p, int knots = 1024);
  /// Piecewise-linear map with slope `slope` on [0, π) and the complementary
  /// slope on [π, 2π); quasisymmetric for any slope in (0, 2).
  static CircleMap piecewise_linear(double slope, int knots = 1024);

  double operator()(double theta) const;

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

/// Image of each arc under φ, re-normalized.
BoundarySet pushforward(const BoundarySet& set, const CircleMap& phi);

}  // namespace quasitrans
