#include "quasitrans/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quasitrans/error.hpp"

namespace quasitrans {

namespace {

constexpr double kMergeSlack = 1e-14;

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

// |e^{ia} − e^{ib}|
double chord(double a, double b) { return 2.0 * std::abs(std::sin(0.5 * (a - b))); }

std::vector<double> candidate_grid(const BoundarySet& set, int count) {
  std::vector<double> grid;
  if (set.is_full_circle()) {
    grid.reserve(count);
    for (int j = 0; j < count; ++j) grid.push_back(kTwoPi * j / count);
    return grid;
  }
  int points = 0;
  double measure = 0.0;
  for (const auto& arc : set.arcs()) {
    if (arc.length > 0.0) {
      measure += arc.length;
    } else {
      ++points;
    }
  }
  const int budget = std::max(0, count - points);
  for (const auto& arc : set.arcs()) {
    if (arc.length == 0.0) {
      grid.push_back(arc.start);
      continue;
    }
    const int m = std::max(2, static_cast<int>(std::floor(budget * arc.length / measure)));
    for (int j = 0; j < m; ++j) {
      const double u = 0.5 * (1.0 - std::cos(M_PI * j / (m - 1)));
      grid.push_back(wrap_angle(arc.start + u * arc.length));
    }
  }
  return grid;
}

}  // namespace

BoundarySet::BoundarySet(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {}

BoundarySet BoundarySet::full_circle() { return BoundarySet({Arc{0.0, kTwoPi}}); }

BoundarySet BoundarySet::from_intervals(
    const std::vector<std::pair<double, double>>& intervals) {
  std::vector<Arc> arcs;
  for (const auto& [lo, hi] : intervals) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      throw InvalidArgument("arc endpoints must be finite");
    }
    const double len = hi - lo;
    if (len < 0.0 || len > kTwoPi + 1e-12) {
      throw InvalidArgument("arc [θ1, θ2] needs θ1 ≤ θ2 ≤ θ1 + 2π");
    }
    if (len >= kTwoPi) return full_circle();
    arcs.push_back({wrap_angle(lo), len});
  }
  if (arcs.empty()) return {};

  std::sort(arcs.begin(), arcs.end(),
            [](const Arc& a, const Arc& b) { return a.start < b.start; });
  std::vector<Arc> merged;
  for (const auto& arc : arcs) {
    if (!merged.empty() && arc.start <= merged.back().end() + kMergeSlack) {
      auto& last = merged.back();
      last.length = std::max(last.end(), arc.end()) - last.start;
    } else {
      merged.push_back(arc);
    }
  }
  // The last arc may run past 2π into the first ones.
  while (merged.size() > 1 &&
         merged.back().end() >= merged.front().start + kTwoPi - kMergeSlack) {
    auto& last = merged.back();
    last.length = std::max(last.end(), merged.front().end() + kTwoPi) - last.start;
    merged.erase(merged.begin());
  }
  if (merged.size() == 1 && merged.front().length >= kTwoPi - kMergeSlack) {
    return full_circle();
  }
  return BoundarySet(std::move(merged));
}

bool BoundarySet::is_full_circle() const {
  return arcs_.size() == 1 && arcs_.front().length >= kTwoPi;
}

double BoundarySet::measure() const {
  double m = 0.0;
  for (const auto& arc : arcs_) m += arc.length;
  return m;
}

bool BoundarySet::contains(double theta) const {
  const double t = wrap_angle(theta);
  for (const auto& arc : arcs_) {
    const double offset = wrap_angle(t - arc.start);
    if (offset <= arc.length + kMergeSlack) return true;
  }
  return false;
}

std::vector<double> fekete_points(const BoundarySet& set, int n,
                                  const FeketeOptions& options) {
  if (n < 3) throw InvalidArgument("fekete_points needs n >= 3");
  if (set.empty()) return {};
  const auto grid = candidate_grid(set, options.candidates);
  const std::size_t m = grid.size();
  if (m < static_cast<std::size_t>(n)) return {};

  // potential[c] = Σ log|c − x_j| over chosen x_j other than c itself.
  std::vector<double> potential(m, 0.0);
  std::vector<char> used(m, 0);
  std::vector<std::size_t> chosen;
  chosen.reserve(n);

  auto shift = [&](std::size_t idx, double sign) {
    for (std::size_t c = 0; c < m; ++c) {
      if (c != idx) potential[c] += sign * std::log(chord(grid[c], grid[idx]));
    }
  };
  auto best_free = [&](std::size_t fallback) {
    std::size_t best = fallback;
    double best_val = fallback < m ? potential[fallback] : -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < m; ++c) {
      if (used[c]) continue;
      if (best == m || potential[c] > best_val) {
        best = c;
        best_val = potential[c];
      }
    }
    return best;
  };

  chosen.push_back(0);
  used[0] = 1;
  shift(0, 1.0);
  while (chosen.size() < static_cast<std::size_t>(n)) {
    const std::size_t best = best_free(m);
    chosen.push_back(best);
    used[best] = 1;
    shift(best, 1.0);
  }

  for (int sweep = 0; sweep < options.exchange_sweeps; ++sweep) {
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      const std::size_t current = chosen[i];
      shift(current, -1.0);
      used[current] = 0;
      const std::size_t best = best_free(current);
      chosen[i] = best;
      used[best] = 1;
      shift(best, 1.0);
    }
  }

  std::vector<double> angles;
  angles.reserve(chosen.size());
  for (std::size_t idx : chosen) angles.push_back(grid[idx]);
  return angles;
}

double fekete_capacity(const BoundarySet& set, int n, const FeketeOptions& options) {
  if (n < 3) throw InvalidArgument("fekete_capacity needs n >= 3");
  if (set.empty()) return 0.0;
  const auto pts = fekete_points(set, n, options);
  if (pts.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = chord(pts[i], pts[j]);
      if (d == 0.0) return 0.0;
      acc += std::log(d);
    }
  }
  return std::exp(2.0 * acc / (double(n) * (n - 1)));
}

CircleMap::CircleMap(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() != values_.size()) {
    throw InvalidArgument("circle map: knot and value counts differ");
  }
  if (knots_.size() < 256) throw InvalidArgument("circle map needs >= 256 knots");
  for (std::size_t j = 1; j < knots_.size(); ++j) {
    if (!(knots_[j] > knots_[j - 1])) throw InvalidArgument("circle map knots must increase");
    if (!(values_[j] > values_[j - 1])) {
      throw InvalidArgument("circle map samples are not strictly increasing");
    }
  }
  if (!(knots_.back() < knots_.front() + kTwoPi)) {
    throw InvalidArgument("circle map knots must span less than one period");
  }
  if (!(values_.back() < values_.front() + kTwoPi)) {
    throw InvalidArgument("circle map samples are not strictly increasing across the period");
  }
}

CircleMap CircleMap::sample(const std::function<double(double)>& lift, int knots) {
  std::vector<double> k(knots), v(knots);
  for (int j = 0; j < knots; ++j) {
    k[j] = kTwoPi * j / knots;
    v[j] = lift(k[j]);
  }
  return CircleMap(std::move(k), std::move(v));
}

CircleMap CircleMap::identity(int knots) {
  return sample([](double t) { return t; }, knots);
}

CircleMap CircleMap::rotation(double angle, int knots) {
  return sample([angle](double t) { return t + angle; }, knots);
}

CircleMap CircleMap::disk_automorphism(Complex p, int knots) {
  if (std::abs(p) >= 1.0) throw InvalidArgument("disk automorphism needs |p| < 1");
  std::vector<double> k(knots), v(knots);
  double prev = 0.0;
  for (int j = 0; j < knots; ++j) {
    k[j] = kTwoPi * j / knots;
    const Complex z = std::polar(1.0, k[j]);
    double a = std::arg((z - p) / (1.0 - std::conj(p) * z));
    if (j > 0) {
      while (a < prev - M_PI) a += kTwoPi;
      while (a > prev + M_PI) a -= kTwoPi;
    }
    v[j] = prev = a;
  }
  return CircleMap(std::move(k), std::move(v));
}

CircleMap CircleMap::piecewise_linear(double slope, int knots) {
  if (!(slope > 0.0 && slope < 2.0)) throw InvalidArgument("slope must lie in (0, 2)");
  return sample(
      [slope](double t) {
        return t < M_PI ? slope * t : slope * M_PI + (2.0 - slope) * (t - M_PI);
      },
      knots);
}

double CircleMap::operator()(double theta) const {
  const double base = knots_.front();
  const double turns = std::floor((theta - base) / kTwoPi);
  const double t = theta - turns * kTwoPi;
  const double shift = turns * kTwoPi;
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
  const std::size_t lo = hi - 1;
  const double k0 = knots_[lo];
  const double v0 = values_[lo];
  const double k1 = hi < knots_.size() ? knots_[hi] : knots_.front() + kTwoPi;
  const double v1 = hi < knots_.size() ? values_[hi] : values_.front() + kTwoPi;
  return shift + v0 + (v1 - v0) * (t - k0) / (k1 - k0);
}

BoundarySet pushforward(const BoundarySet& set, const CircleMap& phi) {
  if (set.is_full_circle()) return set;
  std::vector<std::pair<double, double>> images;
  for (const auto& arc : set.arcs()) {
    const double a = phi(arc.start);
    const double b = phi(arc.end());
    images.emplace_back(a, std::max(a, b));
  }
  return BoundarySet::from_intervals(images);
}

}  // namespace quasitrans
