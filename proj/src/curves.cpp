#include "quasitrans/curves.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <unsupported/Eigen/FFT>

#include "quasitrans/error.hpp"

namespace quasitrans {

namespace {

constexpr int kInvariantSamples = 512;
constexpr double kInjectivityTol = 1e-6;
constexpr double kSpeedTol = 1e-6;

std::vector<FourierTerm> normalize_terms(std::vector<FourierTerm> terms) {
  std::map<int, Complex> merged;
  for (const auto& t : terms) merged[t.k] += t.c;
  std::vector<FourierTerm> out;
  for (const auto& [k, c] : merged) {
    if (c != Complex(0.0, 0.0)) out.push_back({k, c});
  }
  return out;
}

std::vector<Complex> sample(const CurveSpec& curve, int m) {
  std::vector<Complex> pts(m);
  for (int j = 0; j < m; ++j) pts[j] = curve.eval(kTwoPi * j / m);
  return pts;
}

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

// Transversal crossings between samples escape the separation test.
bool polygon_self_crosses(const std::vector<Complex>& pts) {
  const int m = static_cast<int>(pts.size());
  for (int i = 0; i < m; ++i) {
    const Complex a = pts[i];
    const Complex b = pts[(i + 1) % m];
    for (int j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      if (segments_cross(a, b, pts[j], pts[(j + 1) % m])) return true;
    }
  }
  return false;
}

}  // namespace

CurveSpec::CurveSpec(std::vector<FourierTerm> terms, std::string tag,
                     double param)
    : terms_(normalize_terms(std::move(terms))),
      family_tag_(std::move(tag)),
      distortion_param_(param) {
  for (const auto& t : terms_) degree_ = std::max(degree_, std::abs(t.k));
}

CurveSpec CurveSpec::unchecked(std::vector<FourierTerm> terms,
                               std::string family_tag,
                               double distortion_param) {
  return CurveSpec(std::move(terms), std::move(family_tag), distortion_param);
}

CurveSpec CurveSpec::from_coefficients(std::vector<FourierTerm> terms,
                                       std::string family_tag,
                                       double distortion_param) {
  CurveSpec curve(std::move(terms), std::move(family_tag), distortion_param);
  if (curve.terms_.empty()) {
    throw InvalidArgument("curve has no nonzero coefficients");
  }
  const auto diag = diagnose(curve, kInvariantSamples);
  if (!diag.regular) {
    throw InvalidArgument("curve speed vanishes (min |γ'| = " +
                          std::to_string(diag.min_speed) + ")");
  }
  if (!diag.injective) {
    throw InvalidArgument("curve is not injective (min separation = " +
                          std::to_string(diag.min_separation) + ")");
  }
  if (!diag.positively_oriented) {
    throw InvalidArgument("curve is not positively oriented (signed area = " +
                          std::to_string(diag.signed_area) + ")");
  }
  return curve;
}

Complex CurveSpec::eval(double t) const {
  Complex z(0.0, 0.0);
  for (const auto& term : terms_) z += term.c * std::polar(1.0, term.k * t);
  return z;
}

Complex CurveSpec::derivative(double t) const {
  Complex z(0.0, 0.0);
  for (const auto& term : terms_) {
    z += term.c * Complex(0.0, term.k) * std::polar(1.0, term.k * t);
  }
  return z;
}

Complex CurveSpec::second_derivative(double t) const {
  Complex z(0.0, 0.0);
  for (const auto& term : terms_) {
    z -= term.c * double(term.k) * double(term.k) * std::polar(1.0, term.k * t);
  }
  return z;
}

Complex CurveSpec::coefficient(int k) const {
  for (const auto& term : terms_) {
    if (term.k == k) return term.c;
  }
  return {0.0, 0.0};
}

CurveDiagnostics diagnose(const CurveSpec& curve, int samples) {
  if (samples < 8) throw InvalidArgument("diagnose needs at least 8 samples");
  CurveDiagnostics d;
  const auto pts = sample(curve, samples);

  d.min_speed = std::numeric_limits<double>::infinity();
  for (int j = 0; j < samples; ++j) {
    d.min_speed = std::min(d.min_speed,
                           std::abs(curve.derivative(kTwoPi * j / samples)));
  }

  d.min_separation = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    for (int j = i + 1; j < samples; ++j) {
      const double dist = std::abs(pts[i] - pts[j]);
      d.diameter = std::max(d.diameter, dist);
      const int gap = j - i;
      if (gap == 1 || gap == samples - 1) continue;
      d.min_separation = std::min(d.min_separation, dist);
    }
  }

  d.signed_area = enclosed_area(curve);
  d.injective = d.min_separation > kInjectivityTol * d.diameter && !polygon_self_crosses(pts);
  d.regular = d.min_speed > kSpeedTol * d.diameter;
  d.positively_oriented = d.signed_area > 0.0;
  return d;
}

double enclosed_area(const CurveSpec& curve, int points) {
  if (points <= 0) points = std::max(256, 4 * curve.degree() + 16);
  double acc = 0.0;
  for (int j = 0; j < points; ++j) {
    const double t = kTwoPi * j / points;
    acc += std::imag(std::conj(curve.eval(t)) * curve.derivative(t));
  }
  return 0.5 * acc * kTwoPi / points;
}

double three_point_constant(const CurveSpec& curve, int m) {
  if (m < 16) throw InvalidArgument("three_point_constant needs m >= 16");
  const auto pts = sample(curve, m);
  const std::size_t mm = static_cast<std::size_t>(m);

  // diam[L-1][s]: diameter of the L consecutive samples starting at s.
  // diam(s, L) = max(diam(s, L-1), diam(s+1, L-1), |x_s - x_{s+L-1}|).
  std::vector<std::vector<double>> diam(mm, std::vector<double>(mm, 0.0));
  for (std::size_t len = 2; len <= mm; ++len) {
    auto& row = diam[len - 1];
    const auto& prev = diam[len - 2];
    for (std::size_t s = 0; s < mm; ++s) {
      const std::size_t e = (s + len - 1) % mm;
      row[s] = std::max({prev[s], prev[(s + 1) % mm], std::abs(pts[s] - pts[e])});
    }
  }
  const double scale = diam[mm - 1][0];

  double best = 0.0;
  for (std::size_t i = 0; i < mm; ++i) {
    for (std::size_t j = i + 1; j < mm; ++j) {
      const double chord = std::abs(pts[i] - pts[j]);
      if (chord <= 1e-14 * scale) {
        throw DomainError("degenerate curve: samples " + std::to_string(i) +
                          " and " + std::to_string(j) + " coincide");
      }
      const std::size_t forward = j - i + 1;
      const std::size_t backward = mm - (j - i) + 1;
      const double arc = std::min(diam[forward - 1][i], diam[backward - 1][j]);
      best = std::max(best, arc / chord);
    }
  }
  return best;
}

CurveSpec family(std::string_view name, double param) {
  if (!std::isfinite(param)) throw InvalidArgument("family parameter is not finite");
  const std::string tag(name);
  if (name == "circle") {
    if (param != 0.0) throw InvalidArgument("circle takes param 0");
    return CurveSpec::from_coefficients({{1, {1.0, 0.0}}}, tag, param);
  }
  if (name == "ellipse") {
    if (!(param > 0.0 && param <= 1.0)) {
      throw InvalidArgument("ellipse param must lie in (0, 1]");
    }
    // cos t + i p sin t = (1+p)/2 e^{it} + (1-p)/2 e^{-it}
    return CurveSpec::from_coefficients(
        {{1, {0.5 * (1.0 + param), 0.0}}, {-1, {0.5 * (1.0 - param), 0.0}}},
        tag, param);
  }
  if (name == "star") {
    if (!(param >= 0.0 && param < 0.2)) {
      throw InvalidArgument("star param must lie in [0, 0.2)");
    }
    // (1 + p cos 5t) e^{it}
    return CurveSpec::from_coefficients({{1, {1.0, 0.0}},
                                         {6, {0.5 * param, 0.0}},
                                         {-4, {0.5 * param, 0.0}}},
                                        tag, param);
  }
  if (name == "cusp") {
    if (!(param >= 0.0 && param < 1.0)) {
      throw InvalidArgument("cusp param must lie in [0, 1)");
    }
    return CurveSpec::from_coefficients(
        {{1, {1.0, 0.0}}, {-1, {-param, 0.0}}}, tag, param);
  }
  throw InvalidArgument("unknown curve family '" + tag + "'");
}

Mobius Mobius::disk_automorphism(Complex p) {
  return {Complex(1.0, 0.0), -p, -std::conj(p), Complex(1.0, 0.0)};
}

Mobius Mobius::rotation(double angle) {
  return {std::polar(1.0, angle), 0.0, 0.0, 1.0};
}

Mobius Mobius::similarity(Complex scale, Complex shift) {
  return {scale, shift, 0.0, 1.0};
}

namespace {

int winding_number(const std::vector<Complex>& pts, Complex z) {
  double total = 0.0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const Complex a = pts[j] - z;
    const Complex b = pts[(j + 1) % pts.size()] - z;
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace

MobiusImage mobius_image(const CurveSpec& curve, const Mobius& map,
                         double min_pole_distance) {
  if (std::abs(map.a * map.d - map.b * map.c) == 0.0) {
    throw InvalidArgument("Möbius map is degenerate (ad - bc = 0)");
  }
  bool swapped = false;
  if (map.has_finite_pole()) {
    const auto dense = sample(curve, 4096);
    double diameter = 0.0;
    double dist = std::numeric_limits<double>::infinity();
    const Complex pole = map.pole();
    for (std::size_t i = 0; i < dense.size(); i += 8) {
      for (std::size_t j = i + 8; j < dense.size(); j += 8) {
        diameter = std::max(diameter, std::abs(dense[i] - dense[j]));
      }
    }
    for (const auto& z : dense) dist = std::min(dist, std::abs(z - pole));
    if (dist < min_pole_distance * diameter) {
      throw DomainError("Möbius pole too close to the curve (distance " +
                        std::to_string(dist) + ")");
    }
    swapped = winding_number(dense, pole) != 0;
  }

  Eigen::FFT<double> fft;
  std::vector<Complex> coeffs;
  int m = 64;
  constexpr int kMaxSamples = 1 << 16;
  for (;; m *= 2) {
    std::vector<Complex> values(m);
    for (int j = 0; j < m; ++j) values[j] = map(curve.eval(kTwoPi * j / m));
    fft.fwd(coeffs, values);
    double peak = 0.0;
    double tail = 0.0;
    for (int j = 0; j < m; ++j) {
      const int k = j < m / 2 ? j : j - m;
      const double mag = std::abs(coeffs[j]) / m;
      peak = std::max(peak, mag);
      if (std::abs(k) >= m / 4) tail = std::max(tail, mag);
    }
    if (tail < 1e-15 * peak) break;
    if (m >= kMaxSamples) {
      throw DomainError("Möbius image not resolved by 2^16 Fourier modes");
    }
  }

  double peak = 0.0;
  for (const auto& c : coeffs) peak = std::max(peak, std::abs(c) / m);
  std::vector<FourierTerm> terms;
  for (int j = 0; j < m; ++j) {
    const int k = j < m / 2 ? j : j - m;
    const Complex c = coeffs[j] / double(m);
    if (std::abs(c) > 1e-17 * peak) terms.push_back({swapped ? -k : k, c});
  }
  const std::string tag = curve.family_tag() + "+mobius";
  return {CurveSpec::from_coefficients(std::move(terms), tag,
                                       curve.distortion_param()),
          swapped};
}

}  // namespace quasitrans
