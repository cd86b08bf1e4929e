#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace quasitrans {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// One term c·e^{ikt} of a trigonometric-polynomial parametrization.
struct FourierTerm {
  int k = 0;
  Complex c;
};

/// Sample-based diagnostics behind the CurveSpec invariants.
struct CurveDiagnostics {
  double min_separation = 0.0;  ///< min |γ(t_i) − γ(t_j)| over non-adjacent samples
  double min_speed = 0.0;
  double signed_area = 0.0;
  double diameter = 0.0;
  bool injective = false;
  bool regular = false;
  bool positively_oriented = false;

  bool valid() const { return injective && regular && positively_oriented; }
};

/// Smooth Jordan curve γ(t) = Σ c_k e^{ikt}, t ∈ [0, 2π).
///
/// Instances are immutable. The checked factory enforces injectivity,
/// nonvanishing speed, and positive orientation on a 512-point sample.
class CurveSpec {
 public:
  /// Builds and validates a curve; throws InvalidArgument when an invariant
  /// fails.
  static CurveSpec from_coefficients(std::vector<FourierTerm> terms,
                                     std::string family_tag = "custom",
                                     double distortion_param = 0.0);

  /// Builds without running the invariant checks. Used for intermediate
  /// shapes (e.g. reversed images) that are validated by the caller.
  static CurveSpec unchecked(std::vector<FourierTerm> terms,
                             std::string family_tag = "custom",
                             double distortion_param = 0.0);

  Complex eval(double t) const;
  Complex derivative(double t) const;
  Complex second_derivative(double t) const;

  /// Largest |k| with a nonzero coefficient.
  int degree() const { return degree_; }
  const std::vector<FourierTerm>& terms() const { return terms_; }
  const std::string& family_tag() const { return family_tag_; }
  double distortion_param() const { return distortion_param_; }

  /// Coefficient of e^{ikt} (zero when absent).
  Complex coefficient(int k) const;

 private:
  CurveSpec(std::vector<FourierTerm> terms, std::string tag, double param);

  std::vector<FourierTerm> terms_;
  std::string family_tag_;
  double distortion_param_ = 0.0;
  int degree_ = 0;
};

/// Invariant diagnostics on `samples` equispaced parameters.
CurveDiagnostics diagnose(const CurveSpec& curve, int samples = 512);

/// Signed area ½∮(x dy − y dx) by periodic trapezoid quadrature. The rule is
/// exact once `points` exceeds twice the degree; the default picks such a
/// count.
double enclosed_area(const CurveSpec& curve, int points = 0);

/// Ahlfors three-point ratio: max over sampled pairs (a, b) of the smaller of
/// the two subarc diameters divided by |a − b|. Equals 1 on circles.
double three_point_constant(const CurveSpec& curve, int m = 1024);

/// Named test families:
///   circle   γ = e^{it}                         param must be 0
///   ellipse  γ = cos t + i·param·sin t          param ∈ (0, 1]
///   star     γ = (1 + param·cos 5t)·e^{it}      param ∈ [0, 0.2)
///   cusp     γ = e^{it} − param·e^{−it}         param ∈ [0, 1)
CurveSpec family(std::string_view name, double param);

/// Sphere Möbius map z ↦ (a z + b)/(c z + d), ad − bc ≠ 0.
struct Mobius {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};
  Complex c{0.0, 0.0};
  Complex d{1.0, 0.0};

  Complex operator()(Complex z) const { return (a * z + b) / (c * z + d); }
  bool has_finite_pole() const { return c != Complex(0.0, 0.0); }
  Complex pole() const { return -d / c; }

  static Mobius disk_automorphism(Complex p);  ///< (z − p)/(1 − p̄z)
  static Mobius rotation(double angle);
  static Mobius similarity(Complex scale, Complex shift);
};

/// Result of pushing a curve through a Möbius map.
struct MobiusImage {
  CurveSpec curve;
  /// True when the pole lies inside the original curve. The image is then
  /// reparametrized by t ↦ −t to keep positive orientation, and the bounded
  /// side of the image corresponds to the unbounded side of the original.
  bool sides_swapped = false;
};

/// Image curve fitted as a trigonometric polynomial by FFT of M∘γ on the same
/// parameter, truncated once the coefficient tail falls below 1e−15 relative.
/// Throws DomainError when the pole is within `min_pole_distance`·diameter of
/// the curve.
MobiusImage mobius_image(const CurveSpec& curve, const Mobius& map,
                         double min_pole_distance = 0.05);

}  // namespace quasitrans
