#pragma once

#include <complex>
#include <functional>
#include <map>

#include "quasitrans/curves.hpp"

namespace quasitrans {

/// Disk {|z| < r_outer}, exterior {|z| > r_inner} ∪ {∞}, or annulus
/// {r_inner < |z| < r_outer}.
struct SeriesDomain {
  enum class Kind { disk, exterior, annulus };

  Kind kind = Kind::disk;
  double r_inner = 0.0;
  double r_outer = 1.0;

  static SeriesDomain disk(double radius = 1.0);
  static SeriesDomain exterior(double radius = 1.0);
  static SeriesDomain annulus(double r_inner, double r_outer = 1.0);

  bool contains(Complex z) const;
  bool allows_index(int n) const;
  bool allows_log() const { return kind != Kind::disk; }

  friend bool operator==(const SeriesDomain&, const SeriesDomain&) = default;
};

/// Finitely supported harmonic function
///   h(z) = Σ a_n zⁿ + Σ b_n z̄ⁿ + c·log|z|.
/// The constant is stored once, in a_0; setting b_0 adds to a_0.
class HarmonicSeries {
 public:
  explicit HarmonicSeries(SeriesDomain domain = SeriesDomain::disk());

  const SeriesDomain& domain() const { return domain_; }
  const std::map<int, Complex>& analytic() const { return a_; }
  const std::map<int, Complex>& antianalytic() const { return b_; }
  Complex log_coefficient() const { return c_; }

  /// Adds v to the coefficient (so repeated calls accumulate). Throws
  /// InvalidArgument when the index is not allowed on the domain.
  HarmonicSeries& add_analytic(int n, Complex v);
  HarmonicSeries& add_antianalytic(int n, Complex v);
  HarmonicSeries& add_log(Complex v);

  Complex analytic_coefficient(int n) const;
  Complex antianalytic_coefficient(int n) const;

  /// Same coefficients on another domain that admits them.
  HarmonicSeries restricted_to(SeriesDomain domain) const;

  int max_abs_index() const;

 private:
  SeriesDomain domain_;
  std::map<int, Complex> a_;
  std::map<int, Complex> b_;
  Complex c_{0.0, 0.0};
};

/// Σ a_n zⁿ + Σ b_n z̄ⁿ + c·log|z|. Throws DomainError outside the domain.
Complex evaluate(const HarmonicSeries& h, Complex z);

/// Dirichlet inner product (f, g) = ∬ (f_z·conj(g_z) + f_z̄·conj(g_z̄)) dA,
/// i.e. ½∬ ∇f·∇ḡ dA, so that (zⁿ, zⁿ) = nπ on the unit disk. Linear in the
/// first argument. A log term on an exterior domain has infinite energy and
/// yields +∞.
Complex dirichlet_inner(const HarmonicSeries& f, const HarmonicSeries& g);

/// Classical Dirichlet integral ∬|∇h|² dA = 2·(h, h).
double dirichlet_energy(const HarmonicSeries& h);

/// h = h1 + h2 + c·g_{p1} on an annulus {r < |z| < 1}, with h1 harmonic on
/// the unit disk, h2 harmonic on {|z| > r} and vanishing at ∞, and g_{p1} the
/// disk Green's function with pole p1.
struct AnnulusDecomposition {
  HarmonicSeries inner_part;  ///< h1, on disk(1)
  HarmonicSeries outer_part;  ///< h2, on exterior(r)
  Complex c;
  Complex pole;

  /// h1(z) + h2(z) + c·g_{p1}(z).
  Complex recompose(Complex z) const;
};

/// Splits a finitely supported annulus series. For p1 ≠ 0 the Green's
/// function g_{p1} = −log|z| + Re Σ_k (p1/z)^k/k − Re Σ_k (p̄1 z)^k/k is
/// expanded about the origin (the Möbius conjugation that moves p1 to 0),
/// which is only done when `allow_nonzero_pole` is set; the expansions are
/// truncated at relative size 1e−17 on the annulus.
AnnulusDecomposition annulus_decompose(const HarmonicSeries& h,
                                       Complex p1 = {0.0, 0.0},
                                       bool allow_nonzero_pole = false);

/// Green's function of the unit disk, −log|(z − p)/(1 − p̄z)|.
double greens_disk(Complex p, Complex z);

/// ∇g_p as the complex number ∂_x g + i∂_y g.
Complex greens_disk_gradient(Complex p, Complex z);

/// Canonical collar chart of the unit disk with respect to p:
/// φ = exp[−2π(g_p + i g̃_p)/m] = (z − p)/(1 − p̄z), m = −2π, mapping the
/// collar {ρ < |φ| < 1} onto an annulus. Fixed up to rotation; the rotation
/// chosen here is the identity.
struct CollarChart {
  Complex pole;
  double rho = 0.5;       ///< inner radius of the image annulus
  double coperiod = 0.0;  ///< m = ∮ ∗dg_p along a curve homotopic to 𝕊¹

  Complex operator()(Complex z) const;
  Complex inverse(Complex w) const;
  bool in_collar(Complex z) const;
};

/// Throws DomainError when |p| ≥ 1.
CollarChart canonical_collar_chart(Complex p, double rho = 0.5);

/// ∮_{|z| = radius} ∗dg_p by the periodic trapezoid rule with `nodes` points.
double greens_coperiod(Complex p, double radius, int nodes = 256);

/// ∬_{rho < |z| < 1} |∇g_p|² dA via −∮_{|z|=rho} g_p ∂_r g_p ds (g_p = 0 on
/// the unit circle). For p = 0 this is 2π·(−log rho).
double collar_energy_greens(Complex p, double rho, int nodes = 512);

/// Boundary Fourier coefficients on |z| = 1: mode k collects a_k and
/// b_{−k}; the log term vanishes there.
std::map<int, Complex> trace_on_circle(const HarmonicSeries& h);

struct CollarExtension {
  HarmonicSeries extension;  ///< on disk(1)
  double source_energy = 0.0;
  double extension_energy = 0.0;
  /// extension_energy / source_energy (0 when both vanish).
  double ratio = 0.0;
};

/// Disk-harmonic series with the same boundary trace on 𝕊¹ as the annulus
/// series h.
CollarExtension collar_extension(const HarmonicSeries& h);

}  // namespace quasitrans
