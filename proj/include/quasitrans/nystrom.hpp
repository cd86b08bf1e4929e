#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quasitrans/curves.hpp"

namespace quasitrans {

enum class Side { interior, exterior };

const char* to_string(Side side);

/// Kernel conventions (all tests of the jump relations pin these):
///   G(x, y)  = −(1/2π) log|x − y|
///   D[μ](x)  = ∫ ∂_{n_y} G(x, y) μ(y) ds_y, n the outward normal
///   D[1]     = −1 inside, 0 outside; on Γ the principal value K[1] = −½
///   interior limit of D[μ] = (−½I + K)μ, exterior limit = (½I + K)μ
///   S[φ](x)  = ∫ G(x, y) φ(y) ds_y
///   ∂_n D[μ] = d/ds S[dμ/ds]                       (Maue identity)
///
/// Matrices act on values at the nodes t_j = 2πj/n. K and S include the
/// quadrature weights, so (Kμ)_i approximates the integral at t_i.
class NystromSystem {
 public:
  /// Assembles K, S and the spectral differentiation matrix and factors the
  /// interior and exterior systems. Requires n even, n ≥ 32 and
  /// n ≥ 4·degree(curve).
  static std::shared_ptr<const NystromSystem> build(const CurveSpec& curve, int n);

  const CurveSpec& curve() const { return curve_; }
  int size() const { return n_; }
  double node(int j) const;

  const Eigen::VectorXcd& points() const { return points_; }
  const Eigen::VectorXcd& velocities() const { return velocities_; }
  const Eigen::VectorXd& speeds() const { return speeds_; }
  /// Arclength quadrature weights |γ'(t_j)|·2π/n.
  const Eigen::VectorXd& arclength_weights() const { return weights_; }
  double length() const { return length_; }
  /// Largest gap between consecutive nodes, measured as max|γ'|·2π/n.
  double max_spacing() const;

  const Eigen::MatrixXd& double_layer() const { return K_; }
  const Eigen::MatrixXd& single_layer() const { return S_; }
  /// d/dt on trigonometric interpolants (Nyquist mode dropped).
  const Eigen::MatrixXd& differentiation() const { return Dt_; }

  /// System matrix of the given side: −½I + K, or ½I + K + R where
  /// Rμ = (∫μ ds / |Γ|)·1 supplies the missing constant.
  Eigen::MatrixXd system_matrix(Side side) const;
  /// 1/rcond of the LU factorization of the side's system.
  double condition_estimate(Side side) const;

  /// Density for boundary samples h (real part and imaginary part are solved
  /// independently). Throws NumericalError when the residual exceeds 1e−10
  /// relative to max(1, ‖h‖∞).
  Eigen::VectorXd solve(Side side, const Eigen::VectorXd& h) const;
  Eigen::MatrixXd solve(Side side, const Eigen::MatrixXd& rhs) const;

  /// (∫ μ ds)/|Γ|: the exterior potential's value at ∞.
  double exterior_constant(const Eigen::VectorXd& density) const;

  /// Outward normal derivative of the double-layer potential (identical on
  /// both sides) through the Maue identity.
  Eigen::VectorXd neumann_data(const Eigen::VectorXd& density) const;
  Eigen::MatrixXd neumann_data(const Eigen::MatrixXd& density) const;

  /// One-sided boundary limit of the potential at the nodes.
  Eigen::VectorXd boundary_values(Side side, const Eigen::VectorXd& density) const;

 private:
  NystromSystem(CurveSpec curve, int n);

  CurveSpec curve_;
  int n_ = 0;
  Eigen::VectorXcd points_;
  Eigen::VectorXcd velocities_;
  Eigen::VectorXd speeds_;
  Eigen::VectorXd weights_;
  double length_ = 0.0;
  Eigen::MatrixXd K_;
  Eigen::MatrixXd S_;
  Eigen::MatrixXd Dt_;
  Eigen::PartialPivLU<Eigen::MatrixXd> interior_lu_;
  Eigen::PartialPivLU<Eigen::MatrixXd> exterior_lu_;
};

using SystemPtr = std::shared_ptr<const NystromSystem>;

/// Fourier-interpolates periodic samples from their node count onto m nodes
/// (m a multiple of the input size).
Eigen::VectorXd trig_upsample(const Eigen::VectorXd& values, int m);

/// Evaluates u = D[μ] (+ the exterior constant) off the curve.
///
/// A point is refused (DomainError) unless its distance to the evaluation
/// nodes is at least 5 node spacings. When refinement levels are allowed, the
/// density is trigonometrically interpolated onto 2^j·n nodes, choosing the
/// coarsest level that satisfies the 5-spacing rule.
class PotentialEvaluator {
 public:
  PotentialEvaluator(SystemPtr system, Eigen::VectorXd density, Side side,
                     int max_refinement_levels = 0);

  double operator()(Complex z) const;
  Side side() const { return side_; }
  const Eigen::VectorXd& density() const { return density_; }
  const NystromSystem& system() const { return *system_; }
  /// Value at ∞ for the exterior side, 0 for the interior.
  double constant() const { return constant_; }

 private:
  struct Level {
    int n = 0;
    double spacing = 0.0;
    Eigen::VectorXcd points;
    Eigen::VectorXcd velocities;
    Eigen::VectorXd density;
  };
  const Level& level(int j) const;

  SystemPtr system_;
  Eigen::VectorXd density_;
  Side side_;
  double constant_ = 0.0;
  std::vector<Level> levels_;
};

/// Solves the Dirichlet problem on `side` for boundary samples h.
Eigen::VectorXd solve_dirichlet(const NystromSystem& sys, const Eigen::VectorXd& h, Side side);

/// Potential of the solved density at z, with the 5-spacing refusal rule and
/// a side check.
double evaluate_potential(const SystemPtr& sys, const Eigen::VectorXd& density,
                          Complex z, Side side);

/// Classical Dirichlet integral ∬|∇u|² of the harmonic extension of h to
/// `side`, computed as ±∮ h ∂_n u ds with Neumann data from the Maue
/// identity.
double dirichlet_energy(const NystromSystem& sys, const Eigen::VectorXd& h, Side side);

/// Finite section of the Dirichlet inner product on boundary Fourier modes
/// e^{ikt}, k = −N..N (row/column index k + N):
///   A[j][k] = (u_k, u_j) = ½∬ ∇u_k·∇ū_j dA,
/// so that the unit circle gives diag(|k|π).
struct EnergyGram {
  Side side = Side::interior;
  int modes = 0;  ///< N
  int nodes = 0;  ///< n
  Eigen::MatrixXcd matrix;  ///< Hermitian part of the raw quadrature matrix
  double hermitian_defect = 0.0;  ///< max |A_raw − A_raw^*|
  double system_condition = 0.0;

  int index(int k) const { return k + modes; }
};

/// Requires n ≥ 8N.
EnergyGram energy_gram(const SystemPtr& sys, int modes, Side side);
EnergyGram energy_gram(const CurveSpec& curve, int modes, int nodes, Side side);

/// Samples of a function of the curve parameter at the system nodes.
Eigen::VectorXd sample_at_nodes(const NystromSystem& sys, const std::function<double(double)>& f);

/// Flat binary dump: 8-byte little-endian row count n, 8-byte column count,
/// then rows·cols float64 values in row-major order.
void write_matrix_dump(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_dump(const std::string& path);

}  // namespace quasitrans
