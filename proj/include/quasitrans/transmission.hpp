#pragma once

#include <string>
#include <vector>

#include "quasitrans/cnt_probe.hpp"
#include "quasitrans/curves.hpp"
#include "quasitrans/nystrom.hpp"

namespace quasitrans {

enum class Direction { interior_to_exterior, exterior_to_interior };

const char* to_string(Direction d);
Direction reversed(Direction d);
Side source_side(Direction d);
Side target_side(Direction d);

/// Harmonic function on the target side with the same boundary samples as
/// the source data.
struct Transmitted {
  PotentialEvaluator target;
  double source_energy = 0.0;  ///< classical ∬|∇u|² on the source side
  double target_energy = 0.0;
};

Transmitted transmit(const SystemPtr& sys, const Eigen::VectorXd& h, Side from, Side to,
                     int max_refinement_levels = 0);
Transmitted transmit(const CurveSpec& curve, const Eigen::VectorXd& h, Side from, Side to, int n);

struct TransmissionReport {
  std::string family_tag;
  double distortion_param = 0.0;
  Direction direction = Direction::interior_to_exterior;
  int modes = 0;  ///< N
  int nodes = 0;  ///< n
  double norm_estimate = 0.0;
  double refined_norm = 0.0;  ///< same estimate at (2N, 2n)
  double source_gram_condition = 0.0;
  double system_condition = 0.0;
  double hermitian_defect = 0.0;
  double constant_mode_energy = 0.0;  ///< max |A(0,·)| over both Grams
  double three_point = 0.0;
  bool converged = false;
};

struct NormOptions {
  /// Converged when |norm(N,n) − norm(2N,2n)| ≤ tol·max(1, norm(2N,2n)).
  double convergence_tol = 1e-6;
  bool check_refinement = true;
  int three_point_samples = 1024;  ///< 0 skips the three-point constant
};

/// √λ_max of A_target v = λ A_source v on boundary modes 1 ≤ |k| ≤ N (the
/// constant mode, the shared kernel, is removed). Throws NumericalError if
/// the deflated source Gram is not positive definite or the eigensolver
/// fails.
double pencil_norm(const EnergyGram& source, const EnergyGram& target,
                   double* source_condition = nullptr);

TransmissionReport transmission_norm(const CurveSpec& curve, int modes, int nodes,
                                     Direction direction, const NormOptions& options = {});

/// Both directions from one pair of Grams per resolution.
std::pair<TransmissionReport, TransmissionReport> transmission_norms(
    const CurveSpec& curve, int modes, int nodes, const NormOptions& options = {});

struct ProbeRecord {
  double t = 0.0;
  Complex point;
  double source_limit = 0.0;
  double target_limit = 0.0;
  bool converged = false;
};

struct AgreementReport {
  std::vector<ProbeRecord> probes;
  double max_discrepancy = 0.0;  ///< over converged probes
  double fraction_converged = 0.0;
  /// interior → exterior → interior boundary samples versus the input data.
  double roundtrip_error = 0.0;
};

struct AgreementOptions {
  double alpha = M_PI / 4;  ///< Stolz opening; rays at ±alpha/2 from the normal
  int steps = 8;
  CntTolerance tolerance{};
};

/// Transmits h from the interior to the exterior and compares the
/// non-tangential limits of both potentials at `probes` boundary points
/// t = 2π(j + ½)/probes. Approach distances halve from a start that respects
/// the curve's curvature; evaluation nodes are refined as the distance
/// shrinks. Throws NumericalError when fewer than half the probes converge.
AgreementReport boundary_agreement(const CurveSpec& curve, const Eigen::VectorXd& h, int n,
                                   int probes, const AgreementOptions& options = {});

struct MobiusNormPair {
  TransmissionReport original;
  TransmissionReport image;
  bool sides_swapped = false;
};

/// Norm reports for the curve and its Möbius image, in the same direction
/// (reversed on the image when the map swaps the sides).
MobiusNormPair mobius_conjugate_norm(const CurveSpec& curve, const Mobius& map, int modes,
                                     int nodes, Direction direction,
                                     const NormOptions& options = {});

}  // namespace quasitrans
