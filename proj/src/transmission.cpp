#include "quasitrans/transmission.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "quasitrans/error.hpp"

namespace quasitrans {

const char* to_string(Direction d) {
  return d == Direction::interior_to_exterior ? "interior-to-exterior" : "exterior-to-interior";
}

Direction reversed(Direction d) {
  return d == Direction::interior_to_exterior ? Direction::exterior_to_interior
                                              : Direction::interior_to_exterior;
}

Side source_side(Direction d) {
  return d == Direction::interior_to_exterior ? Side::interior : Side::exterior;
}

Side target_side(Direction d) {
  return d == Direction::interior_to_exterior ? Side::exterior : Side::interior;
}

Transmitted transmit(const SystemPtr& sys, const Eigen::VectorXd& h, Side from, Side to,
                     int max_refinement_levels) {
  if (from == to) throw InvalidArgument("transmit: source and target sides must differ");
  Eigen::VectorXd mu = sys->solve(to, h);
  Transmitted out{PotentialEvaluator(sys, std::move(mu), to, max_refinement_levels)};
  out.source_energy = dirichlet_energy(*sys, h, from);
  out.target_energy = dirichlet_energy(*sys, h, to);
  return out;
}

Transmitted transmit(const CurveSpec& curve, const Eigen::VectorXd& h, Side from, Side to,
                     int n) {
  return transmit(NystromSystem::build(curve, n), h, from, to);
}

namespace {

Eigen::MatrixXcd deflate(const Eigen::MatrixXcd& a, int center) {
  const Eigen::Index m = a.rows() - 1;
  Eigen::MatrixXcd out(m, m);
  for (Eigen::Index i = 0, oi = 0; i < a.rows(); ++i) {
    if (i == center) continue;
    for (Eigen::Index j = 0, oj = 0; j < a.cols(); ++j) {
      if (j == center) continue;
      out(oi, oj++) = a(i, j);
    }
    ++oi;
  }
  return out;
}

double constant_mode_energy(const EnergyGram& g) {
  return g.matrix.row(g.index(0)).cwiseAbs().maxCoeff();
}

struct GramPair {
  EnergyGram interior;
  EnergyGram exterior;
};

GramPair grams(const CurveSpec& curve, int modes, int nodes) {
  const auto sys = NystromSystem::build(curve, nodes);
  return {energy_gram(sys, modes, Side::interior), energy_gram(sys, modes, Side::exterior)};
}

TransmissionReport make_report(const CurveSpec& curve, Direction dir, const GramPair& coarse,
                               const GramPair* fine, double three_point,
                               const NormOptions& options) {
  const auto& src = dir == Direction::interior_to_exterior ? coarse.interior : coarse.exterior;
  const auto& tgt = dir == Direction::interior_to_exterior ? coarse.exterior : coarse.interior;
  TransmissionReport r;
  r.family_tag = curve.family_tag();
  r.distortion_param = curve.distortion_param();
  r.direction = dir;
  r.modes = src.modes;
  r.nodes = src.nodes;
  r.norm_estimate = pencil_norm(src, tgt, &r.source_gram_condition);
  r.system_condition = std::max(src.system_condition, tgt.system_condition);
  r.hermitian_defect = std::max(src.hermitian_defect, tgt.hermitian_defect);
  r.constant_mode_energy = std::max(constant_mode_energy(src), constant_mode_energy(tgt));
  r.three_point = three_point;
  if (fine != nullptr) {
    const auto& fs = dir == Direction::interior_to_exterior ? fine->interior : fine->exterior;
    const auto& ft = dir == Direction::interior_to_exterior ? fine->exterior : fine->interior;
    r.refined_norm = pencil_norm(fs, ft);
    r.converged = std::isfinite(r.norm_estimate) &&
                  std::abs(r.norm_estimate - r.refined_norm) <=
                      options.convergence_tol * std::max(1.0, r.refined_norm);
  } else {
    r.refined_norm = std::numeric_limits<double>::quiet_NaN();
    r.converged = false;
  }
  return r;
}

}  // namespace

double pencil_norm(const EnergyGram& source, const EnergyGram& target, double* source_condition) {
  if (source.modes != target.modes) throw InvalidArgument("pencil_norm: mode counts differ");
  const int center = source.index(0);
  const Eigen::MatrixXcd a_src = deflate(source.matrix, center);
  const Eigen::MatrixXcd a_tgt = deflate(target.matrix, center);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> src_eig(a_src, Eigen::EigenvaluesOnly);
  if (src_eig.info() != Eigen::Success) throw NumericalError("source Gram eigensolver failed");
  const double lo = src_eig.eigenvalues().minCoeff();
  const double hi = src_eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) {
    throw NumericalError("deflated source Gram is not positive definite (min eigenvalue " +
                         std::to_string(lo) + ", max " + std::to_string(hi) + ")");
  }
  if (source_condition != nullptr) *source_condition = hi / lo;

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> pencil(
      a_tgt, a_src, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (pencil.info() != Eigen::Success) throw NumericalError("generalized eigensolver failed");
  const double lambda = pencil.eigenvalues().maxCoeff();
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw NumericalError("pencil has no positive eigenvalue (max " + std::to_string(lambda) + ")");
  }
  return std::sqrt(lambda);
}

TransmissionReport transmission_norm(const CurveSpec& curve, int modes, int nodes,
                                     Direction direction, const NormOptions& options) {
  return direction == Direction::interior_to_exterior
             ? transmission_norms(curve, modes, nodes, options).first
             : transmission_norms(curve, modes, nodes, options).second;
}

std::pair<TransmissionReport, TransmissionReport> transmission_norms(const CurveSpec& curve,
                                                                     int modes, int nodes,
                                                                     const NormOptions& options) {
  const GramPair coarse = grams(curve, modes, nodes);
  GramPair fine;
  const GramPair* fine_ptr = nullptr;
  if (options.check_refinement) {
    fine = grams(curve, 2 * modes, 2 * nodes);
    fine_ptr = &fine;
  }
  const double three_point = options.three_point_samples > 0
                                 ? three_point_constant(curve, options.three_point_samples)
                                 : std::numeric_limits<double>::quiet_NaN();
  return {make_report(curve, Direction::interior_to_exterior, coarse, fine_ptr, three_point, options),
          make_report(curve, Direction::exterior_to_interior, coarse, fine_ptr, three_point, options)};
}

namespace {

double max_curvature(const CurveSpec& curve, int samples) {
  double kmax = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double t = kTwoPi * j / samples;
    const Complex v = curve.derivative(t);
    const Complex a = curve.second_derivative(t);
    kmax = std::max(kmax, std::abs(std::imag(a * std::conj(v))) / std::pow(std::abs(v), 3));
  }
  return kmax;
}

}  // namespace

AgreementReport boundary_agreement(const CurveSpec& curve, const Eigen::VectorXd& h, int n,
                                   int probes, const AgreementOptions& options) {
  if (probes < 1) throw InvalidArgument("boundary_agreement needs at least one probe");
  if (options.steps < 8) throw InvalidArgument("boundary_agreement needs steps >= 8");
  if (!(options.alpha > 0.0 && options.alpha < 0.5 * M_PI)) {
    throw InvalidArgument("boundary_agreement: alpha must lie in (0, pi/2)");
  }
  const auto sys = NystromSystem::build(curve, n);
  if (h.size() != n) throw InvalidArgument("boundary data must have one value per node");

  const auto diag = diagnose(curve);
  const double start = std::min(0.5 / std::max(max_curvature(curve, 1024), 1e-12),
                                0.1 * diag.diameter);
  std::vector<double> distances(options.steps);
  for (int k = 1; k <= options.steps; ++k) distances[k - 1] = start * std::ldexp(1.0, -k);

  // Levels so that the finest spacing is below 1/5 of the closest approach,
  // measured perpendicular to the curve.
  const double closest = distances.back() * std::cos(0.5 * options.alpha);
  int levels = 0;
  while (sys->max_spacing() * std::ldexp(1.0, -levels) * 5.0 > 0.9 * closest) ++levels;
  ++levels;

  const PotentialEvaluator interior(sys, sys->solve(Side::interior, h), Side::interior, levels);
  const PotentialEvaluator exterior(sys, sys->solve(Side::exterior, h), Side::exterior, levels);
  const auto as_complex = [](const PotentialEvaluator& u) {
    return [&u](Complex z) { return Complex(u(z), 0.0); };
  };

  AgreementReport report;
  int converged = 0;
  for (int j = 0; j < probes; ++j) {
    ProbeRecord rec;
    rec.t = kTwoPi * (j + 0.5) / probes;
    rec.point = curve.eval(rec.t);
    const Complex v = curve.derivative(rec.t);
    const Complex outward = Complex(0.0, -1.0) * v / std::abs(v);
    const auto in = approach_limit(as_complex(interior), rec.point, -outward,
                                   0.5 * options.alpha, distances, options.tolerance);
    const auto out = approach_limit(as_complex(exterior), rec.point, outward,
                                    0.5 * options.alpha, distances, options.tolerance);
    rec.source_limit = in.value.real();
    rec.target_limit = out.value.real();
    rec.converged = in.converged && out.converged;
    if (rec.converged) {
      ++converged;
      report.max_discrepancy =
          std::max(report.max_discrepancy, std::abs(rec.source_limit - rec.target_limit));
    }
    report.probes.push_back(rec);
  }
  report.fraction_converged = double(converged) / probes;

  const Eigen::VectorXd outside = sys->boundary_values(Side::exterior, exterior.density());
  const Eigen::VectorXd back = sys->boundary_values(Side::interior, sys->solve(Side::interior, outside));
  report.roundtrip_error = (back - h).cwiseAbs().maxCoeff();

  if (2 * converged < probes) {
    throw NumericalError("boundary_agreement: only " + std::to_string(converged) + " of " +
                         std::to_string(probes) + " probes converged (resolution insufficient)");
  }
  return report;
}

MobiusNormPair mobius_conjugate_norm(const CurveSpec& curve, const Mobius& map, int modes,
                                     int nodes, Direction direction, const NormOptions& options) {
  const auto image = mobius_image(curve, map);
  MobiusNormPair out;
  out.sides_swapped = image.sides_swapped;
  out.original = transmission_norm(curve, modes, nodes, direction, options);
  out.image = transmission_norm(image.curve, modes, nodes,
                                image.sides_swapped ? reversed(direction) : direction, options);
  return out;
}

}  // namespace quasitrans
