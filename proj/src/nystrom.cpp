#include "quasitrans/nystrom.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>

#include <unsupported/Eigen/FFT>

#include "quasitrans/error.hpp"

namespace quasitrans {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kRefusalSpacings = 5.0;

// Kress weights for ∫ log(4 sin²((t_i − τ)/2)) f(τ) dτ on n equispaced nodes,
// indexed by (i − j) mod n.
Eigen::VectorXd kress_weights(int n) {
  Eigen::VectorXd r(n);
  const int half = n / 2;
  for (int d = 0; d < n; ++d) {
    double acc = 0.0;
    for (int m = 1; m < half; ++m) acc += std::cos(kTwoPi * m * d / n) / m;
    r(d) = -4.0 * M_PI / n * acc - 4.0 * M_PI / (double(n) * n) * ((d % 2 == 0) ? 1.0 : -1.0);
  }
  return r;
}

Eigen::MatrixXd fourier_differentiation(int n) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int k = i - j;
      const double sign = (std::abs(k) % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = 0.5 * sign / std::tan(M_PI * k / n);
    }
  }
  return d;
}

}  // namespace

const char* to_string(Side side) {
  return side == Side::interior ? "interior" : "exterior";
}

NystromSystem::NystromSystem(CurveSpec curve, int n) : curve_(std::move(curve)), n_(n) {}

std::shared_ptr<const NystromSystem> NystromSystem::build(const CurveSpec& curve, int n) {
  if (n < 32 || n % 2 != 0) throw InvalidArgument("Nyström node count must be even and >= 32");
  if (n < 4 * curve.degree()) {
    throw InvalidArgument("Nyström node count " + std::to_string(n) +
                          " too small for curve degree " + std::to_string(curve.degree()));
  }
  std::shared_ptr<NystromSystem> sys(new NystromSystem(curve, n));
  const double h = kTwoPi / n;

  sys->points_.resize(n);
  sys->velocities_.resize(n);
  sys->speeds_.resize(n);
  Eigen::VectorXcd accel(n);
  for (int j = 0; j < n; ++j) {
    const double t = h * j;
    sys->points_(j) = curve.eval(t);
    sys->velocities_(j) = curve.derivative(t);
    accel(j) = curve.second_derivative(t);
    sys->speeds_(j) = std::abs(sys->velocities_(j));
  }
  sys->weights_ = sys->speeds_ * h;
  sys->length_ = sys->weights_.sum();

  const auto& x = sys->points_;
  const auto& v = sys->velocities_;
  const Eigen::VectorXd kress = kress_weights(n);

  sys->K_.resize(n, n);
  sys->S_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double k_ij;
      double smooth;
      if (i == j) {
        k_ij = -std::imag(accel(j) * std::conj(v(j))) / (2.0 * kTwoPi * std::norm(v(j)));
        smooth = -std::log(sys->speeds_(j)) / kTwoPi;
      } else {
        const Complex diff = x(i) - x(j);
        k_ij = -std::imag(diff * std::conj(v(j))) / (kTwoPi * std::norm(diff));
        const double s = std::sin(0.5 * h * (i - j));
        smooth = (-std::log(std::abs(diff)) + 0.5 * std::log(4.0 * s * s)) / kTwoPi;
      }
      sys->K_(i, j) = h * k_ij;
      const int d = ((i - j) % n + n) % n;
      // G = −(1/4π) log(4 sin²) + smooth, in parameter measure, then ·|γ'_j|.
      sys->S_(i, j) = (h * smooth - kress(d) / (2.0 * kTwoPi)) * sys->speeds_(j);
    }
  }
  sys->Dt_ = fourier_differentiation(n);

  sys->interior_lu_.compute(sys->system_matrix(Side::interior));
  sys->exterior_lu_.compute(sys->system_matrix(Side::exterior));
  return sys;
}

double NystromSystem::node(int j) const { return kTwoPi * j / n_; }

double NystromSystem::max_spacing() const { return speeds_.maxCoeff() * kTwoPi / n_; }

Eigen::MatrixXd NystromSystem::system_matrix(Side side) const {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n_, n_);
  if (side == Side::interior) return K_ - 0.5 * eye;
  Eigen::MatrixXd a = K_ + 0.5 * eye;
  a.rowwise() += (weights_ / length_).transpose();
  return a;
}

double NystromSystem::condition_estimate(Side side) const {
  const auto& lu = side == Side::interior ? interior_lu_ : exterior_lu_;
  const double rc = lu.rcond();
  return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

Eigen::MatrixXd NystromSystem::solve(Side side, const Eigen::MatrixXd& rhs) const {
  if (rhs.rows() != n_) throw InvalidArgument("boundary data must have one value per node");
  const auto& lu = side == Side::interior ? interior_lu_ : exterior_lu_;
  Eigen::MatrixXd mu = lu.solve(rhs);
  const Eigen::MatrixXd residual = system_matrix(side) * mu - rhs;
  const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
  const double res = residual.cwiseAbs().maxCoeff();
  if (!(res <= kResidualTol * scale)) {
    throw NumericalError(std::string(to_string(side)) + " solve residual " +
                         std::to_string(res) + " (condition estimate " +
                         std::to_string(condition_estimate(side)) + ")");
  }
  return mu;
}

Eigen::VectorXd NystromSystem::solve(Side side, const Eigen::VectorXd& h) const {
  return solve(side, Eigen::MatrixXd(h)).col(0);
}

double NystromSystem::exterior_constant(const Eigen::VectorXd& density) const {
  return weights_.dot(density) / length_;
}

Eigen::MatrixXd NystromSystem::neumann_data(const Eigen::MatrixXd& density) const {
  // ∂_n u = (1/|γ'|) d/dt S[(1/|γ'|) dμ/dt]
  const Eigen::MatrixXd tangential = speeds_.cwiseInverse().asDiagonal() * (Dt_ * density);
  return speeds_.cwiseInverse().asDiagonal() * (Dt_ * (S_ * tangential));
}

Eigen::VectorXd NystromSystem::neumann_data(const Eigen::VectorXd& density) const {
  return neumann_data(Eigen::MatrixXd(density)).col(0);
}

Eigen::VectorXd NystromSystem::boundary_values(Side side, const Eigen::VectorXd& density) const {
  if (side == Side::interior) return K_ * density - 0.5 * density;
  return K_ * density + 0.5 * density +
         Eigen::VectorXd::Constant(n_, exterior_constant(density));
}

Eigen::VectorXd trig_upsample(const Eigen::VectorXd& values, int m) {
  const int n = static_cast<int>(values.size());
  if (m == n) return values;
  if (m < n || m % n != 0 || n % 2 != 0) {
    throw InvalidArgument("trig_upsample: target must be a multiple of an even size");
  }
  Eigen::FFT<double> fft;
  std::vector<Complex> in(values.data(), values.data() + n);
  std::vector<Complex> spec;
  fft.fwd(spec, in);
  std::vector<Complex> padded(m, Complex(0.0, 0.0));
  const int half = n / 2;
  for (int k = 0; k < half; ++k) padded[k] = spec[k];
  for (int k = 1; k < half; ++k) padded[m - k] = spec[n - k];
  padded[half] = 0.5 * spec[half];
  padded[m - half] = 0.5 * spec[half];
  std::vector<Complex> out;
  fft.inv(out, padded);
  Eigen::VectorXd result(m);
  const double scale = double(m) / n;
  for (int j = 0; j < m; ++j) result(j) = out[j].real() * scale;
  return result;
}

PotentialEvaluator::PotentialEvaluator(SystemPtr system, Eigen::VectorXd density, Side side,
                                       int max_refinement_levels)
    : system_(std::move(system)), density_(std::move(density)), side_(side) {
  if (density_.size() != system_->size()) throw InvalidArgument("density size mismatch");
  if (side_ == Side::exterior) constant_ = system_->exterior_constant(density_);
  const auto& curve = system_->curve();
  for (int j = 0; j <= max_refinement_levels; ++j) {
    Level lvl;
    lvl.n = system_->size() << j;
    if (j == 0) {
      lvl.points = system_->points();
      lvl.velocities = system_->velocities();
      lvl.density = density_;
    } else {
      lvl.points.resize(lvl.n);
      lvl.velocities.resize(lvl.n);
      for (int i = 0; i < lvl.n; ++i) {
        const double t = kTwoPi * i / lvl.n;
        lvl.points(i) = curve.eval(t);
        lvl.velocities(i) = curve.derivative(t);
      }
      lvl.density = trig_upsample(density_, lvl.n);
    }
    lvl.spacing = lvl.velocities.cwiseAbs().maxCoeff() * kTwoPi / lvl.n;
    levels_.push_back(std::move(lvl));
  }
}

const PotentialEvaluator::Level& PotentialEvaluator::level(int j) const { return levels_[j]; }

double PotentialEvaluator::operator()(Complex z) const {
  for (std::size_t j = 0; j < levels_.size(); ++j) {
    const auto& lvl = levels_[j];
    const double dist = (lvl.points.array() - z).abs().minCoeff();
    if (dist < kRefusalSpacings * lvl.spacing) continue;

    double value = 0.0;
    double indicator = 0.0;
    for (int i = 0; i < lvl.n; ++i) {
      const Complex diff = z - lvl.points(i);
      const double kern = -std::imag(diff * std::conj(lvl.velocities(i))) / std::norm(diff);
      value += kern * lvl.density(i);
      indicator += kern;
    }
    value /= lvl.n;
    indicator /= lvl.n;
    const bool inside = indicator < -0.5;
    if (inside != (side_ == Side::interior)) {
      throw DomainError(std::string("point is not on the ") + to_string(side_) + " side");
    }
    return value + constant_;
  }
  throw DomainError("point closer than 5 node spacings to the curve");
}

Eigen::VectorXd solve_dirichlet(const NystromSystem& sys, const Eigen::VectorXd& h, Side side) {
  return sys.solve(side, h);
}

double evaluate_potential(const SystemPtr& sys, const Eigen::VectorXd& density, Complex z,
                          Side side) {
  return PotentialEvaluator(sys, density, side, 0)(z);
}

double dirichlet_energy(const NystromSystem& sys, const Eigen::VectorXd& h, Side side) {
  const Eigen::VectorXd mu = sys.solve(side, h);
  const Eigen::VectorXd flux = sys.neumann_data(mu);
  const double sign = side == Side::interior ? 1.0 : -1.0;
  return sign * h.dot(flux.cwiseProduct(sys.arclength_weights()));
}

EnergyGram energy_gram(const SystemPtr& sys, int modes, Side side) {
  const int n = sys->size();
  if (modes < 1) throw InvalidArgument("energy_gram needs at least one mode");
  if (n < 8 * modes) throw InvalidArgument("energy_gram needs n >= 8N");
  const int cols = 2 * modes + 1;
  Eigen::MatrixXd re(n, cols), im(n, cols);
  for (int c = 0; c < cols; ++c) {
    const int k = c - modes;
    for (int j = 0; j < n; ++j) {
      const double t = sys->node(j);
      re(j, c) = std::cos(k * t);
      im(j, c) = std::sin(k * t);
    }
  }
  Eigen::MatrixXd rhs(n, 2 * cols);
  rhs << re, im;
  const Eigen::MatrixXd flux = sys->neumann_data(sys->solve(side, rhs));
  Eigen::MatrixXcd e(n, cols), f(n, cols);
  e.real() = re;
  e.imag() = im;
  f.real() = flux.leftCols(cols);
  f.imag() = flux.rightCols(cols);

  const double sign = side == Side::interior ? 1.0 : -1.0;
  const Eigen::MatrixXcd weighted = sys->arclength_weights().cast<Complex>().asDiagonal() * f;
  const Eigen::MatrixXcd raw = (0.5 * sign) * (e.adjoint() * weighted);

  EnergyGram gram;
  gram.side = side;
  gram.modes = modes;
  gram.nodes = n;
  gram.hermitian_defect = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
  gram.matrix = 0.5 * (raw + raw.adjoint());
  gram.system_condition = sys->condition_estimate(side);
  return gram;
}

EnergyGram energy_gram(const CurveSpec& curve, int modes, int nodes, Side side) {
  return energy_gram(NystromSystem::build(curve, nodes), modes, side);
}

Eigen::VectorXd sample_at_nodes(const NystromSystem& sys, const std::function<double(double)>& f) {
  Eigen::VectorXd h(sys.size());
  for (int j = 0; j < sys.size(); ++j) h(j) = f(sys.node(j));
  return h;
}

void write_matrix_dump(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path + " for writing");
  const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  out.write(reinterpret_cast<const char*>(rm.data()),
            static_cast<std::streamsize>(sizeof(double) * rm.size()));
  if (!out) throw Error(ErrorCode::io, "write failed for " + path);
}

Eigen::MatrixXd read_matrix_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  std::uint64_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  in.read(reinterpret_cast<char*>(&cols), sizeof cols);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(rows, cols);
  in.read(reinterpret_cast<char*>(rm.data()),
          static_cast<std::streamsize>(sizeof(double) * rm.size()));
  if (!in) throw Error(ErrorCode::io, "truncated matrix dump " + path);
  return rm;
}

}  // namespace quasitrans
