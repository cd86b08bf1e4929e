#include "quasitrans/quasitrans.h"

#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "quasitrans/capacity.hpp"
#include "quasitrans/cnt_probe.hpp"
#include "quasitrans/curves.hpp"
#include "quasitrans/error.hpp"
#include "quasitrans/harmonic_series.hpp"
#include "quasitrans/nystrom.hpp"
#include "quasitrans/transmission.hpp"
#include "quasitrans/validation.hpp"

namespace qt = quasitrans;

struct qt_curve {
  qt::CurveSpec spec;
};

struct qt_series {
  qt::HarmonicSeries series;
};

struct qt_decomposition {
  qt::AnnulusDecomposition d;
  qt_series inner;
  qt_series outer;
};

struct qt_boundary_set {
  qt::BoundarySet set;
};

struct qt_potential {
  qt::PotentialEvaluator u;
};

namespace {

thread_local std::string last_error;

qt_status set_error(qt_status status, const std::string& message) {
  last_error = message;
  return status;
}

qt_status from_code(qt::ErrorCode code) {
  switch (code) {
    case qt::ErrorCode::invalid_argument: return QT_INVALID_ARGUMENT;
    case qt::ErrorCode::domain: return QT_DOMAIN_ERROR;
    case qt::ErrorCode::numerical: return QT_NUMERICAL_ERROR;
    case qt::ErrorCode::io: return QT_IO_ERROR;
  }
  return QT_INTERNAL_ERROR;
}

template <class F>
qt_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return QT_OK;
  } catch (const qt::Error& e) {
    return set_error(from_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(QT_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return set_error(QT_INTERNAL_ERROR, e.what());
  }
}

void require(bool condition, const char* what) {
  if (!condition) throw qt::InvalidArgument(what);
}

qt::Complex cx(const double v[2]) { return {v[0], v[1]}; }

qt::Mobius to_mobius(const qt_mobius* m) {
  require(m != nullptr, "null Möbius map");
  return {cx(m->a), cx(m->b), cx(m->c), cx(m->d)};
}

qt::Side to_side(qt_side s) {
  require(s == QT_INTERIOR || s == QT_EXTERIOR, "unknown side");
  return s == QT_INTERIOR ? qt::Side::interior : qt::Side::exterior;
}

qt::Direction to_direction(qt_direction d) {
  require(d == QT_INTERIOR_TO_EXTERIOR || d == QT_EXTERIOR_TO_INTERIOR, "unknown direction");
  return d == QT_INTERIOR_TO_EXTERIOR ? qt::Direction::interior_to_exterior
                                      : qt::Direction::exterior_to_interior;
}

qt::NormOptions to_options(const qt_norm_options* o) {
  qt::NormOptions out;
  if (o != nullptr) {
    out.convergence_tol = o->convergence_tol;
    out.check_refinement = o->check_refinement != 0;
    out.three_point_samples = o->three_point_samples;
  }
  return out;
}

Eigen::VectorXd samples(const double* h, size_t n) {
  require(h != nullptr && n > 0, "empty boundary samples");
  return Eigen::Map<const Eigen::VectorXd>(h, static_cast<Eigen::Index>(n));
}

void fill(const qt::TransmissionReport& r, qt_transmission_report* out) {
  std::memset(out, 0, sizeof *out);
  std::strncpy(out->family_tag, r.family_tag.c_str(), sizeof out->family_tag - 1);
  out->distortion_param = r.distortion_param;
  out->direction = r.direction == qt::Direction::interior_to_exterior ? QT_INTERIOR_TO_EXTERIOR
                                                                      : QT_EXTERIOR_TO_INTERIOR;
  out->modes = r.modes;
  out->nodes = r.nodes;
  out->norm_estimate = r.norm_estimate;
  out->refined_norm = r.refined_norm;
  out->source_gram_condition = r.source_gram_condition;
  out->system_condition = r.system_condition;
  out->hermitian_defect = r.hermitian_defect;
  out->constant_mode_energy = r.constant_mode_energy;
  out->three_point = r.three_point;
  out->converged = r.converged ? 1 : 0;
}

qt::PointEvaluator wrap(qt_point_fn f, void* user) {
  return [f, user](qt::Complex z) {
    double re = 0.0;
    double im = 0.0;
    if (f(user, z.real(), z.imag(), &re, &im) != 0) {
      throw qt::NumericalError("point callback reported failure");
    }
    return qt::Complex(re, im);
  };
}

}  // namespace

extern "C" {

const char* qt_version(void) { return "0.1.0"; }

const char* qt_last_error(void) { return last_error.c_str(); }

const char* qt_status_string(qt_status status) {
  switch (status) {
    case QT_OK: return "ok";
    case QT_INVALID_ARGUMENT: return "invalid argument";
    case QT_DOMAIN_ERROR: return "domain error";
    case QT_NUMERICAL_ERROR: return "numerical error";
    case QT_IO_ERROR: return "i/o error";
    case QT_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

void qt_default_norm_options(qt_norm_options* out) {
  if (out == nullptr) return;
  const qt::NormOptions d;
  out->convergence_tol = d.convergence_tol;
  out->check_refinement = d.check_refinement ? 1 : 0;
  out->three_point_samples = d.three_point_samples;
}

void qt_default_agreement_options(qt_agreement_options* out) {
  if (out == nullptr) return;
  const qt::AgreementOptions d;
  out->alpha = d.alpha;
  out->steps = d.steps;
  out->increment_tol = d.tolerance.increment;
  out->disagreement_tol = d.tolerance.disagreement;
}

qt_status qt_curve_family(const char* name, double param, qt_curve** out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    *out = new qt_curve{qt::family(name, param)};
  });
}

qt_status qt_curve_from_coefficients(const int* k, const double* re, const double* im,
                                     size_t count, const char* family_tag,
                                     double distortion_param, qt_curve** out) {
  return guarded([&] {
    require(k != nullptr && re != nullptr && im != nullptr && out != nullptr, "null argument");
    std::vector<qt::FourierTerm> terms;
    for (size_t i = 0; i < count; ++i) terms.push_back({k[i], {re[i], im[i]}});
    *out = new qt_curve{qt::CurveSpec::from_coefficients(
        std::move(terms), family_tag != nullptr ? family_tag : "custom", distortion_param)};
  });
}

qt_status qt_curve_mobius_image(const qt_curve* curve, const qt_mobius* map, qt_curve** out,
                                int* sides_swapped) {
  return guarded([&] {
    require(curve != nullptr && out != nullptr, "null argument");
    auto img = qt::mobius_image(curve->spec, to_mobius(map));
    if (sides_swapped != nullptr) *sides_swapped = img.sides_swapped ? 1 : 0;
    *out = new qt_curve{std::move(img.curve)};
  });
}

void qt_curve_free(qt_curve* curve) { delete curve; }

qt_status qt_curve_eval(const qt_curve* curve, double t, double* re, double* im) {
  return guarded([&] {
    require(curve != nullptr && re != nullptr && im != nullptr, "null argument");
    const auto z = curve->spec.eval(t);
    *re = z.real();
    *im = z.imag();
  });
}

const char* qt_curve_family_tag(const qt_curve* curve) {
  return curve != nullptr ? curve->spec.family_tag().c_str() : "";
}

double qt_curve_distortion_param(const qt_curve* curve) {
  return curve != nullptr ? curve->spec.distortion_param() : 0.0;
}

qt_status qt_curve_diagnose(const qt_curve* curve, int samples_count, qt_curve_diagnostics* out) {
  return guarded([&] {
    require(curve != nullptr && out != nullptr, "null argument");
    const auto d = qt::diagnose(curve->spec, samples_count);
    *out = {d.min_separation, d.min_speed, d.signed_area, d.diameter,
            d.injective ? 1 : 0, d.regular ? 1 : 0, d.positively_oriented ? 1 : 0};
  });
}

qt_status qt_curve_three_point(const qt_curve* curve, int samples_count, double* out) {
  return guarded([&] {
    require(curve != nullptr && out != nullptr, "null argument");
    *out = qt::three_point_constant(curve->spec, samples_count);
  });
}

qt_status qt_series_create(qt_domain_kind kind, double r_inner, double r_outer, qt_series** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    switch (kind) {
      case QT_DISK: *out = new qt_series{qt::HarmonicSeries(qt::SeriesDomain::disk(r_outer))}; break;
      case QT_EXTERIOR_DISK:
        *out = new qt_series{qt::HarmonicSeries(qt::SeriesDomain::exterior(r_inner))};
        break;
      case QT_ANNULUS:
        *out = new qt_series{qt::HarmonicSeries(qt::SeriesDomain::annulus(r_inner, r_outer))};
        break;
      default: throw qt::InvalidArgument("unknown domain kind");
    }
  });
}

void qt_series_free(qt_series* series) { delete series; }

qt_status qt_series_add_analytic(qt_series* series, int n, double re, double im) {
  return guarded([&] {
    require(series != nullptr, "null series");
    series->series.add_analytic(n, {re, im});
  });
}

qt_status qt_series_add_antianalytic(qt_series* series, int n, double re, double im) {
  return guarded([&] {
    require(series != nullptr, "null series");
    series->series.add_antianalytic(n, {re, im});
  });
}

qt_status qt_series_add_log(qt_series* series, double re, double im) {
  return guarded([&] {
    require(series != nullptr, "null series");
    series->series.add_log({re, im});
  });
}

qt_status qt_series_evaluate(const qt_series* series, double re, double im, double* out_re,
                             double* out_im) {
  return guarded([&] {
    require(series != nullptr && out_re != nullptr && out_im != nullptr, "null argument");
    const auto v = qt::evaluate(series->series, {re, im});
    *out_re = v.real();
    *out_im = v.imag();
  });
}

qt_status qt_series_inner(const qt_series* f, const qt_series* g, double* out_re, double* out_im) {
  return guarded([&] {
    require(f != nullptr && g != nullptr && out_re != nullptr && out_im != nullptr,
            "null argument");
    const auto v = qt::dirichlet_inner(f->series, g->series);
    *out_re = v.real();
    *out_im = v.imag();
  });
}

qt_status qt_series_energy(const qt_series* series, double* out) {
  return guarded([&] {
    require(series != nullptr && out != nullptr, "null argument");
    *out = qt::dirichlet_energy(series->series);
  });
}

qt_status qt_series_collar_extension(const qt_series* series, qt_collar_report* out) {
  return guarded([&] {
    require(series != nullptr && out != nullptr, "null argument");
    const auto ext = qt::collar_extension(series->series);
    *out = {ext.source_energy, ext.extension_energy, ext.ratio};
  });
}

qt_status qt_series_decompose(const qt_series* series, double pole_re, double pole_im,
                              int allow_nonzero_pole, qt_decomposition** out) {
  return guarded([&] {
    require(series != nullptr && out != nullptr, "null argument");
    auto d = qt::annulus_decompose(series->series, {pole_re, pole_im}, allow_nonzero_pole != 0);
    *out = new qt_decomposition{d, {d.inner_part}, {d.outer_part}};
  });
}

void qt_decomposition_free(qt_decomposition* d) { delete d; }

qt_status qt_decomposition_log_coefficient(const qt_decomposition* d, double* re, double* im) {
  return guarded([&] {
    require(d != nullptr && re != nullptr && im != nullptr, "null argument");
    *re = d->d.c.real();
    *im = d->d.c.imag();
  });
}

const qt_series* qt_decomposition_inner_part(const qt_decomposition* d) {
  return d != nullptr ? &d->inner : nullptr;
}

const qt_series* qt_decomposition_outer_part(const qt_decomposition* d) {
  return d != nullptr ? &d->outer : nullptr;
}

qt_status qt_decomposition_recompose(const qt_decomposition* d, double re, double im,
                                     double* out_re, double* out_im) {
  return guarded([&] {
    require(d != nullptr && out_re != nullptr && out_im != nullptr, "null argument");
    const auto v = d->d.recompose({re, im});
    *out_re = v.real();
    *out_im = v.imag();
  });
}

qt_status qt_greens_coperiod(double pole_re, double pole_im, double radius, int nodes,
                             double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = qt::greens_coperiod({pole_re, pole_im}, radius, nodes);
  });
}

qt_status qt_collar_energy_greens(double pole_re, double pole_im, double rho, int nodes,
                                  double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = qt::collar_energy_greens({pole_re, pole_im}, rho, nodes);
  });
}

qt_status qt_cnt_probe(qt_point_fn f, void* user, double point_re, double point_im, double alpha,
                       int n_steps, qt_limit_estimate* out) {
  return guarded([&] {
    require(f != nullptr && out != nullptr, "null argument");
    const auto lim = qt::cnt_probe(wrap(f, user), {point_re, point_im}, alpha, n_steps);
    out->value[0] = lim.value.real();
    out->value[1] = lim.value.imag();
    for (int r = 0; r < 2; ++r) {
      out->ray_limits[r][0] = lim.ray_limits[r].real();
      out->ray_limits[r][1] = lim.ray_limits[r].imag();
    }
    out->last_increment = lim.last_increment;
    out->ray_disagreement = lim.ray_disagreement;
    out->converged = lim.converged ? 1 : 0;
  });
}

qt_status qt_boundary_set_create(const double* theta1, const double* theta2, size_t count,
                                 qt_boundary_set** out) {
  return guarded([&] {
    require(out != nullptr && (count == 0 || (theta1 != nullptr && theta2 != nullptr)),
            "null argument");
    std::vector<std::pair<double, double>> intervals;
    for (size_t i = 0; i < count; ++i) intervals.emplace_back(theta1[i], theta2[i]);
    *out = new qt_boundary_set{qt::BoundarySet::from_intervals(intervals)};
  });
}

qt_status qt_boundary_set_full_circle(qt_boundary_set** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new qt_boundary_set{qt::BoundarySet::full_circle()};
  });
}

void qt_boundary_set_free(qt_boundary_set* set) { delete set; }

double qt_boundary_set_measure(const qt_boundary_set* set) {
  return set != nullptr ? set->set.measure() : 0.0;
}

size_t qt_boundary_set_arc_count(const qt_boundary_set* set) {
  return set != nullptr ? set->set.arcs().size() : 0;
}

qt_status qt_boundary_set_arc(const qt_boundary_set* set, size_t i, double* start,
                              double* length) {
  return guarded([&] {
    require(set != nullptr && start != nullptr && length != nullptr, "null argument");
    require(i < set->set.arcs().size(), "arc index out of range");
    *start = set->set.arcs()[i].start;
    *length = set->set.arcs()[i].length;
  });
}

qt_status qt_boundary_set_pushforward(const qt_boundary_set* set, qt_lift_fn lift, void* user,
                                      int knots, qt_boundary_set** out) {
  return guarded([&] {
    require(set != nullptr && lift != nullptr && out != nullptr, "null argument");
    const auto phi = qt::CircleMap::sample([&](double t) { return lift(user, t); }, knots);
    *out = new qt_boundary_set{qt::pushforward(set->set, phi)};
  });
}

qt_status qt_fekete_capacity(const qt_boundary_set* set, int n, double* out) {
  return guarded([&] {
    require(set != nullptr && out != nullptr, "null argument");
    *out = qt::fekete_capacity(set->set, n);
  });
}

qt_status qt_dirichlet_energy(const qt_curve* curve, const double* h, size_t n, qt_side side,
                              double* out) {
  return guarded([&] {
    require(curve != nullptr && out != nullptr, "null argument");
    const auto sys = qt::NystromSystem::build(curve->spec, static_cast<int>(n));
    *out = qt::dirichlet_energy(*sys, samples(h, n), to_side(side));
  });
}

qt_status qt_transmit(const qt_curve* curve, const double* h, size_t n, qt_side from, qt_side to,
                      qt_potential** out, double* target_energy) {
  return guarded([&] {
    require(curve != nullptr && out != nullptr, "null argument");
    auto t = qt::transmit(curve->spec, samples(h, n), to_side(from), to_side(to),
                          static_cast<int>(n));
    if (target_energy != nullptr) *target_energy = t.target_energy;
    *out = new qt_potential{std::move(t.target)};
  });
}

void qt_potential_free(qt_potential* u) { delete u; }

qt_status qt_potential_eval(const qt_potential* u, double re, double im, double* out) {
  return guarded([&] {
    require(u != nullptr && out != nullptr, "null argument");
    *out = u->u({re, im});
  });
}

qt_status qt_matrix_dump(const qt_curve* curve, int n, qt_matrix_kind kind, const char* path) {
  return guarded([&] {
    require(curve != nullptr && path != nullptr, "null argument");
    const auto sys = qt::NystromSystem::build(curve->spec, n);
    switch (kind) {
      case QT_MATRIX_DOUBLE_LAYER: qt::write_matrix_dump(path, sys->double_layer()); break;
      case QT_MATRIX_SINGLE_LAYER: qt::write_matrix_dump(path, sys->single_layer()); break;
      case QT_MATRIX_DIFFERENTIATION: qt::write_matrix_dump(path, sys->differentiation()); break;
      case QT_MATRIX_INTERIOR_SYSTEM:
        qt::write_matrix_dump(path, sys->system_matrix(qt::Side::interior));
        break;
      case QT_MATRIX_EXTERIOR_SYSTEM:
        qt::write_matrix_dump(path, sys->system_matrix(qt::Side::exterior));
        break;
      default: throw qt::InvalidArgument("unknown matrix kind");
    }
  });
}

qt_status qt_transmission_norm(const qt_curve* curve, int modes, int nodes,
                               qt_direction direction, const qt_norm_options* options,
                               qt_transmission_report* out) {
  return guarded([&] {
    require(curve != nullptr && out != nullptr, "null argument");
    fill(qt::transmission_norm(curve->spec, modes, nodes, to_direction(direction),
                               to_options(options)),
         out);
  });
}

qt_status qt_transmission_norms(const qt_curve* curve, int modes, int nodes,
                                const qt_norm_options* options, qt_transmission_report out[2]) {
  return guarded([&] {
    require(curve != nullptr && out != nullptr, "null argument");
    const auto r = qt::transmission_norms(curve->spec, modes, nodes, to_options(options));
    fill(r.first, &out[0]);
    fill(r.second, &out[1]);
  });
}

qt_status qt_mobius_conjugate_norm(const qt_curve* curve, const qt_mobius* map, int modes,
                                   int nodes, qt_direction direction,
                                   const qt_norm_options* options,
                                   qt_transmission_report* original,
                                   qt_transmission_report* image, int* sides_swapped) {
  return guarded([&] {
    require(curve != nullptr && original != nullptr && image != nullptr, "null argument");
    const auto r = qt::mobius_conjugate_norm(curve->spec, to_mobius(map), modes, nodes,
                                             to_direction(direction), to_options(options));
    fill(r.original, original);
    fill(r.image, image);
    if (sides_swapped != nullptr) *sides_swapped = r.sides_swapped ? 1 : 0;
  });
}

qt_status qt_boundary_agreement(const qt_curve* curve, const double* h, size_t n, int probes,
                                const qt_agreement_options* options, qt_agreement_report* out,
                                qt_probe_record* records) {
  return guarded([&] {
    require(curve != nullptr && out != nullptr, "null argument");
    qt::AgreementOptions opt;
    if (options != nullptr) {
      opt.alpha = options->alpha;
      opt.steps = options->steps;
      opt.tolerance = {options->increment_tol, options->disagreement_tol};
    }
    const auto r = qt::boundary_agreement(curve->spec, samples(h, n), static_cast<int>(n),
                                          probes, opt);
    *out = {r.max_discrepancy, r.fraction_converged, r.roundtrip_error,
            static_cast<int>(r.probes.size())};
    if (records != nullptr) {
      for (size_t i = 0; i < r.probes.size(); ++i) {
        const auto& p = r.probes[i];
        records[i] = {p.t, {p.point.real(), p.point.imag()}, p.source_limit, p.target_limit,
                      p.converged ? 1 : 0};
      }
    }
  });
}

qt_status qt_decomposition_roundtrip(uint64_t seed, int count, double* max_error) {
  return guarded([&] {
    require(max_error != nullptr && count >= 0, "invalid argument");
    *max_error = qt::decomposition_roundtrip_error(seed, count);
  });
}

qt_status qt_collar_ratio_sample(uint64_t seed, int count, double r_inner, double* sup_ratio,
                                 int* all_finite) {
  return guarded([&] {
    require(sup_ratio != nullptr && count >= 0, "invalid argument");
    const auto s = qt::collar_ratio_sample(seed, count, r_inner);
    *sup_ratio = s.sup_ratio;
    if (all_finite != nullptr) *all_finite = s.all_finite ? 1 : 0;
  });
}

qt_status qt_validate(uint64_t seed, qt_check_fn report, void* user, int* failures) {
  return guarded([&] {
    qt::ValidationOptions opt;
    opt.seed = seed;
    const auto checks = qt::run_validation(opt);
    int failed = 0;
    for (const auto& c : checks) {
      if (!c.passed) ++failed;
      if (report != nullptr) {
        const qt_check view{c.name.c_str(), c.value, c.reference, c.tolerance,
                            static_cast<qt_relation>(c.relation), c.passed ? 1 : 0};
        report(user, &view);
      }
    }
    if (failures != nullptr) *failures = failed;
  });
}

}  // extern "C"
