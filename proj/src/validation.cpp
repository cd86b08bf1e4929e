#include "quasitrans/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "quasitrans/cnt_probe.hpp"
#include "quasitrans/curves.hpp"
#include "quasitrans/error.hpp"
#include "quasitrans/nystrom.hpp"
#include "quasitrans/transmission.hpp"

namespace quasitrans {

Check check_equal(std::string name, double value, double reference, double tolerance) {
  return {std::move(name), value, reference, tolerance, Relation::equal,
          std::abs(value - reference) <= tolerance};
}

Check check_at_most(std::string name, double value, double bound) {
  return {std::move(name), value, bound, 0.0, Relation::at_most, value <= bound};
}

Check check_at_least(std::string name, double value, double bound) {
  return {std::move(name), value, bound, 0.0, Relation::at_least, value >= bound};
}

Check check_true(std::string name, bool condition) {
  return {std::move(name), condition ? 1.0 : 0.0, 1.0, 0.0, Relation::equal, condition};
}

namespace {

Complex random_complex(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double re = u(rng);
  return {re, u(rng)};
}

HarmonicSeries scaled(const HarmonicSeries& h, double s) {
  HarmonicSeries out(h.domain());
  for (const auto& [n, v] : h.analytic()) out.add_analytic(n, s * v);
  for (const auto& [n, v] : h.antianalytic()) out.add_antianalytic(n, s * v);
  out.add_log(s * h.log_coefficient());
  return out;
}

}  // namespace

HarmonicSeries random_annulus_series(std::mt19937_64& rng, double r_inner, int degree,
                                     double keep) {
  std::bernoulli_distribution kept(keep);
  HarmonicSeries h(SeriesDomain::annulus(r_inner, 1.0));
  for (int n = -degree; n <= degree; ++n) {
    if (kept(rng)) h.add_analytic(n, random_complex(rng));
  }
  for (int n = -degree; n <= degree; ++n) {
    if (n != 0 && kept(rng)) h.add_antianalytic(n, random_complex(rng));
  }
  if (kept(rng)) h.add_log(random_complex(rng));
  return h;
}

BoundarySet random_arc_union(std::mt19937_64& rng, int max_arcs) {
  std::uniform_int_distribution<int> count(1, max_arcs);
  std::uniform_real_distribution<double> start(0.0, kTwoPi);
  std::uniform_real_distribution<double> length(0.05, 1.5);
  std::vector<std::pair<double, double>> intervals;
  const int k = count(rng);
  for (int i = 0; i < k; ++i) {
    const double a = start(rng);
    intervals.emplace_back(a, a + length(rng));
  }
  return BoundarySet::from_intervals(intervals);
}

double decomposition_roundtrip_error(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> degree(1, 6);
  std::uniform_real_distribution<double> radius(0.5, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  double worst = 0.0;
  for (int s = 0; s < count; ++s) {
    const auto h = random_annulus_series(rng, 0.5, degree(rng));
    const auto d = annulus_decompose(h);
    for (int j = 0; j < 32; ++j) {
      const Complex z = std::polar(radius(rng), angle(rng));
      if (!h.domain().contains(z)) continue;
      worst = std::max(worst, std::abs(evaluate(h, z) - d.recompose(z)));
    }
  }
  return worst;
}

HarmonicSeries random_unit_energy_series(std::mt19937_64& rng, double r_inner, int degree,
                                         double keep) {
  const auto domain = SeriesDomain::annulus(r_inner, 1.0);
  std::bernoulli_distribution kept(keep);
  std::normal_distribution<double> g;
  const auto gaussian = [&] {
    const double re = g(rng);
    return Complex(re, g(rng));
  };
  const auto unit = [&](HarmonicSeries term) {
    return scaled(term, 1.0 / std::sqrt(dirichlet_inner(term, term).real()));
  };
  HarmonicSeries h(domain);
  for (int n = -degree; n <= degree; ++n) {
    if (n == 0 || !kept(rng)) continue;
    const auto b = unit(HarmonicSeries(domain).add_analytic(n, 1.0));
    h.add_analytic(n, gaussian() * b.analytic_coefficient(n));
  }
  for (int n = -degree; n <= degree; ++n) {
    if (n == 0 || !kept(rng)) continue;
    const auto b = unit(HarmonicSeries(domain).add_antianalytic(n, 1.0));
    h.add_antianalytic(n, gaussian() * b.antianalytic_coefficient(n));
  }
  if (kept(rng)) {
    h.add_log(gaussian() * unit(HarmonicSeries(domain).add_log(1.0)).log_coefficient());
  }
  const double e = dirichlet_inner(h, h).real();
  return e > 0.0 ? scaled(h, 1.0 / std::sqrt(e)) : h;
}

CollarSample collar_ratio_sample(std::uint64_t seed, int count, double r_inner) {
  std::mt19937_64 rng(seed);
  CollarSample out;
  for (int s = 0; s < count; ++s) {
    const auto h = random_unit_energy_series(rng, r_inner, 1, 0.5);
    if (h.max_abs_index() == 0 && h.log_coefficient() == Complex(0.0, 0.0)) continue;
    const auto ext = collar_extension(h);
    if (!std::isfinite(ext.extension_energy)) out.all_finite = false;
    out.sup_ratio = std::max(out.sup_ratio, ext.ratio);
  }
  return out;
}

double collar_ratio_bound(double r_inner) {
  const double r2 = r_inner * r_inner;
  return (1.0 + r2) / (1.0 - r2);
}

namespace {

using Checks = std::vector<Check>;

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

void curve_checks(Checks& out) {
  out.push_back(check_equal("curves.three_point.circle", three_point_constant(family("circle", 0.0)), 1.0, 1e-12));
  out.push_back(check_at_least("curves.three_point.ellipse_0.5", three_point_constant(family("ellipse", 0.5)), 1.0));
  const auto img = mobius_image(family("circle", 0.0), Mobius::disk_automorphism({0.2, 0.0}));
  double radial = 0.0;
  for (int j = 0; j < 64; ++j) radial = std::max(radial, std::abs(std::abs(img.curve.eval(kTwoPi * j / 64)) - 1.0));
  out.push_back(check_equal("curves.mobius_image.circle_stays_circle", radial, 0.0, 1e-12));
}

void energy_checks(Checks& out) {
  const auto circle = NystromSystem::build(family("circle", 0.0), 256);
  for (int k = 1; k <= 8; ++k) {
    const auto h = sample_at_nodes(*circle, [k](double t) { return std::cos(k * t); });
    const double e_in = dirichlet_energy(*circle, h, Side::interior);
    const double e_out = dirichlet_energy(*circle, h, Side::exterior);
    out.push_back(check_equal("energy.disk.re_z^" + std::to_string(k), e_in, k * M_PI, 1e-9));
    out.push_back(check_equal("energy.exterior.re_z^-" + std::to_string(k), e_out, k * M_PI, 1e-9));

    HarmonicSeries s(SeriesDomain::disk());
    s.add_analytic(k, 0.5).add_antianalytic(k, 0.5);
    out.push_back(check_equal("energy.series_vs_bie.k" + std::to_string(k), dirichlet_energy(s), e_in, 1e-9));
  }
  const auto ellipse = family("ellipse", 0.5);
  const auto esys = NystromSystem::build(ellipse, 256);
  const auto x = sample_at_nodes(*esys, [&](double t) { return ellipse.eval(t).real(); });
  out.push_back(check_equal("energy.ellipse_0.5.re_z", dirichlet_energy(*esys, x, Side::interior), M_PI / 2, 1e-8));

  const auto h3 = sample_at_nodes(*circle, [](double t) { return std::cos(3 * t); });
  const auto tr = transmit(circle, h3, Side::interior, Side::exterior);
  const Complex z(1.5, 0.7);
  out.push_back(check_equal("transmit.circle.cos3.value", tr.target(z), std::real(std::pow(z, -3)), 1e-10));
  out.push_back(check_equal("transmit.circle.cos3.energy", tr.target_energy, 3 * M_PI, 1e-9));
  const auto one = sample_at_nodes(*circle, [](double) { return 1.0; });
  out.push_back(check_equal("transmit.circle.constant.energy", transmit(circle, one, Side::interior, Side::exterior).target_energy, 0.0, 1e-10));
}

void series_checks(Checks& out, const ValidationOptions& opt) {
  out.push_back(check_at_most("decompose.roundtrip.max_error",
                              decomposition_roundtrip_error(opt.seed, opt.decomposition_series), 1e-13));
  HarmonicSeries log_only(SeriesDomain::annulus(0.5, 1.0));
  log_only.add_log(1.0);
  const auto d = annulus_decompose(log_only);
  out.push_back(check_equal("decompose.log_abs_z.c", d.c.real(), -1.0, 0.0));
  out.push_back(check_true("decompose.log_abs_z.parts_zero",
                           d.inner_part.max_abs_index() <= 0 && d.outer_part.max_abs_index() <= 0 &&
                               std::abs(d.inner_part.analytic_coefficient(0)) == 0.0 &&
                               std::abs(d.outer_part.analytic_coefficient(0)) == 0.0));

  for (const auto& [label, p] : {std::pair<const char*, Complex>{"0", {0.0, 0.0}},
                                 {"0.3", {0.3, 0.0}},
                                 {"0.5i", {0.0, 0.5}}}) {
    out.push_back(check_equal(std::string("greens.coperiod.p=") + label, greens_coperiod(p, 0.9), -kTwoPi, 1e-10));
  }
  out.push_back(check_equal("greens.collar_energy.p=0", collar_energy_greens({0.0, 0.0}, 0.5), kTwoPi * std::log(2.0), 1e-10));

  for (double theta : {0.0, 1.0, 2.5, 4.0}) {
    const PointEvaluator f = [](Complex z) { return Complex(std::real(z / (2.0 - z)), 0.0); };
    const Complex p = std::polar(1.0, theta);
    const auto lim = cnt_probe(f, p, M_PI / 4, 12);
    out.push_back(check_equal("cnt.disk.re_z/(2-z).theta=" + fmt("%g", theta), lim.value.real(), std::real(p / (2.0 - p)), 1e-8));
  }

  const auto a = collar_ratio_sample(opt.seed, opt.collar_series);
  const auto b = collar_ratio_sample(opt.seed + 1, opt.collar_series);
  out.push_back(check_true("collar.extension_energy_finite", a.all_finite && b.all_finite));
  out.push_back(check_at_most("collar.sup_ratio", a.sup_ratio, collar_ratio_bound(0.5) * (1 + 1e-12)));
  out.push_back(check_at_most("collar.sup_ratio_seed_spread",
                              std::abs(a.sup_ratio - b.sup_ratio) / std::max(a.sup_ratio, b.sup_ratio), 0.05));
}

void capacity_checks(Checks& out, const ValidationOptions& opt) {
  const double d64 = fekete_capacity(BoundarySet::full_circle(), 64);
  out.push_back(check_equal("capacity.full_circle.d_64_equispaced", d64, std::pow(64.0, 1.0 / 63.0), 1e-12));
  out.push_back(check_equal("capacity.empty", fekete_capacity(BoundarySet{}, 16), 0.0, 0.0));

  std::mt19937_64 rng(opt.seed);
  bool monotone = true;
  bool positive = true;
  const std::vector<CircleMap> maps{CircleMap::identity(), CircleMap::rotation(1.0),
                                    CircleMap::disk_automorphism({0.3, 0.2}),
                                    CircleMap::piecewise_linear(0.5), CircleMap::piecewise_linear(1.6)};
  for (int s = 0; s < opt.capacity_sets; ++s) {
    const auto set = random_arc_union(rng);
    double prev = std::numeric_limits<double>::infinity();
    for (int n : {8, 16, 32, 64}) {
      const double d = fekete_capacity(set, n);
      if (d > prev) monotone = false;
      prev = d;
    }
    for (const auto& phi : maps) {
      if (!(fekete_capacity(pushforward(set, phi), 16) > 0.0)) positive = false;
    }
  }
  out.push_back(check_true("capacity.d_n_monotone.random_unions", monotone));
  out.push_back(check_true("capacity.pushforward_positive", positive));
}

void transmission_checks(Checks& out) {
  const auto circle = transmission_norms(family("circle", 0.0), 16, 256);
  out.push_back(check_equal("transmission.circle.interior_to_exterior", circle.first.norm_estimate, 1.0, 1e-8));
  out.push_back(check_equal("transmission.circle.exterior_to_interior", circle.second.norm_estimate, 1.0, 1e-8));

  double prev = 0.0;
  bool nondecreasing = true;
  double floor = std::numeric_limits<double>::infinity();
  for (double p : {1.0, 0.9, 0.8, 0.7, 0.6}) {
    const auto r = transmission_norms(family("ellipse", p), 8, 128, {1e-6, false, 0});
    const double v = r.first.norm_estimate;
    floor = std::min({floor, v, r.second.norm_estimate});
    if (v < prev - 1e-9) nondecreasing = false;
    prev = v;
  }
  out.push_back(check_true("transmission.ellipse.nondecreasing_in_distortion", nondecreasing));
  out.push_back(check_at_least("transmission.ellipse.norm_floor", floor, 1.0 - 1e-6));

  prev = 0.0;
  nondecreasing = true;
  bool converged = true;
  double at_zero = 0.0;
  for (double p : {0.0, 0.2, 0.4, 0.6, 0.8, 0.9}) {
    const auto r = transmission_norm(family("cusp", p), 16, 512, Direction::interior_to_exterior, {1e-6, true, 0});
    if (p == 0.0) at_zero = r.norm_estimate;
    if (r.norm_estimate < prev - 1e-9) nondecreasing = false;
    converged = converged && r.converged;
    prev = r.norm_estimate;
  }
  out.push_back(check_equal("transmission.cusp.p=0", at_zero, 1.0, 1e-6));
  out.push_back(check_true("transmission.cusp.nondecreasing", nondecreasing));
  out.push_back(check_true("transmission.cusp.converged_through_0.9", converged));
  out.push_back(check_equal("transmission.cusp.p=0.9.closed_form", prev, std::sqrt(1.9 / 0.1), 1e-8));
}

void mobius_checks(Checks& out) {
  const auto dir = Direction::interior_to_exterior;
  const NormOptions quick{1e-6, false, 0};
  const auto circle = mobius_conjugate_norm(family("circle", 0.0), Mobius::disk_automorphism({0.2, 0.0}), 16, 256, dir, quick);
  out.push_back(check_equal("mobius.circle.disk_automorphism", circle.image.norm_estimate, 1.0, 1e-6));
  const auto ellipse = family("ellipse", 0.5);
  const auto rot = mobius_conjugate_norm(ellipse, Mobius::rotation(0.7), 16, 256, dir, quick);
  out.push_back(check_equal("mobius.ellipse.rotation", rot.image.norm_estimate, rot.original.norm_estimate, 1e-8));
  const auto aut = mobius_conjugate_norm(ellipse, Mobius::disk_automorphism({0.2, 0.0}), 16, 512, dir, quick);
  out.push_back(check_equal("mobius.ellipse.disk_automorphism", aut.image.norm_estimate, aut.original.norm_estimate, 1e-5));
  const auto inv = mobius_conjugate_norm(ellipse, Mobius{0.0, 1.0, 1.0, -3.0}, 16, 512, dir, quick);
  out.push_back(check_equal("mobius.ellipse.inversion_at_3", inv.image.norm_estimate, inv.original.norm_estimate, 1e-5));
}

void agreement_checks(Checks& out) {
  const auto circle = family("circle", 0.0);
  const auto csys = NystromSystem::build(circle, 256);
  const auto cr = boundary_agreement(circle, sample_at_nodes(*csys, [](double t) { return std::cos(t); }), 256, 32);
  out.push_back(check_at_most("agreement.circle.cos.discrepancy", cr.max_discrepancy, 1e-8));
  out.push_back(check_equal("agreement.circle.cos.fraction_converged", cr.fraction_converged, 1.0, 0.0));

  const auto ellipse = family("ellipse", 0.5);
  const auto esys = NystromSystem::build(ellipse, 256);
  const auto h = sample_at_nodes(*esys, [&](double t) { return ellipse.eval(t).real(); });
  const auto er = boundary_agreement(ellipse, h, 256, 64);
  out.push_back(check_at_most("agreement.ellipse.re_z.discrepancy", er.max_discrepancy, 1e-6));
  out.push_back(check_at_least("agreement.ellipse.re_z.fraction_converged", er.fraction_converged, 0.99));
  out.push_back(check_at_most("agreement.ellipse.roundtrip", er.roundtrip_error, 1e-7));

  const auto one = sample_at_nodes(*esys, [](double) { return 1.0; });
  out.push_back(check_at_most("agreement.ellipse.constant.discrepancy",
                              boundary_agreement(ellipse, one, 256, 16).max_discrepancy, 1e-12));
}

}  // namespace

std::vector<Check> run_validation(const ValidationOptions& options) {
  Checks out;
  curve_checks(out);
  energy_checks(out);
  series_checks(out, options);
  capacity_checks(out, options);
  transmission_checks(out);
  mobius_checks(out);
  agreement_checks(out);
  return out;
}

std::string format_checks(const std::vector<Check>& checks) {
  std::ostringstream os;
  for (const auto& c : checks) {
    const char* rel = c.relation == Relation::equal ? "~=" : c.relation == Relation::at_most ? "<=" : ">=";
    char line[512];
    std::snprintf(line, sizeof line, "%s %-48s %.17g %s %.17g tol=%.3g\n", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.value, rel, c.reference, c.tolerance);
    os << line;
  }
  return os.str();
}

}  // namespace quasitrans
