#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "quasitrans/quasitrans.h"

namespace {

std::vector<double> nodes_of(const qt_curve* c, int n, bool real_part) {
  std::vector<double> h(n);
  for (int j = 0; j < n; ++j) {
    double x = 0, y = 0;
    qt_curve_eval(c, 2 * M_PI * j / n, &x, &y);
    h[j] = real_part ? x : y;
  }
  return h;
}

int rational(void*, double re, double im, double* out_re, double* out_im) {
  const std::complex<double> z(re, im);
  const auto v = z / (2.0 - z);
  *out_re = v.real();
  *out_im = v.imag();
  return 0;
}

int failing(void*, double, double, double*, double*) { return 1; }

double shift_lift(void* user, double theta) { return theta + *static_cast<double*>(user); }

void count_checks(void* user, const qt_check* c) {
  auto* counts = static_cast<int*>(user);
  ++counts[0];
  if (c->passed) ++counts[1];
}

}  // namespace

TEST_CASE("status strings and errors") {
  CHECK(std::string(qt_status_string(QT_OK)) == "ok");
  CHECK(std::string(qt_version()) == "0.1.0");
  qt_curve* c = nullptr;
  CHECK(qt_curve_family("ellipse", 0.0, &c) == QT_INVALID_ARGUMENT);
  CHECK(c == nullptr);
  CHECK(std::string(qt_last_error()).size() > 0);
  CHECK(qt_curve_family("circle", 0.0, &c) == QT_OK);
  CHECK(std::string(qt_last_error()).empty());
  CHECK(qt_curve_family(nullptr, 0.0, &c) == QT_INVALID_ARGUMENT);
  qt_curve_free(c);
  qt_curve_free(nullptr);
  qt_series_free(nullptr);
  qt_boundary_set_free(nullptr);
  qt_potential_free(nullptr);
  qt_decomposition_free(nullptr);
}

TEST_CASE("curves through the C API") {
  const int k[] = {1};
  const double re[] = {1.0};
  const double im[] = {0.0};
  qt_curve* c = nullptr;
  REQUIRE(qt_curve_from_coefficients(k, re, im, 1, "unit", 0.0, &c) == QT_OK);
  CHECK(std::string(qt_curve_family_tag(c)) == "unit");
  double x = 0, y = 0;
  REQUIRE(qt_curve_eval(c, M_PI / 2, &x, &y) == QT_OK);
  CHECK(std::abs(x) < 1e-15);
  CHECK(y == doctest::Approx(1.0));
  qt_curve_diagnostics d;
  REQUIRE(qt_curve_diagnose(c, 512, &d) == QT_OK);
  CHECK(d.injective == 1);
  CHECK(d.signed_area == doctest::Approx(M_PI));
  double tp = 0;
  REQUIRE(qt_curve_three_point(c, 1024, &tp) == QT_OK);
  CHECK(tp == doctest::Approx(1.0));

  qt_mobius near_pole{{0, 0}, {1, 0}, {1, 0}, {-1.01, 0}};
  qt_curve* img = nullptr;
  CHECK(qt_curve_mobius_image(c, &near_pole, &img, nullptr) == QT_DOMAIN_ERROR);
  qt_mobius inversion{{0, 0}, {1, 0}, {1, 0}, {0, 0}};
  int swapped = 0;
  REQUIRE(qt_curve_mobius_image(c, &inversion, &img, &swapped) == QT_OK);
  CHECK(swapped == 1);
  qt_curve_free(img);
  qt_curve_free(c);
}

TEST_CASE("transmission reports") {
  qt_curve* c = nullptr;
  REQUIRE(qt_curve_family("ellipse", 0.5, &c) == QT_OK);
  qt_transmission_report r[2];
  REQUIRE(qt_transmission_norms(c, 16, 256, nullptr, r) == QT_OK);
  CHECK(r[0].norm_estimate == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(r[1].direction == QT_EXTERIOR_TO_INTERIOR);
  CHECK(r[0].converged == 1);
  CHECK(std::string(r[0].family_tag) == "ellipse");
  CHECK(r[0].distortion_param == 0.5);

  qt_norm_options opt;
  qt_default_norm_options(&opt);
  CHECK(opt.convergence_tol == 1e-6);
  opt.check_refinement = 0;
  qt_transmission_report single;
  REQUIRE(qt_transmission_norm(c, 8, 128, QT_EXTERIOR_TO_INTERIOR, &opt, &single) == QT_OK);
  CHECK(single.converged == 0);
  CHECK(qt_transmission_norm(c, 16, 64, QT_INTERIOR_TO_EXTERIOR, &opt, &single) == QT_INVALID_ARGUMENT);

  qt_mobius aut{{1, 0}, {-0.2, 0}, {-0.2, 0}, {1, 0}};
  qt_transmission_report a, b;
  int swapped = -1;
  REQUIRE(qt_mobius_conjugate_norm(c, &aut, 16, 512, QT_INTERIOR_TO_EXTERIOR, &opt, &a, &b, &swapped) == QT_OK);
  CHECK(swapped == 0);
  CHECK(std::abs(a.norm_estimate - b.norm_estimate) < 1e-5);
  qt_curve_free(c);
}

TEST_CASE("solver, potentials and agreement") {
  qt_curve* c = nullptr;
  REQUIRE(qt_curve_family("ellipse", 0.5, &c) == QT_OK);
  const auto h = nodes_of(c, 256, true);
  double e = 0;
  REQUIRE(qt_dirichlet_energy(c, h.data(), h.size(), QT_INTERIOR, &e) == QT_OK);
  CHECK(e == doctest::Approx(M_PI / 2).epsilon(1e-10));

  qt_potential* u = nullptr;
  double te = 0;
  REQUIRE(qt_transmit(c, h.data(), h.size(), QT_INTERIOR, QT_EXTERIOR, &u, &te) == QT_OK);
  CHECK(te == doctest::Approx(M_PI).epsilon(1e-10));
  double v = 0;
  REQUIRE(qt_potential_eval(u, 3.0, 0.0, &v) == QT_OK);
  CHECK(std::isfinite(v));
  CHECK(qt_potential_eval(u, 0.0, 0.0, &v) == QT_DOMAIN_ERROR);
  qt_potential_free(u);

  qt_agreement_options opt;
  qt_default_agreement_options(&opt);
  qt_agreement_report rep;
  std::vector<qt_probe_record> rec(16);
  REQUIRE(qt_boundary_agreement(c, h.data(), h.size(), 16, &opt, &rep, rec.data()) == QT_OK);
  CHECK(rep.probes == 16);
  CHECK(rep.max_discrepancy < 1e-6);
  CHECK(rec[3].converged == 1);
  CHECK(rec[3].source_limit == doctest::Approx(rec[3].point[0]).epsilon(1e-8));

  const char* path = "c_api_dump.bin";
  REQUIRE(qt_matrix_dump(c, 32, QT_MATRIX_INTERIOR_SYSTEM, path) == QT_OK);
  std::ifstream in(path, std::ios::binary);
  std::uint64_t dims[2] = {0, 0};
  in.read(reinterpret_cast<char*>(dims), sizeof dims);
  CHECK(dims[0] == 32);
  CHECK(dims[1] == 32);
  in.seekg(0, std::ios::end);
  CHECK(static_cast<std::size_t>(in.tellg()) == 16 + 32 * 32 * 8);
  in.close();
  std::remove(path);
  CHECK(qt_matrix_dump(c, 32, QT_MATRIX_DOUBLE_LAYER, "/nonexistent/dir/x.bin") == QT_IO_ERROR);
  qt_curve_free(c);
}

TEST_CASE("series and decomposition") {
  qt_series* h = nullptr;
  REQUIRE(qt_series_create(QT_ANNULUS, 0.5, 1.0, &h) == QT_OK);
  REQUIRE(qt_series_add_analytic(h, 2, 1.0, 0.0) == QT_OK);
  REQUIRE(qt_series_add_analytic(h, -1, 0.0, 1.0) == QT_OK);
  REQUIRE(qt_series_add_log(h, 1.0, 0.0) == QT_OK);
  qt_decomposition* d = nullptr;
  REQUIRE(qt_series_decompose(h, 0.0, 0.0, 0, &d) == QT_OK);
  double cre = 0, cim = 0;
  qt_decomposition_log_coefficient(d, &cre, &cim);
  CHECK(cre == -1.0);
  double a = 0, b = 0, x = 0, y = 0;
  REQUIRE(qt_series_evaluate(h, 0.7, 0.1, &a, &b) == QT_OK);
  REQUIRE(qt_decomposition_recompose(d, 0.7, 0.1, &x, &y) == QT_OK);
  CHECK(std::hypot(a - x, b - y) < 1e-14);
  double ir = 0, ii = 0;
  REQUIRE(qt_series_inner(qt_decomposition_inner_part(d), qt_decomposition_inner_part(d), &ir, &ii) == QT_OK);
  CHECK(ir == doctest::Approx(2 * M_PI));
  CHECK(qt_series_evaluate(h, 0.1, 0.0, &a, &b) == QT_DOMAIN_ERROR);
  qt_decomposition_free(d);

  qt_collar_report cr;
  REQUIRE(qt_series_collar_extension(h, &cr) == QT_OK);
  CHECK(std::isfinite(cr.ratio));
  qt_series_free(h);

  double err = 1;
  REQUIRE(qt_decomposition_roundtrip(1, 20, &err) == QT_OK);
  CHECK(err < 1e-13);
  double sup = 0;
  int finite = 0;
  REQUIRE(qt_collar_ratio_sample(1, 100, 0.5, &sup, &finite) == QT_OK);
  CHECK(finite == 1);
  CHECK(sup <= 5.0 / 3.0 + 1e-12);

  double m = 0;
  REQUIRE(qt_greens_coperiod(0.3, 0.0, 0.9, 256, &m) == QT_OK);
  CHECK(m == doctest::Approx(-2 * M_PI).epsilon(1e-10));
  REQUIRE(qt_collar_energy_greens(0.0, 0.0, 0.5, 512, &m) == QT_OK);
  CHECK(m == doctest::Approx(2 * M_PI * std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("callbacks") {
  qt_limit_estimate lim;
  REQUIRE(qt_cnt_probe(rational, nullptr, 1.0, 0.0, M_PI / 4, 12, &lim) == QT_OK);
  CHECK(lim.converged == 1);
  CHECK(lim.value[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(qt_cnt_probe(failing, nullptr, 1.0, 0.0, M_PI / 4, 12, &lim) == QT_NUMERICAL_ERROR);

  const double t1[] = {0.0};
  const double t2[] = {M_PI};
  qt_boundary_set* s = nullptr;
  REQUIRE(qt_boundary_set_create(t1, t2, 1, &s) == QT_OK);
  CHECK(qt_boundary_set_measure(s) == doctest::Approx(M_PI));
  double shift = 1.0;
  qt_boundary_set* moved = nullptr;
  REQUIRE(qt_boundary_set_pushforward(s, shift_lift, &shift, 1024, &moved) == QT_OK);
  REQUIRE(qt_boundary_set_arc_count(moved) == 1);
  double start = 0, len = 0;
  REQUIRE(qt_boundary_set_arc(moved, 0, &start, &len) == QT_OK);
  CHECK(start == doctest::Approx(1.0));
  CHECK(len == doctest::Approx(M_PI));
  CHECK(qt_boundary_set_arc(moved, 5, &start, &len) == QT_INVALID_ARGUMENT);
  double d1 = 0, d2 = 0;
  REQUIRE(qt_fekete_capacity(s, 20, &d1) == QT_OK);
  REQUIRE(qt_fekete_capacity(moved, 20, &d2) == QT_OK);
  CHECK(d1 == doctest::Approx(d2).epsilon(1e-9));
  CHECK(qt_fekete_capacity(s, 2, &d1) == QT_INVALID_ARGUMENT);
  qt_boundary_set_free(moved);
  qt_boundary_set_free(s);
  qt_boundary_set* full = nullptr;
  REQUIRE(qt_boundary_set_full_circle(&full) == QT_OK);
  REQUIRE(qt_fekete_capacity(full, 16, &d1) == QT_OK);
  CHECK(d1 == doctest::Approx(std::pow(16.0, 1.0 / 15.0)).epsilon(1e-12));
  qt_boundary_set_free(full);
}

TEST_CASE("validation through the C API") {
  int counts[2] = {0, 0};
  int failures = -1;
  REQUIRE(qt_validate(20240611, count_checks, counts, &failures) == QT_OK);
  CHECK(failures == 0);
  CHECK(counts[0] > 40);
  CHECK(counts[0] == counts[1]);
}
