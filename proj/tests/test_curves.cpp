#include <cmath>

#include "doctest.h"
#include "quasitrans/curves.hpp"
#include "quasitrans/error.hpp"

using namespace quasitrans;

namespace {

bool near(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("circle and ellipse evaluation") {
  const auto circle = family("circle", 0.0);
  CHECK(near(circle.eval(0.0), {1.0, 0.0}, 1e-15));
  CHECK(near(circle.eval(M_PI / 2), {0.0, 1.0}, 1e-15));
  const auto ellipse = family("ellipse", 0.5);
  CHECK(near(ellipse.eval(M_PI), {-1.0, 0.0}, 1e-15));
  CHECK(near(ellipse.eval(M_PI / 2), {0.0, 0.5}, 1e-15));
}

TEST_CASE("evaluation is 2π-periodic") {
  const auto star = family("star", 0.15);
  for (double t : {0.1, 1.7, 4.2}) {
    CHECK(near(star.eval(t), star.eval(t + kTwoPi), 1e-13));
    CHECK(near(star.eval(t), star.eval(t - 3 * kTwoPi), 1e-13));
  }
}

TEST_CASE("derivatives agree with central differences") {
  const auto star = family("star", 0.1);
  const double h = 1e-5;
  for (double t : {0.3, 2.0, 5.5}) {
    const Complex fd1 = (star.eval(t + h) - star.eval(t - h)) / (2 * h);
    const Complex fd2 = (star.derivative(t + h) - star.derivative(t - h)) / (2 * h);
    CHECK(near(star.derivative(t), fd1, 1e-8));
    CHECK(near(star.second_derivative(t), fd2, 1e-7));
  }
}

TEST_CASE("checked construction rejects invalid curves") {
  SUBCASE("limaçon with inner loop is not injective") {
    CHECK_THROWS_AS(CurveSpec::from_coefficients({{0, 1.0}, {1, 1.0}, {2, 1.0}}), InvalidArgument);
  }
  SUBCASE("negative orientation") {
    CHECK_THROWS_AS(CurveSpec::from_coefficients({{-1, 1.0}}), InvalidArgument);
  }
  SUBCASE("vanishing speed") {
    CHECK_THROWS_AS(CurveSpec::from_coefficients({{1, 1.0}, {2, 0.5}}), InvalidArgument);
  }
  SUBCASE("valid custom curve keeps its metadata") {
    const auto c = CurveSpec::from_coefficients({{1, 2.0}, {0, {0.5, 0.0}}}, "shifted", 0.25);
    CHECK(c.family_tag() == "shifted");
    CHECK(c.distortion_param() == 0.25);
    CHECK(c.degree() == 1);
    CHECK(near(c.coefficient(0), {0.5, 0.0}, 0.0));
    CHECK(near(c.coefficient(7), {0.0, 0.0}, 0.0));
  }
}

TEST_CASE("family parameter ranges") {
  CHECK_THROWS_AS(family("circle", 0.1), InvalidArgument);
  CHECK_THROWS_AS(family("ellipse", 0.0), InvalidArgument);
  CHECK_THROWS_AS(family("ellipse", 1.2), InvalidArgument);
  CHECK_THROWS_AS(family("star", 0.2), InvalidArgument);
  CHECK_THROWS_AS(family("cusp", 1.0), InvalidArgument);
  CHECK_THROWS_AS(family("spiral", 0.1), InvalidArgument);
  CHECK_NOTHROW(family("cusp", 0.95));
  CHECK(family("cusp", 0.4).family_tag() == "cusp");
}

TEST_CASE("diagnostics and area") {
  const auto d = diagnose(family("circle", 0.0));
  CHECK(d.valid());
  CHECK(d.min_speed == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.diameter == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(d.signed_area == doctest::Approx(M_PI).epsilon(1e-12));
  // Area of the ellipse with semi-axes 1 and p is πp.
  for (double p : {0.3, 0.5, 0.9}) {
    CHECK(enclosed_area(family("ellipse", p)) == doctest::Approx(M_PI * p).epsilon(1e-13));
  }
  // Cusp family: ellipse with semi-axes 1 − p and 1 + p.
  CHECK(enclosed_area(family("cusp", 0.6)) == doctest::Approx(M_PI * 0.4 * 1.6).epsilon(1e-13));
}

TEST_CASE("three-point constant") {
  CHECK(three_point_constant(family("circle", 0.0)) == doctest::Approx(1.0).epsilon(1e-12));
  const double e = three_point_constant(family("ellipse", 0.5));
  CHECK(e >= 1.0);
  CHECK(std::isfinite(e));
  // Distortion grows along the cusp family.
  CHECK(three_point_constant(family("cusp", 0.9)) > three_point_constant(family("cusp", 0.3)));
  CHECK_THROWS_AS(three_point_constant(family("circle", 0.0), 8), InvalidArgument);
}

TEST_CASE("Möbius images") {
  const auto circle = family("circle", 0.0);
  SUBCASE("disk automorphism keeps the unit circle") {
    const auto img = mobius_image(circle, Mobius::disk_automorphism({0.2, 0.1}));
    CHECK_FALSE(img.sides_swapped);
    for (int j = 0; j < 50; ++j) CHECK(std::abs(img.curve.eval(0.37 * j)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(img.curve.family_tag() == "circle+mobius");
  }
  SUBCASE("image points are M(γ(t)) on the same parameter") {
    const auto ellipse = family("ellipse", 0.5);
    const Mobius m{0.0, 1.0, 1.0, -3.0};
    const auto img = mobius_image(ellipse, m);
    CHECK_FALSE(img.sides_swapped);
    for (double t : {0.0, 1.1, 2.9, 5.0}) CHECK(near(img.curve.eval(t), m(ellipse.eval(t)), 1e-12));
    CHECK(diagnose(img.curve).valid());
  }
  SUBCASE("pole inside swaps the sides and reverses the parameter") {
    const auto ellipse = family("ellipse", 0.5);
    const Mobius inv{0.0, 1.0, 1.0, 0.0};
    const auto img = mobius_image(ellipse, inv);
    CHECK(img.sides_swapped);
    for (double t : {0.4, 2.2, 4.4}) CHECK(near(img.curve.eval(t), inv(ellipse.eval(-t)), 1e-11));
    CHECK(diagnose(img.curve).positively_oriented);
  }
  SUBCASE("pole too close to the curve") {
    CHECK_THROWS_AS(mobius_image(circle, Mobius{0.0, 1.0, 1.0, -1.01}), DomainError);
  }
}
