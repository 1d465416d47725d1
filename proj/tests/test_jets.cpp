#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "twistorlab/jets.hpp"

using twistorlab::Jet;

TEST_CASE("seed and constant carry the right low coefficients") {
  Jet c = Jet::constant(3, 2, 4.25);
  CHECK(c.value() == 4.25);
  CHECK(c.derivative(0).value() == 0.0);
  Jet x = Jet::seed(3, 2, -1.5, 1);
  CHECK(x.value() == -1.5);
  CHECK(x.derivative(1).value() == 1.0);
  CHECK(x.derivative(0).value() == 0.0);
  CHECK(x.derivative(2).value() == 0.0);
}

TEST_CASE("polynomial partial derivatives up to order three") {
  Jet x = Jet::seed(2, 3, 0.7, 0);
  Jet y = Jet::seed(2, 3, -0.4, 1);
  Jet f = x * x * y + y * y * y;
  CHECK(f.value() == doctest::Approx(-0.26).epsilon(1e-14));
  CHECK(f.derivative(0).value() == doctest::Approx(-0.56));
  CHECK(f.derivative(1).value() == doctest::Approx(0.97));
  CHECK(f.derivative(0).derivative(0).value() == doctest::Approx(-0.8));
  CHECK(f.derivative(0).derivative(1).value() == doctest::Approx(1.4));
  CHECK(f.derivative(1).derivative(0).value() == doctest::Approx(1.4));
  CHECK(f.derivative(1).derivative(1).value() == doctest::Approx(-2.4));
  CHECK(f.derivative(0).derivative(0).derivative(1).value() ==
        doctest::Approx(2.0));
  CHECK(f.derivative(0).derivative(1).derivative(1).value() ==
        doctest::Approx(0.0));
}

TEST_CASE("division and square root invert multiplication") {
  Jet x = Jet::seed(2, 4, 0.9, 0);
  Jet y = Jet::seed(2, 4, 0.3, 1);
  Jet g = 2.0 + x * y + x * x;
  Jet r = g / g;
  CHECK(r.value() == doctest::Approx(1.0));
  CHECK(r.derivative(0).value() == doctest::Approx(0.0).epsilon(1e-13));
  Jet s = sqrt(g);
  Jet back = s * s - g;
  CHECK(std::abs(back.value()) < 1e-14);
  CHECK(std::abs(back.derivative(0).derivative(1).value()) < 1e-13);
  Jet inv = recip(g);
  Jet one = inv * g;
  CHECK(one.value() == doctest::Approx(1.0));
  CHECK(std::abs(one.derivative(1).value()) < 1e-13);
}

TEST_CASE("derivative and truncation lower the order") {
  Jet x = Jet::seed(3, 3, 0.2, 0);
  CHECK(x.order() == 3);
  CHECK(x.derivative(0).order() == 2);
  CHECK(x.truncated(1).order() == 1);
  CHECK(x.truncated(3).order() == 3);
  CHECK_THROWS(x.truncated(4));  // truncation never extends
}

TEST_CASE("arithmetic requires matching shape") {
  Jet a = Jet::seed(2, 2, 1.0, 0);
  Jet b = Jet::seed(2, 3, 1.0, 0);
  Jet c = Jet::seed(3, 2, 1.0, 0);
  CHECK_THROWS(a + b);
  CHECK_THROWS(a * c);
  CHECK_NOTHROW(a + b.truncated(2));
}

TEST_CASE("promotion embeds into more variables") {
  Jet x = Jet::seed(2, 2, 0.5, 0);
  Jet y = Jet::seed(2, 2, -2.0, 1);
  Jet f = x * y;
  std::array<int, 2> map{1, 3};
  Jet g = f.promoted(4, map);
  CHECK(g.dim() == 4);
  CHECK(g.value() == f.value());
  CHECK(g.derivative(1).value() == doctest::Approx(-2.0));
  CHECK(g.derivative(3).value() == doctest::Approx(0.5));
  CHECK(g.derivative(0).value() == 0.0);
}
