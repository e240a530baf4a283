#include <cmath>
#include <random>

#include "doctest.h"

#include "cph/errors.hpp"
#include "cph/holomorphic.hpp"
#include "test_support.hpp"

using namespace cph;
using cph::test::close;
using cph::test::kI;

namespace {

// artanh z = sum z^(2k+1) / (2k+1), |z| < 1.
Complex artanh_series(Complex z) {
  Complex sum = 0.0, p = z;
  for (int k = 0; k < 200; ++k) {
    sum += p / double(2 * k + 1);
    p *= z * z;
  }
  return sum;
}

// F(z|m) = int_0^1 z / sqrt((1 - z^2 s^2)(1 - m z^2 s^2)) ds, composite
// 5-point Gauss-Legendre on 400 panels.
Complex elliptic_f_quadrature(Complex z, Complex m) {
  const double x[] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                      0.9061798459386640};
  const double w[] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                      0.2369268850561891, 0.2369268850561891};
  const int panels = 400;
  Complex sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = double(p) / panels, h = 1.0 / panels;
    for (int i = 0; i < 5; ++i) {
      const double s = a + h * (x[i] + 1.0) / 2.0;
      const Complex z2 = z * z * s * s;
      sum += w[i] * h / 2.0 * z / std::sqrt((1.0 - z2) * (1.0 - m * z2));
    }
  }
  return sum;
}

struct JacobiRef {
  Complex z, m, sn, cn, dn;
};

// 30-digit reference values (mpmath ellipfun).
const JacobiRef kJacobi[] = {
    {{0.3, 0.2}, {0.5, 0.0}, {0.3018489095074437, 0.18859667678838138},
     {0.9735886811047142, -0.058472024511116806}, {0.98643833678223, -0.028855174775039343}},
    {{1.2, -0.7}, {-0.8, 0.6}, {1.4469022995392764, -0.6501900002592564},
     {0.8144745077207763, 1.1550532246186385}, {1.4126326695424856, -0.8875930173755712}},
    {{-0.4, 1.1}, {2.5, -1.0}, {-2.17256955013211, 0.33581807957285575},
     {0.3767949176558689, 1.936300358303053}, {1.2643540078020667, 3.2646020366808246}},
    {{0.9, 0.0}, {0.0, 1.5}, {0.7905130919697245, -0.09744421549901251},
     {0.6320123785919853, 0.1218819926601757}, {0.9925504171670603, -0.4650259292604778}},
};

}  // namespace

TEST_CASE("artanh_principal") {
  CHECK(close(artanh_principal(0.0), 0.0) == 0.0);
  CHECK(close(artanh_principal(0.5), 0.5493061443340549) < 1e-15);
  CHECK(close(artanh_principal(kI), Complex(0.0, test::kPi / 4)) < 1e-15);
  CHECK_THROWS_AS(artanh_principal(1.0), PoleError);
  CHECK_THROWS_AS(artanh_principal(-1.0), PoleError);

  std::mt19937_64 rng(1);
  for (int n = 0; n < 200; ++n) {
    const Complex z = test::random_disk(rng, 0.5);
    CHECK(close(artanh_principal(z), artanh_series(z)) < 1e-14);
    CHECK(close(std::tanh(artanh_principal(z)), z) < 1e-14);
  }
}

TEST_CASE("artanh_principal cut convention") {
  // Principal value on (1, inf) is continuous from below the real axis.
  const Complex above = artanh_principal(Complex(2.0, 1e-300));
  const Complex below = artanh_principal(Complex(2.0, -1e-300));
  CHECK(above.imag() > 0.0);
  CHECK(below.imag() < 0.0);
  CHECK_THROWS_AS(require_finite(Complex(NAN, 0.0), "z"), OutOfDomainError);
}

TEST_CASE("jacobi_elliptic degenerations") {
  const Complex z(0.4, 0.3);
  const auto e0 = jacobi_elliptic(z, 0.0);
  CHECK(close(e0.sn, std::sin(z)) < 1e-15);
  CHECK(close(e0.cn, std::cos(z)) < 1e-15);
  CHECK(close(e0.dn, 1.0) < 1e-15);
  const auto e1 = jacobi_elliptic(z, 1.0);
  CHECK(close(e1.sn, std::tanh(z)) < 1e-15);
  CHECK(close(e1.cn, 1.0 / std::cosh(z)) < 1e-15);
  CHECK(close(e1.dn, 1.0 / std::cosh(z)) < 1e-15);
  // Continuity of the parameter through 1.
  const auto near = jacobi_elliptic(z, 1.0 - 1e-9);
  CHECK(close(near.sn, e1.sn) < 1e-8);
}

TEST_CASE("jacobi_elliptic against reference values") {
  for (const auto& r : kJacobi) {
    CAPTURE(r.z);
    CAPTURE(r.m);
    const auto e = jacobi_elliptic(r.z, r.m);
    CHECK(close(e.sn, r.sn) < 1e-13 * (1.0 + std::abs(r.sn)));
    CHECK(close(e.cn, r.cn) < 1e-13 * (1.0 + std::abs(r.cn)));
    CHECK(close(e.dn, r.dn) < 1e-13 * (1.0 + std::abs(r.dn)));
  }
}

TEST_CASE("jacobi_elliptic against real Legendre integrals") {
  // sn(F(phi, k) | k^2) = sin(phi) with F from the standard library.
  for (double k : {0.1, 0.5, 0.9, 0.99}) {
    for (double phi : {0.2, 0.7, 1.3}) {
      const double u = std::ellint_1(k, phi);
      const auto e = jacobi_elliptic(u, k * k);
      CHECK(close(e.sn, std::sin(phi)) < 1e-14);
      CHECK(close(e.cn, std::cos(phi)) < 1e-14);
      CHECK(close(e.dn, std::sqrt(1.0 - k * k * std::sin(phi) * std::sin(phi))) < 1e-14);
    }
  }
}

TEST_CASE("jacobi_elliptic periodicity and poles") {
  const double k = 0.6;
  const double K = std::comp_ellint_1(k);
  const Complex z(0.3, 0.1);
  const auto a = jacobi_elliptic(z, k * k);
  const auto b = jacobi_elliptic(z + 4.0 * K, k * k);
  CHECK(close(a.sn, b.sn) < 1e-12);
  const auto c = jacobi_elliptic(z + 2.0 * K, k * k);
  CHECK(close(c.sn, -a.sn) < 1e-12);
  // sn has a pole at i K'.
  const double Kp = std::comp_ellint_1(std::sqrt(1.0 - k * k));
  CHECK_THROWS_AS(jacobi_elliptic(Complex(0.0, Kp), k * k), PoleError);
}

TEST_CASE("jacobi_elliptic large parameter") {
  // Reciprocal-modulus relation: sn(z|m) = sn(sqrt(m) z | 1/m) / sqrt(m).
  const Complex m(3.0, 1.0), z(0.2, -0.3);
  const Complex k = std::sqrt(m);
  const auto e = jacobi_elliptic(z, m);
  const auto r = jacobi_elliptic(k * z, 1.0 / m);
  CHECK(close(e.sn, r.sn / k) < 1e-13);
  CHECK(close(e.cn, r.dn) < 1e-13);
  CHECK(close(e.dn, r.cn) < 1e-13);
}

TEST_CASE("jacobi_elliptic identities on random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  for (int n = 0; n < 1000; ++n) {
    const Complex z{box(rng), box(rng)}, m{box(rng), box(rng)};
    EllipticTriple e;
    try {
      e = jacobi_elliptic(z, m);
    } catch (const PoleError&) {
      continue;
    }
    const double scale = 1.0 + std::norm(e.sn) + std::norm(e.cn) + std::norm(e.dn);
    CHECK(std::abs(e.sn * e.sn + e.cn * e.cn - 1.0) < 1e-12 * scale);
    CHECK(std::abs(e.dn * e.dn + m * e.sn * e.sn - 1.0) < 1e-12 * scale);
    // sn is odd, cn and dn even.
    const auto f = jacobi_elliptic(-z, m);
    CHECK(close(f.sn, -e.sn) < 1e-12 * scale);
    CHECK(close(f.cn, e.cn) < 1e-12 * scale);
  }
}

TEST_CASE("jacobi_elliptic derivative") {
  // d sn / dz = cn dn, by central differences.
  const Complex z(0.5, 0.2), m(0.3, -0.4);
  const double h = 1e-5;
  const auto e = jacobi_elliptic(z, m);
  const Complex fd = (jacobi_elliptic(z + h, m).sn - jacobi_elliptic(z - h, m).sn) / (2 * h);
  CHECK(close(fd, e.cn * e.dn) < 1e-9);
}

TEST_CASE("carlson_rf") {
  CHECK(close(carlson_rf(1.0, 2.0, 3.0), 0.7269459354689082) < 1e-15);
  CHECK(close(carlson_rf({1.0, 1.0}, {2.0, -1.0}, 0.5),
              Complex(0.9157326010615124, -0.03857462418889904)) < 1e-15);
  // R_F(x, x, x) = 1 / sqrt(x); symmetric in its arguments.
  CHECK(close(carlson_rf(4.0, 4.0, 4.0), 0.5) < 1e-15);
  CHECK(close(carlson_rf(0.0, 1.0, 1.0), test::kPi / 2) < 1e-15);
  const Complex a(0.3, 0.7), b(2.0, -1.0), c(1.5, 0.0);
  CHECK(close(carlson_rf(a, b, c), carlson_rf(c, a, b)) < 1e-15);
}

TEST_CASE("elliptic_f") {
  CHECK(close(elliptic_f(0.3, 0.5), 0.307054930495754) < 1e-15);
  CHECK(close(elliptic_f({0.5, 0.4}, {-2.0, 1.0}), Complex(0.46517560679686615, 0.3592267757967826)) <
        1e-14);
  CHECK(close(elliptic_f({-0.6, 0.3}, {0.9, -0.2}),
              Complex(-0.5807696807482036, 0.40441471352669284)) < 1e-14);
  CHECK(close(elliptic_f(0.5, 0.0), std::asin(0.5)) < 1e-15);
  CHECK(close(elliptic_f(0.5, 1.0), std::atanh(0.5)) < 1e-15);
  CHECK_THROWS_AS(elliptic_f(2.0, 0.5), SingularPathError);
  CHECK_THROWS_AS(elliptic_f(0.9, 4.0), SingularPathError);
}

TEST_CASE("elliptic_f against quadrature and round trip") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 100; ++n) {
    const Complex z = test::random_disk(rng, 0.7), m = test::random_disk(rng, 0.9);
    const Complex f = elliptic_f(z, m);
    CHECK(close(f, elliptic_f_quadrature(z, m)) < 1e-12);
    CHECK(close(jacobi_elliptic(f, m).sn, z) < 1e-13);
  }
}
