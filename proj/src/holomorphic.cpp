#include "cph/holomorphic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "cph/errors.hpp"

namespace cph {

namespace {

constexpr double kLandenStop = 1e-16;
constexpr int kMaxLandenLevels = 64;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Closed negative real axis, with a relative slack for rounding in 1 - z^2.
bool on_negative_axis(Complex w) {
  return w.real() <= 0.0 && std::abs(w.imag()) <= 1e-15 * std::max(1.0, std::abs(w));
}

EllipticTriple check_poles(const EllipticTriple& t) {
  for (Complex c : {t.sn, t.cn, t.dn}) {
    if (!finite(c) || std::abs(c) > kPoleThreshold) {
      throw PoleError("jacobi_elliptic: argument at a lattice pole");
    }
  }
  return t;
}

// |m| <= 1 and m != 1, so sqrt(1 - m) has a positive real part and every
// descending modulus satisfies |k_{n+1}| < 1.
EllipticTriple jacobi_landen(Complex z, Complex m) {
  std::array<Complex, kMaxLandenLevels> k_levels{};
  int depth = 0;
  Complex mn = m;
  while (std::abs(mn) >= kLandenStop) {
    if (depth == kMaxLandenLevels) {
      throw Error("jacobi_elliptic: Landen descent failed to converge");
    }
    const Complex kp = std::sqrt(1.0 - mn);
    const Complex k1 = (1.0 - kp) / (1.0 + kp);
    k_levels[depth++] = k1;
    z /= (1.0 + k1);
    mn = k1 * k1;
  }

  // First-order expansion in the residual parameter.
  const Complex s = std::sin(z);
  const Complex c = std::cos(z);
  const Complex corr = 0.25 * mn * (z - s * c);
  Complex sn = s - corr * c;
  Complex cn = c + corr * s;
  Complex dn = 1.0 - 0.5 * mn * s * s;

  for (int i = depth - 1; i >= 0; --i) {
    const Complex k1 = k_levels[i];
    const Complex sn2 = sn * sn;
    const Complex den = 1.0 + k1 * sn2;
    const Complex sn_up = (1.0 + k1) * sn / den;
    const Complex cn_up = cn * dn / den;
    // Equivalent to (dn^2 - (1 - k1)) / ((1 + k1) - dn^2) after using
    // dn^2 = 1 - k1^2 sn^2; this form has no cancellation for small k1.
    const Complex dn_up = (1.0 - k1 * sn2) / den;
    sn = sn_up;
    cn = cn_up;
    dn = dn_up;
  }
  return {sn, cn, dn};
}

}  // namespace

void require_finite(Complex z, const char* what) {
  if (!finite(z)) {
    throw OutOfDomainError(std::string(what) + ": non-finite complex scalar");
  }
}

Complex artanh_principal(Complex z) {
  require_finite(z, "artanh_principal");
  if (z == Complex(1.0, 0.0) || z == Complex(-1.0, 0.0)) {
    throw PoleError("artanh_principal: logarithmic pole at z = +-1", z);
  }
  // std::atanh implements the same cuts as 1/2 log((1+z)/(1-z)) and keeps
  // full relative accuracy near the origin.
  return std::atanh(z);
}

EllipticTriple jacobi_elliptic(Complex z, Complex m) {
  require_finite(z, "jacobi_elliptic");
  require_finite(m, "jacobi_elliptic");

  if (m == Complex(1.0, 0.0)) {
    const Complex ch = std::cosh(z);
    if (!finite(ch) || std::abs(ch) < 1.0 / kPoleThreshold) {
      throw PoleError("jacobi_elliptic: argument at a pole of sech");
    }
    const Complex sech = 1.0 / ch;
    return check_poles({std::tanh(z), sech, sech});
  }

  if (std::abs(m) > 1.0) {
    // sn(z|m) = sn(k z|1/m)/k, cn(z|m) = dn(k z|1/m), dn(z|m) = cn(k z|1/m).
    const Complex k = std::sqrt(m);
    const EllipticTriple r = check_poles(jacobi_landen(k * z, 1.0 / m));
    return check_poles({r.sn / k, r.dn, r.cn});
  }
  return check_poles(jacobi_landen(z, m));
}

Complex carlson_rf(Complex x, Complex y, Complex z) {
  require_finite(x, "carlson_rf");
  require_finite(y, "carlson_rf");
  require_finite(z, "carlson_rf");
  int zeros = (x == 0.0) + (y == 0.0) + (z == 0.0);
  if (zeros > 1) {
    throw SingularPathError("carlson_rf: more than one argument is zero");
  }
  for (Complex w : {x, y, z}) {
    if (w != 0.0 && w.imag() == 0.0 && w.real() < 0.0) {
      throw SingularPathError("carlson_rf: argument on the negative real axis");
    }
  }

  const Complex a0 = (x + y + z) / 3.0;
  const double q =
      std::pow(3.0 * 1e-16, -1.0 / 6.0) *
      std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  Complex a = a0;
  Complex xn = x, yn = y, zn = z;
  double scale = 1.0;  // 4^-n
  for (int n = 0; n < 100 && scale * q >= std::abs(a); ++n) {
    const Complex sx = std::sqrt(xn), sy = std::sqrt(yn), sz = std::sqrt(zn);
    const Complex lam = sx * sy + sx * sz + sy * sz;
    xn = 0.25 * (xn + lam);
    yn = 0.25 * (yn + lam);
    zn = 0.25 * (zn + lam);
    a = 0.25 * (a + lam);
    scale *= 0.25;
  }
  const Complex dx = scale * (a0 - x) / a;
  const Complex dy = scale * (a0 - y) / a;
  const Complex dz = -dx - dy;
  const Complex e2 = dx * dy - dz * dz;
  const Complex e3 = dx * dy * dz;
  return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / std::sqrt(a);
}

Complex elliptic_f(Complex z, Complex m) {
  require_finite(z, "elliptic_f");
  require_finite(m, "elliptic_f");
  if (z == 0.0) {
    return 0.0;
  }
  const Complex z2 = z * z;
  const Complex w1 = 1.0 - z2;
  const Complex w2 = 1.0 - m * z2;
  if (on_negative_axis(w1) || on_negative_axis(w2)) {
    throw SingularPathError("elliptic_f: straight path from 0 hits a branch point");
  }
  return z * carlson_rf(w1, w2, 1.0);
}

}  // namespace cph
