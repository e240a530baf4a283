#pragma once

// Geometry of the complexified Clifton-Pohl plane
//   M = C^2 minus the cone u^2 + v^2 = 0,   g = du (.) dv / (u^2 + v^2),
// with du (.) dv = 1/2 (du (x) dv + dv (x) du).

#include <array>
#include <optional>
#include <string_view>

#include "cph/holomorphic.hpp"

namespace cph {

struct Point {
  Complex u;
  Complex v;
};

struct Tangent {
  Complex du;
  Complex dv;
};

/// Initial data of a holomorphic geodesic: position (alpha, beta), velocity
/// (x, y) and base time t0.
struct GeodesicGerm {
  Point point;
  Tangent velocity;
  Complex t0{0.0, 0.0};
};

/// Phase-space state (u, v, u', v').
struct State {
  Complex u;
  Complex v;
  Complex du;
  Complex dv;

  std::array<Complex, 4> as_array() const { return {u, v, du, dv}; }
  static State from_array(const std::array<Complex, 4>& a) { return {a[0], a[1], a[2], a[3]}; }
};

/// Constants of motion A = u'v'/(u^2+v^2) and B = u/u' + v/v'.
struct FirstIntegrals {
  Complex a;
  Complex b;
};

enum class GermClass { NullUConst, NullVConst, Exponential, Generic };

std::string_view to_string(GermClass c);

struct Classification {
  GermClass tag;
  /// (A, B); absent for null germs where B is undefined.
  std::optional<FirstIntegrals> witnesses;
  /// A B^2 cosh(log(alpha/beta)) = A B^2 (alpha^2+beta^2)/(2 alpha beta);
  /// equals 2 exactly on the exponential family. Absent for null germs.
  std::optional<Complex> discriminant;
};

/// Relative tolerance of the cone test |u^2+v^2| > eps (|u|^2 + |v|^2).
inline constexpr double kConeTolerance = 1e-14;

bool in_domain(const Point& p);

/// u^2 + v^2, throwing OutOfDomainError when the point is on the cone.
Complex cone_form(const Point& p);

/// g_p(X, Y) = (X_u Y_v + X_v Y_u) / (2 (u^2 + v^2)).
Complex metric_eval(const Point& p, const Tangent& x, const Tangent& y);

/// Right-hand side of the geodesic system:
///   u'' = 2 u u'^2 / (u^2+v^2),  v'' = 2 v v'^2 / (u^2+v^2).
State geodesic_rhs(const State& s);

/// Throws OutOfDomainError or BothComponentsZeroError for invalid germs.
void validate(const GeodesicGerm& germ);

State germ_state(const GeodesicGerm& germ);

FirstIntegrals first_integrals(const GeodesicGerm& germ);
FirstIntegrals first_integrals(const State& s);

/// Along a null geodesic (one velocity component zero) the moving coordinate w
/// keeps w' / (u^2 + v^2) constant. Returns that constant.
Complex null_first_integral(const State& s);

/// A B^2 (alpha^2 + beta^2) / (2 alpha beta): the exponential-family test
/// written without a logarithm, hence branch independent.
Complex exponential_discriminant(const GeodesicGerm& germ);

/// Advances a germ by a fourth-order Taylor step of length `h` (along the
/// real direction of t). Used to move germs off the coordinate axes.
GeodesicGerm taylor_step(const GeodesicGerm& germ, Complex h, int order = 4);

/// Step length used to leave the coordinate axes.
inline constexpr double kAxisStep = 1e-3;

/// Returns the germ unchanged when alpha, beta are both nonzero; otherwise
/// advances it by one Taylor mini-step of length kAxisStep.
GeodesicGerm step_off_axis(const GeodesicGerm& germ);

Classification classify(const GeodesicGerm& germ);

/// Image of the germ under the isometry (u, v) -> 2^k (u, v).
GeodesicGerm dilate(const GeodesicGerm& germ, int k);

}  // namespace cph
