#pragma once

// Analytic continuation of geodesic germs along polylines in the complex
// time plane.

#include <cstddef>
#include <optional>
#include <vector>

#include "cph/manifold.hpp"

namespace cph {

/// Ordered waypoints in the complex t-plane; the first must equal the germ's t0.
struct PathPolyline {
  std::vector<Complex> waypoints;
};

/// Throws std::invalid_argument when the path has fewer than two waypoints
/// or repeats a waypoint consecutively.
void validate(const PathPolyline& path);

struct TraceSample {
  Complex t;
  State state;
};

enum class TraceStatus { Completed, Obstructed };

struct Obstruction {
  Complex t_star;  ///< estimated singular time
  double radius;   ///< error bound of the estimate
};

struct ContinuationTrace {
  std::vector<TraceSample> samples;
  TraceStatus status = TraceStatus::Completed;
  std::optional<Obstruction> obstruction;

  const TraceSample& back() const { return samples.back(); }
};

/// Controls of the adaptive integrator; defaults follow the library contract.
struct ContinuationLimits {
  double magnitude_limit = 1e12;       ///< state magnitude flagged as a pole
  double min_step_fraction = 1e-12;    ///< of the current segment length
  int max_consecutive_rejections = 40;
};

/// Integrates the geodesic system along the path with a Dormand-Prince 5(4)
/// pair stepping in arclength. Each step keeps the local error estimate of
/// every component below tol * (1 + |component|). Obstruction is reported as
/// a status, with the singular time estimated from a local power-law model.
///
/// Throws OutOfDomainError / BothComponentsZeroError for an invalid germ and
/// std::invalid_argument for a bad path or tol outside [1e-14, 1e-3].
ContinuationTrace continue_path(const GeodesicGerm& germ, const PathPolyline& path, double tol,
                                const ContinuationLimits& limits = {});

/// Local estimate of the nearest power-law singularity seen from a state,
/// from the dominant coordinate w: t* = t + (w / w') / (q - 1) with
/// q = w w'' / w'^2 = 2 w^2 / (u^2 + v^2). Exact for w ~ (t* - t)^p.
struct SingularityEstimate {
  Complex t_star;
  Complex growth;  ///< q, equal to 2 at a simple pole
};
std::optional<SingularityEstimate> estimate_singularity(const TraceSample& s);

struct RayReport {
  std::size_t index;
  TraceStatus status;
  Complex t_end;
  std::optional<Obstruction> obstruction;
};

struct ObstructionReport {
  GeodesicGerm germ;
  double radius;
  int rays;        ///< initial fan
  int final_rays;  ///< last fan shot
  bool converged;  ///< the last doubling found nothing new inside the disk
  std::vector<Complex> obstructions;  ///< sorted by (|t* - t0|, arg)
  double min_separation;               ///< 0 when fewer than two
  std::vector<RayReport> per_ray;  ///< initial fan only
};

/// Clustering distance of probe obstruction estimates.
inline constexpr double kClusterTolerance = 1e-4;

/// Largest fan completeness_probe will shoot.
inline constexpr int kMaxProbeRays = 2048;

/// Continues the germ along n_rays rays t0 + radius e^{2 pi i k / n_rays}.
/// Poles hit by a ray are read off its obstruction; poles passed nearby are
/// flagged by estimate_singularity and localized by re-shooting through the
/// estimate until the continuation obstructs. Estimates closer than
/// kClusterTolerance are merged. The fan is then doubled until a doubling
/// finds no new obstruction inside the disk or kMaxProbeRays is reached;
/// obstructions from every fan are kept. The report does not depend on
/// evaluation order; rays run concurrently when hardware threads are available.
ObstructionReport completeness_probe(const GeodesicGerm& germ, double radius, int n_rays,
                                     double tol);

struct MonodromyResult {
  State start;     ///< state at the loop basepoint before the loop
  State endpoint;  ///< state at the basepoint after `turns` loops
  bool branch_changed;
  double mismatch;  ///< max relative component difference endpoint vs start
  int polygon_sides;
};

/// Continues the germ to center + loop_radius, then `turns` times around the
/// circle (counter-clockwise for turns > 0) as a regular polygon, doubling
/// the side count from 32 until two refinements agree to 10 tol.
/// Throws PoleError, carrying the obstruction estimate, when the approach
/// segment or the loop hits a singularity.
MonodromyResult loop_monodromy(const GeodesicGerm& germ, Complex center, double loop_radius,
                               int turns, double tol);

/// Max over components of |a_i - b_i| / (1 + |b_i|).
double state_distance(const State& a, const State& b);

}  // namespace cph
