#include "cph/continuation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "cph/errors.hpp"

namespace cph {

namespace {

using Vec = std::array<Complex, 4>;

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double kPi = std::numbers::pi;

bool finite(const Vec& y) {
  for (Complex c : y) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

double max_abs(const Vec& y) {
  double m = 0.0;
  for (Complex c : y) m = std::max(m, std::abs(c));
  return m;
}

// dy/ds along direction `dir` in the t-plane.
std::optional<Vec> field(const Vec& y, Complex dir) {
  if (!finite(y)) return std::nullopt;
  const Complex cone = y[0] * y[0] + y[1] * y[1];
  if (cone == 0.0) return std::nullopt;
  Vec f{dir * y[2], dir * y[3], dir * 2.0 * y[0] * y[2] * y[2] / cone,
        dir * 2.0 * y[1] * y[3] * y[3] / cone};
  if (!finite(f)) return std::nullopt;
  return f;
}

Vec axpy(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  Vec out = y;
  for (const auto& [c, k] : terms) {
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < 4; ++i) out[i] += h * c * (*k)[i];
  }
  return out;
}

struct StepResult {
  Vec y;
  Vec f_end;
  double error;  // normalized; <= 1 accepts
};

std::optional<StepResult> dopri_step(const Vec& y, const Vec& k1, double h, Complex dir,
                                     double tol) {
  auto k2 = field(axpy(y, h, {{a21, &k1}}), dir);
  if (!k2) return std::nullopt;
  auto k3 = field(axpy(y, h, {{a31, &k1}, {a32, &*k2}}), dir);
  if (!k3) return std::nullopt;
  auto k4 = field(axpy(y, h, {{a41, &k1}, {a42, &*k2}, {a43, &*k3}}), dir);
  if (!k4) return std::nullopt;
  auto k5 = field(axpy(y, h, {{a51, &k1}, {a52, &*k2}, {a53, &*k3}, {a54, &*k4}}), dir);
  if (!k5) return std::nullopt;
  auto k6 = field(axpy(y, h, {{a61, &k1}, {a62, &*k2}, {a63, &*k3}, {a64, &*k4}, {a65, &*k5}}),
                  dir);
  if (!k6) return std::nullopt;
  const Vec y5 =
      axpy(y, h, {{a71, &k1}, {a73, &*k3}, {a74, &*k4}, {a75, &*k5}, {a76, &*k6}});
  auto k7 = field(y5, dir);
  if (!k7) return std::nullopt;

  double err = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const Complex e = h * (e1 * k1[i] + e3 * (*k3)[i] + e4 * (*k4)[i] + e5 * (*k5)[i] +
                           e6 * (*k6)[i] + e7 * (*k7)[i]);
    const double scale = tol * (1.0 + std::max(std::abs(y[i]), std::abs(y5[i])));
    err = std::max(err, std::abs(e) / scale);
  }
  if (!std::isfinite(err)) return std::nullopt;
  return StepResult{y5, *k7, err};
}

// The floor accounts for the global integration error, which the model
// extrapolation cannot see.
Obstruction locate(const std::vector<TraceSample>& samples, Complex t_fail, double h_fail,
                   double tol) {
  const std::size_t n = samples.size();
  const double floor = tol * (1.0 + std::abs(t_fail));
  std::optional<SingularityEstimate> last, prev;
  if (n >= 1) last = estimate_singularity(samples[n - 1]);
  if (n >= 2) prev = estimate_singularity(samples[n - 2]);
  if (last && prev) {
    return {last->t_star, std::max(floor, std::abs(last->t_star - prev->t_star))};
  }
  if (last) {
    return {last->t_star, std::max(floor, std::abs(last->t_star - samples.back().t))};
  }
  return {t_fail, std::max(floor, h_fail)};
}

}  // namespace

void validate(const PathPolyline& path) {
  if (path.waypoints.size() < 2) {
    throw std::invalid_argument("path needs at least two waypoints");
  }
  for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
    require_finite(path.waypoints[i], "path waypoint");
    if (i > 0 && path.waypoints[i] == path.waypoints[i - 1]) {
      throw std::invalid_argument("path repeats a waypoint");
    }
  }
}

std::optional<SingularityEstimate> estimate_singularity(const TraceSample& s) {
  const State& st = s.state;
  const bool u_dominant = std::abs(st.u) >= std::abs(st.v);
  const Complex w = u_dominant ? st.u : st.v;
  const Complex dw = u_dominant ? st.du : st.dv;
  const Complex cone = st.u * st.u + st.v * st.v;
  if (dw == 0.0 || cone == 0.0) return std::nullopt;
  const Complex q = 2.0 * w * w / cone;
  if (std::abs(q - 1.0) < 1e-3) return std::nullopt;
  const Complex t_star = s.t + (w / dw) / (q - 1.0);
  if (!std::isfinite(t_star.real()) || !std::isfinite(t_star.imag())) return std::nullopt;
  return SingularityEstimate{t_star, q};
}

ContinuationTrace continue_path(const GeodesicGerm& germ, const PathPolyline& path, double tol,
                                const ContinuationLimits& limits) {
  validate(germ);
  validate(path);
  if (!(tol >= 1e-14 && tol <= 1e-3)) {
    throw std::invalid_argument("tol must lie in [1e-14, 1e-3]");
  }
  if (path.waypoints.front() != germ.t0) {
    throw std::invalid_argument("path must start at the germ's t0");
  }

  ContinuationTrace trace;
  Vec y = germ_state(germ).as_array();
  trace.samples.push_back({germ.t0, State::from_array(y)});

  double h = 0.0;
  for (std::size_t seg = 0; seg + 1 < path.waypoints.size(); ++seg) {
    const Complex a = path.waypoints[seg], b = path.waypoints[seg + 1];
    const double length = std::abs(b - a);
    const Complex dir = (b - a) / length;
    auto f = field(y, dir);
    if (!f) {
      trace.status = TraceStatus::Obstructed;
      trace.obstruction = locate(trace.samples, a, 0.0, tol);
      return trace;
    }
    if (h == 0.0) {
      h = std::min(length, 0.01 * (1.0 + max_abs(y)) / std::max(max_abs(*f), 1e-300));
    }
    double s = 0.0;
    int rejections = 0;
    while (s < length) {
      const bool last = h >= length - s;
      const double step = last ? length - s : h;
      auto r = dopri_step(y, *f, step, dir, tol);
      if (r && r->error <= 1.0) {
        s = last ? length : s + step;
        y = r->y;
        *f = r->f_end;
        const Complex t = last ? b : a + dir * s;
        trace.samples.push_back({t, State::from_array(y)});
        rejections = 0;
        if (max_abs(y) > limits.magnitude_limit) {
          trace.status = TraceStatus::Obstructed;
          trace.obstruction = locate(trace.samples, t, step, tol);
          return trace;
        }
        const double grow = r->error > 0.0 ? 0.9 * std::pow(r->error, -0.2) : 5.0;
        const double next = step * std::clamp(grow, 0.2, 5.0);
        // A clipped final step says nothing about the natural step size.
        h = last ? std::max(h, next) : next;
      } else {
        const double shrink = r ? std::max(0.1, 0.9 * std::pow(r->error, -0.2)) : 0.2;
        h = step * std::min(shrink, 0.9);
        ++rejections;
        if (h < limits.min_step_fraction * length ||
            rejections >= limits.max_consecutive_rejections) {
          trace.status = TraceStatus::Obstructed;
          trace.obstruction = locate(trace.samples, a + dir * (s + h), h, tol);
          return trace;
        }
      }
    }
  }
  return trace;
}

double state_distance(const State& a, const State& b) {
  const auto x = a.as_array(), y = b.as_array();
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(x[i] - y[i]) / (1.0 + std::abs(y[i])));
  return d;
}

namespace {

struct Candidate {
  Complex estimate;
  TraceSample near;  ///< sample the estimate was read from
};

struct RayOutcome {
  RayReport report;
  std::vector<Complex> hits;  ///< obstruction met by the ray, if any
  std::vector<Candidate> candidates;
};

// Pole-like estimates (q near 2) at local minima of the distance to the
// estimate along the trace, starting from sample `first`.
std::vector<Candidate> scan_candidates(const ContinuationTrace& trace, std::size_t first,
                                       double reach) {
  std::vector<Candidate> out;
  const auto& smp = trace.samples;
  std::vector<std::optional<double>> dist(smp.size());
  std::vector<std::optional<SingularityEstimate>> est(smp.size());
  for (std::size_t i = first; i < smp.size(); ++i) {
    est[i] = estimate_singularity(smp[i]);
    if (est[i] && std::abs(est[i]->growth - 2.0) < 0.5) {
      const double d = std::abs(est[i]->t_star - smp[i].t);
      if (d <= reach) dist[i] = d;
    }
  }
  for (std::size_t i = first; i < smp.size(); ++i) {
    if (!dist[i]) continue;
    const bool left_ok = i == first || !dist[i - 1] || *dist[i] <= *dist[i - 1];
    const bool right_ok = i + 1 == smp.size() || !dist[i + 1] || *dist[i] < *dist[i + 1];
    if (left_ok && right_ok) out.push_back({est[i]->t_star, smp[i]});
  }
  return out;
}

GeodesicGerm germ_at(const TraceSample& s) {
  return {{s.state.u, s.state.v}, {s.state.du, s.state.dv}, s.t};
}

RayOutcome shoot_ray(const GeodesicGerm& germ, Complex end, std::size_t index, double tol,
                     double reach) {
  const ContinuationTrace tr = continue_path(germ, {{germ.t0, end}}, tol);
  RayOutcome out;
  out.report = {index, tr.status, tr.back().t, tr.obstruction};
  if (tr.obstruction) out.hits.push_back(tr.obstruction->t_star);
  out.candidates = scan_candidates(tr, 1, reach);
  return out;
}

// Shoots from the sample a candidate was seen at through twice its offset,
// following the estimates until the continuation obstructs on one.
std::optional<Complex> localize(Candidate c, double tol) {
  Complex cand = c.estimate;
  for (int iter = 0; iter < 12; ++iter) {
    const Complex offset = cand - c.near.t;
    if (std::abs(offset) == 0.0) return std::nullopt;
    const ContinuationTrace tr = continue_path(germ_at(c.near), {{c.near.t, c.near.t + 2.0 * offset}}, tol);
    if (tr.status == TraceStatus::Obstructed) {
      return tr.obstruction->t_star;
    }
    const auto next = scan_candidates(tr, 1, 2.0 * std::abs(offset) + 1e-9);
    if (next.empty()) return std::nullopt;
    // Closest approach to the current candidate.
    const Candidate* best = &next.front();
    for (const auto& n : next) {
      if (std::abs(n.estimate - cand) < std::abs(best->estimate - cand)) best = &n;
    }
    if (std::abs(best->estimate - cand) <= 1e-15 * (1.0 + std::abs(cand))) {
      return std::nullopt;  // the path went through the estimate without blowing up
    }
    cand = best->estimate;
    c = *best;
  }
  return std::nullopt;
}

}  // namespace

namespace {

std::vector<RayOutcome> shoot_fan(const GeodesicGerm& germ, double radius, int n_rays, double tol) {
  const double chord = 2.0 * radius * std::sin(kPi / n_rays);
  const double reach = 1.5 * chord + 0.1;
  std::vector<RayOutcome> outcomes(static_cast<std::size_t>(n_rays));
  auto shoot = [&](int k) {
    const Complex end = germ.t0 + radius * std::polar(1.0, 2.0 * kPi * k / n_rays);
    outcomes[k] = shoot_ray(germ, end, static_cast<std::size_t>(k), tol, reach);
  };
  const unsigned workers =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), n_rays));
  if (workers == 1) {
    for (int k = 0; k < n_rays; ++k) shoot(k);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (int k = static_cast<int>(w); k < n_rays; k += static_cast<int>(workers)) shoot(k);
      }));
    }
    for (auto& j : jobs) j.get();
  }
  return outcomes;
}

}  // namespace

ObstructionReport completeness_probe(const GeodesicGerm& germ, double radius, int n_rays,
                                     double tol) {
  validate(germ);
  if (!(radius > 0.0) || n_rays < 4) {
    throw std::invalid_argument("probe needs radius > 0 and at least 4 rays");
  }

  std::vector<Complex> found;
  auto known = [&](Complex z, double slack) {
    return std::any_of(found.begin(), found.end(),
                       [&](Complex f) { return std::abs(f - z) <= slack; });
  };
  ObstructionReport report{germ, radius, n_rays, n_rays, false, {}, 0.0, {}};
  for (int fan = n_rays;; fan *= 2) {
    const auto outcomes = shoot_fan(germ, radius, fan, tol);
    if (fan == n_rays) {
      for (const auto& o : outcomes) report.per_ray.push_back(o.report);
    }
    const std::size_t before = found.size();
    for (const auto& o : outcomes) {
      for (Complex h : o.hits) {
        if (!known(h, kClusterTolerance)) found.push_back(h);
      }
    }
    for (const auto& o : outcomes) {
      for (const auto& c : o.candidates) {
        // A rough estimate near an already localized pole adds nothing.
        const double slack = std::max(kClusterTolerance, 0.1 * std::abs(c.estimate - c.near.t));
        if (known(c.estimate, slack)) continue;
        if (auto t = localize(c, tol); t && !known(*t, kClusterTolerance)) {
          found.push_back(*t);
        }
      }
    }
    const bool added_inside = std::any_of(found.begin() + static_cast<std::ptrdiff_t>(before), found.end(),
                                          [&](Complex z) { return std::abs(z - germ.t0) <= radius; });
    report.final_rays = fan;
    if (fan > n_rays && !added_inside) {
      report.converged = true;
      break;
    }
    if (fan >= kMaxProbeRays) break;
  }

  for (Complex z : found) {
    if (std::abs(z - germ.t0) <= radius) report.obstructions.push_back(z);
  }
  std::sort(report.obstructions.begin(), report.obstructions.end(), [&](Complex a, Complex b) {
    const double ra = std::abs(a - germ.t0), rb = std::abs(b - germ.t0);
    if (std::abs(ra - rb) > kClusterTolerance) return ra < rb;
    return std::arg(a - germ.t0) < std::arg(b - germ.t0);
  });
  double sep = 0.0;
  for (std::size_t i = 0; i < report.obstructions.size(); ++i) {
    for (std::size_t j = i + 1; j < report.obstructions.size(); ++j) {
      const double d = std::abs(report.obstructions[i] - report.obstructions[j]);
      sep = (i == 0 && j == 1) ? d : std::min(sep, d);
    }
  }
  report.min_separation = sep;
  return report;
}

MonodromyResult loop_monodromy(const GeodesicGerm& germ, Complex center, double loop_radius,
                               int turns, double tol) {
  validate(germ);
  if (!(loop_radius > 0.0) || turns == 0) {
    throw std::invalid_argument("loop needs a positive radius and a nonzero turn count");
  }
  const Complex base = center + loop_radius;
  State start = germ_state(germ);
  if (base != germ.t0) {
    const ContinuationTrace approach = continue_path(germ, {{germ.t0, base}}, tol);
    if (approach.status == TraceStatus::Obstructed) {
      throw PoleError("approach to the loop basepoint is obstructed",
                      approach.obstruction->t_star);
    }
    start = approach.back().state;
  }
  const GeodesicGerm at_base{{start.u, start.v}, {start.du, start.dv}, base};

  std::optional<State> previous;
  int sides = 32;
  for (;; sides *= 2) {
    PathPolyline loop{{base}};
    const int total = sides * std::abs(turns);
    const double sign = turns > 0 ? 1.0 : -1.0;
    for (int j = 1; j < total; ++j) {
      loop.waypoints.push_back(center + loop_radius * std::polar(1.0, sign * 2.0 * kPi * j / sides));
    }
    loop.waypoints.push_back(base);
    const ContinuationTrace tr = continue_path(at_base, loop, tol);
    if (tr.status == TraceStatus::Obstructed) {
      throw PoleError("loop path is obstructed", tr.obstruction->t_star);
    }
    const State end = tr.back().state;
    if ((previous && state_distance(end, *previous) <= 10.0 * tol) || sides >= 1024) {
      const double mismatch = state_distance(end, start);
      return {start, end, mismatch > 10.0 * tol, mismatch, sides};
    }
    previous = end;
  }
}

}  // namespace cph
