#include "cph/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cph::io {

namespace {

std::string format_double(double d) {
  if (!std::isfinite(d)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  std::string s(buf);
  // Keep floats recognizable as floats after a round trip.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void write(std::ostringstream& os, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Scalar arrays (complex numbers, CSV-like rows) stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << (flat ? ", " : ",");
        if (!flat) os << nl << pad;
        write(os, e, indent, depth + 1);
        first = false;
      }
      if (!flat) os << nl << close_pad;
      os << ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        os << nl << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write(os, it.value(), indent, depth + 1);
        first = false;
      }
      os << nl << close_pad << '}';
      return;
    }
    default:
      os << j.dump();
  }
}

Json status_json(TraceStatus s) { return s == TraceStatus::Completed ? "Completed" : "Obstructed"; }

Json obstruction_json(const std::optional<Obstruction>& o) {
  if (!o) return nullptr;
  Json j;
  j["t"] = to_json(o->t_star);
  j["radius"] = o->radius;
  return j;
}

}  // namespace

Json load_json_argument(const std::string& arg) {
  std::string text;
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    text = arg;
  } else {
    std::ifstream in(arg);
    if (!in) throw MalformedInputError("cannot read '" + arg + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw MalformedInputError(std::string("invalid JSON: ") + e.what());
  }
}

Complex parse_complex(const Json& j, std::string_view field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw MalformedInputError(std::string(field) + ": expected [re, im]");
  }
  const Complex z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw MalformedInputError(std::string(field) + ": non-finite value");
  }
  return z;
}

GeodesicGerm parse_germ(const Json& j) {
  if (!j.is_object()) throw MalformedInputError("germ: expected an object");
  for (const char* key : {"alpha", "beta", "x", "y"}) {
    if (!j.contains(key)) throw MalformedInputError(std::string("germ: missing field '") + key + "'");
  }
  GeodesicGerm g;
  g.point = {parse_complex(j["alpha"], "alpha"), parse_complex(j["beta"], "beta")};
  g.velocity = {parse_complex(j["x"], "x"), parse_complex(j["y"], "y")};
  g.t0 = j.contains("t0") ? parse_complex(j["t0"], "t0") : Complex(0.0, 0.0);
  return g;
}

PathPolyline parse_path(const Json& j) {
  if (!j.is_array() || j.size() < 2) throw MalformedInputError("path: expected at least two points");
  PathPolyline p;
  for (const auto& e : j) p.waypoints.push_back(parse_complex(e, "path"));
  for (std::size_t i = 1; i < p.waypoints.size(); ++i) {
    if (p.waypoints[i] == p.waypoints[i - 1]) throw MalformedInputError("path: repeated waypoint");
  }
  return p;
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const GeodesicGerm& g) {
  Json j;
  j["alpha"] = to_json(g.point.u);
  j["beta"] = to_json(g.point.v);
  j["x"] = to_json(g.velocity.du);
  j["y"] = to_json(g.velocity.dv);
  j["t0"] = to_json(g.t0);
  return j;
}

Json to_json(const State& s) {
  Json j;
  j["u"] = to_json(s.u);
  j["v"] = to_json(s.v);
  j["du"] = to_json(s.du);
  j["dv"] = to_json(s.dv);
  return j;
}

std::string dump(const Json& j, int indent) {
  std::ostringstream os;
  write(os, j, indent, 0);
  return os.str();
}

Json to_json(const RunManifest& m) {
  Json j;
  j["command"] = m.command;
  j["germ"] = to_json(m.germ);
  j["parameters"] = m.parameters;
  j["version"] = m.version;
  j["tolerances"] = m.tolerances;
  return j;
}

Json trace_json(const ContinuationTrace& trace, const RunManifest& manifest) {
  Json j;
  j["manifest"] = to_json(manifest);
  j["status"] = status_json(trace.status);
  j["obstruction"] = obstruction_json(trace.obstruction);
  Json end = to_json(trace.back().state);
  Json endpoint;
  endpoint["t"] = to_json(trace.back().t);
  for (auto it = end.begin(); it != end.end(); ++it) endpoint[it.key()] = it.value();
  j["endpoint"] = endpoint;
  Json rows = Json::array();
  for (const auto& s : trace.samples) {
    rows.push_back(Json::array({s.t.real(), s.t.imag(), s.state.u.real(), s.state.u.imag(),
                                s.state.v.real(), s.state.v.imag(), s.state.du.real(),
                                s.state.du.imag(), s.state.dv.real(), s.state.dv.imag()}));
  }
  j["sample_columns"] = Json::array(
      {"t_re", "t_im", "u_re", "u_im", "v_re", "v_im", "du_re", "du_im", "dv_re", "dv_im"});
  j["samples"] = rows;
  return j;
}

std::string trace_csv(const ContinuationTrace& trace) {
  std::string out = "t_re,t_im,u_re,u_im,v_re,v_im,du_re,du_im,dv_re,dv_im\n";
  for (const auto& s : trace.samples) {
    const double row[] = {s.t.real(),        s.t.imag(),        s.state.u.real(),
                          s.state.u.imag(),  s.state.v.real(),  s.state.v.imag(),
                          s.state.du.real(), s.state.du.imag(), s.state.dv.real(),
                          s.state.dv.imag()};
    for (std::size_t i = 0; i < 10; ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

Json classification_json(const Classification& c, const RunManifest& manifest) {
  Json j;
  j["manifest"] = to_json(manifest);
  j["tag"] = std::string(to_string(c.tag));
  j["A"] = c.witnesses ? to_json(c.witnesses->a) : Json(nullptr);
  j["B"] = c.witnesses ? to_json(c.witnesses->b) : Json(nullptr);
  j["discriminant"] = c.discriminant ? to_json(*c.discriminant) : Json(nullptr);
  return j;
}

Json probe_json(const ObstructionReport& r, const RunManifest& manifest) {
  Json j;
  j["manifest"] = to_json(manifest);
  j["radius"] = r.radius;
  j["rays"] = r.rays;
  j["final_rays"] = r.final_rays;
  j["converged"] = r.converged;
  Json obs = Json::array();
  for (Complex z : r.obstructions) obs.push_back(to_json(z));
  j["count"] = r.obstructions.size();
  j["obstructions"] = obs;
  j["min_separation"] = r.min_separation;
  Json rays = Json::array();
  for (const auto& ray : r.per_ray) {
    Json e;
    e["index"] = ray.index;
    e["status"] = status_json(ray.status);
    e["t_end"] = to_json(ray.t_end);
    e["obstruction"] = obstruction_json(ray.obstruction);
    rays.push_back(e);
  }
  j["per_ray"] = rays;
  return j;
}

}  // namespace cph::io
