#pragma once

// JSON/CSV surfaces of the command-line tool.
//
// Complex numbers are two-element arrays [re, im]. A germ is
//   {"alpha": [..], "beta": [..], "x": [..], "y": [..], "t0": [..]}
// and a path is [[re, im], ...]. Output uses a fixed key order and prints
// every float with 17 significant digits, so equal inputs give equal bytes.

#include <string>
#include <string_view>

#include "json.hpp"

#include "cph/closed_forms.hpp"
#include "cph/continuation.hpp"
#include "cph/errors.hpp"

namespace cph::io {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr double kDefaultTol = 1e-10;

/// Input that does not follow the documented schema.
class MalformedInputError : public Error {
 public:
  using Error::Error;
};

/// Parses `arg` as inline JSON when it starts with '{' or '[', otherwise reads
/// it as a file path. Throws MalformedInputError.
Json load_json_argument(const std::string& arg);

Complex parse_complex(const Json& j, std::string_view field);
GeodesicGerm parse_germ(const Json& j);
PathPolyline parse_path(const Json& j);

Json to_json(Complex z);
Json to_json(const GeodesicGerm& germ);
Json to_json(const State& s);

/// Deterministic serialization (17 significant digits, no locale).
std::string dump(const Json& j, int indent = 2);

struct RunManifest {
  std::string command;
  GeodesicGerm germ;
  Json parameters = Json::object();
  Json tolerances = Json::object();
  std::string version{kToolVersion};
};

Json to_json(const RunManifest& m);

Json trace_json(const ContinuationTrace& trace, const RunManifest& manifest);
/// Columns t_re,t_im,u_re,u_im,v_re,v_im,du_re,du_im,dv_re,dv_im.
std::string trace_csv(const ContinuationTrace& trace);

Json classification_json(const Classification& c, const RunManifest& manifest);
Json probe_json(const ObstructionReport& report, const RunManifest& manifest);

}  // namespace cph::io
