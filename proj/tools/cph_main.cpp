// cph: shoot, classify and probe holomorphic geodesics; run the acceptance suite.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "cph/acceptance.hpp"
#include "cph/io.hpp"

namespace {

enum ExitCode { kOk = 0, kFailed = 1, kMalformed = 2, kObstructed = 3, kOutOfDomain = 4 };

struct Options {
  std::string germ;
  std::string path;
  double tol = cph::io::kDefaultTol;
  double radius = 5.0;
  int rays = 64;
  std::string out;
  bool csv = false;
};

void write_file(const std::string& file, const std::string& text) {
  std::ofstream f(file, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + file + "'");
  f << text;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text << '\n';
  } else {
    write_file(o.out, text + "\n");
  }
}

cph::io::Json tol_record(double tol) {
  cph::io::Json j;
  j["tol"] = tol;
  return j;
}

int run_shoot(const Options& o) {
  const auto germ = cph::io::parse_germ(cph::io::load_json_argument(o.germ));
  const auto path = cph::io::parse_path(cph::io::load_json_argument(o.path));
  const auto trace = cph::continue_path(germ, path, o.tol);

  cph::io::RunManifest m{"shoot", germ};
  cph::io::Json waypoints = cph::io::Json::array();
  for (auto t : path.waypoints) waypoints.push_back(cph::io::to_json(t));
  m.parameters["path"] = waypoints;
  m.tolerances = tol_record(o.tol);

  if (o.csv && o.out.empty()) {
    std::cout << cph::io::trace_csv(trace);
  } else {
    emit(o, cph::io::dump(cph::io::trace_json(trace, m)));
    if (o.csv) {
      write_file(std::filesystem::path(o.out).replace_extension(".csv").string(),
                 cph::io::trace_csv(trace));
    }
  }
  return trace.status == cph::TraceStatus::Completed ? kOk : kObstructed;
}

int run_classify(const Options& o) {
  const auto germ = cph::io::parse_germ(cph::io::load_json_argument(o.germ));
  const auto c = cph::classify(germ);
  cph::io::RunManifest m{"classify", germ};
  emit(o, cph::io::dump(cph::io::classification_json(c, m)));
  return kOk;
}

int run_probe(const Options& o) {
  const auto germ = cph::io::parse_germ(cph::io::load_json_argument(o.germ));
  const auto report = cph::completeness_probe(germ, o.radius, o.rays, o.tol);
  cph::io::RunManifest m{"probe", germ};
  m.parameters["radius"] = o.radius;
  m.parameters["rays"] = o.rays;
  m.tolerances = tol_record(o.tol);
  emit(o, cph::io::dump(cph::io::probe_json(report, m)));
  return kOk;
}

int run_verify(const Options& o) {
  const auto seed = cph::acceptance::seed_from_env();
  std::string text;
  bool all = true;
  for (const auto& r : cph::acceptance::run_all(seed)) {
    text += cph::acceptance::format(r) + "\n";
    all = all && r.passed;
  }
  text += all ? "all criteria passed" : "some criteria failed";
  emit(o, text);
  return all ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holomorphic geodesics of the complexified Clifton-Pohl torus"};
  app.set_version_flag("--version", std::string(cph::io::kToolVersion));
  app.require_subcommand(1);

  Options o;
  auto add_germ = [&o](CLI::App* c) {
    c->add_option("--germ", o.germ, "germ as inline JSON or a file")->required();
  };
  auto add_tol = [&o](CLI::App* c) {
    c->add_option("--tol", o.tol, "integrator tolerance")->capture_default_str();
  };
  auto add_out = [&o](CLI::App* c) { c->add_option("--out", o.out, "output file (default stdout)"); };

  auto* shoot = app.add_subcommand("shoot", "continue a germ along a path");
  add_germ(shoot);
  shoot->add_option("--path", o.path, "path as inline JSON or a file")->required();
  add_tol(shoot);
  add_out(shoot);
  shoot->add_flag("--csv", o.csv, "also write samples as CSV (next to --out, else to stdout)");

  auto* classify = app.add_subcommand("classify", "classify a germ");
  add_germ(classify);
  add_out(classify);

  auto* probe = app.add_subcommand("probe", "search for obstructions around t0");
  add_germ(probe);
  probe->add_option("--radius", o.radius, "probe radius")->capture_default_str();
  probe->add_option("--rays", o.rays, "number of rays")->capture_default_str();
  add_tol(probe);
  add_out(probe);

  auto* verify = app.add_subcommand("verify", "run the acceptance suite (seed from CPH_SEED)");
  add_out(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kMalformed;
  }

  try {
    if (*shoot) return run_shoot(o);
    if (*classify) return run_classify(o);
    if (*probe) return run_probe(o);
    return run_verify(o);
  } catch (const cph::OutOfDomainError& e) {
    std::cerr << "cph: out of domain: " << e.what() << '\n';
    return kOutOfDomain;
  } catch (const cph::BothComponentsZeroError& e) {
    std::cerr << "cph: out of domain: " << e.what() << '\n';
    return kOutOfDomain;
  } catch (const cph::io::MalformedInputError& e) {
    std::cerr << "cph: malformed input: " << e.what() << '\n';
    return kMalformed;
  } catch (const std::invalid_argument& e) {
    std::cerr << "cph: malformed input: " << e.what() << '\n';
    return kMalformed;
  } catch (const std::exception& e) {
    std::cerr << "cph: " << e.what() << '\n';
    return kFailed;
  }
}
