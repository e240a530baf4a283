#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cph/closed_forms.hpp"
#include "cph/continuation.hpp"
#include "cph/errors.hpp"
#include "cph/holomorphic.hpp"
#include "cph/manifold.hpp"

namespace py = pybind11;
using namespace cph;

namespace {

std::string repr(Complex z) {
  std::ostringstream os;
  os << '(' << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "j)";
  return os.str();
}

PathPolyline to_path(const std::vector<Complex>& points) { return {points}; }

}  // namespace

PYBIND11_MODULE(cph, m) {
  m.doc() = "Holomorphic geodesics of the Clifton-Pohl torus";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<PoleError>(m, "PoleError", base.ptr());
  py::register_exception<SingularPathError>(m, "SingularPathError", base.ptr());
  py::register_exception<OutOfDomainError>(m, "OutOfDomainError", base.ptr());
  py::register_exception<NullVelocityComponentError>(m, "NullVelocityComponentError", base.ptr());
  py::register_exception<BothComponentsZeroError>(m, "BothComponentsZeroError", base.ptr());
  py::register_exception<DegenerateGermError>(m, "DegenerateGermError", base.ptr());
  py::register_exception<ClassificationMismatchError>(m, "ClassificationMismatchError", base.ptr());
  py::register_exception<DegenerateCoefficientsError>(m, "DegenerateCoefficientsError", base.ptr());
  py::register_exception<ChartDegeneracyError>(m, "ChartDegeneracyError", base.ptr());

  py::class_<GeodesicGerm>(m, "Germ")
      .def(py::init([](Complex alpha, Complex beta, Complex x, Complex y, Complex t0) {
             return GeodesicGerm{{alpha, beta}, {x, y}, t0};
           }),
           py::arg("alpha"), py::arg("beta"), py::arg("x"), py::arg("y"), py::arg("t0") = Complex(0.0))
      .def_property_readonly("alpha", [](const GeodesicGerm& g) { return g.point.u; })
      .def_property_readonly("beta", [](const GeodesicGerm& g) { return g.point.v; })
      .def_property_readonly("x", [](const GeodesicGerm& g) { return g.velocity.du; })
      .def_property_readonly("y", [](const GeodesicGerm& g) { return g.velocity.dv; })
      .def_readonly("t0", &GeodesicGerm::t0)
      .def("__repr__", [](const GeodesicGerm& g) {
        return "Germ(alpha=" + repr(g.point.u) + ", beta=" + repr(g.point.v) + ", x=" +
               repr(g.velocity.du) + ", y=" + repr(g.velocity.dv) + ", t0=" + repr(g.t0) + ")";
      });

  py::class_<State>(m, "State")
      .def(py::init<Complex, Complex, Complex, Complex>(), py::arg("u"), py::arg("v"),
           py::arg("du"), py::arg("dv"))
      .def_readonly("u", &State::u)
      .def_readonly("v", &State::v)
      .def_readonly("du", &State::du)
      .def_readonly("dv", &State::dv)
      .def("as_tuple", [](const State& s) { return py::make_tuple(s.u, s.v, s.du, s.dv); });

  py::class_<FirstIntegrals>(m, "FirstIntegrals")
      .def_readonly("A", &FirstIntegrals::a)
      .def_readonly("B", &FirstIntegrals::b);

  py::enum_<GermClass>(m, "GermClass")
      .value("NullUConst", GermClass::NullUConst)
      .value("NullVConst", GermClass::NullVConst)
      .value("Exponential", GermClass::Exponential)
      .value("Generic", GermClass::Generic);

  py::class_<Classification>(m, "Classification")
      .def_readonly("tag", &Classification::tag)
      .def_readonly("witnesses", &Classification::witnesses)
      .def_readonly("discriminant", &Classification::discriminant);

  py::class_<EllipticTriple>(m, "EllipticTriple")
      .def_readonly("sn", &EllipticTriple::sn)
      .def_readonly("cn", &EllipticTriple::cn)
      .def_readonly("dn", &EllipticTriple::dn);

  m.def("jacobi_elliptic", &jacobi_elliptic, py::arg("z"), py::arg("m"));
  m.def("elliptic_f", &elliptic_f, py::arg("z"), py::arg("m"));
  m.def("carlson_rf", &carlson_rf, py::arg("x"), py::arg("y"), py::arg("z"));

  m.def("in_domain", [](Complex u, Complex v) { return in_domain({u, v}); }, py::arg("u"), py::arg("v"));
  m.def("geodesic_rhs", &geodesic_rhs, py::arg("state"));
  m.def("germ_state", &germ_state, py::arg("germ"));
  m.def("first_integrals", py::overload_cast<const GeodesicGerm&>(&first_integrals), py::arg("germ"));
  m.def("first_integrals", py::overload_cast<const State&>(&first_integrals), py::arg("state"));
  m.def("null_first_integral", &null_first_integral, py::arg("state"));
  m.def("exponential_discriminant", &exponential_discriminant, py::arg("germ"));
  m.def("classify", &classify, py::arg("germ"));
  m.def("dilate", &dilate, py::arg("germ"), py::arg("k"));

  py::enum_<Family>(m, "Family")
      .value("NullRational", Family::NullRational)
      .value("NullTan", Family::NullTan)
      .value("Exponential", Family::Exponential)
      .value("GenericElliptic", Family::GenericElliptic);

  py::class_<GeodesicSampler>(m, "Sampler")
      .def_property_readonly("family", &GeodesicSampler::family)
      .def_property_readonly("germ", &GeodesicSampler::source)
      .def("sample", &GeodesicSampler::sample, py::arg("t"))
      .def("__call__", &GeodesicSampler::sample, py::arg("t"));

  m.def("solve", &solve, py::arg("germ"));

  py::enum_<TraceStatus>(m, "TraceStatus")
      .value("Completed", TraceStatus::Completed)
      .value("Obstructed", TraceStatus::Obstructed);

  py::class_<Obstruction>(m, "Obstruction")
      .def_readonly("t_star", &Obstruction::t_star)
      .def_readonly("radius", &Obstruction::radius);

  py::class_<ContinuationTrace>(m, "Trace")
      .def_readonly("status", &ContinuationTrace::status)
      .def_readonly("obstruction", &ContinuationTrace::obstruction)
      .def_property_readonly("times",
                             [](const ContinuationTrace& tr) {
                               std::vector<Complex> out;
                               for (const auto& s : tr.samples) out.push_back(s.t);
                               return out;
                             })
      .def_property_readonly("states",
                             [](const ContinuationTrace& tr) {
                               std::vector<State> out;
                               for (const auto& s : tr.samples) out.push_back(s.state);
                               return out;
                             })
      .def_property_readonly("end", [](const ContinuationTrace& tr) { return tr.back().state; })
      .def("__len__", [](const ContinuationTrace& tr) { return tr.samples.size(); });

  m.def(
      "continue_path",
      [](const GeodesicGerm& g, const std::vector<Complex>& path, double tol) {
        py::gil_scoped_release release;
        return continue_path(g, to_path(path), tol);
      },
      py::arg("germ"), py::arg("path"), py::arg("tol") = 1e-10);

  py::class_<RayReport>(m, "RayReport")
      .def_readonly("index", &RayReport::index)
      .def_readonly("status", &RayReport::status)
      .def_readonly("t_end", &RayReport::t_end)
      .def_readonly("obstruction", &RayReport::obstruction);

  py::class_<ObstructionReport>(m, "ObstructionReport")
      .def_readonly("radius", &ObstructionReport::radius)
      .def_readonly("rays", &ObstructionReport::rays)
      .def_readonly("final_rays", &ObstructionReport::final_rays)
      .def_readonly("converged", &ObstructionReport::converged)
      .def_readonly("obstructions", &ObstructionReport::obstructions)
      .def_readonly("min_separation", &ObstructionReport::min_separation)
      .def_readonly("per_ray", &ObstructionReport::per_ray);

  m.def(
      "completeness_probe",
      [](const GeodesicGerm& g, double radius, int rays, double tol) {
        py::gil_scoped_release release;
        return completeness_probe(g, radius, rays, tol);
      },
      py::arg("germ"), py::arg("radius") = 5.0, py::arg("rays") = 64, py::arg("tol") = 1e-10);

  py::class_<MonodromyResult>(m, "MonodromyResult")
      .def_readonly("start", &MonodromyResult::start)
      .def_readonly("endpoint", &MonodromyResult::endpoint)
      .def_readonly("branch_changed", &MonodromyResult::branch_changed)
      .def_readonly("mismatch", &MonodromyResult::mismatch)
      .def_readonly("polygon_sides", &MonodromyResult::polygon_sides);

  m.def(
      "loop_monodromy",
      [](const GeodesicGerm& g, Complex center, double radius, int turns, double tol) {
        py::gil_scoped_release release;
        return loop_monodromy(g, center, radius, turns, tol);
      },
      py::arg("germ"), py::arg("center"), py::arg("radius"), py::arg("turns") = 1,
      py::arg("tol") = 1e-10);

  m.def("state_distance", &state_distance, py::arg("a"), py::arg("b"));
}
