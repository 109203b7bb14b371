#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "srgrobust/dwshell.hpp"
#include "srgrobust/io.hpp"
#include "srgrobust/lmi.hpp"
#include "srgrobust/lti.hpp"
#include "srgrobust/mrn.hpp"
#include "srgrobust/profile.hpp"

namespace py = pybind11;
using namespace srg;
using geometry::Region;

namespace {

py::dict verdict_dict(const mrn::MrnVerdict& v) {
  py::dict d;
  d["holds"] = v.holds;
  d["margin"] = v.margin;
  d["method"] = v.method;
  d["exact"] = v.exact;
  d["boundary"] = v.boundary;
  d["note"] = v.note;
  if (v.witness) d["witness"] = *v.witness;
  else d["witness"] = py::none();
  return d;
}

py::dict rs_dict(const lti::RsVerdict& v) {
  py::dict d;
  d["robustly_stable"] = v.robustly_stable;
  d["margin"] = v.margin;
  d["worst_frequency"] = v.worst_frequency;
  d["method"] = v.method;
  d["note"] = v.note;
  d["warnings"] = v.warnings;
  return d;
}

mrn::Shape make_shape(const std::string& kind, double gamma, double alpha, double beta) {
  if (kind == "disc") return mrn::Shape::disc(gamma);
  if (kind == "cone") return mrn::Shape::cone(alpha, beta);
  if (kind == "sector") return mrn::Shape::sector(gamma, alpha, beta);
  throw InputError("unknown shape '" + kind + "'");
}

lti::StateSpace make_ss(const MatR& a, const MatR& b, const MatR& c, const MatR& d) {
  lti::StateSpace s{a, b, c, d};
  s.validate();
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Scaled relative graph and Davis-Wielandt shell robustness analysis";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<Region>(m, "Region")
      .def_static("disc", &Region::disc, py::arg("center"), py::arg("radius"))
      .def_static("cone", &Region::cone, py::arg("alpha"), py::arg("beta"))
      .def_static("sector", &Region::sector, py::arg("gamma"), py::arg("alpha"), py::arg("beta"))
      .def_static("half_plane", &Region::half_plane, py::arg("theta"))
      .def_static("point_set", &Region::point_set, py::arg("points"))
      .def_static("union_of", &Region::union_of, py::arg("parts"))
      .def_static("intersection_of", &Region::intersection_of, py::arg("parts"))
      .def_static("from_json", [](const std::string& text) { return io::region_from_json(io::Json::parse(text)); })
      .def("contains", &Region::contains, py::arg("z"));

  m.def("dw_point", [](const MatC& g, const VecC& u) {
    const auto p = dw::dw_point(g, u);
    return py::make_tuple(p.z, p.nu);
  });
  m.def(
      "dw_sample",
      [](const MatC& g, int n_random, int n_directions, uint64_t seed) {
        dw::Rng rng(seed);
        const auto c = dw::dw_sample(g, n_random, n_directions, rng);
        MatR out(c.points.size(), 3);
        for (size_t i = 0; i < c.points.size(); ++i) out.row(i) << c.points[i].z.real(), c.points[i].z.imag(), c.points[i].nu;
        return out;
      },
      py::arg("g"), py::arg("n_random") = 0, py::arg("n_directions") = 1024, py::arg("seed") = 1);
  m.def("srg_theta_pair", &dw::srg_theta_pair, py::arg("g"), py::arg("u"), py::arg("theta"));
  m.def("project_theta", [](cplx z, double nu, double theta) { return dw::project_theta({z, nu}, theta); });
  m.def("theta_angle", &dw::theta_angle, py::arg("g"), py::arg("theta"), py::arg("tol") = 1e-9);
  m.def("sigma_max", &dw::sigma_max);

  m.def(
      "mrn_check_named",
      [](const MatC& g, const std::string& shape, double gamma, double alpha, double beta) {
        return verdict_dict(mrn::mrn_check_named(g, make_shape(shape, gamma, alpha, beta)));
      },
      py::arg("g"), py::arg("shape"), py::arg("gamma") = 1.0, py::arg("alpha") = 0.0, py::arg("beta") = 0.0);
  m.def(
      "mrn_check_theta",
      [](const MatC& g, const Region& x, double theta) { return verdict_dict(mrn::mrn_check_theta(g, x, theta)); },
      py::arg("g"), py::arg("region"), py::arg("theta"));
  m.def(
      "mrn_check_general",
      [](const MatC& g, const Region& x, double theta) { return verdict_dict(mrn::mrn_check_general(g, x, theta)); },
      py::arg("g"), py::arg("region"), py::arg("theta") = 0.0);
  m.def("witness_block_pair", &mrn::witness_block_pair, py::arg("s"), py::arg("theta"), py::arg("m"), py::arg("n"));
  m.def("witness_svd_disc", &mrn::witness_svd_disc, py::arg("g"), py::arg("gamma"));

  py::class_<lti::StateSpace>(m, "StateSpace")
      .def(py::init(&make_ss), py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D"))
      .def_readonly("A", &lti::StateSpace::a)
      .def_readonly("B", &lti::StateSpace::b)
      .def_readonly("C", &lti::StateSpace::c)
      .def_readonly("D", &lti::StateSpace::d)
      .def("response", [](const lti::StateSpace& s, double w) { return lti::freq_response(s, w); });

  m.def("hinf_norm", &lti::hinf_norm, py::arg("sys"), py::arg("tol") = 1e-6);
  m.def("hinf_norm_grid", &lti::hinf_norm_grid, py::arg("sys"), py::arg("n_points") = 10000);
  m.def(
      "hinf_theta_angle",
      [](const lti::StateSpace& s, double theta, double tol) {
        const auto a = lti::hinf_theta_angle(s, theta, tol);
        return py::dict(py::arg("value") = a.value, py::arg("lower") = a.lower, py::arg("upper") = a.upper,
                        py::arg("certified") = a.certified);
      },
      py::arg("sys"), py::arg("theta"), py::arg("tol") = 1e-3);
  m.def(
      "disc_feasible",
      [](const lti::StateSpace& s, double theta, double c, double r) { return lmi::disc_feasible(s, theta, c, r).feasible; },
      py::arg("sys"), py::arg("theta"), py::arg("c"), py::arg("r"));
  m.def(
      "c_range_for_phi",
      [](const lti::StateSpace& s, double theta, double phi) -> py::object {
        const auto r = lmi::c_range_for_phi(s, theta, phi);
        if (!r) return py::none();
        return py::make_tuple(r->c_lo, r->c_hi);
      },
      py::arg("sys"), py::arg("theta"), py::arg("phi"));
  m.def(
      "rs_check_named",
      [](const lti::StateSpace& s, const std::string& shape, double gamma, double alpha, double beta,
         const std::string& grid) { return rs_dict(lti::rs_check_named(s, make_shape(shape, gamma, alpha, beta), io::parse_grid(grid))); },
      py::arg("sys"), py::arg("shape"), py::arg("gamma") = 1.0, py::arg("alpha") = 0.0, py::arg("beta") = 0.0,
      py::arg("grid") = "log:1e-3:1e3:400");

  py::class_<profile::ProfileSlice>(m, "ProfileSlice")
      .def_readonly("theta", &profile::ProfileSlice::theta)
      .def_readonly("gamma", &profile::ProfileSlice::gamma)
      .def_readonly("phi", &profile::ProfileSlice::phi)
      .def_readonly("lambda_", &profile::ProfileSlice::lambda)
      .def_readonly("flag", &profile::ProfileSlice::flag);
  py::class_<profile::ThetaProfile>(m, "ThetaProfile")
      .def_readonly("slices", &profile::ThetaProfile::slices)
      .def_property_readonly("hinf", [](const profile::ThetaProfile& p) { return p.meta.hinf; })
      .def_property_readonly("runtime_s", [](const profile::ThetaProfile& p) { return p.meta.runtime_s; })
      .def("rows", &profile::ThetaProfile::rows)
      .def("to_csv", &profile::to_csv)
      .def("to_json", &profile::to_json)
      .def("complementary", &profile::complementary_profile)
      .def("same_surface", &profile::same_surface);
  m.def(
      "compute_profile",
      [](const lti::StateSpace& s, int n_theta, int n_gamma, double err, int threads) {
        profile::Options opt;
        opt.n_theta = n_theta;
        opt.n_gamma = n_gamma;
        opt.err = err;
        opt.threads = threads;
        py::gil_scoped_release release;
        return profile::compute_profile(s, opt);
      },
      py::arg("sys"), py::arg("n_theta") = 64, py::arg("n_gamma") = 16, py::arg("err") = 1e-3, py::arg("threads") = 0);
  m.def("profile_from_csv", &profile::from_csv);
  m.def("profile_from_json", &profile::from_json);
}
