#include "semitoric/catalog.hpp"
#include "semitoric/errors.hpp"
#include "semitoric/invariants.hpp"
#include "semitoric/singularities.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>

namespace py = pybind11;
using namespace semitoric;

namespace {

SystemInstance makeSystem(const std::string& family, const py::dict& kw) {
  auto get = [&](const char* key, double fallback) {
    return kw.contains(key) ? kw[key].cast<double>() : fallback;
  };
  std::vector<const char*> allowed;
  std::optional<SystemInstance> s;
  if (family == "cso") {
    allowed = {"rho1", "rho2"};
    s.emplace(CoupledSpinOscillator{get("rho1", 1.0), get("rho2", 1.0)});
  } else if (family == "cam") {
    allowed = {"R1", "R2", "t"};
    s.emplace(CoupledAngularMomenta{get("R1", 1.0), get("R2", 1.0), get("t", 0.5)});
  } else if (family == "twoff") {
    allowed = {"R1", "R2", "s1", "s2"};
    s.emplace(TwoFocusFamily{get("R1", 1.0), get("R2", 2.0), get("s1", 0.5), get("s2", 0.5)});
  } else {
    throw ConfigError("unknown family '" + family + "' (expected cso, cam or twoff)");
  }
  for (const auto& item : kw) {
    const auto key = item.first.cast<std::string>();
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end())
      throw ConfigError("parameter '" + key + "' does not belong to family " + family);
  }
  validateParameters(*s);
  return *s;
}

py::dict record(const SingularityRecord& r) {
  py::dict d;
  d["kind"] = kindName(r.kind);
  d["lambda"] = r.lambda;
  d["eta"] = r.eta;
  d["point"] = std::vector<double>(r.point.coords.data(), r.point.coords.data() + r.point.coords.size());
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Semitoric invariants of spin-oscillator and coupled angular momenta systems";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<NearDegenerateError>(m, "NearDegenerateError", base.ptr());
  py::register_exception<AccuracyError>(m, "AccuracyError", base.ptr());
  py::register_exception<RangeError>(m, "RangeError", base.ptr());
  py::register_exception<IntegrationError>(m, "IntegrationError", base.ptr());

  py::class_<SystemInstance>(m, "System")
      .def(py::init([](const std::string& family, const py::kwargs& kw) { return makeSystem(family, kw); }),
           py::arg("family"))
      .def_property_readonly("family", &SystemInstance::familyName)
      .def_property_readonly("parameters",
                             [](const SystemInstance& s) {
                               py::dict d;
                               for (const auto& [k, v] : s.parameters()) d[k.c_str()] = v;
                               return d;
                             })
      .def("level_range", &SystemInstance::levelRange)
      .def("energy_range", [](const SystemInstance& s, double l) { return energyRange(s.reduced(l)); },
           py::arg("l"))
      .def("evaluate",
           [](const SystemInstance& s, std::vector<double> x) {
             PhasePoint p{Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()))};
             const auto v = s.evaluate(p);
             return std::pair{v[0], v[1]};
           },
           py::arg("point"))
      .def("__repr__", [](const SystemInstance& s) { return "<semitoric.System " + s.familyName() + ">"; });

  m.def(
      "classify",
      [](const SystemInstance& s, std::uint64_t seed) {
        RankZeroOptions opt;
        opt.seed = seed;
        py::gil_scoped_release release;
        const FocusFocusCensus c = countFocusFocus(s, opt);
        py::gil_scoped_acquire acquire;
        py::list out;
        for (const auto& r : c.records) out.append(record(r));
        return out;
      },
      py::arg("system"), py::arg("seed") = 1, "Rank-0 points with their Williamson type.");

  m.def(
      "invariants_json",
      [](const SystemInstance& s, std::vector<int> signs, int shear, int threads) {
        InvariantOptions opt;
        opt.signs = std::move(signs);
        opt.shear = shear;
        opt.taylor.threads = threads;
        py::gil_scoped_release release;
        return computeInvariants(s, opt).dump();
      },
      py::arg("system"), py::arg("signs") = std::vector<int>{}, py::arg("shear") = 0, py::arg("threads") = 1);

  m.def(
      "action",
      [](const SystemInstance& s, double l, double h, const std::string& method) {
        if (method != "area" && method != "return_time") throw ConfigError("method must be 'area' or 'return_time'");
        py::gil_scoped_release release;
        return actionSample(s, l, h, method == "area" ? ActionMethod::Area : ActionMethod::ReturnTime).I;
      },
      py::arg("system"), py::arg("l"), py::arg("h"), py::arg("method") = "area",
      "Area of {H < h} in the reduced space at L = l, divided by 2π.");

  m.def(
      "return_times",
      [](const SystemInstance& s, double l, double h) {
        py::gil_scoped_release release;
        const auto rt = returnTimes(s, l, h);
        return std::pair{rt.tau1, rt.tau2};
      },
      py::arg("system"), py::arg("l"), py::arg("h"));

  m.def(
      "cam_transition_times",
      [](double R1, double R2) {
        const auto t = camTransitionTimes(R1, R2);
        return std::pair{t.lower, t.upper};
      },
      py::arg("R1"), py::arg("R2"));

  m.def(
      "transition_scan",
      [](const std::string& family, const std::string& axis, double from, double to, int resolution,
         const py::kwargs& fixed) {
        py::dict kw = fixed;
        std::vector<double> values;
        const auto flips = transitionScan(
            [&](double x) {
              kw[axis.c_str()] = x;
              return makeSystem(family, kw);
            },
            from, to, resolution);
        for (const auto& f : flips) values.push_back(f.value);
        return values;
      },
      py::arg("family"), py::arg("axis"), py::arg("start"), py::arg("stop"), py::arg("resolution") = 64);

  m.def(
      "region_map",
      [](double R1, double R2, int grid, int threads) {
        RegionMap map;
        {
          py::gil_scoped_release release;
          map = regionMap(R1, R2, grid, threads);
        }
        py::list rows;
        for (std::size_t i2 = 0; i2 < map.s2_axis.size(); ++i2) {
          py::list row;
          for (std::size_t i1 = 0; i1 < map.s1_axis.size(); ++i1) row.append(map.at(i1, i2));
          rows.append(row);
        }
        py::dict d;
        d["s1"] = map.s1_axis;
        d["s2"] = map.s2_axis;
        d["n_ff"] = rows;
        return d;
      },
      py::arg("R1") = 1.0, py::arg("R2") = 2.0, py::arg("grid") = 16, py::arg("threads") = 1,
      "n_ff[i2][i1] at (s1[i1], s2[i2]) for the two-focus family.");

  m.def(
      "hirzebruch_transition_times",
      [](int n, double alpha, double beta, double gamma) {
        if (n != 1 && n != 2) throw ConfigError("n must be 1 or 2");
        const auto t = hirzebruchTransitionTimes(n == 1 ? HirzebruchKind::W1 : HirzebruchKind::W2, alpha, beta, gamma);
        return std::pair{t.lower, t.upper};
      },
      py::arg("n"), py::arg("alpha"), py::arg("beta"), py::arg("gamma"));

  m.def(
      "hirzebruch_polygon",
      [](int n, double alpha, double beta) {
        std::vector<std::pair<double, double>> out;
        for (const auto& v : hirzebruchToricPolygon(n, alpha, beta)) out.push_back({v.x(), v.y()});
        return out;
      },
      py::arg("n"), py::arg("alpha"), py::arg("beta"));
}
