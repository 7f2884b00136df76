#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "rlie/catalog.hpp"
#include "rlie/cohomology.hpp"
#include "rlie/errors.hpp"
#include "rlie/groupscheme.hpp"
#include "rlie/io.hpp"
#include "rlie/restricted.hpp"

namespace py = pybind11;
using namespace rlie;

namespace {

py::dict report_dict(const VerificationReport& r) {
  py::dict d;
  d["ok"] = r.ok;
  d["failures"] = r.failures;
  return d;
}

std::map<std::size_t, Coeff> as_dict(const SparseVec& v) {
  std::map<std::size_t, Coeff> out;
  for (const Term& t : v) out[t.index] = t.coeff;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Restricted Lie algebras over F_p, their cohomology and finite group schemes";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  static py::exception<InputError> input(m, "InputError", base.ptr());
  static py::exception<DimensionError> dimension(m, "DimensionError", base.ptr());
  static py::exception<PreconditionError> precondition(m, "PreconditionError", base.ptr());
  static py::exception<ResourceError> resource(m, "ResourceError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InputError& e) {
      input(e.what());
    } catch (const DimensionError& e) {
      dimension(e.what());
    } catch (const PreconditionError& e) {
      precondition(e.what());
    } catch (const ResourceError& e) {
      resource(e.what());
    } catch (const Error& e) {
      base(e.what());
    }
  });

  py::class_<LoadedAlgebra>(m, "Algebra")
      .def_property_readonly("dim", [](const LoadedAlgebra& a) { return a.lie.dim(); })
      .def_property_readonly("p", [](const LoadedAlgebra& a) { return a.lie.p(); })
      .def_property_readonly("labels", [](const LoadedAlgebra& a) { return a.lie.labels(); })
      .def_property_readonly("restricted", [](const LoadedAlgebra& a) { return a.pmap.has_value(); })
      .def_property_readonly("graded", [](const LoadedAlgebra& a) { return a.lie.grading().has_value(); })
      .def(
          "bracket", [](const LoadedAlgebra& a, std::size_t i, std::size_t j) {
            if (i >= a.lie.dim() || j >= a.lie.dim()) throw py::index_error("basis index out of range");
            return as_dict(a.lie.bracket(i, j));
          },
          "[e_i, e_j] as {index: coefficient}")
      .def("to_json", [](const LoadedAlgebra& a) {
        return serialize(a.pmap ? to_file(a.lie, &*a.pmap) : to_file(a.lie));
      })
      .def_static("from_json", [](const std::string& s) { return from_file(deserialize(s)); })
      .def("__eq__", [](const LoadedAlgebra& a, const LoadedAlgebra& b) { return a.lie == b.lie && a.pmap == b.pmap; })
      .def("__repr__", [](const LoadedAlgebra& a) {
        return "<Algebra dim=" + std::to_string(a.lie.dim()) + " p=" + std::to_string(a.lie.p()) + ">";
      });

  m.def(
      "build",
      [](const std::string& family, std::size_t m_, std::vector<std::uint32_t> n, std::uint32_t p, std::size_t size) {
        return build_algebra({family, m_, std::move(n), p, size});
      },
      py::arg("family"), py::arg("m") = 1, py::arg("n") = std::vector<std::uint32_t>{}, py::arg("p") = 5,
      py::arg("size") = 2);

  m.def("verify_lie", [](const LoadedAlgebra& a) { return report_dict(verify_lie(a.lie)); });
  m.def("verify_restricted", [](const LoadedAlgebra& a) {
    const RestrictedLieAlgebra R = a.restricted();
    return report_dict(verify_restricted(R.lie, R.pmap));
  });
  m.def("is_simple", [](const LoadedAlgebra& a) {
    switch (is_simple(a.lie).verdict) {
      case Simplicity::simple: return "simple";
      case Simplicity::not_simple: return "not_simple";
      default: return "inconclusive";
    }
  });
  m.def("killing_radical_dim", [](const LoadedAlgebra& a) { return killing_radical(a.lie).radical.dim(); });

  auto options = [](bool graded, bool full) {
    CohomologyOptions o;
    o.use_grading = graded;
    if (full) o.method = CohomologyMethod::full;
    return o;
  };
  m.def(
      "cohomology",
      [options](const LoadedAlgebra& a, bool graded, bool full) {
        const CohomologyReport r = lie_cohomology(a.lie, options(graded, full));
        py::dict d;
        d["h1"] = r.h1;
        d["h2"] = r.h2;
        return d;
      },
      py::arg("algebra"), py::arg("graded") = true, py::arg("full") = false);
  m.def(
      "restricted_h2",
      [options](const LoadedAlgebra& a, bool graded, bool full) {
        return py::module_::import("json").attr("loads")(report_json(restricted_h2(a.restricted(), options(graded, full))));
      },
      py::arg("algebra"), py::arg("graded") = true, py::arg("full") = false);

  py::class_<HopfAlgebra>(m, "Hopf")
      .def_readonly("dim", &HopfAlgebra::dim)
      .def_property_readonly("p", [](const HopfAlgebra& H) { return H.F.p(); })
      .def_property_readonly("commutative", &HopfAlgebra::commutative)
      .def_property_readonly("cocommutative", &HopfAlgebra::cocommutative)
      .def("verify", [](const HopfAlgebra& H) { return report_dict(verify_hopf(H)); })
      .def("dual", [](const HopfAlgebra& H) { return dual_hopf(H); })
      .def("height", [](const HopfAlgebra& H) { return height(H); })
      .def("primitives", [](const HopfAlgebra& H) {
        RestrictedLieAlgebra R = primitives(H);
        return LoadedAlgebra{std::move(R.lie), std::move(R.pmap)};
      })
      .def("to_json", [](const HopfAlgebra& H) { return hopf_to_json(H); })
      .def_static("from_json", [](const std::string& s) { return hopf_from_json(s); })
      .def("__eq__", [](const HopfAlgebra& a, const HopfAlgebra& b) { return a == b; });

  m.def("enveloping", [](const LoadedAlgebra& a) { return restricted_enveloping(a.restricted()); });
  m.def("constant_group_scheme", [](std::size_t n, std::uint32_t p) { return constant_hopf(cyclic_group(n), p); },
        py::arg("cyclic_order"), py::arg("p"));

  m.def(
      "catalog",
      [](int tier) {
        std::vector<CatalogResult> rs;
        for (const CatalogEntry& e : reference_catalog(tier)) rs.push_back(run_catalog_entry(e));
        return py::module_::import("json").attr("loads")(catalog_json(rs, false));
      },
      py::arg("tier") = 1);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_command(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
