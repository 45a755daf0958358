// Python module kinder._core. Most entry points go through run_command and
// hand back the JSON report as text; the package wrapper parses it.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "json.hpp"
#include "kinder/altcodes.hpp"
#include "kinder/arith.hpp"
#include "kinder/commands.hpp"
#include "kinder/criteria.hpp"
#include "kinder/errors.hpp"
#include "kinder/linalg.hpp"
#include "kinder/twisted.hpp"

namespace py = pybind11;

namespace {

std::string big_to_string(const kinder::BigInt& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string run(const std::string& command, const std::string& params_json, std::optional<std::uint64_t> seed,
                std::optional<std::uint64_t> trials, const std::string& mode, unsigned workers) {
  kinder::RunConfig cfg;
  cfg.command = command;
  cfg.params = nlohmann::ordered_json::parse(params_json.empty() ? "{}" : params_json);
  cfg.seed = seed;
  cfg.trials = trials;
  cfg.mode = mode;
  cfg.workers = workers;
  py::gil_scoped_release release;
  return kinder::run_command(cfg).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "kinder core bindings";

  auto base = py::register_exception<kinder::Error>(m, "KinderError");
  py::register_exception<kinder::InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<kinder::CapExceeded>(m, "CapExceeded", base.ptr());
  py::register_exception<kinder::PropertyViolation>(m, "PropertyViolation", base.ptr());
  py::register_exception<kinder::MalformedInput>(m, "MalformedInput", base.ptr());

  m.def("run", &run, py::arg("command"), py::arg("params_json") = "{}", py::arg("seed") = py::none(),
        py::arg("trials") = py::none(), py::arg("mode") = "", py::arg("workers") = 0u,
        "Run one command; returns the JSON report text.");
  m.def("command_names", &kinder::command_names);

  m.def("gaussian_binomial",
        [](std::uint64_t n, std::uint64_t l, std::uint64_t q) {
          return py::int_(py::str(big_to_string(kinder::gaussian_binomial(n, l, q))));
        },
        py::arg("n"), py::arg("l"), py::arg("q"));
  m.def("legendre_valuation", &kinder::legendre_valuation, py::arg("k"), py::arg("p"));
  m.def("mu", &kinder::mu, py::arg("n"));
  m.def("nu_p", py::overload_cast<std::uint64_t, std::uint64_t>(&kinder::nu_p), py::arg("n"), py::arg("p"));

  m.def("code_class_count",
        [](std::size_t k, std::size_t l) {
          const auto r = kinder::code_classes(k, l);
          return py::make_tuple(r.codes, r.classes, r.bound);
        },
        py::arg("k"), py::arg("l"), "(codes, classes, 2^{l(k-l)}/k!)");

  m.def("suzuki_search",
        [](std::uint32_t e, std::uint64_t seed) -> py::object {
          kinder::SearchResult r;
          {
            py::gil_scoped_release release;
            r = kinder::suzuki_search(e, seed);
          }
          if (!r.found) return py::none();
          return py::str(r.certificate->to_json());
        },
        py::arg("e"), py::arg("seed"), "Certificate JSON text, or None.");
  m.def("suzuki_verify", &kinder::suzuki_verify_json, py::arg("cert_json"));

  m.def("criterion_ids", &kinder::criterion_ids);
  m.def("run_criterion",
        [](const std::string& id, std::uint64_t seed) {
          kinder::SuiteOptions opts;
          opts.seed = seed;
          kinder::CriterionResult r;
          {
            py::gil_scoped_release release;
            r = kinder::run_criterion(id, opts);
          }
          py::dict d;
          d["id"] = r.id;
          d["title"] = r.title;
          d["pass"] = r.pass;
          d["detail"] = r.detail;
          d["seconds"] = r.seconds;
          return d;
        },
        py::arg("id"), py::arg("seed") = kinder::SuiteOptions{}.seed);
}
