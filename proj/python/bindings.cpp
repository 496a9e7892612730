// Python extension: thin wrappers returning the JSON reports as strings.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hydroham/catalog.hpp"
#include "hydroham/examples.hpp"
#include "hydroham/transform.hpp"
#include "hydroham/variational.hpp"

namespace py = pybind11;
using namespace hydroham;

namespace {

ZeroTestOptions options(std::uint64_t seed, int trials) {
  ZeroTestOptions o;
  o.seed = seed;
  o.trials = trials;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Symbolic checks for non-homogeneous Hamiltonian operators of hydrodynamic type";

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ExprError>(m, "ExprError", PyExc_ValueError);
  py::register_exception<TransformError>(m, "TransformError", PyExc_ValueError);
  py::register_exception<CatalogError>(m, "CatalogError", PyExc_KeyError);

  m.def("normalize", [](const std::string& text) {
    SymbolTable t;
    return to_string(normalize(parse(text, t)), &t);
  }, py::arg("expr"));

  m.def("is_zero", [](const std::string& text, std::uint64_t seed, int trials) {
    SymbolTable t;
    return is_zero(parse(text, t), options(seed, trials));
  }, py::arg("expr"), py::arg("seed") = 0, py::arg("trials") = 25);

  m.def("check_json", [](const std::string& op, std::uint64_t seed, int trials) {
    return check_full(parse_operator(op), options(seed, trials)).to_json().dump();
  }, py::arg("operator"), py::arg("seed") = 0, py::arg("trials") = 25);

  m.def("invert", [](const std::string& equation) {
    return format_system(invert_equation(scalar_equation(equation)));
  }, py::arg("equation"));

  m.def("catalog_ids", [] {
    std::vector<std::string> ids;
    for (const auto& e : catalog()) ids.push_back(e.id);
    return ids;
  });

  m.def("verify_entry_json", [](const std::string& id, int trials, std::uint64_t seed) {
    return verify_entry(id, trials, seed).to_json().dump();
  }, py::arg("id"), py::arg("trials") = 25, py::arg("seed") = 0);

  m.def("example_ids", &example_ids);

  m.def("reproduce_json", [](const std::string& id, std::uint64_t seed, int trials, int degree) {
    ReproduceConfig cfg;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.degree = degree;
    py::gil_scoped_release release;
    return reproduce(id, cfg).to_json().dump();
  }, py::arg("id"), py::arg("seed") = 0, py::arg("trials") = 25, py::arg("degree") = 4);

  m.def("match", [](const std::string& op) -> std::optional<std::pair<std::string, std::string>> {
    auto found = match_catalog(parse_operator(op));
    if (!found) return std::nullopt;
    return std::make_pair(found->entry_id, found->instantiation.describe());
  }, py::arg("operator"));
}
