#include "hbl/loop_parser.hpp"
#include "hbl/pipeline.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

py::object jsonModule() { return py::module_::import("json"); }

// Reports cross the boundary as JSON text so big integers stay exact.
py::object toPython(const nlohmann::json& j) { return jsonModule().attr("loads")(j.dump()); }

nlohmann::json fromPython(const py::handle& obj) {
  return nlohmann::json::parse(py::str(jsonModule().attr("dumps")(obj)).cast<std::string>());
}

hbl::Integer toInteger(const py::handle& v) {
  if (!py::isinstance<py::int_>(v)) throw py::type_error("matrix entries must be integers");
  return hbl::Integer(py::str(v).cast<std::string>());
}

hbl::IntMatrix toMatrix(const py::handle& rows) {
  std::vector<hbl::IntVector> out;
  std::size_t cols = 0;
  for (auto row : rows) {
    hbl::IntVector r;
    for (auto v : row) r.push_back(toInteger(v));
    if (!out.empty() && r.size() != cols) throw py::value_error("matrix rows differ in length");
    cols = r.size();
    out.push_back(std::move(r));
  }
  if (out.empty()) throw py::value_error("matrix must have at least one row");
  return hbl::IntMatrix::fromRows(out, cols);
}

py::list fromMatrix(const hbl::IntMatrix& m) {
  py::list rows;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    py::list row;
    for (std::size_t c = 0; c < m.cols(); ++c) row.append(py::int_(py::str(m(r, c).get_str())));
    rows.append(row);
  }
  return rows;
}

hbl::ProblemDocument toDocument(const py::object& problem) {
  if (py::isinstance<py::str>(problem)) return hbl::parseProblem(problem.cast<std::string>());
  return hbl::parseProblemJson(fromPython(problem).dump());
}

hbl::RunOptions options(std::size_t maxClosure, std::uint64_t budget, bool strict,
                        std::optional<std::int64_t> window) {
  hbl::RunOptions o;
  o.maxClosureSize = maxClosure;
  o.budget = budget;
  o.strict = strict;
  o.window = window;
  return o;
}

py::object finish(const hbl::RunResult& r) {
  py::object report = toPython(r.report);
  report["exit_code"] = static_cast<int>(r.code);
  return report;
}

}  // namespace

PYBIND11_MODULE(_hbltile, m) {
  m.doc() = "Exact s_HBL and communication-optimal parallelepiped tilings for loop nests.";

  py::register_exception<hbl::DocumentError>(m, "ProblemError", PyExc_ValueError);
  py::register_exception<hbl::BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  m.def("hnf", [](const py::object& a) { return fromMatrix(hbl::hnf(toMatrix(a))); },
        py::arg("matrix"), "Column Hermite normal form; zero columns dropped.");
  m.def(
      "snf",
      [](const py::object& a) {
        hbl::SnfResult s = hbl::snf(toMatrix(a));
        py::dict out;
        out["u"] = fromMatrix(s.u);
        out["d"] = fromMatrix(s.d);
        out["v"] = fromMatrix(s.v);
        return out;
      },
      py::arg("matrix"), "Smith normal form A = U D V^-1 as a dict with keys u, d, v.");
  m.def(
      "kernel_basis",
      [](const py::object& a) {
        hbl::Subgroup k = hbl::kernelBasis(toMatrix(a));
        return fromMatrix(k.basis().transpose());
      },
      py::arg("matrix"), "Saturated integer kernel basis, one vector per row.");
  m.def(
      "parse_loop_nest",
      [](const std::string& text) { return toPython(hbl::problemToJson(hbl::parseLoopNest(text))); },
      py::arg("text"), "Loop-nest text to a problem dict.");

  m.def(
      "analyze",
      [](const py::object& problem, std::size_t maxClosure, bool strict) {
        return finish(hbl::runAnalyze(toDocument(problem), options(maxClosure, hbl::kDefaultEnumerationBudget, strict, std::nullopt)));
      },
      py::arg("problem"), py::arg("max_closure") = hbl::kDefaultMaxClosureSize,
      py::arg("strict") = false);
  m.def(
      "tile",
      [](const py::object& problem, const py::int_& memory, std::size_t maxClosure, bool points,
         std::uint64_t budget) {
        auto o = options(maxClosure, budget, false, std::nullopt);
        o.emitPoints = points;
        return finish(hbl::runTile(toDocument(problem), toInteger(memory), o));
      },
      py::arg("problem"), py::arg("memory"), py::arg("max_closure") = hbl::kDefaultMaxClosureSize,
      py::arg("points") = false, py::arg("budget") = hbl::kDefaultEnumerationBudget);
  m.def(
      "verify",
      [](const py::object& problem, const std::vector<py::int_>& memories, std::optional<std::int64_t> window,
         std::uint64_t budget, std::size_t maxClosure) {
        std::vector<hbl::Integer> ms;
        for (const auto& v : memories) ms.push_back(toInteger(v));
        return finish(hbl::runVerify(toDocument(problem), ms, options(maxClosure, budget, false, window)));
      },
      py::arg("problem"), py::arg("memories") = std::vector<py::int_>{}, py::arg("window") = py::none(),
      py::arg("budget") = hbl::kDefaultEnumerationBudget,
      py::arg("max_closure") = hbl::kDefaultMaxClosureSize);
}
