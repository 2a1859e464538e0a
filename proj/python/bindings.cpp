#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "flatcheck/report.hpp"

namespace py = pybind11;
using namespace flatcheck;

namespace {

ProblemFile make_problem(std::vector<std::string> base, std::vector<std::string> fiber,
                         std::vector<std::vector<std::string>> presentation, std::vector<std::string> ideal, int order,
                         std::uint64_t seed, std::string label) {
    ProblemFile p{std::move(base), std::move(fiber), std::move(presentation), std::move(ideal), order, seed,
                  std::move(label)};
    // Round trip through the parser so construction gets the same validation as files.
    return parse_problem_text(serialize_problem(p), "<python>");
}

py::tuple run(const std::string& command, const ProblemFile& problem, int order, std::optional<std::uint64_t> seed,
              bool verify_reductions, const std::vector<std::string>& points) {
    auto cmd = parse_command(command);
    if (!cmd) throw py::value_error("unknown command: " + command);
    RunOptions options;
    options.order = order;
    options.seed = seed;
    options.verify_reductions = verify_reductions;
    for (const auto& p : points) options.points.push_back(parse_point(p));
    RunResult r;
    {
        py::gil_scoped_release release;
        r = run_command(*cmd, problem, options);
    }
    return py::make_tuple(r.json, r.text, r.exit_code);
}

}  // namespace

PYBIND11_MODULE(_flatcheck, m) {
    m.doc() = "Exact flatness checks for modules over convergent power series rings.";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ProblemError>(m, "ProblemError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<SplitMismatch>(m, "SplitMismatch", PyExc_ValueError);
    py::register_exception<InvariantViolation>(m, "InvariantViolation", error.ptr());

    py::class_<ProblemFile>(m, "Problem")
        .def(py::init(&make_problem), py::arg("base_vars"), py::arg("fiber_vars"), py::arg("presentation"),
             py::arg("ideal") = std::vector<std::string>{}, py::arg("order") = 8, py::arg("seed") = 0,
             py::arg("label") = "")
        .def_static("from_text", &parse_problem_text, py::arg("text"), py::arg("source") = "<python>")
        .def_static("from_file", &parse_problem, py::arg("path"))
        .def_readonly("base_vars", &ProblemFile::base_vars)
        .def_readonly("fiber_vars", &ProblemFile::fiber_vars)
        .def_readonly("presentation", &ProblemFile::presentation)
        .def_readonly("ideal", &ProblemFile::ideal)
        .def_readonly("order", &ProblemFile::order)
        .def_readonly("seed", &ProblemFile::seed)
        .def_readonly("label", &ProblemFile::label)
        .def("to_json", &serialize_problem)
        .def("__repr__", [](const ProblemFile& p) {
            return "<Problem " + (p.label.empty() ? std::string("unnamed") : p.label) + ", " +
                   std::to_string(p.presentation.size()) + " rows>";
        });

    m.def("run", &run, py::arg("command"), py::arg("problem"), py::arg("order") = 0, py::arg("seed") = std::nullopt,
          py::arg("verify_reductions") = false, py::arg("points") = std::vector<std::string>{},
          "Runs one command; returns (report JSON text, summary text, exit code).");
    m.def("corpus_report", &corpus_report, py::arg("problem"));
    m.def(
        "run_corpus",
        [](const std::filesystem::path& dir) {
            CorpusRun run = run_corpus(dir, false);
            py::list entries;
            for (const auto& e : run.entries) entries.append(py::make_tuple(e.name, e.matched, e.message));
            return py::make_tuple(run.ok, entries);
        },
        py::arg("dir"));
    m.attr("REPORT_SCHEMA") = kReportSchema;
}
