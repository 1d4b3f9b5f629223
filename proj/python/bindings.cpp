#include "wdvv/expr.hpp"
#include "wdvv/fixtures.hpp"
#include "wdvv/lie.hpp"
#include "wdvv/numeric.hpp"
#include "wdvv/pde.hpp"
#include "wdvv/suites.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/complex.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace wdvv;

namespace {

Point to_point(const std::map<std::string, std::string>& values) {
    Point p;
    for (const auto& [k, v] : values) {
        mpq_class q(v);
        q.canonicalize();
        p[k] = q;
    }
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact checks for the associativity equations";

    py::register_exception<FixtureError>(m, "FixtureError", PyExc_ValueError);
    py::register_exception<BranchError>(m, "BranchError", PyExc_ArithmeticError);

    m.def("normalize", [](const std::string& text) { return render(nf(text)); }, py::arg("text"),
          "Canonical form of an expression, rendered back to text.");
    m.def("is_zero", [](const std::string& text) { return is_identically_zero(parse(text)); }, py::arg("text"));
    m.def("diff",
          [](const std::string& text, const std::string& var) { return render(normalize(differentiate(parse(text), var))); },
          py::arg("text"), py::arg("var"));
    m.def("ferapontov_residual", [](const std::string& f) { return render(ferapontov_residual(nf(f))); }, py::arg("f"),
          "Residual of the equation for f(x, y), normalized.");
    m.def("dubrovin_residual", [](const std::string& F) { return render(dubrovin_residual(nf(F))); }, py::arg("F"),
          "Residual of the equation for F(y, t), normalized.");
    m.def(
        "evaluate",
        [](const std::string& text, const std::map<std::string, std::string>& point, long digits) {
            const Complex c = eval_numeric(parse(text), to_point(point), digits);
            return std::complex<double>(c.re().to_double(), c.im().to_double());
        },
        py::arg("text"), py::arg("point"), py::arg("digits") = 50,
        "Evaluate at rational coordinates given as 'p/q' strings.");

    m.def(
        "determining",
        [](int degree) {
            DeterminingResult r;
            {
                py::gil_scoped_release nogil;
                r = solve_determining(degree);
            }
            py::dict d;
            d["degree"] = r.max_degree;
            d["unknowns"] = r.unknowns;
            d["equations"] = r.equations;
            py::list sols;
            for (const auto& v : r.solutions) sols.append(v.str());
            d["solutions"] = sols;
            d["span_equal"] = r.span_equal;
            return d;
        },
        py::arg("degree") = 3);

    m.def("suite_names", &suite_names);
    m.def("default_fixtures_dir", &default_fixtures_dir);
    m.def(
        "run_suite_json",
        [](const std::string& suite, const std::string& fixtures, std::uint64_t seed, long digits, int jobs,
           const std::string& filter) {
            RunOptions opt;
            opt.fixtures_dir = fixtures;
            opt.seed = seed;
            opt.digits = digits;
            opt.jobs = jobs;
            opt.filter = filter;
            py::gil_scoped_release nogil;
            return run_suite(suite, opt).json();
        },
        py::arg("suite"), py::arg("fixtures") = "", py::arg("seed") = 20240501, py::arg("digits") = 50,
        py::arg("jobs") = 1, py::arg("filter") = "");
    m.attr("__version__") = tool_version();
}
