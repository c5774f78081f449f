#include "cuspcount/cli.hpp"
#include "cuspcount/discriminant.hpp"
#include "cuspcount/fm_counting.hpp"
#include "cuspcount/genus.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace cuspcount;

namespace {

// Python ints are unbounded, so go through the decimal string.
py::int_ to_python(const Integer& x) {
    return py::reinterpret_steal<py::int_>(
        PyLong_FromString(x.get_str().c_str(), nullptr, 10));
}

py::list gram_rows(const EvenLattice& l) {
    py::list rows;
    for (std::size_t i = 0; i < l.rank(); ++i) {
        py::list row;
        for (std::size_t j = 0; j < l.rank(); ++j)
            row.append(to_python(l.gram()(i, j)));
        rows.append(row);
    }
    return rows;
}

py::dict count_dict(const CountReport& r) {
    py::dict d;
    d["value"] = r.value;
    d["route"] = to_string(r.route);
    d["exact"] = r.exact;
    d["window_note"] = r.window_note;
    return d;
}

EnumerationBudget budget_of(std::optional<std::uint64_t> max_group_order) {
    EnumerationBudget b = EnumerationBudget::from_environment();
    if (max_group_order)
        b.max_group_order = *max_group_order;
    return b;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact lattice computations behind the cuspcount CLI";

    static py::exception<Error> error(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const Error& e) {
            // args = (kind, message)
            PyErr_SetObject(error.ptr(),
                            py::make_tuple(to_string(e.kind()), e.what()).ptr());
        }
    });

    m.attr("SCHEMA_VERSION") = cli::kSchemaVersion;

    m.def(
        "run",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"),
        "Run one CLI command line; returns (exit_code, stdout, stderr).");

    m.def(
        "gram",
        [](const std::string& spec) { return gram_rows(cli::parse_lattice_spec(spec)); },
        py::arg("spec"));

    m.def(
        "invariant_factors",
        [](const std::string& spec) {
            return discriminant_form(cli::parse_lattice_spec(spec)).invariant_factors();
        },
        py::arg("spec"));

    m.def(
        "aut_order",
        [](const std::string& spec, bool direct, std::optional<std::uint64_t> budget) {
            const auto a = discriminant_form(cli::parse_lattice_spec(spec));
            return aut_group(a, budget_of(budget),
                             direct ? AutStrategy::Direct : AutStrategy::PrimaryDecomposition)
                .order();
        },
        py::arg("spec"), py::arg("direct") = false, py::arg("budget") = py::none());

    m.def(
        "is_isogenus",
        [](const std::string& first, const std::string& second) {
            return is_isogenus(cli::parse_lattice_spec(first),
                               cli::parse_lattice_spec(second))
                .isogenus;
        },
        py::arg("first"), py::arg("second"));

    m.def(
        "count_fm",
        [](const std::string& ns, std::optional<std::uint64_t> budget) {
            return count_dict(count_fm(K3Model::generic(cli::parse_lattice_spec(ns)),
                                       budget_of(budget)));
        },
        py::arg("ns"), py::arg("budget") = py::none());

    m.def(
        "count_cusps",
        [](const std::string& ns, std::int64_t d, std::optional<std::uint64_t> budget) {
            return count_dict(count_cusps_zero_dim(
                K3Model::generic(cli::parse_lattice_spec(ns)), d, budget_of(budget)));
        },
        py::arg("ns"), py::arg("d"), py::arg("budget") = py::none());

    m.def(
        "ur_example",
        [](long r) {
            const UrReport rep = ur_example(r);
            py::dict d;
            d["r"] = rep.r;
            d["passed"] = rep.passed;
            d["genus_singleton"] = rep.genus_singleton;
            d["fm"] = count_dict(rep.fm);
            d["elliptic_cusps_distinct"] = rep.elliptic_cusps_distinct;
            d["fm_elliptic"] = count_dict(rep.fm_elliptic);
            d["mu1_fiber"] = count_dict(rep.mu1_fiber);
            d["standard_cusps"] = rep.standard_cusps;
            return d;
        },
        py::arg("r"));
}
