#include "geoclt/experiments.hpp"
#include "geoclt/geometries.hpp"
#include "geoclt/hull.hpp"
#include "geoclt/measure.hpp"
#include "geoclt/report.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace geoclt;

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<Vec> rows_of(const RowMat& m)
{
    std::vector<Vec> out;
    out.reserve(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        out.push_back(m.row(i).transpose());
    return out;
}

RowMat matrix_of(const std::vector<Vec>& v, int d)
{
    RowMat m(static_cast<Eigen::Index>(v.size()), d);
    for (std::size_t i = 0; i < v.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = v[i].transpose();
    return m;
}

Polytope hull_of(const RowMat& pts) { return convex_hull(rows_of(pts), static_cast<int>(pts.cols())); }

QuadratureSpec quad_of(const std::string& json_text)
{
    return QuadratureSpec::from_json(json_text.empty() ? nlohmann::json::object() : nlohmann::json::parse(json_text));
}

} // namespace

PYBIND11_MODULE(_geoclt, m)
{
    m.doc() = "C++ core of geoclt";
    m.attr("__version__") = GEOCLT_VERSION;

    // Translators are tried newest first, so the base class goes first.
    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", base);
    py::register_exception<DomainError>(m, "DomainError", base);
    py::register_exception<ModelError>(m, "ModelError", base);
    py::register_exception<NumericalError>(m, "NumericalError", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);
    py::register_exception<DataError>(m, "DataError", base);
    py::register_exception<ExperimentAbort>(m, "ExperimentAbort", base);

    py::class_<SupportBody>(m, "SupportBody")
        .def_static("ball", [](int dim, double r) { return SupportBody::ball(dim, r); }, py::arg("dim"),
                    py::arg("radius") = 1.0)
        .def_static("ellipsoid", &SupportBody::ellipsoid, py::arg("semi_axes"))
        .def_static("perturbed_ball", &SupportBody::perturbed_ball, py::arg("dim"), py::arg("radius"),
                    py::arg("epsilon"))
        .def_static("from_json", [](const std::string& s) { return SupportBody::from_json(nlohmann::json::parse(s)); })
        .def("to_json", [](const SupportBody& b) { return b.to_json().dump(); })
        .def_property_readonly("dim", &SupportBody::dim)
        .def("h", &SupportBody::h)
        .def("grad_h", &SupportBody::grad_h)
        .def("radial", &SupportBody::radial)
        .def("contains", &SupportBody::contains, py::arg("x"), py::arg("slack") = 0.0);

    m.def("hull_vertices", [](const RowMat& pts) {
        const Polytope P = hull_of(pts);
        return matrix_of(P.vertices(), P.dim());
    }, "Extreme points of the convex hull (rows).");
    m.def("hull_volume", [](const RowMat& pts) { return polytope_volume(hull_of(pts)); });
    m.def("dual_volume", [](const RowMat& pts, double j, const std::string& q) {
        return dual_volume(hull_of(pts), j, quad_of(q));
    }, py::arg("points"), py::arg("j"), py::arg("quadrature") = "");
    m.def("mean_width", [](const RowMat& pts, const std::string& q) { return mean_width(hull_of(pts), quad_of(q)); },
          py::arg("points"), py::arg("quadrature") = "");
    m.def("mean_width_dual", [](const RowMat& pts, const RowMat& window, const std::string& q) {
        return mean_width_dual(hull_of(pts), hull_of(window), quad_of(q));
    }, py::arg("points"), py::arg("window"), py::arg("quadrature") = "");
    m.def("weighted_volume", [](const RowMat& pts, const std::string& geometry_json, const SupportBody& K,
                                const std::string& q) {
        const GeometryWeights w = make_weights(GeometrySpec::from_json(nlohmann::json::parse(geometry_json)), K);
        return weighted_volume(hull_of(pts), w.phi, quad_of(q));
    }, py::arg("points"), py::arg("geometry"), py::arg("body"), py::arg("quadrature") = "");
    m.def("phi", [](const std::string& geometry_json, const SupportBody& K, const Vec& x) {
        const GeometryWeights w = make_weights(GeometrySpec::from_json(nlohmann::json::parse(geometry_json)), K);
        return w.phi(x);
    });
    m.def("hilbert_distance", [](const SupportBody& omega, const Vec& x, const Vec& y) {
        return hilbert_distance(omega, x, y);
    });
    m.def("hilbert_line_integral", [](const SupportBody& omega, const Vec& x, const Vec& y) {
        return finsler_distance(FinslerNorm(omega, FinslerKind::Hilbert), x, y);
    });

    m.def("kolmogorov_distance", &kolmogorov_distance);
    m.def("standardize", &standardize);
    m.def("variance_scaling_fit", [](const std::vector<std::pair<double, double>>& rows) {
        const LinearFit f = variance_scaling_fit(rows);
        return py::make_tuple(f.slope, f.intercept, f.r2);
    });

    m.def("config_json", [](const std::string& toml) { return parse_config(toml).to_json().dump(); },
          "Validate a TOML config and return its canonical JSON.");
    m.def("sample_boundary", [](const std::string& toml, int n, std::uint64_t seed) {
        const ExperimentConfig cfg = parse_config(toml);
        const ExperimentModel model(cfg);
        SeedStream s(seed);
        std::vector<Vec> xs;
        std::vector<Vec> us;
        for (const BoundaryPoint& p : model.sampler().sample(s, n)) {
            xs.push_back(p.x);
            us.push_back(p.normal);
        }
        return py::make_tuple(matrix_of(xs, model.dim()), matrix_of(us, model.dim()));
    }, py::arg("config"), py::arg("n"), py::arg("seed") = 0);
    m.def("run_experiment", [](const std::string& toml, int threads) {
        const ExperimentConfig cfg = parse_config(toml);
        RunOptions opts;
        opts.threads = threads;
        CLTReport r;
        {
            py::gil_scoped_release release;
            r = run_experiment(cfg, opts);
        }
        return py::make_tuple(r.to_json().dump(), records_csv(r.records));
    }, py::arg("config"), py::arg("threads") = 0);
    m.def("run_diagnostic", [](const std::string& toml, int threads) {
        const ExperimentConfig cfg = parse_config(toml);
        RunOptions opts;
        opts.threads = threads;
        std::vector<DiagnosticRow> rows;
        {
            py::gil_scoped_release release;
            rows = run_diagnostic(cfg, opts);
        }
        return diagnostics_csv(rows, cfg.hash());
    }, py::arg("config"), py::arg("threads") = 0);
}
