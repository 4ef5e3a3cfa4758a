#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "faceperc/analytic.hpp"
#include "faceperc/estimators.hpp"
#include "faceperc/io.hpp"
#include "faceperc/measure.hpp"
#include "faceperc/percolation.hpp"
#include "faceperc/tessellation.hpp"

namespace py = pybind11;
using namespace faceperc;

namespace {

std::array<double, 3> as_array(const IntrinsicVolumes& v) { return {v.v0, v.v1, v.v2}; }

std::vector<std::array<double, 2>> points(const std::vector<Point2>& ps) {
    std::vector<std::array<double, 2>> out;
    out.reserve(ps.size());
    for (const auto& p : ps) {
        out.push_back({p.x, p.y});
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Face percolation on planar random tessellations";

    py::register_exception<TessellationError>(m, "TessellationError", PyExc_RuntimeError);
    py::register_exception<MeasureError>(m, "MeasureError", PyExc_RuntimeError);
    py::register_exception<AnalyticError>(m, "AnalyticError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_IOError);

    py::class_<Window>(m, "Window")
        .def_static("centered_square", &Window::centered_square, py::arg("area"))
        .def_static("rectangle", &Window::rectangle, py::arg("xmin"), py::arg("ymin"), py::arg("xmax"),
                    py::arg("ymax"))
        .def_property_readonly("area", &Window::area)
        .def_property_readonly("bounds", &Window::bounds)
        .def("__repr__", [](const Window& w) {
            const auto b = w.bounds();
            return "Window(" + std::to_string(b[0]) + ", " + std::to_string(b[1]) + ", " + std::to_string(b[2]) +
                   ", " + std::to_string(b[3]) + ")";
        });

    py::class_<GeneratorConfig>(m, "GeneratorConfig")
        .def(py::init([](const std::string& model, double intensity, const std::string& lattice, double edge_length,
                         double t, std::optional<double> padding, std::uint64_t seed) {
                 GeneratorConfig cfg;
                 cfg.model = parse_model(model);
                 cfg.intensity = intensity;
                 cfg.lattice_code = parse_lattice_code(lattice);
                 cfg.edge_length = edge_length;
                 cfg.region = Window::centered_square(t);
                 cfg.padding = padding;
                 cfg.seed = seed;
                 return cfg;
             }),
             py::arg("model") = "voronoi", py::arg("intensity") = 1.0, py::arg("lattice") = "4.4.4.4",
             py::arg("edge_length") = 1.0, py::arg("t") = 100.0, py::arg("padding") = py::none(),
             py::arg("seed") = 1)
        .def_property_readonly("model", [](const GeneratorConfig& c) { return to_string(c.model); })
        .def_property_readonly("lattice", [](const GeneratorConfig& c) { return to_string(c.lattice_code); })
        .def_readwrite("intensity", &GeneratorConfig::intensity)
        .def_readwrite("edge_length", &GeneratorConfig::edge_length)
        .def_readwrite("seed", &GeneratorConfig::seed)
        .def_readwrite("region", &GeneratorConfig::region);

    py::class_<PlanarTessellation>(m, "Tessellation")
        .def("count", &PlanarTessellation::count, py::arg("dim"))
        .def_property_readonly("vertices", [](const PlanarTessellation& t) { return points(t.vertices()); })
        .def_property_readonly("edges", &PlanarTessellation::edges)
        .def_property_readonly("cells",
                               [](const PlanarTessellation& t) {
                                   std::vector<std::vector<int>> out;
                                   for (const auto& c : t.cells()) {
                                       out.push_back(c.vertices);
                                   }
                                   return out;
                               })
        .def_property_readonly("sites", [](const PlanarTessellation& t) { return points(t.sites()); })
        .def_property_readonly("core_region", &PlanarTessellation::core_region)
        .def("volumes", [](const PlanarTessellation& t, int dim, int index) {
            return as_array(t.volumes({dim, index}));
        }, py::arg("dim"), py::arg("index"))
        .def("is_normal", [](const PlanarTessellation& t) { return validate(t).normal; })
        .def("face_to_face", [](const PlanarTessellation& t) { return validate(t).face_to_face; });

    m.def("build_tessellation", &build_tessellation, py::arg("config"));

    py::class_<Coloring>(m, "Coloring")
        .def_readonly("mode", &Coloring::mode_n)
        .def_readonly("p", &Coloring::p)
        .def_readonly("seed", &Coloring::seed)
        .def_property_readonly("black", [](const Coloring& c) {
            std::array<std::vector<bool>, 3> out;
            for (int k = 0; k < 3; ++k) {
                out[k].assign(c.black[k].begin(), c.black[k].end());
            }
            return out;
        });

    m.def(
        "color",
        [](const PlanarTessellation& t, const std::string& mode, double p, std::uint64_t seed) {
            return color(t, parse_mode(mode), p, seed);
        },
        py::arg("tessellation"), py::arg("mode"), py::arg("p"), py::arg("seed"));
    m.def("complement_coloring", &complement_coloring, py::arg("tessellation"), py::arg("coloring"));

    m.def("volumes_black_interior", &volumes_black_interior, py::arg("tessellation"), py::arg("coloring"),
          py::arg("window"));
    m.def("volumes_black_boundary", &volumes_black_boundary, py::arg("tessellation"), py::arg("coloring"),
          py::arg("window"));
    m.def("volumes_black_closed", &volumes_black_closed, py::arg("tessellation"), py::arg("coloring"),
          py::arg("window"));
    m.def("volumes_black_steiner", &volumes_black_steiner, py::arg("tessellation"), py::arg("coloring"),
          py::arg("window"));
    m.def("euler_oracle_combinatorial", &euler_oracle_combinatorial, py::arg("tessellation"), py::arg("coloring"),
          py::arg("window"));

    py::class_<Estimate>(m, "Estimate")
        .def_readonly("mean", &Estimate::mean)
        .def_readonly("std_error", &Estimate::std_error)
        .def_readonly("replicates", &Estimate::replicates)
        .def("__repr__", [](const Estimate& e) {
            return "Estimate(mean=" + format_double(e.mean) + ", std_error=" + format_double(e.std_error) +
                   ", replicates=" + std::to_string(e.replicates) + ")";
        });

    m.def(
        "estimate_density",
        [](const GeneratorConfig& cfg, const std::string& mode, double p, int i, double t, int reps,
           std::uint64_t seed, const std::string& kind) {
            py::gil_scoped_release release;
            return estimate_density(cfg, parse_mode(mode), p, i, t, reps, seed, parse_estimator_kind(kind));
        },
        py::arg("config"), py::arg("mode"), py::arg("p"), py::arg("i"), py::arg("t") = 400.0,
        py::arg("replicates") = 200, py::arg("seed") = 1, py::arg("kind") = "steiner");
    m.def(
        "estimate_covariance",
        [](const GeneratorConfig& cfg, const std::string& mode, double p, int i, int j, double t, int reps,
           std::uint64_t seed, const std::string& kind) {
            py::gil_scoped_release release;
            return estimate_covariance(cfg, parse_mode(mode), p, i, j, t, reps, seed, parse_estimator_kind(kind));
        },
        py::arg("config"), py::arg("mode"), py::arg("p"), py::arg("i"), py::arg("j"), py::arg("t") = 400.0,
        py::arg("replicates") = 200, py::arg("seed") = 1, py::arg("kind") = "interior");
    m.def(
        "estimate_tau",
        [](const GeneratorConfig& cfg, int i, int j, int k, int l, double t, int reps, std::uint64_t seed) {
            py::gil_scoped_release release;
            return estimate_tau(cfg, i, j, k, l, t, reps, seed);
        },
        py::arg("config"), py::arg("i"), py::arg("j"), py::arg("k"), py::arg("l"), py::arg("t") = 400.0,
        py::arg("replicates") = 200, py::arg("seed") = 1);

    py::class_<PalmTable>(m, "PalmTable")
        .def_readonly("replicates", &PalmTable::replicates)
        .def_readonly("gamma", &PalmTable::gamma)
        .def_readonly("nkl", &PalmTable::nkl)
        .def_readonly("moments", &PalmTable::moments);
    m.def(
        "estimate_palm",
        [](const GeneratorConfig& cfg, const std::string& mode, double t, int reps, std::uint64_t seed, bool cross) {
            PalmOptions opt;
            opt.t_scale = t;
            opt.replicates = reps;
            opt.seed = seed;
            opt.cross = cross;
            py::gil_scoped_release release;
            return estimate_palm(cfg, parse_mode(mode), opt);
        },
        py::arg("config"), py::arg("mode") = "cell", py::arg("t") = 400.0, py::arg("replicates") = 20,
        py::arg("seed") = 1, py::arg("cross") = false);

    m.def(
        "estimate_rho_voronoi",
        [](int i, int j, int k, int l, double p, double gamma, int first_term_samples, int samples_per_node,
           std::uint64_t seed) {
            RhoParams params;
            params.first_term_samples = first_term_samples;
            params.samples_per_node = samples_per_node;
            params.seed = seed;
            py::gil_scoped_release release;
            return estimate_rho_voronoi(i, j, k, l, p, gamma, params).rho;
        },
        py::arg("i"), py::arg("j"), py::arg("k"), py::arg("l"), py::arg("p"), py::arg("gamma") = 1.0,
        py::arg("first_term_samples") = 20000, py::arg("samples_per_node") = 2000, py::arg("seed") = 1);

    m.def("f_poly", &f_poly, py::arg("n"), py::arg("k"), py::arg("r"), py::arg("p"));
    m.def("g_poly", &g_poly, py::arg("n"), py::arg("m"), py::arg("k"), py::arg("l"), py::arg("r"), py::arg("s"),
          py::arg("p"));
    m.def("density_cell_normal", &density_cell_normal, py::arg("d"), py::arg("i"), py::arg("gamma_means"),
          py::arg("p"));
    m.def(
        "archimedean_mean_euler",
        [](const std::string& lattice, const std::string& mode, double gamma0, double p) {
            return archimedean_mean_euler(parse_lattice_code(lattice), parse_mode(mode), gamma0, p);
        },
        py::arg("lattice"), py::arg("mode"), py::arg("gamma0"), py::arg("p"));
    m.def(
        "archimedean_vertex_intensity",
        [](const std::string& lattice, double edge_length) {
            return archimedean_vertex_intensity(parse_lattice_code(lattice), edge_length);
        },
        py::arg("lattice"), py::arg("edge_length") = 1.0);
    m.def("line_mean_euler", &line_mean_euler, py::arg("gamma2"), py::arg("p"));
    m.def("pv_variance_euler", &pv_variance_euler, py::arg("gamma2"), py::arg("mu2"), py::arg("p"));
    m.def(
        "covariance_planar_structure",
        [](const std::map<std::string, double>& inputs, int i, int j, double p) {
            PlanarCovInputs in;
            const std::pair<const char*, double PlanarCovInputs::*> fields[] = {
                {"gamma1", &PlanarCovInputs::gamma1},   {"gamma2", &PlanarCovInputs::gamma2},
                {"tau11", &PlanarCovInputs::tau11},     {"tau10", &PlanarCovInputs::tau10},
                {"tau00", &PlanarCovInputs::tau00},     {"mu2", &PlanarCovInputs::mu2},
                {"e2_v2sq", &PlanarCovInputs::e2_v2sq}, {"e2_v2v1", &PlanarCovInputs::e2_v2v1},
                {"e2_v2f0", &PlanarCovInputs::e2_v2f0}, {"e1_v1sq", &PlanarCovInputs::e1_v1sq},
                {"e2_v1sq", &PlanarCovInputs::e2_v1sq}, {"e2_v1f0", &PlanarCovInputs::e2_v1f0},
                {"e2_v1", &PlanarCovInputs::e2_v1}};
            std::size_t used = 0;
            for (const auto& [name, field] : fields) {
                if (auto it = inputs.find(name); it != inputs.end()) {
                    in.*field = it->second;
                    ++used;
                }
            }
            if (used != inputs.size()) {
                throw py::key_error("unknown covariance input");
            }
            return covariance_planar_structure(in, i, j, p);
        },
        py::arg("inputs"), py::arg("i"), py::arg("j"), py::arg("p"));

    m.def(
        "tessellation_to_json",
        [](const PlanarTessellation& t, const Coloring* c) { return tessellation_to_json(t, c); },
        py::arg("tessellation"), py::arg("coloring") = nullptr);
    m.def(
        "tessellation_from_json",
        [](const std::string& text) {
            auto doc = tessellation_from_json(text);
            return py::make_tuple(std::move(doc.tessellation), doc.coloring);
        },
        py::arg("text"));
    m.def(
        "render_svg",
        [](const PlanarTessellation& t, const Coloring* c, double width_px) {
            SvgOptions opt;
            opt.width_px = width_px;
            return render_svg(t, c, opt);
        },
        py::arg("tessellation"), py::arg("coloring") = nullptr, py::arg("width_px") = 640.0);
}
