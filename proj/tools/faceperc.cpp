// faceperc: command-line runner for face percolation experiments.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "faceperc/analytic.hpp"
#include "faceperc/estimators.hpp"
#include "faceperc/io.hpp"
#include "faceperc/measure.hpp"

using namespace faceperc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GeneratorFlags {
    std::string model = "voronoi";
    std::string lattice = "4.4.4.4";
    double intensity = 1.0;
    double edge_length = 1.0;
    double t = 100.0;
    double padding = 0.0;
    std::uint64_t seed = 1;

    void add(CLI::App* app) {
        app->add_option("--model", model, "voronoi | archimedean | line")->capture_default_str();
        app->add_option("--lattice", lattice, "Archimedean vertex type, e.g. 4.4.4.4 or 3.6.3.6")
            ->capture_default_str();
        app->add_option("--intensity", intensity, "Poisson intensity (voronoi points / line density)")
            ->capture_default_str();
        app->add_option("--edge-length", edge_length, "lattice edge length")->capture_default_str();
        app->add_option("--padding", padding, "sampled margin around the core region; 0 = automatic")
            ->capture_default_str();
    }

    GeneratorConfig config() const {
        GeneratorConfig cfg;
        cfg.model = parse_model(model);
        cfg.lattice_code = parse_lattice_code(lattice);
        cfg.intensity = intensity;
        cfg.edge_length = edge_length;
        if (padding > 0.0) {
            cfg.padding = padding;
        }
        cfg.seed = seed;
        cfg.region = Window::centered_square(t);
        return cfg;
    }

    void echo(CsvTable& table) const {
        table.header.emplace_back("model", model);
        table.header.emplace_back("lattice", lattice);
        table.header.emplace_back("intensity", format_double(intensity));
        table.header.emplace_back("edge_length", format_double(edge_length));
        table.header.emplace_back("padding", padding > 0.0 ? format_double(padding) : "auto");
    }
};

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double a = 0.0;
        double b = 0.0;
        double step = 0.0;
        char c1 = 0;
        char c2 = 0;
        std::istringstream in(text);
        if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || b < a) {
            throw UsageError("p-grid must be start:stop:step");
        }
        for (long k = 0;; ++k) {
            const double p = std::round((a + k * step) * 1e12) / 1e12;
            if (p > b + 1e-12) {
                break;
            }
            out.push_back(p);
        }
    } else {
        std::istringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) {
            out.push_back(std::stod(item));
        }
    }
    for (double p : out) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw UsageError("p values must lie in [0, 1]");
        }
    }
    if (out.empty()) {
        throw UsageError("empty p-grid");
    }
    return out;
}

Window parse_window(const std::string& text) {
    std::vector<double> v;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        v.push_back(std::stod(item));
    }
    if (v.size() != 4 || !(v[2] > v[0]) || !(v[3] > v[1])) {
        throw UsageError("window must be xmin,ymin,xmax,ymax");
    }
    return Window::rectangle(v[0], v[1], v[2], v[3]);
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_file(path, text);
    }
}

// Analytic curves shared by `analytic` and `compare`.
struct AnalyticFlags {
    std::string formula = "normal-cell";
    int i = 0;
    std::string mode = "cell";
    std::string lattice = "4.4.4.4";
    double edge_length = 1.0;
    double gamma0 = 0.0;
    double gamma2 = 1.0;
    double mu2 = 37.78;
    std::vector<double> means;

    void add(CLI::App* app, bool with_formula) {
        if (with_formula) {
            app->add_option("--formula", formula,
                            "normal-cell | archimedean-euler | line-euler | pv-variance")
                ->capture_default_str();
        }
        app->add_option("--i", i, "intrinsic volume index")->capture_default_str();
        app->add_option("--mode", mode, "vertex | edge | cell")->capture_default_str();
        app->add_option("--lattice", lattice, "Archimedean vertex type")->capture_default_str();
        app->add_option("--edge-length", edge_length, "lattice edge length")->capture_default_str();
        app->add_option("--gamma0", gamma0, "vertex intensity; 0 = derived from the lattice")
            ->capture_default_str();
        app->add_option("--gamma2", gamma2, "cell intensity")->capture_default_str();
        app->add_option("--mu2", mu2, "E_2 f_0(F)^2")->capture_default_str();
        app->add_option("--means", means, "gamma_k E_k V_i(F) for k = 0, 1, 2 (normal-cell, i = 1)")
            ->delimiter(',');
    }

    double value(double p) const {
        if (formula == "normal-cell") {
            std::vector<double> m = means;
            if (m.empty()) {
                if (i == 0) {
                    m = {2.0 * gamma2, 3.0 * gamma2, gamma2};
                } else if (i == 2) {
                    m = {0.0, 0.0, 1.0};
                } else {
                    throw UsageError("normal-cell with i = 1 needs --means");
                }
            }
            if (m.size() != 3) {
                throw UsageError("--means takes three values");
            }
            return density_cell_normal(2, i, m, p);
        }
        if (formula == "archimedean-euler") {
            const auto code = parse_lattice_code(lattice);
            const double g0 = gamma0 > 0.0 ? gamma0 : archimedean_vertex_intensity(code, edge_length);
            return archimedean_mean_euler(code, parse_mode(mode), g0, p);
        }
        if (formula == "line-euler") {
            return line_mean_euler(gamma2, p);
        }
        if (formula == "pv-variance") {
            return pv_variance_euler(gamma2, mu2, p);
        }
        throw UsageError("unknown formula: " + formula);
    }

    std::string quantity() const {
        if (formula == "pv-variance") {
            return "sigma_0_0";
        }
        if (formula == "normal-cell") {
            return "delta_" + std::to_string(i);
        }
        return "delta_0";
    }
};

int cmd_generate(const GeneratorFlags& g, const std::string& out) {
    const auto t = build_tessellation(g.config());
    emit(out, tessellation_to_json(t));
    return kExitOk;
}

int cmd_color(const std::string& in, const std::string& mode, double p, std::uint64_t seed, const std::string& out) {
    const auto doc = tessellation_from_json(read_file(in));
    if (!(p >= 0.0 && p <= 1.0)) {
        throw UsageError("p must lie in [0, 1]");
    }
    const auto c = color(doc.tessellation, parse_mode(mode), p, seed);
    emit(out, tessellation_to_json(doc.tessellation, &c));
    return kExitOk;
}

int cmd_measure(const std::string& in, const std::string& window, const std::string& kind) {
    const auto doc = tessellation_from_json(read_file(in));
    if (!doc.coloring) {
        throw UsageError("document has no colouring; run `faceperc color` first");
    }
    const auto& t = doc.tessellation;
    const Window w = window.empty() ? t.core_region() : parse_window(window);
    std::array<double, 3> v{};
    if (kind == "boundary") {
        v = volumes_black_boundary(t, *doc.coloring, w);
    } else {
        v = volumes_black(t, *doc.coloring, w, parse_estimator_kind(kind));
    }
    std::cout << "estimator=" << kind << "\n";
    std::cout << "mode=" << mode_name(doc.coloring->mode_n) << "\n";
    std::cout << "p=" << format_double(doc.coloring->p) << "\n";
    std::cout << "area=" << format_double(w.area()) << "\n";
    for (int i = 0; i < 3; ++i) {
        std::cout << "V" << i << "=" << format_double(v[i]) << "\n";
    }
    return kExitOk;
}

struct EstimateFlags {
    std::string mode = "cell";
    std::string quantity = "density";
    int i = 0;
    int j = 0;
    std::string p_grid = "0:1:0.05";
    double t = 400.0;
    int reps = 200;
    std::string estimator = "steiner";
    int threads = 0;
    std::string out;
};

int cmd_estimate(GeneratorFlags g, const EstimateFlags& f) {
    const auto ps = parse_grid(f.p_grid);
    const int n = parse_mode(f.mode);
    if (f.i < 0 || f.i > 2 || f.j < 0 || f.j > 2) {
        throw UsageError("--i and --j must lie in {0, 1, 2}");
    }
    if (f.quantity != "density" && f.quantity != "covariance") {
        throw UsageError("--quantity must be density or covariance");
    }
    if (f.reps < 2) {
        throw UsageError("--reps must be at least 2");
    }
    SamplingOptions opt;
    opt.t_scale = f.t;
    opt.replicates = f.reps;
    opt.seed = g.seed;
    opt.kind = parse_estimator_kind(f.estimator);
    opt.threads = f.threads;
    const auto samples = sample_black_volumes(g.config(), n, ps, opt);

    CsvTable table;
    table.header.emplace_back("command", "estimate");
    g.echo(table);
    table.header.emplace_back("mode", mode_name(n));
    table.header.emplace_back("quantity", f.quantity);
    table.header.emplace_back("i", std::to_string(f.i));
    table.header.emplace_back("j", std::to_string(f.j));
    table.header.emplace_back("p_grid", f.p_grid);
    table.header.emplace_back("t", format_double(f.t));
    table.header.emplace_back("reps", std::to_string(f.reps));
    table.header.emplace_back("seed", std::to_string(g.seed));
    table.header.emplace_back("estimator", f.estimator);
    table.header.emplace_back("window", "unit-square");
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
        const bool density = f.quantity == "density";
        const auto e = density ? density_from_samples(samples, pi, f.i) : covariance_from_samples(samples, pi, f.i, f.j);
        const std::string q =
            density ? "delta_" + std::to_string(f.i) : "sigma_" + std::to_string(f.i) + "_" + std::to_string(f.j);
        table.rows.push_back({q, ps[pi], e.mean, e.std_error, e.replicates, g.seed});
    }
    emit(f.out, write_csv(table));
    return kExitOk;
}

int cmd_analytic(const AnalyticFlags& a, const std::string& p_single, const std::string& p_grid,
                 const std::string& out) {
    if (!p_single.empty()) {
        std::cout << format_double(a.value(std::stod(p_single))) << "\n";
        return kExitOk;
    }
    CsvTable table;
    table.header.emplace_back("command", "analytic");
    table.header.emplace_back("formula", a.formula);
    table.header.emplace_back("i", std::to_string(a.i));
    table.header.emplace_back("mode", a.mode);
    table.header.emplace_back("lattice", a.lattice);
    table.header.emplace_back("gamma2", format_double(a.gamma2));
    table.header.emplace_back("mu2", format_double(a.mu2));
    table.header.emplace_back("p_grid", p_grid);
    for (double p : parse_grid(p_grid)) {
        table.rows.push_back({a.quantity(), p, a.value(p), 0.0, 0, 0});
    }
    emit(out, write_csv(table));
    return kExitOk;
}

int cmd_compare(const std::string& mc_path, const std::string& analytic, AnalyticFlags a, double threshold,
                const CLI::App* sub) {
    const auto mc = read_csv(read_file(mc_path));
    std::vector<double> reference;
    if (std::ifstream(analytic).good()) {
        const auto ref = read_csv(read_file(analytic));
        for (const auto& row : mc.rows) {
            const auto it = std::find_if(ref.rows.begin(), ref.rows.end(),
                                         [&](const CsvRow& r) { return std::abs(r.p - row.p) < 1e-9; });
            if (it == ref.rows.end()) {
                throw UsageError("analytic table has no row at p = " + format_double(row.p));
            }
            reference.push_back(it->estimate);
        }
    } else {
        a.formula = analytic;
        // Unset flags fall back to the run description in the CSV header.
        auto from_header = [&](const char* flag, const char* key, auto apply) {
            if (sub->count(flag) == 0) {
                if (const auto v = mc.header_value(key)) {
                    apply(*v);
                }
            }
        };
        from_header("--i", "i", [&](const std::string& v) { a.i = std::stoi(v); });
        from_header("--mode", "mode", [&](const std::string& v) { a.mode = v; });
        from_header("--lattice", "lattice", [&](const std::string& v) { a.lattice = v; });
        from_header("--edge-length", "edge_length", [&](const std::string& v) { a.edge_length = std::stod(v); });
        if (mc.header_value("model") == std::optional<std::string>("voronoi")) {
            from_header("--gamma2", "intensity", [&](const std::string& v) { a.gamma2 = std::stod(v); });
        }
        for (const auto& row : mc.rows) {
            reference.push_back(a.value(row.p));
        }
    }
    double worst = 0.0;
    std::printf("p,mc,stderr,analytic,z\n");
    for (std::size_t r = 0; r < mc.rows.size(); ++r) {
        const auto& row = mc.rows[r];
        const double diff = std::abs(row.estimate - reference[r]);
        double z = 0.0;
        if (row.std_error > 0.0) {
            z = diff / row.std_error;
        } else if (diff > 1e-12) {
            z = std::numeric_limits<double>::infinity();
        }
        worst = std::max(worst, z);
        std::printf("%s,%s,%s,%s,%.3f\n", format_double(row.p).c_str(), format_double(row.estimate).c_str(),
                    format_double(row.std_error).c_str(), format_double(reference[r]).c_str(), z);
    }
    std::printf("max_z=%.3f threshold=%s %s\n", worst, format_double(threshold).c_str(),
                worst <= threshold ? "PASS" : "FAIL");
    return worst <= threshold ? kExitOk : kExitValidation;
}

int cmd_render(const std::string& in, const std::string& out, double width, const std::string& window) {
    const auto doc = tessellation_from_json(read_file(in));
    SvgOptions opt;
    opt.width_px = width;
    if (!window.empty()) {
        opt.view = parse_window(window);
    }
    emit(out, render_svg(doc.tessellation, doc.coloring ? &*doc.coloring : nullptr, opt));
    return kExitOk;
}

int cmd_validate(const std::string& in, const GeneratorFlags& g) {
    const auto t = in.empty() ? build_tessellation(g.config()) : tessellation_from_json(read_file(in)).tessellation;
    const auto r = validate(t);
    std::cout << "face_to_face=" << (r.face_to_face ? "true" : "false") << "\n";
    std::cout << "face_to_face_violations=" << r.face_to_face_violations << "\n";
    std::cout << "convex=" << (r.convex ? "true" : "false") << "\n";
    std::cout << "normal=" << (r.normal ? "true" : "false") << "\n";
    for (const auto& [deg, count] : r.degree_histogram) {
        std::cout << "degree_" << deg << "=" << count << "\n";
    }
    std::cout << "faces_in_window=" << r.faces_in_window[0] << "," << r.faces_in_window[1] << ","
              << r.faces_in_window[2] << "\n";
    std::cout << "boundary_crossings=" << r.boundary_crossings << "\n";
    std::cout << "euler_vertices_identity=" << (r.euler_vertices_identity ? "true" : "false") << "\n";
    std::cout << "euler_edges_identity=" << (r.euler_edges_identity ? "true" : "false") << "\n";
    for (const auto& f : r.failures) {
        std::cout << "failure=" << f << "\n";
    }
    std::cout << "status=" << (r.ok() ? "ok" : "invalid") << "\n";
    return r.ok() ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Face percolation on planar tessellations"};
    app.set_config("--config", "", "key=value file; keys are long flag names, command-line flags win");
    app.require_subcommand(1);
    app.fallthrough();

    GeneratorFlags gen;
    std::string out;
    std::string in;

    auto* generate = app.add_subcommand("generate", "write a tessellation document");
    gen.add(generate);
    generate->add_option("--t", gen.t, "area of the square core region")->capture_default_str();
    generate->add_option("--seed", gen.seed, "random seed")->capture_default_str();
    generate->add_option("--out,-o", out, "output file (default stdout)");

    std::string mode = "cell";
    double p = 0.5;
    std::uint64_t color_seed = 1;
    auto* color_cmd = app.add_subcommand("color", "attach an n-percolation colouring to a document");
    color_cmd->add_option("--in,-i", in, "tessellation document")->required();
    color_cmd->add_option("--mode", mode, "vertex | edge | cell")->capture_default_str();
    color_cmd->add_option("--p", p, "probability of a black n-face")->capture_default_str();
    color_cmd->add_option("--seed", color_seed, "colour seed")->capture_default_str();
    color_cmd->add_option("--out,-o", out, "output file (default stdout)");

    std::string window;
    std::string kind = "interior";
    auto* measure_cmd = app.add_subcommand("measure", "intrinsic volumes of the black phase in a window");
    measure_cmd->add_option("--in,-i", in, "coloured tessellation document")->required();
    measure_cmd->add_option("--window", window, "xmin,ymin,xmax,ymax (default: core region)");
    measure_cmd->add_option("--estimator", kind, "interior | closed | symmetric | boundary | steiner")->capture_default_str();

    EstimateFlags est;
    auto* estimate = app.add_subcommand("estimate", "Monte Carlo curves of densities or covariances");
    gen.add(estimate);
    estimate->add_option("--mode", est.mode, "vertex | edge | cell")->capture_default_str();
    estimate->add_option("--quantity", est.quantity, "density | covariance")->capture_default_str();
    estimate->add_option("--i", est.i, "intrinsic volume index")->capture_default_str();
    estimate->add_option("--j", est.j, "second index (covariance)")->capture_default_str();
    estimate->add_option("--p-grid", est.p_grid, "start:stop:step or a comma list")->capture_default_str();
    estimate->add_option("--t", est.t, "window area")->capture_default_str();
    estimate->add_option("--reps", est.reps, "replicates")->capture_default_str();
    estimate->add_option("--seed", gen.seed, "master seed")->capture_default_str();
    estimate->add_option("--estimator", est.estimator, "interior | closed | symmetric | steiner")->capture_default_str();
    estimate->add_option("--threads", est.threads, "worker threads (0 = all cores)")->capture_default_str();
    estimate->add_option("--out,-o", est.out, "output CSV (default stdout)");

    AnalyticFlags ana;
    std::string p_single;
    std::string p_grid = "0:1:0.05";
    auto* analytic = app.add_subcommand("analytic", "closed-form curves");
    ana.add(analytic, true);
    analytic->add_option("--p", p_single, "print the value at one p");
    analytic->add_option("--p-grid", p_grid, "start:stop:step or a comma list")->capture_default_str();
    analytic->add_option("--out,-o", out, "output CSV (default stdout)");

    AnalyticFlags cmp;
    std::string mc_path;
    std::string reference;
    double threshold = 3.0;
    auto* compare = app.add_subcommand("compare", "join a Monte Carlo CSV with analytic values");
    cmp.add(compare, false);
    compare->add_option("--mc", mc_path, "CSV from `estimate`")->required();
    compare->add_option("--analytic", reference, "analytic CSV file or formula name")->required();
    compare->add_option("--threshold", threshold, "largest accepted |MC - analytic| / stderr")
        ->capture_default_str();

    double width = 640.0;
    auto* render = app.add_subcommand("render", "draw a document as SVG");
    render->add_option("--in,-i", in, "tessellation document")->required();
    render->add_option("--out,-o", out, "output SVG (default stdout)");
    render->add_option("--width", width, "width in pixels")->capture_default_str();
    render->add_option("--window", window, "xmin,ymin,xmax,ymax (default: core region)");

    auto* validate_cmd = app.add_subcommand("validate", "tessellation validity report");
    validate_cmd->add_option("--in,-i", in, "tessellation document (default: generate from flags)");
    gen.add(validate_cmd);
    validate_cmd->add_option("--t", gen.t, "area of the square core region")->capture_default_str();
    validate_cmd->add_option("--seed", gen.seed, "random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (generate->parsed()) {
            return cmd_generate(gen, out);
        }
        if (color_cmd->parsed()) {
            return cmd_color(in, mode, p, color_seed, out);
        }
        if (measure_cmd->parsed()) {
            return cmd_measure(in, window, kind);
        }
        if (estimate->parsed()) {
            return cmd_estimate(gen, est);
        }
        if (analytic->parsed()) {
            return cmd_analytic(ana, p_single, p_grid, out);
        }
        if (compare->parsed()) {
            return cmd_compare(mc_path, reference, cmp, threshold, compare);
        }
        if (render->parsed()) {
            return cmd_render(in, out, width, window);
        }
        if (validate_cmd->parsed()) {
            return cmd_validate(in, gen);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
