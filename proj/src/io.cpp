#include "faceperc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace faceperc {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << text;
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

json point_json(Point2 p) { return json::array({p.x, p.y}); }

Point2 point_from(const json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw IoError("point must be [x, y]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json model_json(const GeneratorTag& tag) {
    json g;
    g["model"] = to_string(tag.model);
    g["lattice_code"] = to_string(tag.lattice_code);
    return g;
}

}  // namespace

std::string tessellation_to_json(const PlanarTessellation& t, const Coloring* coloring) {
    json doc;
    doc["format"] = "faceperc-tessellation";
    doc["version"] = 1;
    doc["generator"] = model_json(t.tag());

    json core;
    core["polygon"] = json::array();
    for (const auto& v : t.core_region().polygon.vertices()) {
        core["polygon"].push_back(point_json(v));
    }
    core["scale_t"] = t.core_region().scale_t;
    doc["core_region"] = core;
    const auto& b = t.bounds();
    doc["bounds"] = json::array({b[0], b[1], b[2], b[3]});

    json vertices = json::array();
    for (const auto& v : t.vertices()) {
        vertices.push_back(point_json(v));
    }
    doc["vertices"] = std::move(vertices);
    json edges = json::array();
    for (const auto& e : t.edges()) {
        edges.push_back(json::array({e[0], e[1]}));
    }
    doc["edges"] = std::move(edges);
    json cells = json::array();
    json cell_edges = json::array();
    for (const auto& c : t.cells()) {
        cells.push_back(c.vertices);
        cell_edges.push_back(c.edges);
    }
    doc["cells"] = std::move(cells);

    json vertex_edges = json::array();
    json vertex_cells = json::array();
    for (std::size_t v = 0; v < t.count(0); ++v) {
        vertex_edges.push_back(t.vertex_edges(static_cast<int>(v)));
        vertex_cells.push_back(t.vertex_cells(static_cast<int>(v)));
    }
    json edge_cells = json::array();
    for (std::size_t e = 0; e < t.count(1); ++e) {
        edge_cells.push_back(t.edge_cells(static_cast<int>(e)));
    }
    doc["incidence"] = {{"cell_edges", std::move(cell_edges)},
                        {"vertex_edges", std::move(vertex_edges)},
                        {"vertex_cells", std::move(vertex_cells)},
                        {"edge_cells", std::move(edge_cells)}};

    json sites = json::array();
    for (const auto& s : t.sites()) {
        sites.push_back(point_json(s));
    }
    doc["sites"] = std::move(sites);

    if (coloring) {
        std::string bits;
        for (auto b : coloring->black[coloring->mode_n]) {
            bits.push_back(b ? '1' : '0');
        }
        doc["coloring"] = {{"mode", mode_name(coloring->mode_n)},
                           {"p", coloring->p},
                           {"seed", coloring->seed},
                           {"black", bits}};
    }
    return doc.dump(1) + "\n";
}

TessellationDocument tessellation_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(std::string("invalid JSON: ") + e.what());
    }
    try {
        if (doc.value("format", "") != "faceperc-tessellation") {
            throw IoError("not a tessellation document");
        }
        GeneratorTag tag;
        tag.model = parse_model(doc.at("generator").at("model").get<std::string>());
        tag.lattice_code = parse_lattice_code(doc.at("generator").at("lattice_code").get<std::string>());

        std::vector<Point2> poly;
        for (const auto& v : doc.at("core_region").at("polygon")) {
            poly.push_back(point_from(v));
        }
        const Window core{FaceGeometry::polygon(poly), doc.at("core_region").at("scale_t").get<double>()};
        const auto bv = doc.at("bounds").get<std::vector<double>>();
        if (bv.size() != 4) {
            throw IoError("bounds must have four entries");
        }
        std::vector<Point2> points;
        for (const auto& v : doc.at("vertices")) {
            points.push_back(point_from(v));
        }
        const auto cycles = doc.at("cells").get<std::vector<std::vector<int>>>();
        std::vector<Point2> sites;
        for (const auto& s : doc.value("sites", json::array())) {
            sites.push_back(point_from(s));
        }
        TessellationDocument out{PlanarTessellation::assemble(std::move(points), cycles, core,
                                                              {bv[0], bv[1], bv[2], bv[3]}, tag, false,
                                                              std::move(sites)),
                                 std::nullopt};
        const auto edges = doc.at("edges").get<std::vector<std::array<int, 2>>>();
        if (edges != out.tessellation.edges()) {
            throw IoError("edge list does not match the cell cycles");
        }
        if (doc.contains("coloring")) {
            const auto& c = doc["coloring"];
            const int n = parse_mode(c.at("mode").get<std::string>());
            const auto bits_text = c.at("black").get<std::string>();
            if (bits_text.size() != out.tessellation.count(n)) {
                throw IoError("colouring size does not match the tessellation");
            }
            std::vector<std::uint8_t> bits;
            for (char ch : bits_text) {
                if (ch != '0' && ch != '1') {
                    throw IoError("colouring bits must be 0 or 1");
                }
                bits.push_back(ch == '1');
            }
            out.coloring = coloring_from_bits(out.tessellation, n, std::move(bits), c.at("p").get<double>(),
                                              c.at("seed").get<std::uint64_t>());
        }
        return out;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed tessellation document: ") + e.what());
    }
}

std::optional<std::string> CsvTable::header_value(const std::string& key) const {
    for (const auto& [k, v] : header) {
        if (k == key) {
            return v;
        }
    }
    return std::nullopt;
}

std::string write_csv(const CsvTable& table) {
    std::string out;
    for (const auto& [k, v] : table.header) {
        out += "# " + k + "=" + v + "\n";
    }
    out += kCsvColumns;
    out += "\n";
    for (const auto& r : table.rows) {
        out += r.quantity + "," + format_double(r.p) + "," + format_double(r.estimate) + "," +
               format_double(r.std_error) + "," + std::to_string(r.replicates) + "," + std::to_string(r.seed) + "\n";
    }
    return out;
}

CsvTable read_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool seen_columns = false;
    auto number = [](const std::string& s) {
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
            throw IoError("bad number in CSV: " + s);
        }
        return v;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            const auto body = line.substr(line.find_first_not_of("# "));
            const auto eq = body.find('=');
            if (eq != std::string::npos) {
                table.header.emplace_back(body.substr(0, eq), body.substr(eq + 1));
            }
            continue;
        }
        if (!seen_columns) {
            if (line != kCsvColumns) {
                throw IoError("unexpected CSV columns: " + line);
            }
            seen_columns = true;
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != 6) {
            throw IoError("CSV row must have 6 fields: " + line);
        }
        CsvRow r;
        r.quantity = f[0];
        r.p = number(f[1]);
        r.estimate = number(f[2]);
        r.std_error = number(f[3]);
        r.replicates = std::stol(f[4]);
        r.seed = std::stoull(f[5]);
        table.rows.push_back(r);
    }
    if (!seen_columns) {
        throw IoError("CSV lacks the column line");
    }
    return table;
}

std::string render_svg(const PlanarTessellation& t, const Coloring* coloring, const SvgOptions& opt) {
    const Window view = opt.view ? *opt.view : t.core_region();
    const auto b = view.bounds();
    const double w = b[2] - b[0];
    const double h = b[3] - b[1];
    if (!(w > 0.0 && h > 0.0)) {
        throw IoError("empty view");
    }
    const double scale = opt.width_px / w;
    const double height_px = h * scale;
    auto X = [&](double x) { return format_double(std::round((x - b[0]) * scale * 100.0) / 100.0); };
    auto Y = [&](double y) { return format_double(std::round((b[3] - y) * scale * 100.0) / 100.0); };
    const double stroke = std::max(0.5, 0.02 * scale);

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << format_double(opt.width_px)
        << "\" height=\"" << format_double(std::round(height_px * 100.0) / 100.0) << "\" viewBox=\"0 0 "
        << format_double(opt.width_px) << " " << format_double(std::round(height_px * 100.0) / 100.0) << "\">\n"
        << "<defs><clipPath id=\"view\"><rect x=\"0\" y=\"0\" width=\"" << format_double(opt.width_px)
        << "\" height=\"" << format_double(std::round(height_px * 100.0) / 100.0) << "\"/></clipPath></defs>\n"
        << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<g clip-path=\"url(#view)\">\n";

    auto visible = [&](FaceRef f) {
        const auto& fb = t.box(f);
        return fb[2] >= b[0] && fb[0] <= b[2] && fb[3] >= b[1] && fb[1] <= b[3];
    };
    out << "<g id=\"cells\" fill=\"black\" stroke=\"none\">\n";
    for (std::size_t c = 0; c < t.count(2); ++c) {
        const FaceRef f{2, static_cast<int>(c)};
        if (!coloring || !coloring->is_black(f) || !visible(f)) {
            continue;
        }
        out << "<polygon points=\"";
        const auto& vs = t.cells()[c].vertices;
        for (std::size_t a = 0; a < vs.size(); ++a) {
            const Point2 p = t.vertices()[vs[a]];
            out << (a ? " " : "") << X(p.x) << "," << Y(p.y);
        }
        out << "\"/>\n";
    }
    out << "</g>\n<g id=\"edges\" stroke-linecap=\"round\">\n";
    for (std::size_t e = 0; e < t.count(1); ++e) {
        const FaceRef f{1, static_cast<int>(e)};
        if (!visible(f)) {
            continue;
        }
        const bool black = coloring && coloring->is_black(f);
        const Point2 p = t.vertices()[t.edges()[e][0]];
        const Point2 q = t.vertices()[t.edges()[e][1]];
        out << "<line x1=\"" << X(p.x) << "\" y1=\"" << Y(p.y) << "\" x2=\"" << X(q.x) << "\" y2=\"" << Y(q.y)
            << "\" stroke=\"" << (black ? "black" : "#9a9a9a") << "\" stroke-width=\""
            << format_double(black ? 2.0 * stroke : stroke) << "\"/>\n";
    }
    out << "</g>\n<g id=\"vertices\" fill=\"black\">\n";
    if (coloring) {
        for (std::size_t v = 0; v < t.count(0); ++v) {
            const FaceRef f{0, static_cast<int>(v)};
            if (!coloring->is_black(f) || !visible(f)) {
                continue;
            }
            const Point2 p = t.vertices()[v];
            out << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"" << format_double(2.0 * stroke)
                << "\"/>\n";
        }
    }
    out << "</g>\n</g>\n";
    if (opt.draw_window) {
        out << "<polygon id=\"window\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"" << format_double(stroke)
            << "\" points=\"";
        const auto& wp = t.core_region().polygon.vertices();
        for (std::size_t a = 0; a < wp.size(); ++a) {
            out << (a ? " " : "") << X(wp[a].x) << "," << Y(wp[a].y);
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace faceperc
