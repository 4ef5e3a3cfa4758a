#include <cmath>

#include "doctest.h"
#include "faceperc/io.hpp"
#include "faceperc/measure.hpp"

using namespace faceperc;

namespace {

PlanarTessellation make(Model model, std::uint64_t seed) {
    GeneratorConfig cfg;
    cfg.model = model;
    cfg.lattice_code = LatticeCode::kagome_3636;
    cfg.region = Window::centered_square(64.0);
    cfg.seed = seed;
    return build_tessellation(cfg);
}

}  // namespace

TEST_CASE("tessellation documents round-trip exactly") {
    for (Model model : {Model::voronoi, Model::archimedean, Model::line}) {
        const auto t = make(model, 4);
        const auto c = color(t, 1, 0.4, 9);
        const auto doc = tessellation_from_json(tessellation_to_json(t, &c));
        const auto& u = doc.tessellation;
        REQUIRE(u.count(0) == t.count(0));
        REQUIRE(u.count(1) == t.count(1));
        REQUIRE(u.count(2) == t.count(2));
        for (std::size_t v = 0; v < t.count(0); ++v) {
            CHECK(u.vertices()[v] == t.vertices()[v]);
        }
        CHECK(u.edges() == t.edges());
        for (std::size_t k = 0; k < t.count(2); ++k) {
            CHECK(u.cells()[k].vertices == t.cells()[k].vertices);
            CHECK(u.trusted({2, static_cast<int>(k)}) == t.trusted({2, static_cast<int>(k)}));
        }
        CHECK(u.tag().model == model);
        CHECK(u.sites().size() == t.sites().size());
        REQUIRE(doc.coloring.has_value());
        for (int k = 0; k < 3; ++k) {
            CHECK(doc.coloring->black[k] == c.black[k]);
        }
        const Window w = Window::centered_square(36.0);
        const auto a = volumes_black_closed(t, c, w);
        const auto b = volumes_black_closed(u, *doc.coloring, w);
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(a[i] - b[i]) < 1e-12);
        }
        CHECK(tessellation_to_json(u, &*doc.coloring) == tessellation_to_json(t, &c));
    }
}

TEST_CASE("malformed documents are rejected") {
    CHECK_THROWS_AS(tessellation_from_json("{"), IoError);
    CHECK_THROWS_AS(tessellation_from_json("{\"format\": \"other\"}"), IoError);
    const auto t = make(Model::archimedean, 1);
    auto text = tessellation_to_json(t);
    const auto pos = text.find("\"vertices\"");
    text.replace(pos, 10, "\"vertexes\"");
    CHECK_THROWS_AS(tessellation_from_json(text), IoError);
}

TEST_CASE("csv tables") {
    CsvTable table;
    table.header = {{"model", "voronoi"}, {"t", "400"}};
    table.rows.push_back({"delta_0", 0.1, 0.0719999, 0.0008, 200, 7});
    table.rows.push_back({"delta_0", 0.15000000000000002, -1e-17, 1.5e-3, 200, 7});
    const auto text = write_csv(table);
    CHECK(text.rfind("# model=voronoi\n# t=400\nquantity,p,estimate,stderr,replicates,seed\n", 0) == 0);
    const auto back = read_csv(text);
    CHECK(back.header_value("t") == std::optional<std::string>("400"));
    CHECK_FALSE(back.header_value("missing").has_value());
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[1].p == table.rows[1].p);
    CHECK(back.rows[1].estimate == table.rows[1].estimate);
    CHECK(back.rows[0].replicates == 200);
    CHECK(write_csv(back) == text);
    CHECK_THROWS_AS(read_csv("a,b\n"), IoError);
    CHECK_THROWS_AS(read_csv(std::string(kCsvColumns) + "\nx,1,2\n"), IoError);
}

TEST_CASE("svg rendering") {
    const auto t = make(Model::voronoi, 2);
    const auto all = color(t, 2, 1.0, 1);
    const auto svg = render_svg(t, &all);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"") != std::string::npos);
    CHECK(svg.find("id=\"window\"") != std::string::npos);
    std::size_t polygons = 0;
    for (auto pos = svg.find("<polygon points"); pos != std::string::npos; pos = svg.find("<polygon points", pos + 1)) {
        ++polygons;
    }
    std::size_t visible = 0;
    const auto b = t.core_region().bounds();
    for (std::size_t c = 0; c < t.count(2); ++c) {
        const auto& fb = t.box({2, static_cast<int>(c)});
        visible += fb[2] >= b[0] && fb[0] <= b[2] && fb[3] >= b[1] && fb[1] <= b[3];
    }
    CHECK(polygons == visible);
    const auto none = color(t, 2, 0.0, 1);
    CHECK(render_svg(t, &none).find("<polygon points") == std::string::npos);
    CHECK(render_svg(t, &all) == svg);
}
