#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "faceperc/geom2d.hpp"

namespace faceperc {

enum class Model { voronoi, archimedean, line };

enum class LatticeCode { square_4444, triangular_333333, honeycomb_666, kagome_3636 };

struct LatticeInfo {
    LatticeCode code;
    const char* name;            // vertex type, e.g. "4.4.4.4"
    int z;                       // coordination number
    std::vector<int> polygons;   // n_1, ..., n_z
};

const LatticeInfo& lattice_info(LatticeCode code);
LatticeCode parse_lattice_code(std::string_view text);
Model parse_model(std::string_view text);
std::string to_string(Model m);
std::string to_string(LatticeCode c);

class TessellationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Some face meeting the core region lacks a complete second-order star.
class PaddingError : public TessellationError {
  public:
    PaddingError() : TessellationError("padding insufficient: untrusted face meets the core region") {}
};

struct GeneratorConfig {
    Model model = Model::voronoi;
    /// voronoi: Poisson points per unit area. line: mean number of lines per
    /// unit of signed normal distance (the line process is isotropic).
    double intensity = 1.0;
    LatticeCode lattice_code = LatticeCode::square_4444;
    double edge_length = 1.0;
    /// Core region: every face meeting it is exact and has a complete
    /// second-order star.
    Window region = Window::centered_square(100.0);
    /// Width of the sampled margin around the core region. When unset, the
    /// random generators start from the model default and widen the margin
    /// by further independent sampling until the coverage check passes.
    std::optional<double> padding;
    std::uint64_t seed = 1;

    /// Explicit padding, or the model default (5 / sqrt(intensity) for
    /// voronoi, 4 edge lengths for lattices, 10 / intensity for lines).
    double effective_padding() const;

    static constexpr int kMaxPaddingGrowth = 6;
};

struct FaceRef {
    int dim = 0;
    int index = 0;

    auto operator<=>(const FaceRef&) const = default;
};

struct GeneratorTag {
    Model model = Model::voronoi;
    LatticeCode lattice_code = LatticeCode::square_4444;
};

/// An explicit face-to-face planar complex: vertices, edges and convex cells
/// with their incidence maps. Immutable once assembled.
class PlanarTessellation {
  public:
    struct Cell {
        std::vector<int> vertices;  // counter-clockwise
        std::vector<int> edges;     // edges[i] joins vertices[i] and vertices[i+1]
    };

    /// Builds the complex from vertex positions and counter-clockwise vertex
    /// cycles of cells. Edges are derived from the cycles. When
    /// check_coverage is set, every face meeting the core region must have a
    /// complete second-order star, else TessellationError("padding insufficient").
    static PlanarTessellation assemble(std::vector<Point2> points, const std::vector<std::vector<int>>& cycles,
                                       Window core_region, std::array<double, 4> bounds, GeneratorTag tag,
                                       bool check_coverage, std::vector<Point2> sites = {});

    std::size_t count(int dim) const;
    const std::vector<Point2>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 2>>& edges() const { return edges_; }
    const std::vector<Cell>& cells() const { return cells_; }

    const std::vector<int>& vertex_edges(int v) const { return vertex_edges_[v]; }
    const std::vector<int>& vertex_cells(int v) const { return vertex_cells_[v]; }
    const std::vector<int>& edge_cells(int e) const { return edge_cells_[e]; }

    FaceGeometry geometry(FaceRef f) const;
    Point2 steiner(FaceRef f) const { return steiner_[f.dim][f.index]; }
    const IntrinsicVolumes& volumes(FaceRef f) const { return volumes_[f.dim][f.index]; }
    /// Bounding box of the face: xmin, ymin, xmax, ymax.
    const std::array<double, 4>& box(FaceRef f) const { return boxes_[f.dim][f.index]; }

    /// All cells containing the face are present.
    bool complete(FaceRef f) const { return complete_[f.dim][f.index] != 0; }
    /// Complete, and every face of every cell containing it is complete.
    bool trusted(FaceRef f) const { return trusted_[f.dim][f.index] != 0; }

    const Window& core_region() const { return core_; }
    const std::array<double, 4>& bounds() const { return bounds_; }
    const GeneratorTag& tag() const { return tag_; }
    /// Voronoi nuclei aligned with cells(); empty for other generators.
    const std::vector<Point2>& sites() const { return sites_; }

    /// True when the face geometry (closed) meets the closed window.
    bool meets(FaceRef f, const Window& w) const;

  private:
    std::vector<Point2> vertices_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<Cell> cells_;
    std::vector<std::vector<int>> vertex_edges_;
    std::vector<std::vector<int>> vertex_cells_;
    std::vector<std::vector<int>> edge_cells_;
    std::array<std::vector<Point2>, 3> steiner_;
    std::array<std::vector<IntrinsicVolumes>, 3> volumes_;
    std::array<std::vector<std::array<double, 4>>, 3> boxes_;
    std::array<std::vector<std::uint8_t>, 3> complete_;
    std::array<std::vector<std::uint8_t>, 3> trusted_;
    Window core_ = Window::centered_square(1.0);
    std::array<double, 4> bounds_{};
    GeneratorTag tag_;
    std::vector<Point2> sites_;
};

// Generators. All are deterministic functions of the config, seed included.
PlanarTessellation build_poisson_voronoi(const GeneratorConfig& cfg);
PlanarTessellation build_archimedean(const GeneratorConfig& cfg);
PlanarTessellation build_poisson_line(const GeneratorConfig& cfg);
PlanarTessellation build_tessellation(const GeneratorConfig& cfg);

/// Voronoi complex of explicit sites inside the sampling box `bounds`. Only
/// cells certified exact (all Delaunay circumdisks inside the box) are kept.
PlanarTessellation build_voronoi_from_sites(const std::vector<Point2>& sites, std::array<double, 4> bounds,
                                            const Window& core_region, bool check_coverage);

/// The unique face whose relative interior contains x.
FaceRef face_of_point(const PlanarTessellation& t, Point2 x);

/// S_l(f): faces of dimension l containing f (l >= dim f) or contained in f.
std::vector<FaceRef> face_star(const PlanarTessellation& t, FaceRef f, int l);

/// l-faces G with |S_n(f) ∩ S_n(G)| == m, optionally with |S_n(G)| == s.
std::vector<FaceRef> face_star_shared(const PlanarTessellation& t, FaceRef f, int l, int n, int m,
                                      std::optional<int> s = std::nullopt);

/// Sub-faces of dimension l < dim f (vertices or edges of a cell, endpoints of an edge).
std::vector<FaceRef> subfaces(const PlanarTessellation& t, FaceRef f, int l);

struct ValidationReport {
    bool face_to_face = true;
    int face_to_face_violations = 0;
    bool convex = true;
    int nonconvex_cells = 0;
    std::map<int, int> degree_histogram;  // vertex degree -> count (complete vertices)
    bool normal = true;                   // every complete vertex lies in exactly 3 cells
    // Counts of faces meeting the core region and edge/boundary crossings.
    std::array<long, 3> faces_in_window{0, 0, 0};
    long boundary_crossings = 0;
    bool euler_vertices_identity = false;  // |X0| = 2|X2| - eps - 2
    bool euler_edges_identity = false;     // |X1| = 3|X2| - eps - 3
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

ValidationReport validate(const PlanarTessellation& t);

}  // namespace faceperc
