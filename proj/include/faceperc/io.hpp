#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "faceperc/percolation.hpp"
#include "faceperc/tessellation.hpp"

namespace faceperc {

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// JSON tessellation document. Top-level keys: format, version, generator,
/// core_region, bounds, vertices, edges, cells, incidence, sites and, when a
/// colouring is attached, coloring. Coordinates round-trip exactly.
std::string tessellation_to_json(const PlanarTessellation& t, const Coloring* coloring = nullptr);

struct TessellationDocument {
    PlanarTessellation tessellation;
    std::optional<Coloring> coloring;
};

TessellationDocument tessellation_from_json(const std::string& text);

/// One row of the results table: quantity,p,estimate,stderr,replicates,seed.
struct CsvRow {
    std::string quantity;
    double p = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    long replicates = 0;
    std::uint64_t seed = 0;
};

struct CsvTable {
    /// Run description, written as leading `# key=value` lines.
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<CsvRow> rows;

    std::optional<std::string> header_value(const std::string& key) const;
};

inline constexpr const char* kCsvColumns = "quantity,p,estimate,stderr,replicates,seed";

std::string write_csv(const CsvTable& table);
CsvTable read_csv(const std::string& text);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

struct SvgOptions {
    double width_px = 640.0;
    /// Region drawn; defaults to the core region.
    std::optional<Window> view;
    bool draw_window = true;
};

/// Static SVG 1.1 drawing of the tessellation and, if given, its black phase.
std::string render_svg(const PlanarTessellation& t, const Coloring* coloring, const SvgOptions& opt = {});

}  // namespace faceperc
