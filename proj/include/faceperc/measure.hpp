#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

#include "faceperc/percolation.hpp"
#include "faceperc/tessellation.hpp"

namespace faceperc {

class MeasureError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// No tessellation vertex within kGeomEps of the window boundary and no
/// window corner within kGeomEps of an edge.
bool window_is_generic(const PlanarTessellation& t, const Window& w);

/// w itself when generic, else w shifted by a small offset drawn from a
/// stream keyed by `seed` (repeated until generic).
Window generic_window(const PlanarTessellation& t, const Window& w, std::uint64_t seed = 0);

/// Throws MeasureError when w is not inside the core region of t.
void require_in_core(const PlanarTessellation& t, const Window& w);

/// V_i(Z ∩ int W) for i = 0, 1, 2 as signed sums of clipped black faces.
/// The window is replaced by generic_window(t, w) first.
std::array<double, 3> volumes_black_interior(const PlanarTessellation& t, const Coloring& c, const Window& w);

/// V_i(Z ∩ ∂W): black faces meeting the open sides and corners of W.
std::array<double, 3> volumes_black_boundary(const PlanarTessellation& t, const Coloring& c, const Window& w);

/// V_i(Z ∩ W) for the closed window: interior plus boundary.
std::array<double, 3> volumes_black_closed(const PlanarTessellation& t, const Coloring& c, const Window& w);

double vi_black_interior(const PlanarTessellation& t, const Coloring& c, const Window& w, int i);
double vi_black_boundary(const PlanarTessellation& t, const Coloring& c, const Window& w, int i);

/// Sum over black faces whose Steiner point lies in W of (-1)^(i+k) V_i(F),
/// for i = 0, 1, 2. Its mean is exactly area(W) * delta_i.
std::array<double, 3> volumes_black_steiner(const PlanarTessellation& t, const Coloring& c, const Window& w);

/// Uncoloured face sums: Σ_{F in X_k} V_i(F ∩ W) indexed [k][i].
std::array<std::array<double, 3>, 3> face_sums_clipped(const PlanarTessellation& t, const Window& w);

/// χ of the black faces meeting W by vertex/edge/cell counts using
/// separating-axis predicates only.
long euler_oracle_combinatorial(const PlanarTessellation& t, const Coloring& c, const Window& w);

struct RasterResult {
    long euler = 0;
    double resolution = 0.0;  // pixels per unit length at which it stabilised
};

/// Cubical Euler characteristic of the rasterised closed black region in W
/// (cell mode). Starts at `resolution` pixels per unit, raised as needed to
/// resolve the narrowest gap, and doubles until three successive values
/// agree. Throws MeasureError("resolution insufficient") once the virtual
/// pixel grid would exceed max_pixels. Work scales with the row count only.
RasterResult euler_oracle_raster(const PlanarTessellation& t, const Coloring& c, const Window& w,
                                 double resolution = 32.0, double max_pixels = 1e11);

}  // namespace faceperc
