#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "faceperc/tessellation.hpp"

namespace faceperc {

/// Percolation order n: vertex (0), edge (1) or cell (2) percolation.
int parse_mode(std::string_view text);
const char* mode_name(int mode_n);

/// Black/white flags for every face of a tessellation, consistent under the
/// face relation: faces of black faces are black.
struct Coloring {
    int mode_n = 2;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::array<std::vector<std::uint8_t>, 3> black;

    bool is_black(FaceRef f) const { return black[f.dim][f.index] != 0; }
};

/// Uniform variate deciding the colour of n-face `index`; the face is black
/// iff the variate is below p, which couples colourings monotonically in p.
double face_variate(std::uint64_t seed, int mode_n, int index);

/// Each n-face black independently with probability p; other dimensions
/// follow: k < n black iff a face of a black n-face, k > n black iff all
/// (k-1)-faces are black.
Coloring color(const PlanarTessellation& t, int mode_n, double p, std::uint64_t seed);

/// Completes explicit n-face bits to a consistent colouring.
Coloring coloring_from_bits(const PlanarTessellation& t, int mode_n, std::vector<std::uint8_t> bits, double p,
                            std::uint64_t seed);

/// Cell mode only: flips the cell bits and recomputes lower faces, giving the
/// closure of the white phase; p becomes 1 - p.
Coloring complement_coloring(const PlanarTessellation& t, const Coloring& c);

std::vector<FaceRef> black_faces(const Coloring& c, int k);

}  // namespace faceperc
