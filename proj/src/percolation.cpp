#include "faceperc/percolation.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "faceperc/rng.hpp"

namespace faceperc {

int parse_mode(std::string_view text) {
    if (text == "vertex" || text == "0") {
        return 0;
    }
    if (text == "edge" || text == "1") {
        return 1;
    }
    if (text == "cell" || text == "2") {
        return 2;
    }
    throw std::invalid_argument("unknown percolation mode: " + std::string(text));
}

const char* mode_name(int mode_n) {
    switch (mode_n) {
    case 0:
        return "vertex";
    case 1:
        return "edge";
    case 2:
        return "cell";
    default:
        throw std::invalid_argument("percolation mode must be 0, 1 or 2");
    }
}

double face_variate(std::uint64_t seed, int mode_n, int index) {
    return to_unit(hash_key(seed, static_cast<std::uint64_t>(mode_n), static_cast<std::uint64_t>(index)));
}

Coloring coloring_from_bits(const PlanarTessellation& t, int mode_n, std::vector<std::uint8_t> bits, double p,
                            std::uint64_t seed) {
    mode_name(mode_n);
    if (bits.size() != t.count(mode_n)) {
        throw std::invalid_argument("colour bits do not match the face count");
    }
    Coloring c;
    c.mode_n = mode_n;
    c.p = p;
    c.seed = seed;
    for (int d = 0; d < 3; ++d) {
        c.black[d].assign(t.count(d), 0);
    }
    c.black[mode_n] = std::move(bits);

    auto any_black = [](const std::vector<std::uint8_t>& flags, const std::vector<int>& ids) {
        return std::any_of(ids.begin(), ids.end(), [&](int id) { return flags[id] != 0; });
    };
    auto all_black = [](const std::vector<std::uint8_t>& flags, const std::vector<int>& ids) {
        return std::all_of(ids.begin(), ids.end(), [&](int id) { return flags[id] != 0; });
    };

    switch (mode_n) {
    case 2:
        for (std::size_t e = 0; e < t.count(1); ++e) {
            c.black[1][e] = any_black(c.black[2], t.edge_cells(static_cast<int>(e)));
        }
        for (std::size_t v = 0; v < t.count(0); ++v) {
            c.black[0][v] = any_black(c.black[2], t.vertex_cells(static_cast<int>(v)));
        }
        break;
    case 1:
        for (std::size_t v = 0; v < t.count(0); ++v) {
            c.black[0][v] = any_black(c.black[1], t.vertex_edges(static_cast<int>(v)));
        }
        for (std::size_t k = 0; k < t.count(2); ++k) {
            c.black[2][k] = all_black(c.black[1], t.cells()[k].edges);
        }
        break;
    default:
        for (std::size_t e = 0; e < t.count(1); ++e) {
            const auto& ev = t.edges()[e];
            c.black[1][e] = c.black[0][ev[0]] && c.black[0][ev[1]];
        }
        for (std::size_t k = 0; k < t.count(2); ++k) {
            c.black[2][k] = all_black(c.black[1], t.cells()[k].edges);
        }
        break;
    }
    return c;
}

Coloring color(const PlanarTessellation& t, int mode_n, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("p must lie in [0, 1]");
    }
    mode_name(mode_n);
    std::vector<std::uint8_t> bits(t.count(mode_n));
    for (std::size_t i = 0; i < bits.size(); ++i) {
        bits[i] = face_variate(seed, mode_n, static_cast<int>(i)) < p;
    }
    return coloring_from_bits(t, mode_n, std::move(bits), p, seed);
}

Coloring complement_coloring(const PlanarTessellation& t, const Coloring& c) {
    if (c.mode_n != 2) {
        throw std::invalid_argument("complement colouring requires cell mode");
    }
    std::vector<std::uint8_t> flipped(c.black[2].size());
    for (std::size_t i = 0; i < flipped.size(); ++i) {
        flipped[i] = !c.black[2][i];
    }
    return coloring_from_bits(t, 2, std::move(flipped), 1.0 - c.p, c.seed);
}

std::vector<FaceRef> black_faces(const Coloring& c, int k) {
    std::vector<FaceRef> out;
    const auto& flags = c.black.at(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (flags[i]) {
            out.push_back({k, static_cast<int>(i)});
        }
    }
    return out;
}

}  // namespace faceperc
