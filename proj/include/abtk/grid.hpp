#pragma once

#include <cmath>

#include "abtk/errors.hpp"

namespace abtk {

// Uniform node-centered 2D grid with nodes on both boundaries:
// x_i = x0 + i * dx with dx = Lx / (Nx - 1), and likewise in y.
struct Grid2D {
    double lx = 0.0;
    double ly = 0.0;
    int nx = 0;
    int ny = 0;
    double x0 = 0.0;
    double y0 = 0.0;

    static Grid2D centered(double lx, double ly, int nx, int ny) {
        Grid2D g{lx, ly, nx, ny, -0.5 * lx, -0.5 * ly};
        g.validate();
        return g;
    }

    void validate() const {
        if (nx < 16 || ny < 16) throw config_error("grid needs at least 16x16 points");
        if (!(lx > 0.0) || !(ly > 0.0)) throw config_error("grid extents must be > 0");
        if (!std::isfinite(x0) || !std::isfinite(y0))
            throw config_error("grid origin must be finite");
    }

    double dx() const { return lx / (nx - 1); }
    double dy() const { return ly / (ny - 1); }
    double x(int i) const { return x0 + i * dx(); }
    double y(int j) const { return y0 + j * dy(); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) +
               static_cast<std::size_t>(j);
    }
    std::size_t size() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    }
};

}  // namespace abtk
