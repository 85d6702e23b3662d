#pragma once

// Space-time points and piecewise-linear contours in R x R^3.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "abtk/errors.hpp"

namespace abtk {

struct SpaceTimePoint {
    double t = 0.0;
    std::array<double, 3> x{0.0, 0.0, 0.0};

    std::array<double, 4> as_array() const { return {t, x[0], x[1], x[2]}; }

    static SpaceTimePoint from_array(const std::array<double, 4>& a) {
        return {a[0], {a[1], a[2], a[3]}};
    }

    bool finite() const {
        return std::isfinite(t) && std::isfinite(x[0]) && std::isfinite(x[1]) &&
               std::isfinite(x[2]);
    }
};

inline SpaceTimePoint operator+(const SpaceTimePoint& a, const SpaceTimePoint& b) {
    return {a.t + b.t, {a.x[0] + b.x[0], a.x[1] + b.x[1], a.x[2] + b.x[2]}};
}

inline SpaceTimePoint operator-(const SpaceTimePoint& a, const SpaceTimePoint& b) {
    return {a.t - b.t, {a.x[0] - b.x[0], a.x[1] - b.x[1], a.x[2] - b.x[2]}};
}

inline SpaceTimePoint operator*(double s, const SpaceTimePoint& p) {
    return {s * p.t, {s * p.x[0], s * p.x[1], s * p.x[2]}};
}

// Euclidean norm over all four coordinates (t counts as a coordinate of the
// four-dimensional base, not as a metric direction).
inline double norm4(const SpaceTimePoint& p) {
    return std::sqrt(p.t * p.t + p.x[0] * p.x[0] + p.x[1] * p.x[1] + p.x[2] * p.x[2]);
}

inline double dot4(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

// Piecewise-linear space-time path. Closed contours implicitly rejoin the
// first vertex; that closing segment takes part in every integral.
// Consecutive duplicate vertices are rejected, with one exception: a fully
// degenerate contour (every vertex identical) is allowed so that contracting
// contour families can reach an exact point, which carries zero holonomy.
class Contour {
  public:
    static Contour closed_polygon(std::vector<SpaceTimePoint> vertices) {
        return Contour(std::move(vertices), true);
    }

    static Contour open_polyline(std::vector<SpaceTimePoint> vertices) {
        return Contour(std::move(vertices), false);
    }

    // Regular n-gon sampling of a circle in the x1-x2 plane at fixed time and
    // height, counterclockwise.
    static Contour circle(const std::array<double, 3>& center, double radius,
                          double time, int n_vertices = 256) {
        if (n_vertices < 3) throw std::invalid_argument("circle needs >= 3 vertices");
        if (radius < 0.0) throw std::invalid_argument("circle radius must be >= 0");
        std::vector<SpaceTimePoint> v;
        v.reserve(static_cast<std::size_t>(n_vertices));
        for (int j = 0; j < n_vertices; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / n_vertices;
            v.push_back({time,
                         {center[0] + radius * std::cos(phi),
                          center[1] + radius * std::sin(phi), center[2]}});
        }
        return Contour(std::move(v), true);
    }

    // Axis-aligned rectangle in the x1-x2 plane, counterclockwise. Each side
    // may be subdivided for denser sampling.
    static Contour rectangle(const std::array<double, 3>& center, double half_x,
                             double half_y, double time, int points_per_side = 1) {
        if (half_x <= 0.0 || half_y <= 0.0)
            throw std::invalid_argument("rectangle half-extents must be > 0");
        if (points_per_side < 1)
            throw std::invalid_argument("points_per_side must be >= 1");
        const std::array<std::array<double, 2>, 4> corners{{{center[0] + half_x, center[1] - half_y},
                                                            {center[0] + half_x, center[1] + half_y},
                                                            {center[0] - half_x, center[1] + half_y},
                                                            {center[0] - half_x, center[1] - half_y}}};
        std::vector<SpaceTimePoint> v;
        v.reserve(static_cast<std::size_t>(4 * points_per_side));
        for (int side = 0; side < 4; ++side) {
            const auto& a = corners[static_cast<std::size_t>(side)];
            const auto& b = corners[static_cast<std::size_t>((side + 1) % 4)];
            for (int j = 0; j < points_per_side; ++j) {
                const double s = static_cast<double>(j) / points_per_side;
                v.push_back({time,
                             {a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]),
                              center[2]}});
            }
        }
        return Contour(std::move(v), true);
    }

    const std::vector<SpaceTimePoint>& vertices() const { return vertices_; }
    bool closed() const { return closed_; }

    std::size_t segment_count() const {
        if (vertices_.size() < 2) return 0;
        return closed_ ? vertices_.size() : vertices_.size() - 1;
    }

    std::pair<SpaceTimePoint, SpaceTimePoint> segment(std::size_t i) const {
        const std::size_t n = vertices_.size();
        return {vertices_[i], vertices_[(i + 1) % n]};
    }

    double length() const {
        double len = 0.0;
        for (std::size_t i = 0; i < segment_count(); ++i) {
            auto [a, b] = segment(i);
            len += norm4(b - a);
        }
        return len;
    }

    Contour reversed() const {
        std::vector<SpaceTimePoint> v(vertices_.rbegin(), vertices_.rend());
        return Contour(std::move(v), closed_);
    }

    // True for the fully degenerate (single-point) contour.
    bool is_point() const {
        for (const auto& p : vertices_) {
            if (norm4(p - vertices_.front()) != 0.0) return false;
        }
        return true;
    }

    // Largest coordinate magnitude; used to scale geometric tolerances.
    double coordinate_scale() const {
        double s = 0.0;
        for (const auto& p : vertices_) {
            for (double c : p.as_array()) s = std::max(s, std::abs(c));
        }
        return s;
    }

  private:
    Contour(std::vector<SpaceTimePoint> vertices, bool closed)
        : vertices_(std::move(vertices)), closed_(closed) {
        if (vertices_.size() < (closed_ ? 3u : 2u))
            throw std::invalid_argument("contour needs at least 3 (closed) or 2 (open) vertices");
        for (const auto& p : vertices_) {
            if (!p.finite())
                throw std::invalid_argument("contour vertices must be finite");
        }
        std::size_t zero_edges = 0;
        for (std::size_t i = 0; i < segment_count(); ++i) {
            auto [a, b] = segment(i);
            if (norm4(b - a) == 0.0) ++zero_edges;
        }
        if (zero_edges != 0 && !is_point())
            throw std::invalid_argument("consecutive contour vertices must be distinct");
    }

    std::vector<SpaceTimePoint> vertices_;
    bool closed_;
};

namespace detail {

inline double point_segment_distance(const SpaceTimePoint& p, const SpaceTimePoint& a,
                                     const SpaceTimePoint& b) {
    const SpaceTimePoint d = b - a;
    const double dd = d.t * d.t + d.x[0] * d.x[0] + d.x[1] * d.x[1] + d.x[2] * d.x[2];
    if (dd == 0.0) return norm4(p - a);
    const SpaceTimePoint pa = p - a;
    double s = (pa.t * d.t + pa.x[0] * d.x[0] + pa.x[1] * d.x[1] + pa.x[2] * d.x[2]) / dd;
    s = std::clamp(s, 0.0, 1.0);
    return norm4(pa - s * d);
}

inline double directed_polyline_distance(const Contour& from, const Contour& to,
                                         int samples_per_segment) {
    double worst = 0.0;
    const std::size_t nseg = std::max<std::size_t>(from.segment_count(), 1);
    for (std::size_t i = 0; i < nseg; ++i) {
        auto [a, b] = from.segment_count() ? from.segment(i)
                                           : std::pair{from.vertices()[0], from.vertices()[0]};
        for (int k = 0; k < samples_per_segment; ++k) {
            const double s = static_cast<double>(k) / samples_per_segment;
            const SpaceTimePoint p = a + s * (b - a);
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < std::max<std::size_t>(to.segment_count(), 1); ++j) {
                auto [c, d] = to.segment_count()
                                  ? to.segment(j)
                                  : std::pair{to.vertices()[0], to.vertices()[0]};
                best = std::min(best, point_segment_distance(p, c, d));
                if (best == 0.0) break;
            }
            worst = std::max(worst, best);
        }
    }
    return worst;
}

}  // namespace detail

// Symmetric Hausdorff distance between two polylines, measured point-to-segment
// with a few samples per segment.
inline double polyline_hausdorff(const Contour& a, const Contour& b,
                                 int samples_per_segment = 4) {
    return std::max(detail::directed_polyline_distance(a, b, samples_per_segment),
                    detail::directed_polyline_distance(b, a, samples_per_segment));
}

}  // namespace abtk
