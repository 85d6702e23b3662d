#pragma once

// Parametric surface patches and the surface integral of the curvature
// 2-form, plus the loop-integral vs surface-integral consistency residual.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "abtk/errors.hpp"
#include "abtk/gauge.hpp"
#include "abtk/geometry.hpp"
#include "abtk/quadrature.hpp"

namespace abtk {

// A smooth map [0,1]^2 -> R^4 with its induced boundary contour and a starting
// tensor mesh resolution. Factories keep the boundary consistent with the map
// by construction.
class SurfacePatch {
  public:
    using Map = std::function<SpaceTimePoint(double, double)>;

    SurfacePatch(Map map, Contour boundary, int n_u, int n_v)
        : map_(std::move(map)), boundary_(std::move(boundary)), n_u_(n_u), n_v_(n_v) {
        if (!map_) throw std::invalid_argument("surface patch needs a parametric map");
        if (n_u_ < 8 || n_v_ < 8)
            throw std::invalid_argument("surface mesh resolution must be >= 8x8");
    }

    // Flat disk in the x1-x2 plane: map (u,v) -> center + u*radius*(cos, sin).
    // The stored boundary is the u=1 rim sampled as an n_v-gon.
    static SurfacePatch disk(const std::array<double, 3>& center, double radius,
                             double time, int n_u = 16, int n_v = 64) {
        if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be > 0");
        Map map = [center, radius, time](double u, double v) {
            const double phi = 2.0 * std::numbers::pi * v;
            return SpaceTimePoint{time,
                                  {center[0] + u * radius * std::cos(phi),
                                   center[1] + u * radius * std::sin(phi), center[2]}};
        };
        return SurfacePatch(std::move(map), Contour::circle(center, radius, time, n_v),
                            n_u, n_v);
    }

    // Flat annulus in the x1-x2 plane. The stored boundary is the outer rim.
    static SurfacePatch annulus(const std::array<double, 3>& center, double r_inner,
                                double r_outer, double time, int n_u = 16, int n_v = 64) {
        if (!(0.0 < r_inner && r_inner < r_outer))
            throw std::invalid_argument("annulus needs 0 < r_inner < r_outer");
        Map map = [center, r_inner, r_outer, time](double u, double v) {
            const double r = r_inner + u * (r_outer - r_inner);
            const double phi = 2.0 * std::numbers::pi * v;
            return SpaceTimePoint{time,
                                  {center[0] + r * std::cos(phi),
                                   center[1] + r * std::sin(phi), center[2]}};
        };
        return SurfacePatch(std::move(map), Contour::circle(center, r_outer, time, n_v),
                            n_u, n_v);
    }

    // Star-shaped spanning surface of a closed contour, coned from an apex:
    // rays from the apex sweep the piecewise-linear boundary, so the u=1 edge
    // reproduces the contour exactly. An optional seam radius pins a fixed
    // parameter line (u = 1/2) onto the sphere |p - apex| = seam, so that a
    // radial discontinuity of the integrand falls on mesh cell boundaries.
    // The v mesh is aligned with the contour's vertices for the same reason.
    static SurfacePatch cone_over(const Contour& contour, const SpaceTimePoint& apex,
                                  std::optional<double> seam_radius = std::nullopt,
                                  int n_u = 16) {
        if (!contour.closed())
            throw std::invalid_argument("cone_over needs a closed contour");
        if (contour.is_point())
            throw std::invalid_argument("cone_over needs a non-degenerate contour");
        const auto vertices = contour.vertices();
        const std::size_t nseg = contour.segment_count();
        if (seam_radius) {
            if (!(*seam_radius > 0.0))
                throw std::invalid_argument("seam radius must be > 0");
            for (const auto& p : vertices) {
                if (norm4(p - apex) <= *seam_radius)
                    throw std::invalid_argument("contour must lie outside the seam radius");
            }
            if (n_u % 2 != 0) ++n_u;  // keep the seam on a cell boundary
        }
        Map map = [vertices, nseg, apex, seam_radius](double u, double v) {
            // piecewise-linear boundary point at normalized parameter v
            double s = v - std::floor(v);
            const double scaled = s * static_cast<double>(nseg);
            std::size_t idx = static_cast<std::size_t>(scaled);
            if (idx >= nseg) idx = nseg - 1;
            const double frac = scaled - static_cast<double>(idx);
            const SpaceTimePoint a = vertices[idx];
            const SpaceTimePoint b = vertices[(idx + 1) % vertices.size()];
            const SpaceTimePoint rim = a + frac * (b - a);
            if (!seam_radius) return apex + u * (rim - apex);
            const SpaceTimePoint ray = rim - apex;
            const double rho = norm4(ray);
            const double radius = (u <= 0.5) ? (2.0 * u * *seam_radius)
                                             : (*seam_radius + (2.0 * u - 1.0) * (rho - *seam_radius));
            return apex + (radius / rho) * ray;
        };
        // v cells must stay aligned with the contour vertices under doubling
        int n_v = static_cast<int>(nseg);
        while (n_v < 8) n_v *= 2;
        return SurfacePatch(std::move(map), contour, n_u, n_v);
    }

    SpaceTimePoint at(double u, double v) const { return map_(u, v); }
    const Contour& boundary() const { return boundary_; }
    int mesh_u() const { return n_u_; }
    int mesh_v() const { return n_v_; }

  private:
    Map map_;
    Contour boundary_;
    int n_u_;
    int n_v_;
};

namespace detail {

struct SurfaceTangents {
    std::array<double, 4> du;
    std::array<double, 4> dv;
};

inline SurfaceTangents surface_tangents(const SurfacePatch& s, double u, double v,
                                        double hp) {
    const SpaceTimePoint pu1 = s.at(u + hp, v);
    const SpaceTimePoint pu0 = s.at(u - hp, v);
    const SpaceTimePoint pv1 = s.at(u, v + hp);
    const SpaceTimePoint pv0 = s.at(u, v - hp);
    SurfaceTangents t{};
    const auto au1 = pu1.as_array(), au0 = pu0.as_array();
    const auto av1 = pv1.as_array(), av0 = pv0.as_array();
    for (std::size_t c = 0; c < 4; ++c) {
        t.du[c] = (au1[c] - au0[c]) / (2.0 * hp);
        t.dv[c] = (av1[c] - av0[c]) / (2.0 * hp);
    }
    return t;
}

inline double tangent_norm(const std::array<double, 4>& a) {
    return std::sqrt(dot4(a, a));
}

inline double wedge_norm(const std::array<double, 4>& u, const std::array<double, 4>& v) {
    double s = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = a + 1; b < 4; ++b) {
            const double w = u[a] * v[b] - u[b] * v[a];
            s += w * w;
        }
    }
    return std::sqrt(s);
}

// One composite pass over the mesh: per-cell tensor Gauss-Legendre of the
// pulled-back 2-form. Also flags cells whose area element vanishes at every
// node on the coarsest pass.
inline double flux_pass(const GaugePotential& pot, const SurfacePatch& s, double h,
                        int cells_u, int cells_v, int order, bool check_degenerate) {
    const GaussLegendre& gl = GaussLegendre::rule(order);
    const double hp = 1e-6;  // parameter-space step for the map tangents
    const double du = 1.0 / cells_u;
    const double dv = 1.0 / cells_v;
    double total = 0.0;
    for (int cu = 0; cu < cells_u; ++cu) {
        for (int cv = 0; cv < cells_v; ++cv) {
            double cell = 0.0;
            double max_wedge = 0.0;
            double max_tangent = 0.0;
            for (std::size_t ku = 0; ku < gl.nodes().size(); ++ku) {
                const double u = (cu + 0.5 * (gl.nodes()[ku] + 1.0)) * du;
                for (std::size_t kv = 0; kv < gl.nodes().size(); ++kv) {
                    const double v = (cv + 0.5 * (gl.nodes()[kv] + 1.0)) * dv;
                    const SurfaceTangents tan = surface_tangents(s, u, v, hp);
                    const FieldStrength f = field_strength(pot, s.at(u, v), h);
                    const double w = 0.25 * gl.weights()[ku] * gl.weights()[kv] * du * dv;
                    cell += w * f.wedge(tan.du, tan.dv);
                    if (check_degenerate) {
                        max_wedge = std::max(max_wedge, wedge_norm(tan.du, tan.dv));
                        max_tangent = std::max(max_tangent,
                                               tangent_norm(tan.du) * tangent_norm(tan.dv));
                    }
                }
            }
            if (check_degenerate && max_wedge <= 1e-12 * std::max(max_tangent, 1e-30)) {
                throw numeric_error("surface parametrization is degenerate over a full cell");
            }
            total += cell;
        }
    }
    return total;
}

}  // namespace detail

// Flux of the curvature through a patch: e * (1/2) \iint dx^a ^ dx^b F_ab,
// evaluated as tensor-product quadrature of the pulled-back 2-form. The mesh
// is doubled until successive composite estimates differ by less than
// spec.tolerance; failure to settle raises numeric_error with the residual.
inline double flux_surface(const GaugePotential& pot, const SurfacePatch& s, double h,
                           const QuadratureSpec& spec = {}, double charge = 1.0,
                           double* residual = nullptr) {
    spec.validate();
    constexpr int order = 4;
    int cu = s.mesh_u();
    int cv = s.mesh_v();
    double prev = detail::flux_pass(pot, s, h, cu, cv, order, true);
    double last_diff = std::numeric_limits<double>::infinity();
    for (int level = 0; level < 8; ++level) {
        cu *= 2;
        cv *= 2;
        const double cur = detail::flux_pass(pot, s, h, cu, cv, order, false);
        last_diff = std::abs(cur - prev);
        if (last_diff < spec.tolerance) {
            if (residual) *residual = last_diff;
            return charge * cur;
        }
        prev = cur;
    }
    throw numeric_error("surface quadrature did not converge", last_diff);
}

// Relative disagreement between the loop integral of the potential and the
// flux of its curvature through a spanning surface:
// |theta - flux| / max(1, |flux|). The surface boundary must trace the given
// contour within vertex_tol.
inline double stokes_residual(const GaugePotential& pot, const Contour& contour,
                              const SurfacePatch& s, const QuadratureSpec& spec = {},
                              double charge = 1.0, double h = 1e-4,
                              double vertex_tol = 1e-6) {
    const double dist = polyline_hausdorff(contour, s.boundary());
    if (dist > vertex_tol)
        throw boundary_mismatch_error("surface boundary does not match the contour", dist);
    const double theta = holonomy_phase(pot, contour, spec, charge);
    const double flux = flux_surface(pot, s, h, spec, charge);
    return std::abs(theta - flux) / std::max(1.0, std::abs(flux));
}

}  // namespace abtk
