// Surface-integral checks: curvature flux through patches and the
// loop-vs-surface consistency residual.

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "abtk/potentials.hpp"
#include "abtk/surface.hpp"
#include "test_helpers.hpp"

using namespace abtk;

namespace {
constexpr double pi = std::numbers::pi;

// Star-shaped polygon around the origin with a few radial harmonics; stays
// within [r0 - 0.4, r0 + 0.4].
Contour star_polygon(unsigned seed, double r0, int vertices, double time = 0.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> amp(-0.2, 0.2);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
    const std::array<double, 2> a{amp(rng), amp(rng)};
    const std::array<double, 2> ph{phase(rng), phase(rng)};
    std::vector<SpaceTimePoint> v;
    for (int j = 0; j < vertices; ++j) {
        const double th = 2.0 * pi * j / vertices;
        double r = r0;
        for (int k = 0; k < 2; ++k)
            r += a[static_cast<std::size_t>(k)] * std::cos((k + 1) * th + ph[static_cast<std::size_t>(k)]);
        v.push_back({time, {r * std::cos(th), r * std::sin(th), 0.0}});
    }
    return Contour::closed_polygon(std::move(v));
}
}  // namespace

TEST_CASE("flux through a spanning disk equals the enclosed flux") {
    const FiniteSolenoid sol(1.0, 1.7);
    const GaugePotential pot = solenoid_potential(sol);
    const SurfacePatch disk = SurfacePatch::disk({0.0, 0.0, 0.0}, 2.0, 0.0);
    CHECK(std::abs(flux_surface(pot, disk, 1e-4) - 1.7) < 1e-6);
}

TEST_CASE("flux through a field-free exterior patch vanishes") {
    const FiniteSolenoid sol(1.0, 1.7);
    const GaugePotential pot = solenoid_potential(sol);
    const SurfacePatch ring = SurfacePatch::annulus({0.0, 0.0, 0.0}, 1.2, 3.0, 0.0);
    CHECK(std::abs(flux_surface(pot, ring, 1e-4)) < 1e-10);
}

TEST_CASE("flux through a disk inside the solenoid scales with its area") {
    const FiniteSolenoid sol(1.0, 1.7);
    const GaugePotential pot = solenoid_potential(sol);
    const SurfacePatch disk = SurfacePatch::disk({0.0, 0.0, 0.0}, 0.5, 0.0);
    CHECK(std::abs(flux_surface(pot, disk, 1e-4) - 0.425) < 1e-6);
}

TEST_CASE("loop integral and spanning-surface flux agree") {
    const FiniteSolenoid sol(1.0, 1.7);
    const GaugePotential pot = solenoid_potential(sol);
    const Contour circle = Contour::circle({0.0, 0.0, 0.0}, 2.0, 0.0, 128);
    const SurfacePatch span =
        SurfacePatch::cone_over(circle, SpaceTimePoint{0.0, {0.0, 0.0, 0.0}}, sol.radius);
    CHECK(stokes_residual(pot, circle, span) < 1e-6);
}

TEST_CASE("loop-surface residual of the zero potential is zero") {
    const Contour circle = Contour::circle({0.0, 0.0, 0.0}, 1.5, 0.0, 64);
    const SurfacePatch span =
        SurfacePatch::cone_over(circle, SpaceTimePoint{0.0, {0.0, 0.0, 0.0}});
    CHECK(stokes_residual(GaugePotential::zero(), circle, span) == 0.0);
}

TEST_CASE("holonomy does not depend on the contour around the solenoid") {
    const FiniteSolenoid sol(1.0, 1.7);
    const GaugePotential pot = solenoid_potential(sol);
    const double theta_circle =
        holonomy_phase(pot, Contour::circle({0.0, 0.0, 0.0}, 2.0, 0.0, 256));
    const double theta_square =
        holonomy_phase(pot, Contour::rectangle({0.0, 0.0, 0.0}, 3.0, 3.0, 0.0, 32));
    CHECK(std::abs(theta_circle - theta_square) < 1e-8);
}

TEST_CASE("randomized star contours keep the residual small") {
    const FiniteSolenoid sol(1.0, 1.7);
    const GaugePotential pot = solenoid_potential(sol);
    for (unsigned seed = 1; seed <= 4; ++seed) {
        const Contour c = star_polygon(seed, 2.0, 64);
        const SurfacePatch span =
            SurfacePatch::cone_over(c, SpaceTimePoint{0.0, {0.0, 0.0, 0.0}}, sol.radius);
        CHECK(stokes_residual(pot, c, span) < 1e-6);
    }
}

TEST_CASE("mismatched boundary is reported with its distance") {
    const FiniteSolenoid sol(1.0, 1.7);
    const GaugePotential pot = solenoid_potential(sol);
    const Contour wrong = Contour::circle({0.0, 0.0, 0.0}, 2.5, 0.0, 128);
    const SurfacePatch disk = SurfacePatch::disk({0.0, 0.0, 0.0}, 2.0, 0.0, 16, 128);
    try {
        stokes_residual(pot, wrong, disk);
        FAIL("expected boundary_mismatch_error");
    } catch (const boundary_mismatch_error& e) {
        CHECK(e.hausdorff_distance() == doctest::Approx(0.5).epsilon(0.01));
    }
}

TEST_CASE("degenerate parametrizations are rejected") {
    const SurfacePatch collapsed(
        [](double, double) { return SpaceTimePoint{0.0, {1.0, 1.0, 0.0}}; },
        Contour::circle({1.0, 1.0, 0.0}, 0.0, 0.0, 16), 8, 8);
    CHECK_THROWS_AS(flux_surface(GaugePotential::zero(), collapsed, 1e-4), numeric_error);
}

TEST_CASE("surface mesh resolution is enforced") {
    CHECK_THROWS_AS(SurfacePatch::disk({0.0, 0.0, 0.0}, 1.0, 0.0, 4, 64),
                    std::invalid_argument);
}

TEST_CASE("cone patches require the contour outside the seam") {
    const Contour small = Contour::circle({0.0, 0.0, 0.0}, 0.5, 0.0, 64);
    CHECK_THROWS_AS(
        SurfacePatch::cone_over(small, SpaceTimePoint{0.0, {0.0, 0.0, 0.0}}, 1.0),
        std::invalid_argument);
}

TEST_CASE("flux matches holonomy for a smooth random potential") {
    const GaugePotential pot = abtk_test::random_fourier_potential(51, 2, 0.3, 0.8);
    const Contour circle = Contour::circle({0.2, -0.1, 0.0}, 1.4, 0.0, 96);
    const SurfacePatch span =
        SurfacePatch::cone_over(circle, SpaceTimePoint{0.0, {0.2, -0.1, 0.0}});
    CHECK(stokes_residual(pot, circle, span) < 1e-6);
}
