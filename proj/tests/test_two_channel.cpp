// Two-channel electric interferometer checks.

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "abtk/two_channel.hpp"

using namespace abtk;

namespace {

TwoChannelConfig base_cfg() {
    TwoChannelConfig cfg;
    cfg.channel = {60.0, 768, 0.1};
    // 6 sigma clear of the trimmed interior ends: the support check allows
    // at most 1e-6 of probability outside during the pulse window
    cfg.packet = {-12.0, 3.0, 2.0, 0.0};
    cfg.integrator = {0.005, 800};
    cfg.particle = {1.0, 1.0};
    cfg.chi_samples = 2048;
    return cfg;
}

}  // namespace

TEST_CASE("identical pulses give zero extracted phase") {
    const TubePulse p(0.4, 0.2, 2.2, 0.1);
    const ElectricRunResult r = electric_two_path_run(base_cfg(), p, p);
    CHECK(std::abs(r.extracted_phase) < 0.01);
    CHECK(std::abs(r.predicted_phase) < 1e-12);
}

TEST_CASE("extracted phase equals the pulse integral difference") {
    const TubePulse p1(0.0, 0.2, 2.2, 0.1);
    const TubePulse p2(0.5, 0.2, 2.2, 0.1);
    const ElectricRunResult r = electric_two_path_run(base_cfg(), p1, p2);
    // 0.5 * (2 + 0.1): plateau plus two half-ramp contributions
    CHECK(std::abs(r.predicted_phase - 1.05) < 1e-12);
    CHECK(std::abs(r.extracted_phase - 1.05) < 0.0105);
}

TEST_CASE("doubling the charge doubles the extracted phase") {
    const TubePulse p1(0.0, 0.2, 2.2, 0.1);
    const TubePulse p2(0.3, 0.2, 2.2, 0.1);
    TwoChannelConfig cfg = base_cfg();
    const double single = electric_two_path_run(cfg, p1, p2).extracted_phase;
    cfg.particle.charge = 2.0;
    const double doubled = electric_two_path_run(cfg, p1, p2).extracted_phase;
    CHECK(std::abs(doubled - 2.0 * single) < 0.01 * std::abs(2.0 * single));
}

TEST_CASE("both channels conserve their norm") {
    const TubePulse p1(0.2, 0.3, 1.7, 0.2);
    const TubePulse p2(-0.6, 0.3, 1.7, 0.2);
    const ElectricRunResult r = electric_two_path_run(base_cfg(), p1, p2);
    CHECK(std::abs(r.final_norm1 - 1.0) < 1e-8);
    CHECK(std::abs(r.final_norm2 - 1.0) < 1e-8);
}

TEST_CASE("intensity curve is sampled over the full readout circle") {
    const TubePulse p1(0.0, 0.2, 2.2, 0.1);
    const TubePulse p2(0.5, 0.2, 2.2, 0.1);
    const ElectricRunResult r = electric_two_path_run(base_cfg(), p1, p2);
    REQUIRE(r.chi.size() == 2048);
    CHECK(r.chi.front() == doctest::Approx(-std::numbers::pi));
    for (double v : r.intensity) CHECK(v >= 0.0);
    // the curve is sinusoidal with full contrast when the channels stay aligned
    double mx = r.intensity[0], mn = r.intensity[0];
    for (double v : r.intensity) {
        mx = std::max(mx, v);
        mn = std::min(mn, v);
    }
    CHECK((mx - mn) / (mx + mn) > 0.9);
}

TEST_CASE("pulse support must sit inside the simulated time range") {
    const TubePulse early1(0.0, 0.05, 2.0, 0.1);  // rise begins before t = 0
    const TubePulse early2(0.5, 0.05, 2.0, 0.1);
    CHECK_THROWS_AS(electric_two_path_run(base_cfg(), early1, early2), experiment_error);
}

TEST_CASE("pulses overlapping the packet's exit invalidate the run") {
    TwoChannelConfig cfg = base_cfg();
    cfg.packet.center = 18.0;  // close to the trimmed interior's edge
    cfg.integrator.steps = 800;
    const TubePulse late1(0.0, 2.5, 3.4, 0.1);
    const TubePulse late2(0.5, 2.5, 3.4, 0.1);
    CHECK_THROWS_AS(electric_two_path_run(cfg, late1, late2), experiment_error);
}

TEST_CASE("randomized pulse pairs reproduce their closed-form phase") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> peak(-0.8, 0.8);
    std::uniform_real_distribution<double> ramp(0.05, 0.3);
    std::uniform_real_distribution<double> t_on(0.35, 0.8);
    std::uniform_real_distribution<double> t_len(1.0, 2.0);
    int accepted = 0;
    while (accepted < 5) {
        const double on = t_on(rng);
        const double off = on + t_len(rng);
        const TubePulse p1(peak(rng), on, off, ramp(rng));
        const TubePulse p2(peak(rng), on, off, ramp(rng));
        const double predicted = electric_phase(p2, on - 1.0, off + 1.0, 1.0) -
                                 electric_phase(p1, on - 1.0, off + 1.0, 1.0);
        if (std::abs(predicted) < 0.3 || std::abs(predicted) > 2.8) continue;
        ++accepted;
        const ElectricRunResult r = electric_two_path_run(base_cfg(), p1, p2);
        CHECK(std::abs(r.extracted_phase - predicted) < 0.01 * std::abs(predicted));
    }
}

TEST_CASE("two-channel configuration is validated") {
    TwoChannelConfig cfg = base_cfg();
    SUBCASE("points") {
        cfg.channel.points = 32;
        CHECK_THROWS_AS(cfg.validate(), config_error);
    }
    SUBCASE("packet width") {
        cfg.packet.sigma = 0.1;
        CHECK_THROWS_AS(cfg.validate(), config_error);
    }
    SUBCASE("transport") {
        cfg.integrator.dt = 0.2;
        CHECK_THROWS_AS(cfg.validate(), config_error);
    }
    SUBCASE("margin") {
        cfg.channel.interior_margin = 0.7;
        CHECK_THROWS_AS(cfg.validate(), config_error);
    }
}
