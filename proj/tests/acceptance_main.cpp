// Acceptance suite: every gate the toolkit must clear, one pass/fail line
// each. Exits with the number of failed gates.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "abtk/abtk.hpp"

using namespace abtk;

namespace {

constexpr double pi = std::numbers::pi;
int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("[%s] criterion %2d: %s  (%s, %.1f s)\n", pass ? "PASS" : "FAIL", number,
                name.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

void run(int number, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        const auto result = body();
        pass = result.first;
        detail = result.second;
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration_cast<std::chrono::duration<double>>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    report(number, name, pass, detail, seconds);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// star-shaped polygon with two radial harmonics, radius within r0 +- 0.4
Contour star_polygon(std::mt19937& rng, double r0, int vertices) {
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
        v.push_back({0.0, {r * std::cos(th), r * std::sin(th), 0.0}});
    }
    return Contour::closed_polygon(std::move(v));
}

GaugeFunction random_gauge_function(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> amp(-0.4, 0.4);
    std::uniform_real_distribution<double> freq(-1.2, 1.2);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
    struct Term {
        std::array<double, 4> k;
        double c, ph;
    };
    std::vector<Term> terms;
    for (int t = 0; t < 3; ++t)
        terms.push_back({{freq(rng), freq(rng), freq(rng), freq(rng)}, amp(rng), phase(rng)});
    return GaugeFunction{[terms](const SpaceTimePoint& p) {
        double v = 0.0;
        for (const auto& term : terms) v += term.c * std::sin(dot4(term.k, p.as_array()) + term.ph);
        return v;
    }};
}

ExperimentConfig scan_config(double flux, int n, double dt, int steps) {
    ExperimentConfig cfg;
    cfg.grid = Grid2D::centered(28.0, 28.0, n, n);
    cfg.packet = {{-8.0, 0.0}, {10.0, 0.0}, 1.2, 0.0};
    cfg.solenoid = FiniteSolenoid(0.8, flux, {1.0, 0.0});
    cfg.barrier = {true, 1.0, 2.0, 4.0, 0.8, 1e4};
    cfg.shield = {true, 1.2, 1e4};
    cfg.absorber = {true, 0.1, 60.0};
    cfg.integrator = {dt, steps};
    cfg.detector = {8.0, DetectorSpec::Mode::time_integrated};
    cfg.particle = {1.0, 1.0};
    return cfg;
}

ScreenProfile synthetic_profile(double shift, double lambda, int n, double length) {
    ScreenProfile p;
    for (int j = 0; j < n; ++j) {
        const double y = -0.5 * length + length * j / (n - 1);
        p.y.push_back(y);
        p.intensity.push_back(1.0 + std::cos(2.0 * pi * y / lambda - shift));
    }
    return p;
}

}  // namespace

int main() {
    std::printf("acceptance suite, toolkit version %s\n", version);

    run(1, "loop phase equals e*flux for the solenoid", [] {
        const Contour circle = Contour::circle({0.0, 0.0, 0.0}, 2.0, 0.0, 256);
        double worst = 0.0;
        for (double flux : {0.3, 1.7, 2.0 * pi, 9.1}) {
            const GaugePotential pot = solenoid_potential(FiniteSolenoid(1.0, flux));
            worst = std::max(worst, std::abs(holonomy_phase(pot, circle) - flux));
        }
        return std::make_pair(worst < 1e-9, "max |theta - flux| = " + fmt(worst) + " < 1e-9");
    });

    run(2, "loop integral matches surface flux on random pairs", [] {
        const FiniteSolenoid sol(1.0, 1.7);
        const GaugePotential pot = solenoid_potential(sol);
        std::mt19937 rng(2024);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const Contour c = star_polygon(rng, 2.0, 64);
            const SurfacePatch s =
                SurfacePatch::cone_over(c, SpaceTimePoint{0.0, {0.0, 0.0, 0.0}}, sol.radius);
            worst = std::max(worst, stokes_residual(pot, c, s));
        }
        return std::make_pair(worst < 1e-6, "max residual = " + fmt(worst) + " < 1e-6");
    });

    run(3, "holonomy is independent of the surrounding contour", [] {
        const GaugePotential pot = solenoid_potential(FiniteSolenoid(1.0, 1.7));
        const double a = holonomy_phase(pot, Contour::circle({0.0, 0.0, 0.0}, 2.0, 0.0, 256));
        const double b =
            holonomy_phase(pot, Contour::rectangle({0.0, 0.0, 0.0}, 3.0, 3.0, 0.0, 32));
        const double delta = std::abs(a - b);
        return std::make_pair(delta < 1e-8, "|circle - square| = " + fmt(delta) + " < 1e-8");
    });

    run(4, "closed-loop holonomy is gauge invariant", [] {
        const GaugePotential pot = solenoid_potential(FiniteSolenoid(1.0, 1.7));
        const Contour circle = Contour::circle({0.0, 0.0, 0.0}, 2.0, 0.0, 128);
        const double before = holonomy_phase(pot, circle);
        double worst = 0.0;
        for (unsigned seed = 1; seed <= 50; ++seed) {
            const GaugePotential transformed =
                gauge_transform(pot, random_gauge_function(seed), 1.0);
            worst = std::max(worst, std::abs(holonomy_phase(transformed, circle) - before));
        }
        return std::make_pair(worst < 1e-9, "max |delta theta| = " + fmt(worst) + " < 1e-9");
    });

    run(5, "contracting loops trace the enclosed flux to a point", [] {
        const GaugePotential pot = solenoid_potential(FiniteSolenoid(1.0, 2.0 * pi));
        auto family = [](double lambda) {
            return Contour::circle({0.0, 0.0, 0.0}, 2.0 * (1.0 - lambda), 0.0, 16384);
        };
        const auto trace = contract_holonomy_trace(pot, family, 32);
        double worst = 0.0;
        for (const auto& [lambda, theta] : trace) {
            const double r = 2.0 * (1.0 - lambda);
            worst = std::max(worst, std::abs(theta - 2.0 * pi * std::min(1.0, r * r)));
        }
        return std::make_pair(worst < 1e-6, "max law deviation = " + fmt(worst) + " < 1e-6");
    });

    run(6, "lattice evolution is exactly gauge covariant", [] {
        ExperimentConfig cfg = scan_config(2.0, 256, 1e-3, 500);
        cfg.barrier.enabled = false;
        cfg.absorber.enabled = false;
        cfg.packet.center = {-6.0, 0.0};
        cfg.packet.momentum = {6.0, 0.0};
        const GaugePotential pot = solenoid_potential(*cfg.solenoid);
        const GaugeFunction a{[](const SpaceTimePoint& p) {
            return 0.4 * std::sin(2.0 * pi * p.x[0] / 28.0) * std::cos(2.0 * pi * p.x[1] / 28.0) +
                   0.2 * std::cos(2.0 * pi * p.x[0] / 28.0 + 1.0);
        }};
        WaveState plain = init_gaussian(cfg.grid, cfg.packet.center, cfg.packet.momentum,
                                        cfg.packet.sigma, 0.0);
        WaveState phased = plain;
        for (int i = 0; i < cfg.grid.nx; ++i) {
            for (int j = 0; j < cfg.grid.ny; ++j) {
                const double val =
                    a(SpaceTimePoint{0.0, {cfg.grid.x(i), cfg.grid.y(j), 0.0}});
                phased.amp[cfg.grid.index(i, j)] *= std::polar(1.0, val);
            }
        }
        const WaveState ref = evolve(std::move(plain), cfg, pot);
        const WaveState alt = evolve(std::move(phased), cfg, gauge_transform(pot, a, 1.0));
        double worst = 0.0;
        for (std::size_t k = 0; k < ref.amp.size(); ++k) {
            worst = std::max(worst, std::abs(std::norm(ref.amp[k]) - std::norm(alt.amp[k])));
        }
        return std::make_pair(worst < 1e-10,
                              "max pointwise |psi|^2 gap = " + fmt(worst) + " < 1e-10");
    });

    // criteria 7 and 8 share one flux scan at production scale
    std::vector<ScreenProfile> scan_profiles;
    run(7, "fringe shift versus flux fits the unit slope", [&scan_profiles] {
        scan_profiles.push_back(
            magnetic_double_slit_run(scan_config(0.0, 384, 1e-3, 2600)).profile);
        for (int k = 1; k <= 5; ++k) {
            const double flux = 2.0 * pi * k / 5.0;
            scan_profiles.push_back(
                magnetic_double_slit_run(scan_config(flux, 384, 1e-3, 2600)).profile);
        }
        const PhaseScanFit fit = phase_linearity_scan(scan_profiles, 1.0);
        const bool pass = std::abs(fit.slope - 1.0) <= 0.05 && std::abs(fit.intercept) < 0.05;
        return std::make_pair(pass, "slope = " + fmt(fit.slope) +
                                        " (1 +- 0.05), intercept = " + fmt(fit.intercept) +
                                        " (< 0.05)");
    });

    run(8, "profiles repeat after one flux quantum", [&scan_profiles] {
        if (scan_profiles.size() < 6)
            return std::make_pair(false, std::string("scan unavailable"));
        const ScreenProfile& ref = scan_profiles.front();   // flux 0
        const ScreenProfile& turn = scan_profiles.back();   // flux 2 pi
        double diff2 = 0.0, norm2 = 0.0;
        for (std::size_t j = 0; j < ref.intensity.size(); ++j) {
            diff2 += (turn.intensity[j] - ref.intensity[j]) * (turn.intensity[j] - ref.intensity[j]);
            norm2 += ref.intensity[j] * ref.intensity[j];
        }
        const double rel = std::sqrt(diff2 / norm2);
        return std::make_pair(rel < 0.01, "relative rms gap = " + fmt(rel) + " < 0.01");
    });

    run(9, "two-channel phase equals the pulse integral", [] {
        TwoChannelConfig cfg;
        cfg.channel = {60.0, 768, 0.1};
        cfg.packet = {-12.0, 3.0, 2.0, 0.0};
        cfg.integrator = {0.005, 800};
        cfg.particle = {1.0, 1.0};
        std::mt19937 rng(99);
        std::uniform_real_distribution<double> peak(-0.8, 0.8);
        std::uniform_real_distribution<double> ramp(0.05, 0.3);
        std::uniform_real_distribution<double> t_on(0.35, 0.8);
        std::uniform_real_distribution<double> t_len(1.0, 2.0);
        double worst_rel = 0.0;
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
            const ElectricRunResult r = electric_two_path_run(cfg, p1, p2);
            worst_rel = std::max(worst_rel,
                                 std::abs(r.extracted_phase - predicted) / std::abs(predicted));
        }
        return std::make_pair(worst_rel < 0.01,
                              "max relative error = " + fmt(worst_rel) + " < 0.01");
    });

    run(10, "norm is conserved without the absorber", [] {
        ExperimentConfig cfg;
        cfg.grid = Grid2D::centered(20.0, 20.0, 128, 128);
        cfg.packet = {{-3.0, 0.0}, {1.0, 0.5}, 1.5, 0.0};
        cfg.solenoid = FiniteSolenoid(0.8, 2.3, {3.0, 0.0});
        cfg.absorber.enabled = false;
        cfg.integrator = {0.002, 1000};
        WaveState s = init_gaussian(cfg.grid, cfg.packet.center, cfg.packet.momentum,
                                    cfg.packet.sigma, 0.0);
        s = evolve(std::move(s), cfg);
        const double drift = std::abs(s.norm() - 1.0);
        return std::make_pair(drift < 1e-10,
                              "norm drift over 1000 steps = " + fmt(drift) + " < 1e-10");
    });

    run(11, "synthetic fringe shifts are recovered", [] {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> shift(-pi, pi);
        const ScreenProfile ref = synthetic_profile(0.0, 0.86, 512, 20.0);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            double s = shift(rng);
            if (s <= -pi) s = pi;  // uniform over (-pi, pi]
            const ScreenProfile moved = synthetic_profile(s, 0.86, 512, 20.0);
            const double extracted = fringe_shift(moved, ref);
            worst = std::max(worst, std::abs(reduce_phase(extracted - s)));
        }
        return std::make_pair(worst < 1e-3, "max |error| = " + fmt(worst) + " < 1e-3");
    });

    if (failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criteria FAILED\n", failures);
    }
    return failures;
}
