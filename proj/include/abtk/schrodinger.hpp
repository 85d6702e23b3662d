#pragma once

// Gauge-covariant time-dependent Schrödinger evolution on a 2D grid:
// Crank-Nicolson with per-axis splitting, hopping terms carrying link phases
// built from the gauge potential, a multiplicative boundary absorber, and the
// double-slit-plus-solenoid interference experiment on top of it.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abtk/analysis.hpp"
#include "abtk/errors.hpp"
#include "abtk/gauge.hpp"
#include "abtk/grid.hpp"
#include "abtk/potentials.hpp"
#include "abtk/quadrature.hpp"
#include "abtk/units.hpp"

namespace abtk {

// Complex amplitude field on a grid at time t, with the probability removed
// by the absorber accounted for so that norm() + absorbed stays at 1.
struct WaveState {
    Grid2D grid;
    std::vector<std::complex<double>> amp;
    double t = 0.0;
    double absorbed = 0.0;

    double norm() const {
        double s = 0.0;
        for (const auto& a : amp) s += std::norm(a);
        return s * grid.dx() * grid.dy();
    }
};

// Unit factors U = exp(-i e \int_link A . dl) on every lattice edge, with the
// integral taken by 3-point Gauss quadrature along the edge. The Hamiltonian
// hops forward with conj(U) and backward with U, which keeps it Hermitian and
// makes a lattice gauge transformation an exact conjugation by node phases.
struct LinkPhases {
    int nx = 0;
    int ny = 0;
    std::vector<std::complex<double>> ux;  // (nx-1) * ny edges along x
    std::vector<std::complex<double>> uy;  // nx * (ny-1) edges along y

    std::size_t ix(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) +
               static_cast<std::size_t>(j);
    }
    std::size_t iy(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(ny - 1) +
               static_cast<std::size_t>(j);
    }

    static LinkPhases identity(const Grid2D& g) {
        LinkPhases l;
        l.nx = g.nx;
        l.ny = g.ny;
        l.ux.assign(static_cast<std::size_t>(g.nx - 1) * static_cast<std::size_t>(g.ny),
                    {1.0, 0.0});
        l.uy.assign(static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny - 1),
                    {1.0, 0.0});
        return l;
    }
};

inline LinkPhases peierls_links(const Grid2D& grid, const GaugePotential& pot, double time,
                                double charge) {
    LinkPhases links = LinkPhases::identity(grid);
    const GaussLegendre& gl = GaussLegendre::rule(3);
    const double dx = grid.dx();
    const double dy = grid.dy();
    for (int i = 0; i + 1 < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
            double integral = 0.0;
            for (std::size_t k = 0; k < 3; ++k) {
                const double s = 0.5 * (gl.nodes()[k] + 1.0);
                const SpaceTimePoint p{time, {grid.x(i) + s * dx, grid.y(j), 0.0}};
                integral += 0.5 * gl.weights()[k] * pot(p)[1] * dx;
            }
            links.ux[links.ix(i, j)] = std::polar(1.0, -charge * integral);
        }
    }
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j + 1 < grid.ny; ++j) {
            double integral = 0.0;
            for (std::size_t k = 0; k < 3; ++k) {
                const double s = 0.5 * (gl.nodes()[k] + 1.0);
                const SpaceTimePoint p{time, {grid.x(i), grid.y(j) + s * dy, 0.0}};
                integral += 0.5 * gl.weights()[k] * pot(p)[2] * dy;
            }
            links.uy[links.iy(i, j)] = std::polar(1.0, -charge * integral);
        }
    }
    return links;
}

struct GaussianPacket2D {
    std::array<double, 2> center{0.0, 0.0};
    std::array<double, 2> momentum{0.0, 0.0};
    double sigma = 1.0;
    double theta0 = 0.0;
};

struct BarrierSpec {
    bool enabled = false;
    double wall_x = 0.0;
    double thickness = 0.25;
    double slit_separation = 0.0;
    double slit_width = 0.0;  // zero closes both slits
    double amplitude = 1e4;
};

struct ShieldSpec {
    bool enabled = true;
    double radius_factor = 1.2;
    double amplitude = 1e4;
};

struct AbsorberSpec {
    bool enabled = true;
    double width_fraction = 0.1;  // per side, fraction of each extent
    double strength = 60.0;
};

struct IntegratorSpec {
    double dt = 1e-3;
    int steps = 100;
};

struct DetectorSpec {
    enum class Mode { time_integrated, final_snapshot };
    double screen_x = 0.0;
    Mode mode = Mode::time_integrated;
};

// Full description of one 2D interferometry run.
struct ExperimentConfig {
    Grid2D grid;
    GaussianPacket2D packet;
    std::optional<FiniteSolenoid> solenoid;
    BarrierSpec barrier;
    ShieldSpec shield;
    AbsorberSpec absorber;
    IntegratorSpec integrator;
    DetectorSpec detector;
    Units particle;

    void validate() const {
        grid.validate();
        if (!(integrator.dt > 0.0)) throw config_error("time step must be > 0");
        if (integrator.steps < 1) throw config_error("step count must be >= 1");
        if (!(particle.mass > 0.0)) throw config_error("mass must be > 0");
        const double dmax = std::max(grid.dx(), grid.dy());
        if (!(packet.sigma > 2.0 * dmax))
            throw config_error("packet width must exceed twice the grid spacing");
        const double speed = std::hypot(packet.momentum[0], packet.momentum[1]) / particle.mass;
        if (!(speed * integrator.dt < std::min(grid.dx(), grid.dy())))
            throw config_error("packet transport per step must stay below one cell");
        if (absorber.enabled) {
            if (!(absorber.width_fraction > 0.0 && absorber.width_fraction <= 0.45))
                throw config_error("absorber width fraction must lie in (0, 0.45]");
            if (!(absorber.strength >= 0.0)) throw config_error("absorber strength must be >= 0");
        }
        if (barrier.enabled) {
            if (!(barrier.thickness > 0.0)) throw config_error("wall thickness must be > 0");
            if (!(barrier.amplitude > 0.0)) throw config_error("wall amplitude must be > 0");
            if (barrier.slit_width < 0.0 || barrier.slit_separation < 0.0)
                throw config_error("slit geometry must be non-negative");
        }
    }
};

// Normalized Gaussian packet exp(-|x-c|^2 / 4 sigma^2 + i (k.x + theta0)),
// with the discrete norm scaled to exactly one.
inline WaveState init_gaussian(const Grid2D& grid, const std::array<double, 2>& center,
                               const std::array<double, 2>& momentum, double sigma,
                               double theta0 = 0.0) {
    grid.validate();
    if (!(sigma > 2.0 * std::max(grid.dx(), grid.dy())))
        throw config_error("packet width must exceed twice the grid spacing");
    WaveState state;
    state.grid = grid;
    state.amp.resize(grid.size());
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
            const double rx = grid.x(i) - center[0];
            const double ry = grid.y(j) - center[1];
            const double envelope = std::exp(-(rx * rx + ry * ry) / (4.0 * sigma * sigma));
            const double phase =
                momentum[0] * grid.x(i) + momentum[1] * grid.y(j) + theta0;
            state.amp[grid.index(i, j)] = std::polar(envelope, phase);
        }
    }
    const double n = state.norm();
    if (!(n > 0.0)) throw config_error("packet vanished on the grid");
    const double scale = 1.0 / std::sqrt(n);
    for (auto& a : state.amp) a *= scale;
    return state;
}

namespace detail {

inline void solve_tridiagonal(const std::vector<std::complex<double>>& lower,
                              const std::vector<std::complex<double>>& diag,
                              const std::vector<std::complex<double>>& upper,
                              std::vector<std::complex<double>>& rhs,
                              std::vector<std::complex<double>>& scratch) {
    const std::size_t n = diag.size();
    scratch.resize(n);
    std::complex<double> pivot = diag[0];
    if (std::abs(pivot) < 1e-300)
        throw numeric_error("tridiagonal solve hit a vanishing pivot");
    rhs[0] /= pivot;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = upper[i - 1] / pivot;
        pivot = diag[i] - lower[i] * scratch[i];
        if (std::abs(pivot) < 1e-300)
            throw numeric_error("tridiagonal solve hit a vanishing pivot");
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= scratch[i + 1] * rhs[i + 1];
    }
}

}  // namespace detail

// Crank-Nicolson stepper with Strang-split axes: a half step along x, a full
// step along y, a half step along x. Each axis substep is the Cayley map of a
// Hermitian one-dimensional Hamiltonian (kinetic hopping through the link
// phases plus half of the local potential), so it is unitary on its own.
class AdiStepper {
  public:
    AdiStepper(const ExperimentConfig& cfg, const GaugePotential& pot)
        : cfg_(cfg), links_(peierls_links(cfg.grid, pot, 0.0, cfg.particle.charge)) {
        cfg_.validate();
        build_potential_grid();
        build_absorber_mask();
    }

    explicit AdiStepper(const ExperimentConfig& cfg)
        : AdiStepper(cfg, cfg.solenoid ? solenoid_potential(*cfg.solenoid)
                                       : GaugePotential::zero()) {}

    void step(WaveState& state) const {
        const double dt = cfg_.integrator.dt;
        substep_x(state, 0.5 * dt);
        substep_y(state, dt);
        substep_x(state, 0.5 * dt);
        state.t += dt;
        apply_absorber(state);
    }

    // (1 + i tau H_x / 2) psi' = (1 - i tau H_x / 2) psi, row by row.
    void substep_x(WaveState& state, double tau) const {
        const Grid2D& g = cfg_.grid;
        const double kappa = 1.0 / (2.0 * cfg_.particle.mass * g.dx() * g.dx());
        const std::complex<double> alpha(0.0, 0.5 * tau);
        const std::size_t n = static_cast<std::size_t>(g.nx);
        std::vector<std::complex<double>> lower(n), diag(n), upper(n), rhs(n), scratch(n);
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const std::size_t row = static_cast<std::size_t>(i);
                const std::complex<double> psi = state.amp[g.index(i, j)];
                const std::complex<double> hop_r =
                    (i + 1 < g.nx) ? -kappa * std::conj(links_.ux[links_.ix(i, j)])
                                   : std::complex<double>{0.0, 0.0};
                const std::complex<double> hop_l =
                    (i > 0) ? -kappa * links_.ux[links_.ix(i - 1, j)]
                            : std::complex<double>{0.0, 0.0};
                const double local = 2.0 * kappa + 0.5 * potential_[g.index(i, j)];
                std::complex<double> hpsi = local * psi;
                if (i + 1 < g.nx) hpsi += hop_r * state.amp[g.index(i + 1, j)];
                if (i > 0) hpsi += hop_l * state.amp[g.index(i - 1, j)];
                diag[row] = 1.0 + alpha * local;
                upper[row] = alpha * hop_r;
                lower[row] = alpha * hop_l;
                rhs[row] = psi - alpha * hpsi;
            }
            detail::solve_tridiagonal(lower, diag, upper, rhs, scratch);
            for (int i = 0; i < g.nx; ++i) {
                state.amp[g.index(i, j)] = rhs[static_cast<std::size_t>(i)];
            }
        }
    }

    void substep_y(WaveState& state, double tau) const {
        const Grid2D& g = cfg_.grid;
        const double kappa = 1.0 / (2.0 * cfg_.particle.mass * g.dy() * g.dy());
        const std::complex<double> alpha(0.0, 0.5 * tau);
        const std::size_t n = static_cast<std::size_t>(g.ny);
        std::vector<std::complex<double>> lower(n), diag(n), upper(n), rhs(n), scratch(n);
        for (int i = 0; i < g.nx; ++i) {
            for (int j = 0; j < g.ny; ++j) {
                const std::size_t row = static_cast<std::size_t>(j);
                const std::complex<double> psi = state.amp[g.index(i, j)];
                const std::complex<double> hop_u =
                    (j + 1 < g.ny) ? -kappa * std::conj(links_.uy[links_.iy(i, j)])
                                   : std::complex<double>{0.0, 0.0};
                const std::complex<double> hop_d =
                    (j > 0) ? -kappa * links_.uy[links_.iy(i, j - 1)]
                            : std::complex<double>{0.0, 0.0};
                const double local = 2.0 * kappa + 0.5 * potential_[g.index(i, j)];
                std::complex<double> hpsi = local * psi;
                if (j + 1 < g.ny) hpsi += hop_u * state.amp[g.index(i, j + 1)];
                if (j > 0) hpsi += hop_d * state.amp[g.index(i, j - 1)];
                diag[row] = 1.0 + alpha * local;
                upper[row] = alpha * hop_u;
                lower[row] = alpha * hop_d;
                rhs[row] = psi - alpha * hpsi;
            }
            detail::solve_tridiagonal(lower, diag, upper, rhs, scratch);
            for (int j = 0; j < g.ny; ++j) {
                state.amp[g.index(i, j)] = rhs[static_cast<std::size_t>(j)];
            }
        }
    }

    void apply_absorber(WaveState& state) const {
        if (mask_.empty()) return;
        const double before = state.norm();
        for (std::size_t k = 0; k < state.amp.size(); ++k) state.amp[k] *= mask_[k];
        state.absorbed += before - state.norm();
    }

    // Probability sitting in the outermost two-node band; growth here means
    // the absorber failed to drain the packet before the hard wall.
    double edge_band_probability(const WaveState& state) const {
        const Grid2D& g = cfg_.grid;
        double s = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            for (int j = 0; j < g.ny; ++j) {
                if (i >= 2 && i < g.nx - 2 && j >= 2 && j < g.ny - 2) continue;
                s += std::norm(state.amp[g.index(i, j)]);
            }
        }
        return s * g.dx() * g.dy();
    }

    const std::vector<double>& potential() const { return potential_; }
    const LinkPhases& links() const { return links_; }
    const ExperimentConfig& config() const { return cfg_; }

  private:
    void build_potential_grid() {
        const Grid2D& g = cfg_.grid;
        potential_.assign(g.size(), 0.0);
        if (cfg_.barrier.enabled) {
            const BarrierSpec& b = cfg_.barrier;
            for (int i = 0; i < g.nx; ++i) {
                if (std::abs(g.x(i) - b.wall_x) > 0.5 * b.thickness) continue;
                for (int j = 0; j < g.ny; ++j) {
                    const double y = g.y(j);
                    const bool in_slit =
                        b.slit_width > 0.0 &&
                        (std::abs(y - 0.5 * b.slit_separation) <= 0.5 * b.slit_width ||
                         std::abs(y + 0.5 * b.slit_separation) <= 0.5 * b.slit_width);
                    if (!in_slit) potential_[g.index(i, j)] = b.amplitude;
                }
            }
        }
        if (cfg_.shield.enabled && cfg_.solenoid) {
            const FiniteSolenoid& s = *cfg_.solenoid;
            const double r_shield = cfg_.shield.radius_factor * s.radius;
            for (int i = 0; i < g.nx; ++i) {
                for (int j = 0; j < g.ny; ++j) {
                    const double rx = g.x(i) - s.center[0];
                    const double ry = g.y(j) - s.center[1];
                    if (rx * rx + ry * ry <= r_shield * r_shield) {
                        potential_[g.index(i, j)] =
                            std::max(potential_[g.index(i, j)], cfg_.shield.amplitude);
                    }
                }
            }
        }
    }

    void build_absorber_mask() {
        if (!cfg_.absorber.enabled) return;
        const Grid2D& g = cfg_.grid;
        const double wx = cfg_.absorber.width_fraction * g.lx;
        const double wy = cfg_.absorber.width_fraction * g.ly;
        const double dt = cfg_.integrator.dt;
        mask_.assign(g.size(), 1.0);
        auto ramp_rate = [&](double dist, double width) {
            if (dist >= width) return 0.0;
            const double c = std::cos(0.5 * std::numbers::pi * dist / width);
            return cfg_.absorber.strength * c * c;
        };
        for (int i = 0; i < g.nx; ++i) {
            const double dxe = std::min(g.x(i) - g.x0, g.x0 + g.lx - g.x(i));
            for (int j = 0; j < g.ny; ++j) {
                const double dye = std::min(g.y(j) - g.y0, g.y0 + g.ly - g.y(j));
                mask_[g.index(i, j)] =
                    std::exp(-dt * (ramp_rate(dxe, wx) + ramp_rate(dye, wy)));
            }
        }
    }

    ExperimentConfig cfg_;
    LinkPhases links_;
    std::vector<double> potential_;
    std::vector<double> mask_;
};

// Advance the state by cfg.integrator.steps Crank-Nicolson steps under the
// configured (static) potential and barrier.
inline WaveState evolve(WaveState state, const ExperimentConfig& cfg) {
    AdiStepper stepper(cfg);
    for (int s = 0; s < cfg.integrator.steps; ++s) stepper.step(state);
    return state;
}

inline WaveState evolve(WaveState state, const ExperimentConfig& cfg,
                        const GaugePotential& pot) {
    AdiStepper stepper(cfg, pot);
    for (int s = 0; s < cfg.integrator.steps; ++s) stepper.step(state);
    return state;
}

struct MagneticRunResult {
    ScreenProfile profile;
    double absorbed = 0.0;
    double final_norm = 0.0;
    double shield_leak_ratio = 0.0;  // worst interior |psi|^2 over global peak
};

// Parallel-transport an initial state into the potential's gauge: multiply by
// exp(-i e \int_c^x A . dl) along straight rays from the packet center. In the
// flat region around the packet this turns the state into the exact gauge
// image of the field-free packet, so its kinetic momentum matches the
// configured momentum for any flux instead of picking up a flux-dependent
// drift from the canonical plane-wave factor.
inline void dress_with_gauge_rays(WaveState& state, const GaugePotential& pot,
                                  const std::array<double, 2>& center, double charge) {
    const Grid2D& g = state.grid;
    const GaussLegendre& gl = GaussLegendre::rule(16);
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
            const double rx = g.x(i) - center[0];
            const double ry = g.y(j) - center[1];
            double integral = 0.0;
            for (std::size_t k = 0; k < gl.nodes().size(); ++k) {
                const double s = 0.5 * (gl.nodes()[k] + 1.0);
                const SpaceTimePoint p{0.0, {center[0] + s * rx, center[1] + s * ry, 0.0}};
                const auto a = pot(p);
                integral += 0.5 * gl.weights()[k] * (a[1] * rx + a[2] * ry);
            }
            state.amp[g.index(i, j)] *= std::polar(1.0, -charge * integral);
        }
    }
}

// Double-slit run around the shielded solenoid. Accumulates the probability
// crossing the screen line (or a final snapshot, per the detector mode) and
// enforces the validity conditions: the solenoid interior must stay empty and
// the packet must not pile up against the grid edge unabsorbed.
inline MagneticRunResult magnetic_double_slit_run(const ExperimentConfig& cfg) {
    cfg.validate();
    if (!cfg.solenoid) throw config_error("magnetic run needs a solenoid");
    if (!cfg.barrier.enabled) throw config_error("magnetic run needs the slit barrier");
    if (!cfg.absorber.enabled) throw config_error("magnetic run needs the absorber");
    if (!cfg.shield.enabled) throw config_error("magnetic run needs the solenoid shield");
    const FiniteSolenoid& sol = *cfg.solenoid;
    if (!(sol.radius < 0.5 * cfg.barrier.slit_separation))
        throw config_error("solenoid radius must stay below half the slit separation");
    // the solenoid may sit inside the wall or downstream of its front face,
    // never upstream in the packet's approach region
    if (!(sol.center[0] >= cfg.barrier.wall_x - 0.5 * cfg.barrier.thickness))
        throw config_error("solenoid must sit behind the barrier wall's front face");

    const Grid2D& g = cfg.grid;
    const int is = static_cast<int>(std::lround((cfg.detector.screen_x - g.x0) / g.dx()));
    if (is < 1 || is >= g.nx - 1) throw config_error("screen line lies outside the grid");

    AdiStepper stepper(cfg);
    WaveState state = init_gaussian(g, cfg.packet.center, cfg.packet.momentum,
                                    cfg.packet.sigma, cfg.packet.theta0);
    dress_with_gauge_rays(state, solenoid_potential(sol), cfg.packet.center,
                          cfg.particle.charge);

    std::vector<std::size_t> interior_nodes;
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
            const double rx = g.x(i) - sol.center[0];
            const double ry = g.y(j) - sol.center[1];
            if (rx * rx + ry * ry < sol.radius * sol.radius)
                interior_nodes.push_back(g.index(i, j));
        }
    }

    std::vector<double> accum(static_cast<std::size_t>(g.ny), 0.0);
    double global_peak = 0.0;
    double worst_ratio = 0.0;
    for (int s = 0; s < cfg.integrator.steps; ++s) {
        stepper.step(state);
        for (const auto& a : state.amp) global_peak = std::max(global_peak, std::norm(a));
        double interior_peak = 0.0;
        for (std::size_t k : interior_nodes)
            interior_peak = std::max(interior_peak, std::norm(state.amp[k]));
        if (global_peak > 0.0)
            worst_ratio = std::max(worst_ratio, interior_peak / global_peak);
        if (worst_ratio >= 1e-8)
            throw experiment_error("solenoid interior is not shielded from the packet");
        if (stepper.edge_band_probability(state) > 1e-3)
            throw experiment_error("absorber too weak: probability reached the grid edge");
        if (cfg.detector.mode == DetectorSpec::Mode::time_integrated) {
            for (int j = 0; j < g.ny; ++j) {
                accum[static_cast<std::size_t>(j)] +=
                    std::norm(state.amp[g.index(is, j)]) * cfg.integrator.dt;
            }
        }
    }
    if (cfg.detector.mode == DetectorSpec::Mode::final_snapshot) {
        for (int j = 0; j < g.ny; ++j) {
            accum[static_cast<std::size_t>(j)] = std::norm(state.amp[g.index(is, j)]);
        }
    }

    MagneticRunResult result;
    result.profile.y.resize(static_cast<std::size_t>(g.ny));
    for (int j = 0; j < g.ny; ++j) result.profile.y[static_cast<std::size_t>(j)] = g.y(j);
    result.profile.intensity = std::move(accum);
    result.profile.flux = sol.flux;
    result.profile.charge = cfg.particle.charge;
    result.absorbed = state.absorbed;
    result.final_norm = state.norm();
    result.shield_leak_ratio = worst_ratio;
    return result;
}

}  // namespace abtk
