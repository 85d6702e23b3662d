#pragma once

// The two-tube electric interferometer reduced to a pair of decoupled 1D
// channels. Each channel evolves under i d/dt psi = (H0 + e A0(t)) psi with a
// homogeneous tube potential; since the two terms commute, the pulse phase is
// applied as an exact per-step factor while H0 is stepped by Crank-Nicolson.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "abtk/errors.hpp"
#include "abtk/gauge.hpp"
#include "abtk/potentials.hpp"
#include "abtk/schrodinger.hpp"
#include "abtk/units.hpp"

namespace abtk {

struct ChannelSpec {
    double length = 60.0;
    int points = 512;
    double interior_margin = 0.1;  // fraction trimmed from each end for the support check
};

struct GaussianPacket1D {
    double center = 0.0;
    double momentum = 0.0;
    double sigma = 1.0;
    double theta0 = 0.0;
};

struct TwoChannelConfig {
    ChannelSpec channel;
    GaussianPacket1D packet;
    IntegratorSpec integrator;
    Units particle;
    int chi_samples = 2048;

    void validate() const {
        if (channel.points < 64) throw config_error("channel needs at least 64 points");
        if (!(channel.length > 0.0)) throw config_error("channel length must be > 0");
        if (!(channel.interior_margin > 0.0 && channel.interior_margin < 0.5))
            throw config_error("interior margin must lie in (0, 0.5)");
        if (!(integrator.dt > 0.0)) throw config_error("time step must be > 0");
        if (integrator.steps < 1) throw config_error("step count must be >= 1");
        if (!(particle.mass > 0.0)) throw config_error("mass must be > 0");
        const double dx = length_step();
        if (!(packet.sigma > 2.0 * dx))
            throw config_error("packet width must exceed twice the grid spacing");
        if (!(std::abs(packet.momentum) * integrator.dt / particle.mass < dx))
            throw config_error("packet transport per step must stay below one cell");
        if (chi_samples < 64) throw config_error("readout needs at least 64 phase samples");
    }

    double length_step() const { return channel.length / (channel.points - 1); }
    double x_of(int i) const { return -0.5 * channel.length + i * length_step(); }
};

// One 1D amplitude array per beam path on the shared longitudinal grid.
struct TwoChannelState {
    std::vector<std::complex<double>> psi1;
    std::vector<std::complex<double>> psi2;
    double t = 0.0;
};

struct ElectricRunResult {
    std::vector<double> chi;
    std::vector<double> intensity;
    double extracted_phase = 0.0;
    double predicted_phase = 0.0;  // reduced e * int (A0_2 - A0_1) dt
    double final_norm1 = 0.0;
    double final_norm2 = 0.0;
};

namespace detail {

class Channel1DStepper {
  public:
    Channel1DStepper(const TwoChannelConfig& cfg)
        : n_(static_cast<std::size_t>(cfg.channel.points)),
          kappa_(1.0 / (2.0 * cfg.particle.mass * cfg.length_step() * cfg.length_step())),
          alpha_(0.0, 0.5 * cfg.integrator.dt),
          lower_(n_), diag_(n_), upper_(n_), rhs_(n_), scratch_(n_) {
        for (std::size_t i = 0; i < n_; ++i) {
            diag_[i] = 1.0 + alpha_ * (2.0 * kappa_);
            upper_[i] = alpha_ * (-kappa_);
            lower_[i] = alpha_ * (-kappa_);
        }
    }

    void step(std::vector<std::complex<double>>& psi) {
        for (std::size_t i = 0; i < n_; ++i) {
            std::complex<double> hpsi = 2.0 * kappa_ * psi[i];
            if (i + 1 < n_) hpsi -= kappa_ * psi[i + 1];
            if (i > 0) hpsi -= kappa_ * psi[i - 1];
            rhs_[i] = psi[i] - alpha_ * hpsi;
        }
        solve_tridiagonal(lower_, diag_, upper_, rhs_, scratch_);
        psi = rhs_;
    }

  private:
    std::size_t n_;
    double kappa_;
    std::complex<double> alpha_;
    std::vector<std::complex<double>> lower_, diag_, upper_, rhs_, scratch_;
};

inline double channel_norm(const std::vector<std::complex<double>>& psi, double dx) {
    double s = 0.0;
    for (const auto& a : psi) s += std::norm(a);
    return s * dx;
}

inline double interior_probability(const std::vector<std::complex<double>>& psi, double dx,
                                   double margin_fraction) {
    const std::size_t n = psi.size();
    const std::size_t skip = static_cast<std::size_t>(margin_fraction * static_cast<double>(n));
    double s = 0.0;
    for (std::size_t i = skip; i + skip < n; ++i) s += std::norm(psi[i]);
    return s * dx;
}

}  // namespace detail

// Run both channels to completion, recombine with a scanned readout phase chi,
// and return the intensity curve I(chi) = sum |psi1 + e^{i chi} psi2|^2 dx with
// the location of its maximum as the extracted phase difference.
//
// While either pulse is inside its padded window, the packet must keep
// probability > 1 - 1e-6 inside the trimmed channel interior; otherwise the
// run is rejected as invalid.
inline ElectricRunResult electric_two_path_run(const TwoChannelConfig& cfg,
                                               const TubePulse& pulse1,
                                               const TubePulse& pulse2) {
    cfg.validate();
    const int n = cfg.channel.points;
    const double dx = cfg.length_step();
    const double e = cfg.particle.charge;

    TwoChannelState state;
    state.psi1.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = cfg.x_of(i);
        const double r = x - cfg.packet.center;
        state.psi1[static_cast<std::size_t>(i)] =
            std::polar(std::exp(-r * r / (4.0 * cfg.packet.sigma * cfg.packet.sigma)),
                       cfg.packet.momentum * x + cfg.packet.theta0);
    }
    const double norm0 = detail::channel_norm(state.psi1, dx);
    if (!(norm0 > 0.0)) throw config_error("packet vanished on the channel grid");
    const double rescale = 1.0 / std::sqrt(norm0);
    for (auto& a : state.psi1) a *= rescale;
    state.psi2 = state.psi1;

    const double window_lo =
        std::min(pulse1.t_on - pulse1.ramp, pulse2.t_on - pulse2.ramp);
    const double window_hi =
        std::max(pulse1.t_off + pulse1.ramp, pulse2.t_off + pulse2.ramp);
    const double t_end = cfg.integrator.dt * cfg.integrator.steps;
    if (window_lo < 0.0 || window_hi > t_end)
        throw experiment_error("pulse support extends outside the simulated time range");

    detail::Channel1DStepper stepper(cfg);
    const double dt = cfg.integrator.dt;
    for (int s = 0; s < cfg.integrator.steps; ++s) {
        const double t0 = state.t;
        const double t1 = t0 + dt;
        if (t1 > window_lo && t0 < window_hi) {
            const double in1 =
                detail::interior_probability(state.psi1, dx, cfg.channel.interior_margin);
            const double in2 =
                detail::interior_probability(state.psi2, dx, cfg.channel.interior_margin);
            if (in1 < 1.0 - 1e-6 || in2 < 1.0 - 1e-6)
                throw experiment_error(
                    "pulse overlapped the packet's channel entry or exit");
        }
        // exact phase factor for the homogeneous tube term over this step
        const std::complex<double> f1 = std::polar(1.0, -electric_phase(pulse1, t0, t1, e));
        const std::complex<double> f2 = std::polar(1.0, -electric_phase(pulse2, t0, t1, e));
        for (auto& a : state.psi1) a *= f1;
        for (auto& a : state.psi2) a *= f2;
        stepper.step(state.psi1);
        stepper.step(state.psi2);
        state.t = t1;
    }

    ElectricRunResult result;
    result.final_norm1 = detail::channel_norm(state.psi1, dx);
    result.final_norm2 = detail::channel_norm(state.psi2, dx);

    // I(chi) is a pure sinusoid in chi; scan it and refine the peak.
    std::complex<double> overlap{0.0, 0.0};
    double power = 0.0;
    for (std::size_t i = 0; i < state.psi1.size(); ++i) {
        overlap += std::conj(state.psi1[i]) * state.psi2[i];
        power += std::norm(state.psi1[i]) + std::norm(state.psi2[i]);
    }
    overlap *= dx;
    power *= dx;

    const int m = cfg.chi_samples;
    result.chi.resize(static_cast<std::size_t>(m));
    result.intensity.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const double chi = -std::numbers::pi + 2.0 * std::numbers::pi * k / m;
        result.chi[static_cast<std::size_t>(k)] = chi;
        result.intensity[static_cast<std::size_t>(k)] =
            power + 2.0 * std::real(std::polar(1.0, chi) * overlap);
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < result.intensity.size(); ++k) {
        if (result.intensity[k] > result.intensity[best]) best = k;
    }
    // parabolic refinement with cyclic neighbors
    const std::size_t prev = (best + result.intensity.size() - 1) % result.intensity.size();
    const std::size_t next = (best + 1) % result.intensity.size();
    const double m0 = result.intensity[prev], m1 = result.intensity[best],
                 m2 = result.intensity[next];
    double delta = 0.0;
    const double denom = m0 - 2.0 * m1 + m2;
    if (denom != 0.0) delta = std::clamp(0.5 * (m0 - m2) / denom, -0.5, 0.5);
    const double chi_step = 2.0 * std::numbers::pi / m;
    result.extracted_phase =
        reduce_phase(result.chi[best] + delta * chi_step);

    const double predicted =
        electric_phase(pulse2, window_lo, window_hi, e) -
        electric_phase(pulse1, window_lo, window_hi, e);
    result.predicted_phase = reduce_phase(predicted);
    return result;
}

}  // namespace abtk
