#pragma once

// Concrete gauge potentials for the two interference experiments: a finite
// solenoid (static magnetic case) and time-windowed tube pulses (electric
// case), with the closed-form time integral of the pulse.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "abtk/errors.hpp"
#include "abtk/gauge.hpp"

namespace abtk {

// Infinitely long solenoid of finite radius along the x3 axis, carrying total
// flux Phi. The azimuthal (symmetric) gauge keeps the potential continuous
// across the wall and globally defined.
struct FiniteSolenoid {
    double radius;
    double flux;
    std::array<double, 2> center{0.0, 0.0};

    FiniteSolenoid(double radius_, double flux_, std::array<double, 2> center_ = {0.0, 0.0})
        : radius(radius_), flux(flux_), center(center_) {
        if (!(radius > 0.0)) throw config_error("solenoid radius must be > 0");
        if (!std::isfinite(flux)) throw config_error("solenoid flux must be finite");
    }

    // Uniform interior field: F_12 = Phi / (pi R^2), zero outside.
    double interior_field() const {
        return flux / (std::numbers::pi * radius * radius);
    }
};

// A_0 = A_3 = 0; in-plane components are azimuthal:
//   r <= R:  (A_1, A_2) = Phi/(2 pi R^2) * (-y, x)
//   r >  R:  (A_1, A_2) = Phi/(2 pi r^2) * (-y, x)
// with (x, y) offsets from the solenoid center. Both branches agree at r = R.
// Carries the analytic curvature (uniform inside, zero outside).
inline GaugePotential solenoid_potential(const FiniteSolenoid& s) {
    const double r2_wall = s.radius * s.radius;
    const double coef_in = s.flux / (2.0 * std::numbers::pi * r2_wall);
    const double flux = s.flux;
    const auto center = s.center;
    const double b_in = s.interior_field();
    GaugePotential::Eval eval = [=](const SpaceTimePoint& p) {
        const double dx = p.x[0] - center[0];
        const double dy = p.x[1] - center[1];
        const double r2 = dx * dx + dy * dy;
        const double c =
            (r2 <= r2_wall) ? coef_in : flux / (2.0 * std::numbers::pi * r2);
        return std::array<double, 4>{0.0, -c * dy, c * dx, 0.0};
    };
    GaugePotential::CurvatureEval curvature = [=](const SpaceTimePoint& p) {
        const double dx = p.x[0] - center[0];
        const double dy = p.x[1] - center[1];
        const double f12 = (dx * dx + dy * dy < r2_wall) ? b_in : 0.0;
        return FieldStrength::from_upper(0.0, 0.0, 0.0, f12, 0.0, 0.0);
    };
    return GaugePotential(std::move(eval), std::move(curvature));
}

// Homogeneous time-dependent tube potential: zero until t_on - ramp, a C^1
// smoothstep rise to the plateau value on [t_on, t_off], then a symmetric
// fall, exactly zero again from t_off + ramp on.
struct TubePulse {
    double peak;
    double t_on;
    double t_off;
    double ramp;

    TubePulse(double peak_, double t_on_, double t_off_, double ramp_)
        : peak(peak_), t_on(t_on_), t_off(t_off_), ramp(ramp_) {
        if (!(ramp > 0.0)) throw config_error("pulse ramp must be > 0");
        if (!(t_on < t_off)) throw config_error("pulse window must satisfy t_on < t_off");
        if (!std::isfinite(peak)) throw config_error("pulse peak must be finite");
    }
};

namespace detail {

inline double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }

// Antiderivative of smoothstep on [0, 1]: u^3 - u^4/2.
inline double smoothstep_integral(double u) { return u * u * u * (1.0 - 0.5 * u); }

}  // namespace detail

// Pulse value at time t. The plateau and the zero region are exact, not
// approximate: both are returned as literal constants.
inline double tube_pulse_eval(const TubePulse& p, double t) {
    if (t <= p.t_on - p.ramp || t >= p.t_off + p.ramp) return 0.0;
    if (t >= p.t_on && t <= p.t_off) return p.peak;
    if (t < p.t_on) {
        return p.peak * detail::smoothstep((t - (p.t_on - p.ramp)) / p.ramp);
    }
    return p.peak * detail::smoothstep(((p.t_off + p.ramp) - t) / p.ramp);
}

// e * \int_{t0}^{t1} A_0(s) ds in closed form, piece by piece across the ramp
// and plateau breakpoints. Each full ramp integrates to peak*ramp/2.
inline double electric_phase(const TubePulse& p, double t0, double t1, double charge) {
    if (!(t0 <= t1)) throw std::invalid_argument("electric phase needs t0 <= t1");
    double integral = 0.0;

    // rising ramp over [t_on - ramp, t_on]
    {
        const double lo = std::max(t0, p.t_on - p.ramp);
        const double hi = std::min(t1, p.t_on);
        if (hi > lo) {
            const double u0 = (lo - (p.t_on - p.ramp)) / p.ramp;
            const double u1 = (hi - (p.t_on - p.ramp)) / p.ramp;
            integral += p.peak * p.ramp *
                        (detail::smoothstep_integral(u1) - detail::smoothstep_integral(u0));
        }
    }
    // plateau over [t_on, t_off]
    {
        const double lo = std::max(t0, p.t_on);
        const double hi = std::min(t1, p.t_off);
        if (hi > lo) integral += p.peak * (hi - lo);
    }
    // falling ramp over [t_off, t_off + ramp]; mirror of the rise
    {
        const double lo = std::max(t0, p.t_off);
        const double hi = std::min(t1, p.t_off + p.ramp);
        if (hi > lo) {
            const double u0 = ((p.t_off + p.ramp) - hi) / p.ramp;
            const double u1 = ((p.t_off + p.ramp) - lo) / p.ramp;
            integral += p.peak * p.ramp *
                        (detail::smoothstep_integral(u1) - detail::smoothstep_integral(u0));
        }
    }
    return charge * integral;
}

}  // namespace abtk
