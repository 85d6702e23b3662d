#pragma once

// U(1) connection machinery: gauge potentials, field strength, contour
// holonomy, gauge transformations, and holonomy under contour contraction.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "abtk/errors.hpp"
#include "abtk/geometry.hpp"
#include "abtk/quadrature.hpp"

namespace abtk {

// Antisymmetric field-strength tensor F_ab = d_a A_b - d_b A_a at a point.
// Only the six upper-triangle components are stored, so F_ab = -F_ba holds
// exactly by construction.
class FieldStrength {
  public:
    FieldStrength() : f_{} {}

    static FieldStrength from_upper(double f01, double f02, double f03, double f12,
                                    double f13, double f23) {
        FieldStrength f;
        f.f_ = {f01, f02, f03, f12, f13, f23};
        return f;
    }

    static FieldStrength from_jacobian(const std::array<std::array<double, 4>, 4>& j) {
        return from_upper(j[0][1] - j[1][0], j[0][2] - j[2][0], j[0][3] - j[3][0],
                          j[1][2] - j[2][1], j[1][3] - j[3][1], j[2][3] - j[3][2]);
    }

    double at(int a, int b) const {
        if (a == b) return 0.0;
        const bool swapped = a > b;
        if (swapped) std::swap(a, b);
        const double v = f_[static_cast<std::size_t>(upper_index(a, b))];
        return swapped ? -v : v;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : f_) m = std::max(m, std::abs(v));
        return m;
    }

    // Contraction of the 2-form with a pair of tangent vectors:
    // sum_{a<b} F_ab (u_a v_b - u_b v_a).
    double wedge(const std::array<double, 4>& u, const std::array<double, 4>& v) const {
        double s = 0.0;
        int idx = 0;
        for (int a = 0; a < 4; ++a) {
            for (int b = a + 1; b < 4; ++b) {
                s += f_[static_cast<std::size_t>(idx++)] * (u[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(b)] -
                                                            u[static_cast<std::size_t>(b)] * v[static_cast<std::size_t>(a)]);
            }
        }
        return s;
    }

  private:
    static int upper_index(int a, int b) {
        // (0,1)(0,2)(0,3)(1,2)(1,3)(2,3)
        static constexpr int table[4][4] = {{-1, 0, 1, 2}, {-1, -1, 3, 4}, {-1, -1, -1, 5}, {-1, -1, -1, -1}};
        return table[a][b];
    }

    std::array<double, 6> f_;
};

// Local U(1)-connection form: a map from space-time points to the four
// covector components (A_0, A_1, A_2, A_3). Models may attach an analytic
// curvature evaluator; numerical differentiation is the fallback.
class GaugePotential {
  public:
    using Eval = std::function<std::array<double, 4>(const SpaceTimePoint&)>;
    using CurvatureEval = std::function<FieldStrength(const SpaceTimePoint&)>;

    explicit GaugePotential(Eval eval, CurvatureEval curvature = nullptr)
        : eval_(std::move(eval)), curvature_(std::move(curvature)) {
        if (!eval_) throw std::invalid_argument("gauge potential needs an evaluator");
    }

    static GaugePotential zero() {
        return GaugePotential([](const SpaceTimePoint&) {
            return std::array<double, 4>{0.0, 0.0, 0.0, 0.0};
        });
    }

    std::array<double, 4> operator()(const SpaceTimePoint& p) const {
        const std::array<double, 4> a = eval_(p);
        for (double c : a) {
            if (!std::isfinite(c))
                throw numeric_error("gauge potential evaluated to a non-finite value");
        }
        return a;
    }

    bool has_analytic_curvature() const { return static_cast<bool>(curvature_); }

    FieldStrength analytic_curvature(const SpaceTimePoint& p) const {
        return curvature_(p);
    }

  private:
    Eval eval_;
    CurvatureEval curvature_;
};

// Single-valued differentiable function a(t, x) generating a vertical
// automorphism psi -> e^{ia} psi.
struct GaugeFunction {
    std::function<double(const SpaceTimePoint&)> eval;

    double operator()(const SpaceTimePoint& p) const {
        const double v = eval(p);
        if (!std::isfinite(v))
            throw numeric_error("gauge function evaluated to a non-finite value");
        return v;
    }
};

// Phase reduced to (-pi, pi] together with its unit group element e^{i theta}.
struct HolonomyElement {
    double theta = 0.0;
    std::complex<double> element{1.0, 0.0};
};

namespace detail {

inline SpaceTimePoint shifted(const SpaceTimePoint& p, int axis, double delta) {
    SpaceTimePoint q = p;
    if (axis == 0)
        q.t += delta;
    else
        q.x[static_cast<std::size_t>(axis - 1)] += delta;
    return q;
}

// Fourth-order central difference of a 4-component field along one axis.
inline std::array<double, 4> derivative4(const GaugePotential& pot, const SpaceTimePoint& p,
                                         int axis, double h) {
    const auto f1 = pot(shifted(p, axis, 2.0 * h));
    const auto f2 = pot(shifted(p, axis, h));
    const auto f3 = pot(shifted(p, axis, -h));
    const auto f4 = pot(shifted(p, axis, -2.0 * h));
    std::array<double, 4> d{};
    for (std::size_t c = 0; c < 4; ++c) {
        d[c] = (-f1[c] + 8.0 * f2[c] - 8.0 * f3[c] + f4[c]) / (12.0 * h);
    }
    return d;
}

inline double derivative_scalar(const GaugeFunction& f, const SpaceTimePoint& p, int axis,
                                double h) {
    const double f1 = f(shifted(p, axis, 2.0 * h));
    const double f2 = f(shifted(p, axis, h));
    const double f3 = f(shifted(p, axis, -h));
    const double f4 = f(shifted(p, axis, -2.0 * h));
    return (-f1 + 8.0 * f2 - 8.0 * f3 + f4) / (12.0 * h);
}

}  // namespace detail

// Field strength by fourth-order central differences of the potential,
// ignoring any analytic curvature the model carries. Kept public so the
// analytic route can be cross-checked against it.
inline FieldStrength field_strength_fd(const GaugePotential& pot, const SpaceTimePoint& p,
                                       double h = 1e-4) {
    if (!(h > 0.0)) throw std::invalid_argument("differentiation step must be > 0");
    std::array<std::array<double, 4>, 4> jac{};
    for (int axis = 0; axis < 4; ++axis) {
        jac[static_cast<std::size_t>(axis)] = detail::derivative4(pot, p, axis, h);
    }
    return FieldStrength::from_jacobian(jac);
}

// F_ab = d_a A_b - d_b A_a; uses the model's analytic curvature when present.
inline FieldStrength field_strength(const GaugePotential& pot, const SpaceTimePoint& p,
                                    double h = 1e-4) {
    if (pot.has_analytic_curvature()) return pot.analytic_curvature(p);
    return field_strength_fd(pot, p, h);
}

// Raw loop integral Theta = e * \oint dx^a A_a over a closed piecewise-linear
// contour (all four components; the dt A_0 leg counts). Not reduced mod 2pi.
// `residual` receives the summed per-segment convergence estimates.
inline double holonomy_phase(const GaugePotential& pot, const Contour& contour,
                             const QuadratureSpec& spec = {}, double charge = 1.0,
                             double* residual = nullptr) {
    if (!contour.closed())
        throw std::invalid_argument("holonomy requires a closed contour");
    double theta = 0.0;
    double res_sum = 0.0;
    for (std::size_t i = 0; i < contour.segment_count(); ++i) {
        const auto [a, b] = contour.segment(i);
        const SpaceTimePoint d = b - a;
        if (norm4(d) == 0.0) continue;  // degenerate legs carry no transport
        const std::array<double, 4> dir = d.as_array();
        double seg_res = 0.0;
        theta += integrate_unit_adaptive(
            [&](double s) { return dot4(pot(a + s * d), dir); }, spec, &seg_res);
        res_sum += seg_res;
    }
    if (residual) *residual = res_sum;
    return charge * theta;
}

// Branch reduction to (-pi, pi]; the boundary itself maps to +pi.
inline double reduce_phase(double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("phase must be finite");
    const double two_pi = 2.0 * std::numbers::pi;
    double r = std::remainder(theta, two_pi);  // in [-pi, pi]
    const double snap = 4.0 * std::numeric_limits<double>::epsilon() *
                        std::max(std::numbers::pi, std::abs(theta));
    if (r <= -std::numbers::pi + snap) r = std::numbers::pi;
    return r;
}

inline HolonomyElement holonomy_element(double theta) {
    HolonomyElement h;
    h.theta = reduce_phase(theta);
    h.element = std::polar(1.0, h.theta);
    return h;
}

// Vertical automorphism psi' = e^{ia} psi acting on the connection:
// A'_a = A_a - (1/e) d_a a, with the gradient taken numerically. Curvature is
// unchanged by the transformation, so any analytic curvature is kept.
inline GaugePotential gauge_transform(const GaugePotential& pot, const GaugeFunction& a,
                                      double charge, double h = 1e-4) {
    if (charge == 0.0) throw std::invalid_argument("gauge transform needs a nonzero charge");
    if (!(h > 0.0)) throw std::invalid_argument("differentiation step must be > 0");
    if (!a.eval) throw std::invalid_argument("gauge function needs an evaluator");
    GaugePotential::Eval eval = [pot, a, charge, h](const SpaceTimePoint& p) {
        std::array<double, 4> out = pot(p);
        for (int axis = 0; axis < 4; ++axis) {
            out[static_cast<std::size_t>(axis)] -=
                detail::derivative_scalar(a, p, axis, h) / charge;
        }
        return out;
    };
    if (pot.has_analytic_curvature()) {
        GaugePotential::CurvatureEval curv = [pot](const SpaceTimePoint& p) {
            return pot.analytic_curvature(p);
        };
        return GaugePotential(std::move(eval), std::move(curv));
    }
    return GaugePotential(std::move(eval));
}

// Holonomy phase sampled along a contracting contour family. family(0) is the
// full contour; family(1) must have shrunk to a point (within point_tol of
// zero length) or the family is rejected.
inline std::vector<std::pair<double, double>> contract_holonomy_trace(
    const GaugePotential& pot, const std::function<Contour(double)>& family, int samples,
    const QuadratureSpec& spec = {}, double charge = 1.0, double point_tol = 1e-9) {
    if (samples < 8) throw std::invalid_argument("contraction trace needs >= 8 samples");
    if (!family) throw std::invalid_argument("contraction trace needs a contour family");
    const Contour end = family(1.0);
    if (end.length() > point_tol)
        throw std::invalid_argument("contour family does not contract to a point");
    std::vector<std::pair<double, double>> trace;
    trace.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double lambda = static_cast<double>(i) / (samples - 1);
        const Contour c = family(lambda);
        trace.emplace_back(lambda, holonomy_phase(pot, c, spec, charge));
    }
    return trace;
}

}  // namespace abtk
