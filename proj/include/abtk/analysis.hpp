#pragma once

// Quantitative phase extraction from interference data: fringe shift against
// a reference profile, and linear fits of shift versus flux.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "abtk/errors.hpp"
#include "abtk/gauge.hpp"

namespace abtk {

// Intensity sampled along the detector line, with the run's flux and charge
// kept alongside for scan bookkeeping.
struct ScreenProfile {
    std::vector<double> y;
    std::vector<double> intensity;
    double flux = 0.0;
    double charge = 1.0;
    std::string run_id;
};

struct PhaseScanFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    bool degenerate = false;  // all shifts identical; fit is vacuous
    std::vector<double> e_phi;
    std::vector<double> shifts_raw;
    std::vector<double> shifts_unwrapped;
};

namespace detail {

inline void validate_profile_pair(const ScreenProfile& a, const ScreenProfile& b) {
    if (a.y.size() != a.intensity.size() || b.y.size() != b.intensity.size())
        throw std::invalid_argument("profile y/intensity lengths differ");
    if (a.y.size() < 64) throw std::invalid_argument("profiles need >= 64 samples");
    if (a.y.size() != b.y.size())
        throw std::invalid_argument("profiles live on different grids");
    double scale = 0.0;
    for (double v : a.y) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < a.y.size(); ++i) {
        if (std::abs(a.y[i] - b.y[i]) > 1e-9 * (1.0 + scale))
            throw std::invalid_argument("profiles live on different grids");
    }
    for (double v : a.intensity)
        if (!(v >= 0.0)) throw std::invalid_argument("intensities must be non-negative");
    for (double v : b.intensity)
        if (!(v >= 0.0)) throw std::invalid_argument("intensities must be non-negative");
}

// Dominant spatial frequency of a mean-subtracted signal, as a fractional DFT
// bin refined by parabolic interpolation of the magnitude peak. Also reports
// the ratio of the peak to the strongest non-adjacent competitor.
struct PeriodEstimate {
    double bin;        // fractional bin index, cycles over the full record
    double ambiguity;  // peak magnitude / runner-up magnitude
};

inline PeriodEstimate dominant_bin(const std::vector<double>& signal) {
    const std::size_t n = signal.size();
    double mean = 0.0;
    for (double v : signal) mean += v;
    mean /= static_cast<double>(n);
    const std::size_t kmax = n / 2;
    // bins below 4 cycles per record belong to the envelope, not the fringes;
    // profiles carrying fewer periods than that cannot be analyzed anyway
    const std::size_t kmin = 4;
    if (kmax <= kmin + 2) throw analysis_error("profile too short for period estimation");
    std::vector<double> mag(kmax + 1, 0.0);
    for (std::size_t k = kmin; k <= kmax; ++k) {
        std::complex<double> acc{0.0, 0.0};
        const double w = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            acc += (signal[j] - mean) * std::polar(1.0, w * static_cast<double>(j));
        }
        mag[k] = std::abs(acc);
    }
    std::size_t peak = kmin;
    for (std::size_t k = kmin + 1; k < kmax; ++k) {
        if (mag[k] > mag[peak]) peak = k;
    }
    double runner = 0.0;
    for (std::size_t k = kmin; k < kmax; ++k) {
        if (k + 2 >= peak && k <= peak + 2) continue;
        runner = std::max(runner, mag[k]);
    }
    PeriodEstimate est{};
    est.ambiguity = (runner > 0.0) ? mag[peak] / runner
                                   : std::numeric_limits<double>::infinity();
    double delta = 0.0;
    if (peak > 1 && peak + 1 < mag.size()) {
        // three-point interpolator matched to the Hann window the caller
        // applies; near-exact for an isolated tone
        const double a = mag[peak - 1], b = mag[peak], c = mag[peak + 1];
        const double denom = a + 2.0 * b + c;
        if (denom > 0.0) delta = 2.0 * (c - a) / denom;
        delta = std::clamp(delta, -0.5, 0.5);
    }
    est.bin = static_cast<double>(peak) + delta;
    return est;
}

// Boxcar baseline of width w (odd), edge-truncated. Subtracting it removes
// the slowly varying envelope before cross-correlation.
inline std::vector<double> moving_baseline(const std::vector<double>& s, int w) {
    const int n = static_cast<int>(s.size());
    std::vector<double> out(s.size(), 0.0);
    const int half = w / 2;
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        double acc = 0.0;
        for (int j = lo; j <= hi; ++j) acc += s[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = acc / static_cast<double>(hi - lo + 1);
    }
    return out;
}

}  // namespace detail

// Fringe displacement of `profile` relative to `reference`, in radians of the
// reference's fringe period, reduced to (-pi, pi]. Pipeline: fringe period
// from the reference's dominant spatial frequency after removing the broad
// envelope; envelope removed again by a boxcar baseline one period wide;
// Hann-windowed cross-correlation over the central half of the record;
// parabolic interpolation of the correlation peak for the sub-sample
// displacement.
inline double fringe_shift(const ScreenProfile& profile, const ScreenProfile& reference) {
    detail::validate_profile_pair(profile, reference);
    const std::size_t n = reference.intensity.size();

    // contrast gate on the central half of the reference
    {
        const std::size_t lo = n / 4, hi = 3 * n / 4;
        double mn = reference.intensity[lo], mx = reference.intensity[lo];
        for (std::size_t i = lo; i < hi; ++i) {
            mn = std::min(mn, reference.intensity[i]);
            mx = std::max(mx, reference.intensity[i]);
        }
        if (mx <= 0.0 || (mx - mn) / (mx + mn) < 0.05)
            throw analysis_error("reference profile has no detectable fringes");
    }

    // suppress the envelope before estimating the carrier: a coarse high-pass
    // (baseline over n/16 samples) plus a Hann taper. Only the central half
    // is probed so the period estimate matches the local carrier in the very
    // window the cross-correlation will use.
    std::vector<double> carrier_probe(n / 2);
    {
        const int w = std::max(9, 2 * (static_cast<int>(n) / 32) + 1);
        const std::vector<double> base = detail::moving_baseline(reference.intensity, w);
        const std::size_t lo = n / 4;
        for (std::size_t i = 0; i < carrier_probe.size(); ++i) {
            const double s = static_cast<double>(i) / static_cast<double>(carrier_probe.size() - 1);
            const double hann = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * s));
            carrier_probe[i] = (reference.intensity[lo + i] - base[lo + i]) * hann;
        }
    }
    const detail::PeriodEstimate period = detail::dominant_bin(carrier_probe);
    if (period.ambiguity < 1.5)
        throw analysis_error("fringe period estimate is ambiguous");
    const double lambda_samples = static_cast<double>(carrier_probe.size()) / period.bin;

    const int max_lag = static_cast<int>(std::ceil(0.5 * lambda_samples)) + 2;
    const int c0 = static_cast<int>(n / 4);
    const int c1 = static_cast<int>(3 * n / 4);
    if (max_lag >= c0)
        throw analysis_error("fringe period too long for the correlation window");

    const int baseline_w = std::clamp(2 * (static_cast<int>(std::lround(lambda_samples)) / 2) + 1,
                                      3, static_cast<int>(n) / 4);
    const std::vector<double> base_ref = detail::moving_baseline(reference.intensity, baseline_w);
    const std::vector<double> base_prof = detail::moving_baseline(profile.intensity, baseline_w);

    std::vector<double> dref(n), dprof(n);
    for (std::size_t i = 0; i < n; ++i) {
        dref[i] = reference.intensity[i] - base_ref[i];
        dprof[i] = profile.intensity[i] - base_prof[i];
    }

    // Hann-taper both detrended signals over the central window; the
    // symmetric weighting keeps the self-correlation exactly even in the lag,
    // so identical profiles read a shift of exactly zero. Normalizing by the
    // taper's own autocorrelation cancels the window envelope that would
    // otherwise pull the peak toward zero lag.
    std::vector<double> wref(n, 0.0), wprof(n, 0.0), taper(n, 0.0);
    for (int j = c0; j < c1; ++j) {
        const double s = static_cast<double>(j - c0) / static_cast<double>(c1 - c0 - 1);
        const double t = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * s));
        taper[static_cast<std::size_t>(j)] = t;
        wref[static_cast<std::size_t>(j)] = t * dref[static_cast<std::size_t>(j)];
        wprof[static_cast<std::size_t>(j)] = t * dprof[static_cast<std::size_t>(j)];
    }

    std::vector<double> corr(static_cast<std::size_t>(2 * max_lag + 1), 0.0);
    for (int lag = -max_lag; lag <= max_lag; ++lag) {
        double acc = 0.0;
        double weight = 0.0;
        const int lo = std::max(c0, c0 - lag);
        const int hi = std::min(c1, c1 - lag);
        for (int j = lo; j < hi; ++j) {
            acc += wref[static_cast<std::size_t>(j)] * wprof[static_cast<std::size_t>(j + lag)];
            weight += taper[static_cast<std::size_t>(j)] * taper[static_cast<std::size_t>(j + lag)];
        }
        corr[static_cast<std::size_t>(lag + max_lag)] = (weight > 0.0) ? acc / weight : 0.0;
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < corr.size(); ++i) {
        if (corr[i] > corr[best]) best = i;
    }
    double displacement = static_cast<double>(static_cast<int>(best) - max_lag);
    if (best > 0 && best + 1 < corr.size()) {
        // vertex of A cos(omega (l - d)) through three lags; exact for the
        // sinusoidal correlation a fringe pattern produces
        const double omega = 2.0 * std::numbers::pi / lambda_samples;
        const double m0 = corr[best - 1], m1 = corr[best], m2 = corr[best + 1];
        const double denom = 2.0 * m1 - m0 - m2;
        if (denom != 0.0) {
            const double ratio = (m2 - m0) / denom;
            displacement += std::clamp(std::atan(ratio * std::tan(0.5 * omega)) / omega, -0.6, 0.6);
        }
    }
    return reduce_phase(2.0 * std::numbers::pi * displacement / lambda_samples);
}

// Least-squares line of unwrapped fringe shifts versus e*Phi, anchored on the
// Phi = 0 profile as the common reference. Shifts are continued to the branch
// nearest their predecessor in flux order before fitting.
inline PhaseScanFit phase_linearity_scan(const std::vector<ScreenProfile>& profiles,
                                         double charge) {
    if (profiles.size() < 4)
        throw analysis_error("flux scan too coarse: need at least 4 flux points");

    std::vector<std::size_t> order(profiles.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return profiles[a].flux < profiles[b].flux;
    });

    const ScreenProfile* reference = nullptr;
    for (const auto& p : profiles) {
        if (std::abs(p.flux) <= 1e-12) {
            reference = &p;
            break;
        }
    }
    if (!reference)
        throw std::invalid_argument("flux scan needs a Phi = 0 reference profile");

    PhaseScanFit fit;
    for (std::size_t k : order) {
        fit.e_phi.push_back(charge * profiles[k].flux);
        fit.shifts_raw.push_back(fringe_shift(profiles[k], *reference));
    }

    double max_abs_shift = 0.0;
    for (double s : fit.shifts_raw) max_abs_shift = std::max(max_abs_shift, std::abs(s));
    if (max_abs_shift < 1e-12) {
        // identical profiles: report the vacuous fit instead of failing
        fit.degenerate = true;
        fit.shifts_unwrapped = fit.shifts_raw;
        return fit;
    }

    if (fit.e_phi.back() - fit.e_phi.front() < std::numbers::pi)
        throw analysis_error("flux scan too coarse: e*Phi span must reach pi");
    for (std::size_t i = 1; i < fit.e_phi.size(); ++i) {
        if (fit.e_phi[i] - fit.e_phi[i - 1] > std::numbers::pi + 1e-9)
            throw analysis_error("flux scan too coarse: adjacent e*Phi gap exceeds pi");
    }

    fit.shifts_unwrapped.resize(fit.shifts_raw.size());
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < fit.shifts_raw.size(); ++i) {
        if (i == 0) {
            fit.shifts_unwrapped[i] = fit.shifts_raw[i];
            continue;
        }
        const double prev = fit.shifts_unwrapped[i - 1];
        const double s = fit.shifts_raw[i];
        fit.shifts_unwrapped[i] = s + two_pi * std::round((prev - s) / two_pi);
        if (std::abs(fit.shifts_unwrapped[i] - prev) > std::numbers::pi + 1e-9)
            throw analysis_error("flux scan too coarse: unwrapped shift gap exceeds pi");
    }

    const std::size_t m = fit.e_phi.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += fit.e_phi[i];
        sy += fit.shifts_unwrapped[i];
        sxx += fit.e_phi[i] * fit.e_phi[i];
        sxy += fit.e_phi[i] * fit.shifts_unwrapped[i];
    }
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (std::abs(denom) < 1e-300)
        throw analysis_error("flux scan degenerate: all e*Phi values coincide");
    fit.slope = (static_cast<double>(m) * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        fit.max_residual = std::max(
            fit.max_residual,
            std::abs(fit.shifts_unwrapped[i] - (fit.slope * fit.e_phi[i] + fit.intercept)));
    }
    return fit;
}

}  // namespace abtk
