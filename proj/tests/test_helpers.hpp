#pragma once

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "abtk/gauge.hpp"

namespace abtk_test {

// Smooth random potential: a few bounded Fourier terms per component.
inline abtk::GaugePotential random_fourier_potential(unsigned seed, int terms = 3,
                                                     double amplitude = 0.5,
                                                     double max_freq = 1.2) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> amp(-amplitude, amplitude);
    std::uniform_real_distribution<double> freq(-max_freq, max_freq);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    struct Term {
        std::array<double, 4> k;
        double c;
        double ph;
    };
    std::array<std::vector<Term>, 4> all;
    for (auto& component : all) {
        for (int t = 0; t < terms; ++t) {
            component.push_back({{freq(rng), freq(rng), freq(rng), freq(rng)}, amp(rng), phase(rng)});
        }
    }
    return abtk::GaugePotential([all](const abtk::SpaceTimePoint& p) {
        const std::array<double, 4> q = p.as_array();
        std::array<double, 4> out{};
        for (std::size_t c = 0; c < 4; ++c) {
            for (const auto& term : all[c]) {
                out[c] += term.c * std::sin(abtk::dot4(term.k, q) + term.ph);
            }
        }
        return out;
    });
}

// Smooth random single-valued gauge function with bounded slopes.
inline abtk::GaugeFunction random_gauge_function(unsigned seed, int terms = 3,
                                                 double amplitude = 0.4,
                                                 double max_freq = 1.2) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> amp(-amplitude, amplitude);
    std::uniform_real_distribution<double> freq(-max_freq, max_freq);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    struct Term {
        std::array<double, 4> k;
        double c;
        double ph;
    };
    std::vector<Term> all;
    for (int t = 0; t < terms; ++t) {
        all.push_back({{freq(rng), freq(rng), freq(rng), freq(rng)}, amp(rng), phase(rng)});
    }
    return abtk::GaugeFunction{[all](const abtk::SpaceTimePoint& p) {
        const std::array<double, 4> q = p.as_array();
        double v = 0.0;
        for (const auto& term : all) v += term.c * std::sin(abtk::dot4(term.k, q) + term.ph);
        return v;
    }};
}

}  // namespace abtk_test
