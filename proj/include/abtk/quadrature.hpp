#pragma once

// Gauss-Legendre rules of arbitrary order plus an adaptive driver that keeps
// doubling the node count until successive estimates settle.

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "abtk/errors.hpp"

namespace abtk {

struct QuadratureSpec {
    int nodes = 32;           // initial nodes per segment
    double tolerance = 1e-10; // absolute difference between successive estimates
    int max_nodes = 1 << 14;  // refinement cap per segment

    void validate() const {
        if (nodes < 2) throw std::invalid_argument("quadrature nodes must be >= 2");
        if (!(tolerance > 0.0)) throw std::invalid_argument("quadrature tolerance must be > 0");
        if (max_nodes < 2 * nodes)
            throw std::invalid_argument("quadrature max_nodes must allow one refinement");
    }
};

// Nodes and weights on [-1, 1], computed by Newton iteration on the Legendre
// recurrence. Rules are cached per order and shared across threads.
class GaussLegendre {
  public:
    explicit GaussLegendre(int n) : nodes_(static_cast<std::size_t>(n)), weights_(static_cast<std::size_t>(n)) {
        if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
        const int half = (n + 1) / 2;
        for (int k = 0; k < half; ++k) {
            double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                if (n == 1) { p1 = x; }
                for (int m = 2; m <= n; ++m) {
                    const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            nodes_[static_cast<std::size_t>(k)] = -x;
            nodes_[static_cast<std::size_t>(n - 1 - k)] = x;
            const double w = 2.0 / ((1.0 - x * x) * pp * pp);
            weights_[static_cast<std::size_t>(k)] = w;
            weights_[static_cast<std::size_t>(n - 1 - k)] = w;
        }
    }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    static const GaussLegendre& rule(int n) {
        static std::mutex mutex;
        static std::map<int, std::unique_ptr<const GaussLegendre>> cache;
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(n);
        if (it == cache.end()) {
            it = cache.emplace(n, std::make_unique<const GaussLegendre>(n)).first;
        }
        return *it->second;
    }

  private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

namespace detail {

template <class F>
double gauss_apply_unit(F&& f, int n) {
    const GaussLegendre& gl = GaussLegendre::rule(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < gl.nodes().size(); ++k) {
        const double s = 0.5 * (gl.nodes()[k] + 1.0);  // map to [0, 1]
        sum += 0.5 * gl.weights()[k] * f(s);
    }
    return sum;
}

}  // namespace detail

// Integrate f over [0, 1]. Starts at spec.nodes and doubles until two
// successive estimates differ by less than spec.tolerance; if the node cap is
// reached first, throws numeric_error carrying the last difference.
// `achieved`, when given, receives the final successive-estimate difference.
template <class F>
double integrate_unit_adaptive(F&& f, const QuadratureSpec& spec, double* achieved = nullptr) {
    spec.validate();
    int n = spec.nodes;
    double prev = detail::gauss_apply_unit(f, n);
    double last_diff = std::numeric_limits<double>::infinity();
    while (2 * n <= spec.max_nodes) {
        n *= 2;
        const double cur = detail::gauss_apply_unit(f, n);
        last_diff = std::abs(cur - prev);
        if (last_diff < spec.tolerance) {
            if (achieved) *achieved = last_diff;
            return cur;
        }
        prev = cur;
    }
    throw numeric_error("quadrature did not converge within the node cap", last_diff);
}

}  // namespace abtk
