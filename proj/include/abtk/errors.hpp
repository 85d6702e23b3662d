#pragma once

#include <stdexcept>
#include <string>

namespace abtk {

// Error taxonomy. The CLI maps these onto its exit-code contract
// (config 2, numerical 3, experiment 4, analysis 5); see tools/abtk.cpp.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid declarative input: bad model parameters, malformed run configs.
struct config_error : error {
    using error::error;
};

// Numerical failure: quadrature that did not converge, degenerate solves,
// non-finite field evaluations. Carries the best available residual.
struct numeric_error : error {
    explicit numeric_error(const std::string& what, double residual = 0.0)
        : error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

// Contour/surface pair whose boundaries disagree; residual() holds the
// Hausdorff distance between the two boundary curves.
struct boundary_mismatch_error : numeric_error {
    boundary_mismatch_error(const std::string& what, double hausdorff)
        : numeric_error(what, hausdorff) {}
    double hausdorff_distance() const noexcept { return residual(); }
};

// A simulated experiment violated one of its validity conditions
// (packet escaped its channel during a pulse, absorber leak, ...).
struct experiment_error : error {
    using error::error;
};

// Data analysis could not produce a trustworthy answer
// (no fringes, ambiguous period, scan too coarse).
struct analysis_error : error {
    using error::error;
};

}  // namespace abtk
