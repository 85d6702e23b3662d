#pragma once

// Umbrella header.

#include "abtk/analysis.hpp"
#include "abtk/errors.hpp"
#include "abtk/gauge.hpp"
#include "abtk/geometry.hpp"
#include "abtk/grid.hpp"
#include "abtk/io.hpp"
#include "abtk/potentials.hpp"
#include "abtk/quadrature.hpp"
#include "abtk/schrodinger.hpp"
#include "abtk/surface.hpp"
#include "abtk/two_channel.hpp"
#include "abtk/units.hpp"
#include "abtk/version.hpp"
