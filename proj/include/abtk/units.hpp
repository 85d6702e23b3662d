#pragma once

namespace abtk {

// Natural units: hbar = c = 1 throughout. Charge and mass stay explicit so
// that loop phases read e * (flux) literally.
inline constexpr double hbar = 1.0;
inline constexpr double light_speed = 1.0;

struct Units {
    double charge = 1.0;
    double mass = 1.0;
};

}  // namespace abtk
