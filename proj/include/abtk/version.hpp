#pragma once

namespace abtk {

inline constexpr const char* version = "0.1.0";

}  // namespace abtk
