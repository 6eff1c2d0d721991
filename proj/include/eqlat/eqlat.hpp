#pragma once

#include "bounds.hpp"
#include "diagnostics.hpp"
#include "io.hpp"
#include "lattice.hpp"
#include "linalg.hpp"
#include "operators.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "scenarios.hpp"
#include "spectral.hpp"
#include "states.hpp"
#include "thermal.hpp"

namespace eqlat {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace eqlat
