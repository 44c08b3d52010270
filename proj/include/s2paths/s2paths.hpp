#pragma once

#include "analytic.hpp"
#include "distributions.hpp"
#include "elastica.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "propagators.hpp"
#include "pt_paths.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace s2paths {

inline constexpr const char* version = "0.1.0";

}  // namespace s2paths
