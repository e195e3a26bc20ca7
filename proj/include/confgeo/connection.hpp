#pragma once

#include "confgeo/analysis.hpp"
#include "confgeo/jet.hpp"

namespace confgeo {

/// Coefficients of the characteristic connection in the fixed gauge.
ConnectionCoeffs<Expr> connection_coefficients(const OdeSystem& sys, Hm2Reading reading = Hm2Reading::Corrected);

}  // namespace confgeo
