#pragma once

#include "ddspce/network.hpp"

namespace ddspce {

/// Wind speed-power curve: zero at or below cut-in and above cut-out,
/// linear between cut-in and rated, flat at rated power up to cut-out.
double wind_power(double v_mps, const WindFarm& w);

/// Reactive power drawn by a wind plant running at p_mw with the given
/// lagging power factor (negative = absorbing).
double wind_reactive(double p_mw, double power_factor);

/// Radiation-power curve: quadratic below r_c, linear between r_c and the
/// rated radiation, flat above; continuous at both knots.
double solar_power(double r_wm2, const SolarPlant& p);

}  // namespace ddspce
