#include "ddspce/power_curves.hpp"

#include <cmath>

namespace ddspce {

double wind_power(double v_mps, const WindFarm& w) {
  if (v_mps <= w.v_in || v_mps > w.v_out) return 0.0;
  if (v_mps <= w.v_rated)
    return w.p_rated_mw * (v_mps - w.v_in) / (w.v_rated - w.v_in);
  return w.p_rated_mw;
}

double wind_reactive(double p_mw, double power_factor) {
  if (power_factor >= 1.0) return 0.0;
  return -p_mw * std::tan(std::acos(power_factor));
}

double solar_power(double r_wm2, const SolarPlant& p) {
  if (r_wm2 <= 0.0) return 0.0;
  if (r_wm2 <= p.r_c)
    return p.p_rated_mw * r_wm2 * r_wm2 / (p.r_c * p.r_rated);
  if (r_wm2 <= p.r_rated) return p.p_rated_mw * r_wm2 / p.r_rated;
  return p.p_rated_mw;
}

}  // namespace ddspce
