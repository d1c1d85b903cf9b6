"""Reference PMV: clothing temperature found by bracketing root search on the heat balance."""
import math

from scipy.optimize import brentq


def pmv_reference(ta, tr, vel, rh, met, clo):
    pa = rh * 10.0 * math.exp(16.6536 - 4030.183 / (ta + 235.0))
    m = met * 58.15
    icl = 0.155 * clo
    fcl = 1.0 + 1.29 * icl if icl <= 0.078 else 1.05 + 0.645 * icl
    hcf = 12.1 * math.sqrt(vel)

    def hc(tcl):
        return max(2.38 * abs(tcl - ta) ** 0.25, hcf)

    def balance(tcl):
        rad = 3.96e-8 * fcl * ((tcl + 273.0) ** 4 - (tr + 273.0) ** 4)
        conv = fcl * hc(tcl) * (tcl - ta)
        return 35.7 - 0.028 * m - icl * (rad + conv) - tcl

    tcl = brentq(balance, -40.0, 80.0, xtol=1e-10)
    loss = (
        3.05e-3 * (5733.0 - 6.99 * m - pa)
        + 0.42 * max(m - 58.15, 0.0)  # no sweat loss below resting metabolism
        + 1.7e-5 * m * (5867.0 - pa)
        + 0.0014 * m * (34.0 - ta)
        + 3.96e-8 * fcl * ((tcl + 273.0) ** 4 - (tr + 273.0) ** 4)
        + fcl * hc(tcl) * (tcl - ta)
    )
    return (0.303 * math.exp(-0.036 * m) + 0.028) * (m - loss)
