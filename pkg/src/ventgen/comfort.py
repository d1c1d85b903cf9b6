"""PMV/PPD heat-balance model, adaptive comfort model and neutrality tests."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from numba import njit

ADAPTIVE_SLOPE = 0.31
ADAPTIVE_INTERCEPT = 17.8
ADAPTIVE_DOMAIN = (10.0, 33.5)
BANDS = {"pct80": 3.5, "pct90": 2.5}

PMV_MAX_ITER = 150
# clothing surface temperature is iterated in units of 100 K
_TCL_TOL = 1e-4 / 100.0


class ComfortError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PmvInputs:
    air_temp: float
    mean_radiant_temp: float
    air_velocity: float
    rel_humidity: float
    metabolic_rate: float
    clothing: float

    def __post_init__(self):
        if self.air_velocity < 0:
            raise ValueError("air velocity must be >= 0")
        if not 0 <= self.rel_humidity <= 100:
            raise ValueError("relative humidity must be within 0..100 %")
        if self.metabolic_rate <= 0:
            raise ValueError("metabolic rate must be > 0")
        if self.clothing < 0:
            raise ValueError("clothing insulation must be >= 0")


@dataclass(frozen=True)
class ComfortVerdict:
    model: str
    value: float
    neutral: bool


class ComfortTemp(NamedTuple):
    temperature: float
    clamped: bool


@njit(cache=True)
def pmv_core(ta, tr, vel, rh, met, clo):
    """Fanger PMV; returns nan when the clothing temperature fails to converge."""
    pa = rh * 10.0 * math.exp(16.6536 - 4030.183 / (ta + 235.0))
    icl = 0.155 * clo
    m = met * 58.15
    mw = m  # no external work
    if icl <= 0.078:
        fcl = 1.0 + 1.29 * icl
    else:
        fcl = 1.05 + 0.645 * icl
    hcf = 12.1 * math.sqrt(vel)
    taa = ta + 273.0
    tra = tr + 273.0
    tcla = taa + (35.5 - ta) / (3.5 * icl + 0.1)
    p1 = icl * fcl
    p2 = p1 * 3.96
    p3 = p1 * 100.0
    p4 = p1 * taa
    p5 = 308.7 - 0.028 * mw + p2 * (tra / 100.0) ** 4
    xn = tcla / 100.0
    xf = tcla / 50.0
    hc = hcf
    n = 0
    while abs(xn - xf) > _TCL_TOL:
        xf = (xf + xn) / 2.0
        hcn = 2.38 * abs(100.0 * xf - taa) ** 0.25
        hc = hcf if hcf > hcn else hcn
        xn = (p5 + p4 * hc - p2 * xf**4) / (100.0 + p3 * hc)
        n += 1
        if n > PMV_MAX_ITER:
            return math.nan
    tcl = 100.0 * xn - 273.0
    hl1 = 3.05e-3 * (5733.0 - 6.99 * mw - pa)
    hl2 = 0.42 * (mw - 58.15) if mw > 58.15 else 0.0
    hl3 = 1.7e-5 * m * (5867.0 - pa)
    hl4 = 0.0014 * m * (34.0 - ta)
    hl5 = 3.96 * fcl * (xn**4 - (tra / 100.0) ** 4)
    hl6 = fcl * hc * (tcl - ta)
    ts = 0.303 * math.exp(-0.036 * m) + 0.028
    return ts * (mw - hl1 - hl2 - hl3 - hl4 - hl5 - hl6)


@njit(cache=True)
def ppd_core(pmv):
    return 100.0 - 95.0 * math.exp(-0.03353 * pmv**4 - 0.2179 * pmv**2)


def ppd(pmv: float) -> float:
    return float(ppd_core(pmv))


def pmv_ppd(inputs: PmvInputs) -> tuple[float, float]:
    value = float(
        pmv_core(
            inputs.air_temp,
            inputs.mean_radiant_temp,
            inputs.air_velocity,
            inputs.rel_humidity,
            inputs.metabolic_rate,
            inputs.clothing,
        )
    )
    if math.isnan(value):
        raise ComfortError(f"clothing temperature did not converge in {PMV_MAX_ITER} iterations for {inputs}")
    return value, ppd(value)


def adaptive_comfort_temp(t_pma: float) -> ComfortTemp:
    """Neutral operative temperature for a prevailing mean outdoor temperature.

    Outside the model's 10-33.5 C applicability domain the input is clamped
    and ``clamped`` is set.
    """
    lo, hi = ADAPTIVE_DOMAIN
    t = min(max(t_pma, lo), hi)
    return ComfortTemp(ADAPTIVE_SLOPE * t + ADAPTIVE_INTERCEPT, t != t_pma)


def adaptive_neutral(operative_temp: float, t_pma: float, band: str = "pct80") -> bool:
    try:
        limit = BANDS[band]
    except KeyError:
        raise ValueError(f"unknown acceptability band {band!r}") from None
    return abs(operative_temp - adaptive_comfort_temp(t_pma).temperature) <= limit


def pmv_neutral(pmv: float, threshold: float = 0.5) -> bool:
    if threshold <= 0:
        raise ValueError("PMV threshold must be positive")
    return abs(pmv) <= threshold


def operative_temperature(air_temp: float, mean_radiant_temp: float) -> float:
    return 0.5 * (air_temp + mean_radiant_temp)


@dataclass(frozen=True)
class ComfortConfig:
    model: str = "adaptive"
    band: str = "pct80"
    pmv_threshold: float = 0.5
    metabolic_rate: float = 1.1
    clo_cooling: float = 0.5
    clo_heating: float = 1.0
    cooling_months: tuple[int, ...] = (5, 6, 7, 8, 9, 10)
    velocity_closed: float = 0.1
    velocity_open: float = 0.8
    prevailing_window: int = 7
    occupied_only: bool = True

    def __post_init__(self):
        if self.model not in ("adaptive", "pmv"):
            raise ValueError(f"unknown comfort model {self.model!r}")
        if self.band not in BANDS:
            raise ValueError(f"unknown band {self.band!r}")
        if self.pmv_threshold <= 0:
            raise ValueError("pmv_threshold must be positive")

    @property
    def band_width(self) -> float:
        return BANDS[self.band]

    def clothing(self, month: int) -> float:
        return self.clo_cooling if month in self.cooling_months else self.clo_heating

    @classmethod
    def from_dict(cls, d: dict) -> "ComfortConfig":
        d = dict(d)
        if "cooling_months" in d:
            d["cooling_months"] = tuple(int(m) for m in d["cooling_months"])
        return cls(**d)
