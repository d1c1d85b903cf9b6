"""Window and HVAC rules for the air-conditioning, natural-ventilation and mixed strategies."""
from __future__ import annotations

import enum
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from numba import njit


class ControlMode(enum.IntEnum):
    AC = 0
    NV = 1
    MM = 2

    @classmethod
    def parse(cls, text: str) -> "ControlMode":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown strategy {text!r}; expected one of ac, nv, mm") from None

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class ControlThresholds:
    ac_heat_setpoint: float = 21.7
    ac_cool_setpoint: float = 24.4
    nv_indoor_low: float = 21.0
    nv_indoor_high: float = 28.0
    nv_outdoor_low: float = 18.0
    nv_outdoor_high: float = 25.0
    nv_delta_min: float = 3.0
    mm_hvac_low: float = 20.0
    mm_hvac_high: float = 29.0
    nv_open_trigger: float = 23.0
    mm_force_closed: bool = True

    def __post_init__(self):
        if not self.ac_heat_setpoint < self.ac_cool_setpoint:
            raise ValueError("AC heating setpoint must be below the cooling setpoint")
        if not self.nv_indoor_low < self.nv_indoor_high:
            raise ValueError("nv_indoor_low must be below nv_indoor_high")
        if not self.nv_outdoor_low <= self.nv_outdoor_high:
            raise ValueError("nv_outdoor_low must not exceed nv_outdoor_high")
        if not self.mm_hvac_low < self.mm_hvac_high:
            raise ValueError("mm_hvac_low must be below mm_hvac_high")
        if not self.nv_indoor_low < self.nv_open_trigger:
            raise ValueError("opening trigger must sit above the closing threshold")
        if self.nv_delta_min < 0:
            raise ValueError("nv_delta_min must be non-negative")

    def as_array(self) -> np.ndarray:
        return np.array(
            [
                self.ac_heat_setpoint,
                self.ac_cool_setpoint,
                self.nv_indoor_low,
                self.nv_indoor_high,
                self.nv_outdoor_low,
                self.nv_outdoor_high,
                self.nv_delta_min,
                self.mm_hvac_low,
                self.mm_hvac_high,
                self.nv_open_trigger,
                1.0 if self.mm_force_closed else 0.0,
            ]
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ControlThresholds":
        return cls(**d)


# indices into ControlThresholds.as_array()
AC_HEAT, AC_COOL, NV_LOW, NV_HIGH, OUT_LOW, OUT_HIGH, DELTA, MM_LOW, MM_HIGH, OPEN_AT, FORCE_CLOSED = range(11)


@dataclass(frozen=True)
class ControlDecision:
    window_open: bool = False
    hvac_enabled: bool = False
    active_setpoints: Optional[tuple[float, float]] = None


@njit(cache=True)
def window_rule(th, tin, tout, prev_open):
    eligible = tout <= tin - th[DELTA] and th[OUT_LOW] <= tout <= th[OUT_HIGH]
    if not eligible or tin <= th[NV_LOW]:
        return False
    if tin >= th[OPEN_AT]:
        return True
    return prev_open


@njit(cache=True)
def decide_core(mode, th, tin, tout, prev_open):
    """Return ``(window_open, hvac_on, heat_setpoint, cool_setpoint)``."""
    if mode == 0:
        return False, True, th[AC_HEAT], th[AC_COOL]
    window = window_rule(th, tin, tout, prev_open)
    if mode == 1:
        return window, False, 0.0, 0.0
    if tin < th[MM_LOW] or tin > th[MM_HIGH]:
        if th[FORCE_CLOSED] != 0.0:
            window = False
        return window, True, th[MM_LOW], th[MM_HIGH]
    return window, False, 0.0, 0.0


def decide(
    mode: ControlMode,
    thresholds: ControlThresholds,
    tin: float,
    tout: float,
    prev: ControlDecision | None = None,
) -> ControlDecision:
    mode = ControlMode(mode)
    prev_open = bool(prev.window_open) if prev is not None else False
    window, hvac, heat, cool = decide_core(int(mode), thresholds.as_array(), float(tin), float(tout), prev_open)
    return ControlDecision(bool(window), bool(hvac), (float(heat), float(cool)) if hvac else None)
