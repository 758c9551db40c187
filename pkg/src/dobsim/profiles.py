"""Disturbance force profiles for the grasp / carry / release sequence.

A profile is zero before the grasp begins and after the release ends,
ramps linearly over the one-second grasp and release transitions, and is
constant while the box is carried.  The sign convention is negative:
added payload weight opposes thrust.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputValidationError

__all__ = ["DisturbanceProfile", "base_profile", "form_output_profile"]


@dataclass
class DisturbanceProfile:
    """Uniformly sampled disturbance force series (N)."""

    samples: np.ndarray
    dt: float = 0.01
    t_grasp_start: float = 5.0
    t_grasp_end: float = 6.0
    t_release_start: float = 15.0
    t_release_end: float = 16.0

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if not np.all(np.isfinite(self.samples)):
            raise InputValidationError("profile samples contain non-finite values")
        if not (0.0 < self.t_grasp_start < self.t_grasp_end
                < self.t_release_start < self.t_release_end):
            raise InputValidationError("profile edge times must be strictly increasing")

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.samples)) * self.dt

    def plateau_slice(self) -> slice:
        """Index range of the constant carry segment."""
        lo = int(round(self.t_grasp_end / self.dt))
        hi = int(round(self.t_release_start / self.dt))
        return slice(lo, hi + 1)

    def scaled(self, factor: float) -> "DisturbanceProfile":
        return DisturbanceProfile(
            self.samples * factor, self.dt,
            self.t_grasp_start, self.t_grasp_end,
            self.t_release_start, self.t_release_end,
        )


def base_profile(duration: float = 21.0, dt: float = 0.01, plateau: float = -1.0,
                 t_grasp_start: float = 5.0, t_grasp_end: float = 6.0,
                 t_release_start: float = 15.0, t_release_end: float = 16.0,
                 ) -> DisturbanceProfile:
    """Unit carry profile: linear ramps into and out of a constant plateau."""
    if not (duration > t_release_end and dt > 0):
        raise InputValidationError("duration must extend past the release edge")
    n = int(round(duration / dt)) + 1
    t = np.arange(n) * dt
    samples = np.zeros(n)
    ramp_in = (t >= t_grasp_start) & (t < t_grasp_end)
    samples[ramp_in] = plateau * (t[ramp_in] - t_grasp_start) / (t_grasp_end - t_grasp_start)
    carry = (t >= t_grasp_end) & (t <= t_release_start)
    samples[carry] = plateau
    ramp_out = (t > t_release_start) & (t <= t_release_end)
    samples[ramp_out] = plateau * (t_release_end - t[ramp_out]) / (t_release_end - t_release_start)
    return DisturbanceProfile(samples, dt, t_grasp_start, t_grasp_end,
                              t_release_start, t_release_end)


def form_output_profile(weight_class: int, base: DisturbanceProfile) -> DisturbanceProfile:
    """Scale the base profile by the predicted weight class index.

    Edge times are unchanged: the class only sets the magnitude.
    """
    if not (isinstance(weight_class, (int, np.integer)) and weight_class >= 1):
        raise InputValidationError(f"weight class must be an integer >= 1, got {weight_class!r}")
    if not math.isfinite(float(weight_class)):
        raise InputValidationError("weight class must be finite")
    return base.scaled(float(weight_class))
