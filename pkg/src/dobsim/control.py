"""Backstepping baseline controller.

The thrust law is a PD tracking law on vertical position; the lateral
loop goes through virtual roll/pitch references whose first and second
derivatives are formed by backward differences at the controller rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import ControlInput, PhysParams, QuadState
from .errors import DegenerateDenominatorError, InputValidationError

__all__ = [
    "BacksteppingGains",
    "VirtualRefs",
    "Reference",
    "thrust_law",
    "virtual_refs",
    "torque_laws",
    "BacksteppingController",
]

CLAMP = math.pi / 4.0


@dataclass(frozen=True)
class BacksteppingGains:
    """Attitude gains k1..k6 plus the vertical PD pair, all positive.

    kz_p = kz_d = 1 recovers the plain altitude regulation law.
    """

    k1: float = 4.0
    k2: float = 4.0
    k3: float = 4.0
    k4: float = 4.0
    k5: float = 2.0
    k6: float = 2.0
    kz_p: float = 2.4
    kz_d: float = 2.6

    def __post_init__(self):
        for name in ("k1", "k2", "k3", "k4", "k5", "k6", "kz_p", "kz_d"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InputValidationError(f"gain {name} must be finite and > 0, got {v!r}")

    @classmethod
    def from_config(cls, cfg: dict) -> "BacksteppingGains":
        kw = {k: float(cfg[k]) for k in
              ("k1", "k2", "k3", "k4", "k5", "k6", "kz_p", "kz_d") if k in cfg}
        return cls(**kw)


@dataclass
class VirtualRefs:
    """Desired roll/pitch/yaw with discrete first and second derivatives."""

    x1_star: float = 0.0
    x3_star: float = 0.0
    x5_star: float = 0.0
    x1_dot: float = 0.0
    x3_dot: float = 0.0
    x5_dot: float = 0.0
    x1_ddot: float = 0.0
    x3_ddot: float = 0.0
    x5_ddot: float = 0.0


@dataclass(frozen=True)
class Reference:
    """Position / velocity setpoint in the inertial frame."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    vx: float = 0.0
    vy: float = 0.0
    vz: float = 0.0


def thrust_law(s, r_z: float, r_zdot: float, p: PhysParams, g: BacksteppingGains) -> float:
    """PD thrust: m * (g + kz_p * (r_z - z) + kz_d * (r_zdot - zdot))."""
    v = s.vec if isinstance(s, QuadState) else np.asarray(s, dtype=float)
    if not (math.isfinite(r_z) and math.isfinite(r_zdot)):
        raise InputValidationError("z reference is non-finite")
    return p.m * (p.g + g.kz_p * (r_z - v[10]) + g.kz_d * (r_zdot - v[11]))


def virtual_refs(s, ref: Reference, p: PhysParams) -> tuple[float, float, float]:
    """Raw virtual roll/pitch/yaw targets (before clamping and differencing).

    Raises DegenerateDenominatorError when g - z - zdot is within 10% of
    zero relative to g; callers hold the previous value in that case.
    """
    v = s.vec if isinstance(s, QuadState) else np.asarray(s, dtype=float)
    denom = p.g - v[10] - v[11]
    if abs(denom) < 0.1 * p.g:
        raise DegenerateDenominatorError(
            f"g - z - zdot = {denom:.4g} too close to zero for virtual references"
        )
    ex7 = v[6] - ref.x
    ex8 = v[7] - ref.vx
    ex9 = v[8] - ref.y
    ex10 = v[9] - ref.vy
    x1 = (ex9 + ex10) / denom
    x3 = -(ex7 + ex8) / denom
    x1 = min(max(x1, -CLAMP), CLAMP)
    x3 = min(max(x3, -CLAMP), CLAMP)
    return x1, x3, 0.0


def torque_laws(s, v: VirtualRefs, p: PhysParams, g: BacksteppingGains) -> tuple[float, float, float]:
    """Attitude torques driving roll/pitch/yaw onto the virtual references."""
    sv = s.vec if isinstance(s, QuadState) else np.asarray(s, dtype=float)
    x1, x2, x3, x4, x5, x6 = sv[0], sv[1], sv[2], sv[3], sv[4], sv[5]

    e1 = x1 - v.x1_star
    e1_dot = x2 - v.x1_dot
    e2 = x2 - (v.x1_dot - g.k1 * e1)
    u2 = (v.x1_ddot - g.k1 * e1_dot - g.k2 * e2 - p.c1 * x4 * x6) / p.c4

    e3 = x3 - v.x3_star
    e3_dot = x4 - v.x3_dot
    e4 = x4 - (v.x3_dot - g.k3 * e3)
    u3 = (v.x3_ddot - g.k3 * e3_dot - g.k4 * e4 - p.c2 * x2 * x6) / p.c5

    e5 = x5 - v.x5_star
    e5_dot = x6 - v.x5_dot
    e6 = x6 - (v.x5_dot - g.k5 * e5)
    u4 = (v.x5_ddot - g.k5 * e5_dot - g.k6 * e6 - p.c3 * x2 * x4) / p.c6

    return u2, u3, u4


class BacksteppingController:
    """Full control step with internal memory for reference differencing.

    Instances are single-owner: the two-sample history used for the
    backward differences makes concurrent sharing unsafe.
    """

    def __init__(self, p: PhysParams, gains: BacksteppingGains | None = None, dt: float = 0.01):
        self.p = p
        self.gains = gains or BacksteppingGains()
        self.dt = dt
        self.reset()

    def reset(self):
        self._prev = None      # (x1, x3, x5) one step back
        self._prev2 = None     # two steps back
        self._held = VirtualRefs()

    def _difference(self, raw: tuple[float, float, float]) -> VirtualRefs:
        dt = self.dt
        out = VirtualRefs(x1_star=raw[0], x3_star=raw[1], x5_star=raw[2])
        if self._prev is not None:
            out.x1_dot = (raw[0] - self._prev[0]) / dt
            out.x3_dot = (raw[1] - self._prev[1]) / dt
            out.x5_dot = (raw[2] - self._prev[2]) / dt
        if self._prev2 is not None:
            out.x1_ddot = (raw[0] - 2.0 * self._prev[0] + self._prev2[0]) / (dt * dt)
            out.x3_ddot = (raw[1] - 2.0 * self._prev[1] + self._prev2[1]) / (dt * dt)
            out.x5_ddot = (raw[2] - 2.0 * self._prev[2] + self._prev2[2]) / (dt * dt)
        self._prev2 = self._prev
        self._prev = raw
        return out

    def step(self, s, ref: Reference) -> ControlInput:
        """Compute thrust and torques for the current state and reference."""
        u1 = thrust_law(s, ref.z, ref.vz, self.p, self.gains)
        try:
            raw = virtual_refs(s, ref, self.p)
        except DegenerateDenominatorError:
            # hold the previous virtual references through the singularity
            vr = self._held
        else:
            vr = self._difference(raw)
            self._held = vr
        u2, u3, u4 = torque_laws(s, vr, self.p, self.gains)
        return ControlInput(u1, u2, u3, u4)


def control_step(s, ref: Reference, p: PhysParams, g: BacksteppingGains,
                 controller: BacksteppingController | None = None) -> ControlInput:
    """One-shot control evaluation (fresh differencing memory unless a
    controller instance is supplied)."""
    ctl = controller or BacksteppingController(p, g)
    return ctl.step(s, ref)
