"""Quadrotor rigid-body model, rotor mixing, integration, and the linear
vertical-axis nominal model.

State layout (12-vector, used everywhere as a plain ndarray):

    index  0   1    2     3    4   5    6  7   8  9   10 11
    value  phi phi' theta th'  psi psi' x  x'  y  y'  z  z'

Angles in rad, positions in m, time derivatives per second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    InfeasibleThrustError,
    InputValidationError,
    IntegrationBlowupError,
)

__all__ = [
    "PhysParams",
    "QuadState",
    "ControlInput",
    "MotorSpeeds",
    "StateSpaceBlock",
    "full_derivative",
    "simplified_derivative",
    "rk4_step",
    "mix_motors",
    "unmix_motors",
    "z_nominal_model",
]


@dataclass(frozen=True)
class PhysParams:
    """Physical constants of the vehicle.

    ``arm`` is the rotor-to-center distance.  The inertia ratios c1..c3 and
    the torque gains c4..c6 are derived once and cached as properties.
    """

    m: float = 1.0
    arm: float = 0.2
    g: float = 9.81
    jx: float = 0.01
    jy: float = 0.01
    jz: float = 0.02
    kf: float = 1e-5
    km: float = 1e-6

    def __post_init__(self):
        for name in ("m", "arm", "g", "jx", "jy", "jz", "kf", "km"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise InputValidationError(f"PhysParams.{name} must be finite and > 0, got {v!r}")

    @property
    def c1(self) -> float:
        return (self.jy - self.jz) / self.jx

    @property
    def c2(self) -> float:
        return (self.jz - self.jx) / self.jy

    @property
    def c3(self) -> float:
        return (self.jx - self.jy) / self.jz

    @property
    def c4(self) -> float:
        return self.arm / self.jx

    @property
    def c5(self) -> float:
        return self.arm / self.jy

    @property
    def c6(self) -> float:
        return self.arm / self.jz

    @property
    def hover_thrust(self) -> float:
        return self.m * self.g

    @classmethod
    def from_config(cls, cfg: dict) -> "PhysParams":
        kw = {}
        for key, name in (
            ("mass", "m"), ("arm", "arm"), ("gravity", "g"),
            ("jx", "jx"), ("jy", "jy"), ("jz", "jz"),
            ("kf", "kf"), ("km", "km"),
        ):
            if key in cfg:
                kw[name] = float(cfg[key])
        return cls(**kw)


@dataclass
class QuadState:
    """Convenience wrapper over the 12-element state vector."""

    vec: np.ndarray = field(default_factory=lambda: np.zeros(12))

    def __post_init__(self):
        self.vec = np.asarray(self.vec, dtype=float)
        if self.vec.shape != (12,):
            raise InputValidationError(f"state must have 12 entries, got shape {self.vec.shape}")
        if not np.all(np.isfinite(self.vec)):
            raise InputValidationError("state contains non-finite entries")

    @classmethod
    def hover(cls, x: float = 0.0, y: float = 0.0, z: float = 0.0) -> "QuadState":
        v = np.zeros(12)
        v[6], v[8], v[10] = x, y, z
        return cls(v)


@dataclass
class ControlInput:
    """Net thrust u1 (N) and body torques u2..u4 (N m)."""

    u1: float = 0.0
    u2: float = 0.0
    u3: float = 0.0
    u4: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.u1, self.u2, self.u3, self.u4])


@dataclass
class MotorSpeeds:
    """Rotor angular speeds, all non-negative (rad/s)."""

    w1: float
    w2: float
    w3: float
    w4: float

    def as_array(self) -> np.ndarray:
        return np.array([self.w1, self.w2, self.w3, self.w4])


class StateSpaceBlock:
    """Discrete-time LTI block x(k+1) = A x + B u, y(k) = C x + D u.

    Holds its own state vector; ``step`` returns the output computed from
    the pre-update state (standard causal realization).
    """

    def __init__(self, A, B, C, D, name: str = "block"):
        self.A = np.atleast_2d(np.asarray(A, dtype=float))
        self.B = np.atleast_2d(np.asarray(B, dtype=float))
        self.C = np.atleast_2d(np.asarray(C, dtype=float))
        self.D = np.atleast_2d(np.asarray(D, dtype=float))
        self.name = name
        n = self.A.shape[0]
        if self.A.shape != (n, n):
            raise DimensionMismatchError(name, f"A must be square, got {self.A.shape}")
        if self.B.shape[0] != n:
            raise DimensionMismatchError(name, f"B has {self.B.shape[0]} rows, A is {n}x{n}")
        if self.C.shape[1] != n:
            raise DimensionMismatchError(name, f"C has {self.C.shape[1]} cols, A is {n}x{n}")
        if self.D.shape != (self.C.shape[0], self.B.shape[1]):
            raise DimensionMismatchError(
                name, f"D shape {self.D.shape} != ({self.C.shape[0]}, {self.B.shape[1]})"
            )
        self.state = np.zeros(n)

    @property
    def n_states(self) -> int:
        return self.A.shape[0]

    def reset(self):
        self.state = np.zeros(self.n_states)

    def copy(self) -> "StateSpaceBlock":
        blk = StateSpaceBlock(self.A.copy(), self.B.copy(), self.C.copy(), self.D.copy(), self.name)
        blk.state = self.state.copy()
        return blk

    def step(self, u) -> np.ndarray:
        """Advance one sample; returns the output at the current step."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        y = self.C @ self.state + self.D @ u
        self.state = self.A @ self.state + self.B @ u
        return y

    def step_scalar(self, u: float) -> float:
        """Scalar fast path for SISO blocks."""
        y = float(self.C @ self.state) + float(self.D[0, 0]) * u
        self.state = self.A @ self.state + self.B[:, 0] * u
        return y

    def scaled_output(self, factor: float) -> "StateSpaceBlock":
        """New block with the output path (C and D) scaled by ``factor``."""
        return StateSpaceBlock(self.A, self.B, self.C * factor, self.D * factor, self.name)

    def scaled_input(self, factor: float) -> "StateSpaceBlock":
        """New block with the input path (B and D) scaled by ``factor``."""
        return StateSpaceBlock(self.A, self.B * factor, self.C, self.D * factor, self.name)


def _validate_inputs(s: np.ndarray, u: ControlInput, d_force: float):
    if not np.all(np.isfinite(s)):
        raise InputValidationError("state contains non-finite entries")
    if not all(math.isfinite(v) for v in (u.u1, u.u2, u.u3, u.u4, d_force)):
        raise InputValidationError("control input or disturbance is non-finite")


def _as_vec(s) -> np.ndarray:
    if isinstance(s, QuadState):
        return s.vec
    return np.asarray(s, dtype=float)


def full_derivative(s, u: ControlInput, p: PhysParams, d_force: float = 0.0) -> np.ndarray:
    """Time derivative of the full nonlinear model.

    The disturbance force enters the thrust channel: the plant sees
    ``u1 + d_force`` as the net vertical rotor force.
    """
    v = _as_vec(s)
    _validate_inputs(v, u, d_force)
    x1, x2, x3, x4, x5, x6 = v[0], v[1], v[2], v[3], v[4], v[5]
    x8, x10, x12 = v[7], v[9], v[11]
    thrust = (u.u1 + d_force) / p.m
    c1s, s1s = math.cos(x1), math.sin(x1)
    c3s, s3s = math.cos(x3), math.sin(x3)
    c5s, s5s = math.cos(x5), math.sin(x5)
    return np.array(
        [
            x2,
            p.c1 * x4 * x6 + p.c4 * u.u2,
            x4,
            p.c2 * x2 * x6 + p.c5 * u.u3,
            x6,
            p.c3 * x2 * x4 + p.c6 * u.u4,
            x8,
            thrust * (c1s * s3s * c5s + s1s * s5s),
            x10,
            thrust * (c1s * s3s * s5s - s1s * c5s),
            x12,
            thrust * (c1s * c3s) - p.g,
        ]
    )


def simplified_derivative(s, u: ControlInput, p: PhysParams, d_force: float = 0.0) -> np.ndarray:
    """Time derivative of the small-angle model (valid near hover)."""
    v = _as_vec(s)
    _validate_inputs(v, u, d_force)
    x1, x2, x3, x4, x5, x6 = v[0], v[1], v[2], v[3], v[4], v[5]
    x8, x10, x12 = v[7], v[9], v[11]
    thrust = (u.u1 + d_force) / p.m
    return np.array(
        [
            x2,
            p.c1 * x4 * x6 + p.c4 * u.u2,
            x4,
            p.c2 * x2 * x6 + p.c5 * u.u3,
            x6,
            p.c3 * x2 * x4 + p.c6 * u.u4,
            x8,
            thrust * (x3 + x1 * x5),
            x10,
            thrust * (x3 * x5 - x1),
            x12,
            thrust - p.g,
        ]
    )


_MODELS = {"full": full_derivative, "simplified": simplified_derivative}


def rk4_step(s, u: ControlInput, p: PhysParams, d_force: float, dt: float,
             model: str = "full", step_index: int | None = None) -> np.ndarray:
    """Classical fourth-order Runge-Kutta advance by ``dt``.

    Control and disturbance are held constant over the step.  Raises
    IntegrationBlowupError if the result is non-finite.
    """
    if not (dt > 0 and math.isfinite(dt)):
        raise InputValidationError(f"dt must be positive and finite, got {dt!r}")
    f = _MODELS[model]
    v = _as_vec(s)
    k1 = f(v, u, p, d_force)
    k2 = f(v + 0.5 * dt * k1, u, p, d_force)
    k3 = f(v + 0.5 * dt * k2, u, p, d_force)
    k4 = f(v + dt * k3, u, p, d_force)
    out = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(out)):
        raise IntegrationBlowupError(step_index)
    return out


def mixing_matrix(p: PhysParams) -> np.ndarray:
    """Rotor-speed-squared to control-input map."""
    kf, km, d = p.kf, p.km, p.arm
    return np.array(
        [
            [kf, kf, kf, kf],
            [0.0, kf * d, 0.0, -kf * d],
            [-kf * d, 0.0, kf * d, 0.0],
            [km, -km, km, -km],
        ]
    )


def mix_motors(w: MotorSpeeds, p: PhysParams) -> ControlInput:
    """Map rotor speeds to net thrust and torques."""
    ww = w.as_array()
    if not np.all(np.isfinite(ww)) or np.any(ww < 0):
        raise InputValidationError("rotor speeds must be finite and non-negative")
    u = mixing_matrix(p) @ (ww * ww)
    return ControlInput(*u)


def unmix_motors(u: ControlInput, p: PhysParams) -> MotorSpeeds:
    """Invert the mixing map; rejects inputs demanding negative omega^2."""
    ua = u.as_array()
    if not np.all(np.isfinite(ua)):
        raise InputValidationError("control input is non-finite")
    w_sq = np.linalg.solve(mixing_matrix(p), ua)
    # tolerate rounding-level negatives only
    for i, val in enumerate(w_sq):
        if val < -1e-12:
            raise InfeasibleThrustError(i + 1, float(val))
    w_sq = np.clip(w_sq, 0.0, None)
    return MotorSpeeds(*np.sqrt(w_sq))


def z_nominal_model(p: PhysParams, dt: float) -> StateSpaceBlock:
    """Discrete nominal model of the vertical axis around hover.

    Input is the normalized thrust deviation (delta u1 / m, an
    acceleration), output is the vertical position deviation.  Zero-order
    hold of the double integrator in closed form; gravity and the hover
    thrust bias are operating-point offsets handled outside this block, so
    the feedthrough is exactly zero.
    """
    if not (dt > 0 and math.isfinite(dt)):
        raise InputValidationError(f"dt must be positive and finite, got {dt!r}")
    A = np.array([[1.0, dt], [0.0, 1.0]])
    B = np.array([[0.5 * dt * dt], [dt]])
    C = np.array([[1.0, 0.0]])
    D = np.array([[0.0]])
    return StateSpaceBlock(A, B, C, D, name="g_nominal")
