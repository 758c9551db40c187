"""Conventional discrete-time disturbance observer.

The observer subtracts a delayed copy of the applied input from an
inverse-model reconstruction of it: the inverse path runs the measured
vertical deviation through a double differentiator and a second-order
low-pass, the input path runs the applied thrust deviation through the
same low-pass and a pure unit delay.  Filtering both branches with the
same sections keeps the loop stable at any cutoff and makes the cutoff
the estimate bandwidth; filtering the inverse branch alone destabilizes
the loop below roughly 80 rad/s because the integrating compensator
formed with the delay branch is left uncompensated at crossover.

All estimate-side signals are in N.  The conversion between thrust and
the normalized acceleration input of the nominal model happens at the
observer boundary via the vehicle mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import PhysParams, StateSpaceBlock, z_nominal_model
from .errors import EstimatorFaultError, InvalidCutoffError

__all__ = [
    "DobConfig",
    "DobSignals",
    "unit_delay_block",
    "lowpass2_block",
    "build_inverse_D",
    "input_branch_block",
    "DisturbanceObserver",
    "dob_step",
    "compensated_input",
    "DEFAULT_ROLLOFF_RAD_S",
]

DEFAULT_ROLLOFF_RAD_S = 20.0


def unit_delay_block() -> StateSpaceBlock:
    """Pure one-sample delay, realization [A, B, C, D] = [0, 1, 1, 0]."""
    return StateSpaceBlock([[0.0]], [[1.0]], [[1.0]], [[0.0]], name="q_delay")


def _check_cutoff(rolloff: float, dt: float):
    nyquist = math.pi / dt
    if not (0.0 < rolloff < nyquist) or not math.isfinite(rolloff):
        raise InvalidCutoffError(
            f"rolloff {rolloff!r} rad/s outside (0, {nyquist:.4g}) for dt={dt}"
        )


def lowpass2_block(rolloff: float, dt: float) -> StateSpaceBlock:
    """Two cascaded first-order sections, each (1-a) q / (q - a) with
    a = exp(-rolloff dt).  Unit DC gain, direct feedthrough (1-a)^2 so the
    section adds no sample delay of its own."""
    _check_cutoff(rolloff, dt)
    a = math.exp(-rolloff * dt)
    b = 1.0 - a
    A = np.array([[a, 0.0], [b * a, a]])
    B = np.array([[b], [b * b]])
    C = np.array([[b * a, a]])
    D = np.array([[b * b]])
    return StateSpaceBlock(A, B, C, D, name="lowpass2")


def build_inverse_D(gn: StateSpaceBlock, rolloff: float, dt: float = 0.01) -> StateSpaceBlock:
    """Proper stable approximation of the inverse of the vertical model.

    Backward second difference scaled by 1/dt^2 composed with the
    second-order low-pass.  Constant inputs give zero steady output; fed
    the step response of the vertical model the output settles at one.

    Parameters
    ----------
    gn : StateSpaceBlock
        Vertical nominal model, used to pin the sample time convention.
    rolloff : float
        Low-pass cutoff in rad/s, below the Nyquist rate pi/dt.
    """
    _check_cutoff(rolloff, dt)
    a = math.exp(-rolloff * dt)
    b = 1.0 - a
    s = 1.0 / (dt * dt)
    # states: z(k-1), z(k-2), and the two low-pass sections
    A = np.array(
        [
            [0.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [-2.0 * b * s, b * s, a, 0.0],
            [-2.0 * b * b * s, b * b * s, b * a, a],
        ]
    )
    B = np.array([[1.0], [0.0], [b * s], [b * b * s]])
    C = np.array([[-2.0 * b * b * s, b * b * s, b * a, a]])
    D = np.array([[b * b * s]])
    return StateSpaceBlock(A, B, C, D, name="d_inverse")


def input_branch_block(rolloff: float, dt: float = 0.01) -> StateSpaceBlock:
    """Conditioning low-pass and unit delay composed into one block, for
    loop analysis and the nominal run.  Zero feedthrough."""
    lp = lowpass2_block(rolloff, dt)
    A = np.zeros((3, 3))
    A[:2, :2] = lp.A
    A[2, :2] = lp.C
    B = np.zeros((3, 1))
    B[:2] = lp.B
    B[2] = lp.D
    C = np.array([[0.0, 0.0, 1.0]])
    D = np.array([[0.0]])
    return StateSpaceBlock(A, B, C, D, name="q_branch")


@dataclass
class DobConfig:
    """Observer wiring: delay filter, plant inverse, input conditioner.

    ``estimate_sat`` bounds the estimate magnitude in N to prevent
    wind-up during the grasp transient.
    """

    q_block: StateSpaceBlock
    d_block: StateSpaceBlock
    u_conditioner: StateSpaceBlock
    enabled: bool = True
    estimate_sat: float = 2.0 * 9.81
    mass: float = 1.0
    rolloff: float = DEFAULT_ROLLOFF_RAD_S
    dt: float = 0.01

    @classmethod
    def default(cls, p: PhysParams | None = None, dt: float = 0.01,
                rolloff: float = DEFAULT_ROLLOFF_RAD_S, enabled: bool = True) -> "DobConfig":
        p = p or PhysParams()
        gn = z_nominal_model(p, dt)
        return cls(
            q_block=unit_delay_block(),
            d_block=build_inverse_D(gn, rolloff, dt),
            u_conditioner=lowpass2_block(rolloff, dt),
            enabled=enabled,
            estimate_sat=2.0 * p.hover_thrust,
            mass=p.m,
            rolloff=rolloff,
            dt=dt,
        )

    @classmethod
    def from_config(cls, cfg: dict, p: PhysParams | None = None) -> "DobConfig":
        p = p or PhysParams.from_config(cfg)
        dt = float(cfg.get("dt", 0.01))
        rolloff = float(cfg.get("d_rolloff_rad_s", DEFAULT_ROLLOFF_RAD_S))
        out = cls.default(p, dt, rolloff, enabled=bool(cfg.get("dob_enabled", True)))
        if "estimate_sat" in cfg:
            out.estimate_sat = float(cfg["estimate_sat"])
        return out


@dataclass
class DobSignals:
    """Per-step observer signals, all in N."""

    d_hat: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    u_bar: float = 0.0
    u_applied: float = 0.0


class DisturbanceObserver:
    """Stateful observer advancing its filters once per control cycle.

    Single-owner: the internal filters carry state, so instances are
    transferable between threads but not shareable.
    """

    def __init__(self, cfg: DobConfig):
        self.cfg = cfg
        self._last = DobSignals()

    def reset(self):
        self.cfg.q_block.reset()
        self.cfg.d_block.reset()
        self.cfg.u_conditioner.reset()
        self._last = DobSignals()

    @property
    def last_signals(self) -> DobSignals:
        return self._last

    def step(self, z_meas: float, u_prev: float) -> float:
        """Estimate the input disturbance from the measured vertical
        deviation and the previously applied thrust deviation (both N/m).

        ``z_meas`` is the deviation of z from the commanded reference,
        ``u_prev`` the compensated thrust deviation applied one cycle
        earlier.  Non-finite signals hold the previous estimate and raise
        EstimatorFaultError.
        """
        if not (math.isfinite(z_meas) and math.isfinite(u_prev)):
            raise EstimatorFaultError(
                f"non-finite observer input (z={z_meas!r}, u_prev={u_prev!r}); "
                f"estimate held at {self._last.d_hat:.6g}"
            )
        m = self.cfg.mass
        alpha = m * self.cfg.d_block.step_scalar(z_meas)
        conditioned = self.cfg.u_conditioner.step_scalar(u_prev / m)
        beta = m * self.cfg.q_block.step_scalar(conditioned)
        d_hat = alpha - beta
        if not math.isfinite(d_hat):
            raise EstimatorFaultError(
                f"estimator produced a non-finite estimate; held at {self._last.d_hat:.6g}"
            )
        sat = self.cfg.estimate_sat
        d_hat = min(max(d_hat, -sat), sat)
        if not self.cfg.enabled:
            d_hat = 0.0
        self._last = DobSignals(d_hat=d_hat, alpha=alpha, beta=beta)
        return d_hat


def dob_step(z_meas: float, u_prev: float, cfg: DobConfig) -> float:
    """Advance the filters held inside ``cfg`` by one cycle and return the
    estimate; the functional face of DisturbanceObserver."""
    return DisturbanceObserver(cfg).step(z_meas, u_prev)


def compensated_input(u_bar: float, d_hat: float, d_f: float = 0.0) -> float:
    """Plant input after subtracting the estimate and the learning signal."""
    if not all(math.isfinite(v) for v in (u_bar, d_hat, d_f)):
        raise EstimatorFaultError("non-finite compensation input")
    return u_bar - d_hat - d_f
