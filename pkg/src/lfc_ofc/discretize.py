"""Zero-order-hold discretization and the fine-step integration oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .model import StateSpaceModel


@dataclass
class DiscreteModel:
    """Discrete model x_{k+1} = Phi x_k + Delta u_k, y_k = C x_k + D u_k."""

    phi: np.ndarray
    delta: np.ndarray
    c: np.ndarray
    d: np.ndarray
    ts: float
    state_labels: list[str] | None = None
    input_labels: list[str] | None = None
    output_labels: list[str] | None = None

    @property
    def n(self) -> int:
        return self.phi.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.delta.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.c.shape[0]


def zoh(model: StateSpaceModel, ts: float) -> DiscreteModel:
    """Discretize under zero-order hold at sampling interval ts.

    Phi = exp(A ts) and Delta = (integral of exp(A tau)) B come out of the
    top blocks of the augmented matrix exponential exp(ts [[A, B], [0, 0]]),
    evaluated by scaling-and-squaring.
    """
    if not np.isfinite(ts) or ts <= 0.0:
        raise ValueError(f"sampling interval must be > 0, got {ts!r}")
    if not (np.all(np.isfinite(model.a)) and np.all(np.isfinite(model.b))):
        raise ValueError("model matrices must be finite")
    n, m = model.n, model.n_inputs
    aug = np.zeros((n + m, n + m))
    aug[:n, :n] = model.a
    aug[:n, n:] = model.b
    exp_aug = scipy.linalg.expm(aug * ts)
    return DiscreteModel(
        phi=exp_aug[:n, :n],
        delta=exp_aug[:n, n:],
        c=model.c.copy(),
        d=model.d.copy(),
        ts=ts,
        state_labels=list(model.state_labels),
        input_labels=list(model.input_labels),
        output_labels=list(model.output_labels),
    )


def rk4_lti(
    a: np.ndarray,
    b: np.ndarray,
    x0: np.ndarray,
    u_samples: np.ndarray,
    dt_sample: float,
    substeps: int = 100,
) -> np.ndarray:
    """Integrate dx/dt = A x + B u with u held constant over each sample.

    Classic fixed-step RK4 with ``substeps`` stages per sampling interval;
    returns the states at the sample instants, shape (K+1, n) for K samples
    of input.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    u_samples = np.atleast_2d(np.asarray(u_samples, dtype=float))
    n_steps = u_samples.shape[0]
    h = dt_sample / substeps
    x = np.asarray(x0, dtype=float).copy()
    out = np.empty((n_steps + 1, a.shape[0]))
    out[0] = x
    for k in range(n_steps):
        bu = b @ u_samples[k]
        for _ in range(substeps):
            k1 = a @ x + bu
            k2 = a @ (x + 0.5 * h * k1) + bu
            k3 = a @ (x + 0.5 * h * k2) + bu
            k4 = a @ (x + h * k3) + bu
            x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = x
    return out


def check_against_integration(
    model: StateSpaceModel,
    discrete: DiscreteModel,
    horizon: float,
    u_samples: np.ndarray,
    x0: np.ndarray | None = None,
    substeps: int = 100,
) -> float:
    """Max deviation at the sample instants between Phi/Delta stepping and RK4.

    The input must be piecewise constant on the sampling grid (one row per
    interval).  This is the validation oracle for ``zoh``.
    """
    n_steps = int(round(horizon / discrete.ts))
    u_samples = np.atleast_2d(np.asarray(u_samples, dtype=float))
    if u_samples.shape[0] < n_steps:
        raise ValueError(f"need {n_steps} input samples, got {u_samples.shape[0]}")
    u_samples = u_samples[:n_steps]
    x = np.zeros(model.n) if x0 is None else np.asarray(x0, dtype=float).copy()
    fine = rk4_lti(model.a, model.b, x, u_samples, discrete.ts, substeps=substeps)
    coarse = np.empty_like(fine)
    coarse[0] = x
    for k in range(n_steps):
        x = discrete.phi @ x + discrete.delta @ u_samples[k]
        coarse[k + 1] = x
    return float(np.max(np.abs(coarse - fine)))
