"""Continuous-time model of an N-area interconnected power system.

Each area is the standard textbook cascade governor -> turbine (-> reheater)
-> generator with droop feedback 1/r closing into the governor.  Adjacent
areas are coupled through tie-line power states driven by their frequency
difference.  Outputs are the area control errors ACE_i = b_i*dF_i + dPtie_i
followed by the frequency deviations dF_i.

Parameter defaults are literature-standard values, not tied to any specific
plant; everything is overridable per area and per tie.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class ModelError(ValueError):
    """Inconsistent area/tie parameters or a malformed model."""


class AreaKind(str, Enum):
    REHEAT = "reheat-steam"
    NONREHEAT = "nonreheat-steam"
    HYDRO = "hydro"

    @property
    def n_states(self) -> int:
        """Internal states contributed by an area of this kind."""
        return _KIND_STATES[self]


_KIND_STATES = {AreaKind.REHEAT: 4, AreaKind.NONREHEAT: 3, AreaKind.HYDRO: 4}

# Fields that must be positive and finite for each kind; everything else is
# carried but ignored.
_REQUIRED_FIELDS = {
    AreaKind.REHEAT: ("tp", "kp", "tg", "tt", "tr", "kr", "r", "b"),
    AreaKind.NONREHEAT: ("tp", "kp", "tg", "tt", "r", "b"),
    AreaKind.HYDRO: ("tp", "kp", "tg", "tw", "trs", "trh", "r", "b"),
}


@dataclass(frozen=True)
class AreaParams:
    """Physical constants of one generation area.

    Time constants in seconds; kp in Hz/pu-MW, r in Hz/pu-MW, b in pu-MW/Hz.
    Fields irrelevant to the kind (e.g. ``tr`` for a hydro area) are ignored.
    """

    kind: AreaKind = AreaKind.REHEAT
    tp: float = 20.0      # generator time constant
    kp: float = 120.0     # generator gain
    tg: float = 0.08      # governor time constant
    tt: float = 0.3       # turbine time constant (steam kinds)
    tr: float = 10.0      # reheater time constant (reheat only)
    kr: float = 0.5       # reheat fraction (reheat only)
    tw: float = 1.0       # water starting time (hydro only)
    trs: float = 5.0      # transient-droop compensator lead (hydro only)
    trh: float = 28.75    # transient-droop compensator lag (hydro only)
    r: float = 2.4        # speed droop
    b: float = 0.425      # area frequency bias / control gain

    def __post_init__(self):
        object.__setattr__(self, "kind", AreaKind(self.kind))
        for name in _REQUIRED_FIELDS[self.kind]:
            value = getattr(self, name)
            if value is None or not np.isfinite(value) or value <= 0.0:
                raise ModelError(
                    f"area kind {self.kind.value!r} needs {name} > 0, got {value!r}"
                )


@dataclass(frozen=True)
class TieParams:
    """Tie line between two areas (1-based indices, stored low-to-high).

    The tie state is the power flowing from the lower- to the higher-numbered
    area; ``t`` is the synchronizing coefficient in pu-MW/Hz-s.
    """

    from_area: int
    to_area: int
    t: float = 0.545

    def __post_init__(self):
        if self.from_area == self.to_area:
            raise ModelError(f"self-tie on area {self.from_area}")
        if not np.isfinite(self.t) or self.t <= 0.0:
            raise ModelError(f"tie ({self.from_area},{self.to_area}) needs t > 0, got {self.t!r}")
        if self.from_area > self.to_area:
            lo, hi = self.to_area, self.from_area
            object.__setattr__(self, "from_area", lo)
            object.__setattr__(self, "to_area", hi)


@dataclass
class StateSpaceModel:
    """Labeled state-space model dx/dt = A x + B u, y = C x + D u."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    state_labels: list[str]
    input_labels: list[str]
    output_labels: list[str]

    def __post_init__(self):
        n, m, p = self.a.shape[0], self.b.shape[1], self.c.shape[0]
        if self.a.shape != (n, n) or self.b.shape != (n, m):
            raise ModelError("A/B dimension mismatch")
        if self.c.shape != (p, n) or self.d.shape != (p, m):
            raise ModelError("C/D dimension mismatch")
        for labels, count, what in (
            (self.state_labels, n, "state"),
            (self.input_labels, m, "input"),
            (self.output_labels, p, "output"),
        ):
            if len(labels) != count or len(set(labels)) != count:
                raise ModelError(f"{what} labels must cover every index exactly once")

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.b.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.c.shape[0]

    def state_index(self, label: str) -> int:
        return self.state_labels.index(label)

    def input_index(self, label: str) -> int:
        return self.input_labels.index(label)

    def output_index(self, label: str) -> int:
        return self.output_labels.index(label)


@dataclass(frozen=True)
class AreaBlock:
    """One area's internal dynamics: x' = a x + load*dPd + control*dPc + ..."""

    a: np.ndarray
    load: np.ndarray      # column multiplying the local load disturbance dPd
    control: np.ndarray   # column multiplying the speed-changer input dPc
    labels: tuple[str, ...]   # per-state names without the area number
    freq_slot: int = 0        # row index of dF inside the block
    power_gain: float = 0.0   # kp/tp, the factor on net tie outflow in the dF row
    governor_slot: int = 0    # row index of the governor state (integral path entry)
    governor_gain: float = 0.0  # 1/tg


def build_area_block(params: AreaParams) -> AreaBlock:
    """Assemble one area's internal continuous-time block.

    The block covers [dF, mechanical-power states..., governor]; tie-line
    coupling and ACE integral augmentation are added at system level.
    """
    kp_tp = params.kp / params.tp

    if params.kind is AreaKind.NONREHEAT:
        # states: dF, Pt (turbine power), Pg (governor valve)
        a = np.array(
            [
                [-1.0 / params.tp, kp_tp, 0.0],
                [0.0, -1.0 / params.tt, 1.0 / params.tt],
                [-1.0 / (params.r * params.tg), 0.0, -1.0 / params.tg],
            ]
        )
        labels = ("dF", "Pt", "Pg")
        gov = 2
    elif params.kind is AreaKind.REHEAT:
        # states: dF, Pt (reheater output), Pr (HP turbine output), Pg
        # Pt/Pr realize the reheater (1 + kr*tr*s)/((1 + tt*s)(1 + tr*s)).
        a = np.array(
            [
                [-1.0 / params.tp, kp_tp, 0.0, 0.0],
                [0.0, -1.0 / params.tr, 1.0 / params.tr - params.kr / params.tt, params.kr / params.tt],
                [0.0, 0.0, -1.0 / params.tt, 1.0 / params.tt],
                [-1.0 / (params.r * params.tg), 0.0, 0.0, -1.0 / params.tg],
            ]
        )
        labels = ("dF", "Pt", "Pr", "Pg")
        gov = 3
    elif params.kind is AreaKind.HYDRO:
        # states: dF, Pw (water column), Pc (droop compensator), Pg.
        # Water turbine (1 - tw*s)/(1 + 0.5*tw*s) => Pm = 3*Pw - 2*(comp output);
        # compensator (1 + trs*s)/(1 + trh*s) => output = cr*Pg + (1 - cr)*Pc.
        cr = params.trs / params.trh
        a = np.array(
            [
                [-1.0 / params.tp, 3.0 * kp_tp, -2.0 * (1.0 - cr) * kp_tp, -2.0 * cr * kp_tp],
                [0.0, -2.0 / params.tw, 2.0 * (1.0 - cr) / params.tw, 2.0 * cr / params.tw],
                [0.0, 0.0, -1.0 / params.trh, 1.0 / params.trh],
                [-1.0 / (params.r * params.tg), 0.0, 0.0, -1.0 / params.tg],
            ]
        )
        labels = ("dF", "Pw", "Pc", "Pg")
        gov = 3
    else:  # pragma: no cover - enum is exhaustive
        raise ModelError(f"unknown area kind {params.kind!r}")

    k = len(labels)
    load = np.zeros(k)
    load[0] = -kp_tp
    control = np.zeros(k)
    control[gov] = 1.0 / params.tg
    return AreaBlock(
        a=a,
        load=load,
        control=control,
        labels=labels,
        freq_slot=0,
        power_gain=kp_tp,
        governor_slot=gov,
        governor_gain=1.0 / params.tg,
    )


DEFAULT_INTEGRAL_GAIN = 0.4


def build_system(
    areas: list[AreaParams],
    ties: list[TieParams] | None = None,
    *,
    integral_action: bool = False,
    k_int: float = DEFAULT_INTEGRAL_GAIN,
) -> StateSpaceModel:
    """Assemble the interconnected model from area and tie parameters.

    State ordering follows area number: area-i internal states (dF first,
    integral-of-ACE last when enabled), then the tie states departing from
    area i, then area i+1, and so on.  Outputs are the n_areas ACEs followed
    by the n_areas frequency deviations.
    """
    if not areas:
        raise ModelError("need at least one area")
    n_areas = len(areas)
    ties = list(ties) if ties is not None else []

    seen_pairs = set()
    for tie in ties:
        if not (1 <= tie.from_area <= n_areas and 1 <= tie.to_area <= n_areas):
            raise ModelError(f"tie ({tie.from_area},{tie.to_area}) references a missing area")
        pair = (tie.from_area, tie.to_area)
        if pair in seen_pairs:
            raise ModelError(f"duplicate tie {pair}")
        seen_pairs.add(pair)

    blocks = [build_area_block(p) for p in areas]

    # Layout pass: state offsets for areas and ties.
    state_labels: list[str] = []
    area_offset: list[int] = []
    tie_index: dict[tuple[int, int], int] = {}
    z_index: list[int | None] = [None] * n_areas
    for i, block in enumerate(blocks, start=1):
        area_offset.append(len(state_labels))
        state_labels.extend(f"{name}{i}" for name in block.labels)
        if integral_action:
            z_index[i - 1] = len(state_labels)
            state_labels.append(f"zACE{i}")
        for tie in sorted((t for t in ties if t.from_area == i), key=lambda t: t.to_area):
            tie_index[(tie.from_area, tie.to_area)] = len(state_labels)
            state_labels.append(f"ptie{tie.from_area}_{tie.to_area}")
    n = len(state_labels)

    # Net tie outflow of each area as signed tie-state indices.
    injections: list[list[tuple[int, float]]] = [[] for _ in range(n_areas)]
    for (lo, hi), idx in tie_index.items():
        injections[lo - 1].append((idx, 1.0))
        injections[hi - 1].append((idx, -1.0))

    a = np.zeros((n, n))
    b = np.zeros((n, 2 * n_areas))
    input_labels = []
    for i, (params, block) in enumerate(zip(areas, blocks), start=1):
        off = area_offset[i - 1]
        k = block.a.shape[0]
        a[off : off + k, off : off + k] = block.a
        b[off : off + k, 2 * (i - 1)] = block.load
        b[off : off + k, 2 * (i - 1) + 1] = block.control
        input_labels += [f"dPd{i}", f"dPc{i}"]
        f_row = off + block.freq_slot
        for idx, sign in injections[i - 1]:
            a[f_row, idx] -= sign * block.power_gain
        if integral_action:
            if not np.isfinite(k_int) or k_int <= 0.0:
                raise ModelError(f"integral_action needs k_int > 0, got {k_int!r}")
            z = z_index[i - 1]
            a[z, f_row] = params.b
            for idx, sign in injections[i - 1]:
                a[z, idx] = sign
            a[off + block.governor_slot, z] = -k_int * block.governor_gain

    for tie in ties:
        idx = tie_index[(tie.from_area, tie.to_area)]
        a[idx, area_offset[tie.from_area - 1] + blocks[tie.from_area - 1].freq_slot] = tie.t
        a[idx, area_offset[tie.to_area - 1] + blocks[tie.to_area - 1].freq_slot] = -tie.t

    c = np.zeros((2 * n_areas, n))
    output_labels = [f"ACE{i}" for i in range(1, n_areas + 1)]
    output_labels += [f"dF{i}" for i in range(1, n_areas + 1)]
    for i, (params, block) in enumerate(zip(areas, blocks), start=1):
        f_row = area_offset[i - 1] + block.freq_slot
        c[i - 1, f_row] = params.b
        for idx, sign in injections[i - 1]:
            c[i - 1, idx] = sign
        c[n_areas + i - 1, f_row] = 1.0
    d = np.zeros((2 * n_areas, 2 * n_areas))

    return StateSpaceModel(a, b, c, d, state_labels, input_labels, output_labels)


def default_areas() -> list[AreaParams]:
    """The four-area longitudinal benchmark: two reheat, one nonreheat, one hydro."""
    return [
        AreaParams(kind=AreaKind.REHEAT),
        AreaParams(kind=AreaKind.REHEAT),
        AreaParams(kind=AreaKind.NONREHEAT),
        AreaParams(kind=AreaKind.HYDRO),
    ]


def default_ties(n_areas: int = 4) -> list[TieParams]:
    """Chain topology 1-2-...-n with the standard synchronizing coefficient."""
    return [TieParams(i, i + 1) for i in range(1, n_areas)]


def build_default_system(**kwargs) -> StateSpaceModel:
    return build_system(default_areas(), default_ties(), **kwargs)


@dataclass
class SteadyStateReport:
    """Outcome of solving A x = -B u for a constant input."""

    singular: bool
    rank: int
    equilibrium: np.ndarray | None
    null_direction: np.ndarray | None
    residual: float


def steady_state_check(model: StateSpaceModel, u: np.ndarray) -> SteadyStateReport:
    """Find the equilibrium under a constant input, or report singularity.

    A singular A is an outcome, not an error: the report then carries a unit
    null-space direction and the least-squares equilibrium candidate (with
    its residual, nonzero when the input is inconsistent with any equilibrium).
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (model.n_inputs,):
        raise ModelError(f"constant input must have shape ({model.n_inputs},)")
    rhs = -model.b @ u
    sv = np.linalg.svd(model.a, compute_uv=False)
    tol = max(model.a.shape) * np.finfo(float).eps * (sv[0] if sv.size else 0.0)
    rank = int(np.sum(sv > tol))
    if rank == model.n:
        x = np.linalg.solve(model.a, rhs)
        residual = float(np.max(np.abs(model.a @ x - rhs)))
        return SteadyStateReport(False, rank, x, None, residual)
    _, _, vt = np.linalg.svd(model.a)
    null_direction = vt[-1]
    x, *_ = np.linalg.lstsq(model.a, rhs, rcond=None)
    residual = float(np.max(np.abs(model.a @ x - rhs)))
    equilibrium = x if residual <= 1e-9 * max(1.0, float(np.max(np.abs(rhs)))) else None
    return SteadyStateReport(True, rank, equilibrium, null_direction, residual)


def scale_params(
    areas: list[AreaParams],
    ties: list[TieParams],
    factors: dict[str, float],
) -> tuple[list[AreaParams], list[TieParams]]:
    """Return copies with tp/r/b/t_ij multiplied by the given factors."""
    unknown = set(factors) - {"tp", "r", "b", "t_ij"}
    if unknown:
        raise ModelError(f"unknown scaling keys: {sorted(unknown)}")
    for key, value in factors.items():
        if not np.isfinite(value) or value <= 0.0:
            raise ModelError(f"scaling factor {key} must be > 0, got {value!r}")
    new_areas = [
        dataclasses.replace(
            p,
            tp=p.tp * factors.get("tp", 1.0),
            r=p.r * factors.get("r", 1.0),
            b=p.b * factors.get("b", 1.0),
        )
        for p in areas
    ]
    new_ties = [dataclasses.replace(t, t=t.t * factors.get("t_ij", 1.0)) for t in ties]
    return new_areas, new_ties
