"""Incompressible, immiscible oil/water flow on a 2-D Cartesian grid.

Cell-centred finite volumes with a two-point flux approximation (TPFA) for
pressure and explicit single-point upstream weighting for water transport,
advanced sequentially (IMPES). All wells are rate controlled and every
external boundary is closed, so pressure is only defined up to a constant;
it is gauge-fixed to zero mean on every solve.

SI units are used internally (m, m^2, Pa, Pa.s, s). Permeability enters in
millidarcy, well rates in m^3/day and times in days.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.linalg import solveh_banded
from scipy.linalg.lapack import dpbsv as _pbsv

MILLIDARCY = 9.869233e-16  # m^2
DAY = 86400.0  # s
PERM_FLOOR_MD = 1e-3
CFL_TARGET = 0.9

PRESSURE_DROP = "pressure_drop"
SATURATION = "saturation"


class SimulationError(RuntimeError):
    """Raised when a forward run cannot be completed."""


class StepSizeError(SimulationError):
    """Explicit transport step exceeds the stability bound."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform ``nx`` x ``ny`` x 1 grid; cells are ordered row-major (x fastest)."""

    nx: int
    ny: int
    dx: float = 10.0
    dy: float = 10.0
    dz: float = 10.0
    porosity: float = 0.20

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("grid needs at least one cell in each direction")
        if min(self.dx, self.dy, self.dz) <= 0:
            raise ValueError("cell dimensions must be positive")
        if not 0.0 < self.porosity < 1.0:
            raise ValueError("porosity must lie in (0, 1)")

    @property
    def n_cells(self) -> int:
        return self.nx * self.ny

    @property
    def shape(self) -> tuple[int, int]:
        """Array shape of a field, ``(ny, nx)``."""
        return (self.ny, self.nx)

    @property
    def cell_pore_volume(self) -> float:
        return self.dx * self.dy * self.dz * self.porosity

    @property
    def pore_volume(self) -> float:
        return self.cell_pore_volume * self.n_cells

    def cell_index(self, i: int, j: int) -> int:
        """Linear index of the cell in column ``i`` and row ``j``."""
        if not (0 <= i < self.nx and 0 <= j < self.ny):
            raise IndexError(f"cell ({i}, {j}) outside {self.nx}x{self.ny} grid")
        return j * self.nx + i

    @cached_property
    def faces(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Interior faces as ``(left, right, geometric factor)``.

        The geometric factor is face area over centre distance, so the face
        transmissibility is ``factor * harmonic_mean(k_left, k_right)``.
        """
        idx = np.arange(self.n_cells).reshape(self.shape)
        left_x, right_x = idx[:, :-1].ravel(), idx[:, 1:].ravel()
        left_y, right_y = idx[:-1, :].ravel(), idx[1:, :].ravel()
        geo_x = np.full(left_x.size, self.dy * self.dz / self.dx)
        geo_y = np.full(left_y.size, self.dx * self.dz / self.dy)
        return (
            np.concatenate([left_x, left_y]),
            np.concatenate([right_x, right_y]),
            np.concatenate([geo_x, geo_y]),
        )


@dataclass(frozen=True)
class FluidProps:
    """Quadratic (Corey exponent 2) mobility model."""

    mu_w: float = 1.0
    mu_o: float = 1.0
    s_wc: float = 0.0
    s_or: float = 0.0

    def __post_init__(self):
        if self.mu_w <= 0 or self.mu_o <= 0:
            raise ValueError("viscosities must be positive")
        if not (0.0 <= self.s_wc and 0.0 <= self.s_or and self.s_wc + self.s_or < 1.0):
            raise ValueError("need 0 <= s_wc + s_or < 1")

    @cached_property
    def max_dfw(self) -> float:
        """Upper bound on ``d f_w / d s_w`` over the mobile range."""
        s = np.linspace(self.s_wc, 1.0 - self.s_or, 20001)
        fw = mobilities(s, self)[3]
        slope = np.abs(np.diff(fw)) / np.diff(s)
        return float(slope.max()) * 1.001


@dataclass(frozen=True)
class Well:
    """A rate-controlled well completed in a single cell.

    ``rate`` is in m^3/day, positive for injection and negative for
    production.
    """

    name: str
    cell: int
    rate: float

    @property
    def role(self) -> str:
        return "injector" if self.rate > 0 else "producer"


@dataclass(frozen=True)
class WellSpec:
    wells: tuple[Well, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "wells", tuple(self.wells))
        names = [w.name for w in self.wells]
        if len(set(names)) != len(names):
            raise ValueError("well names must be unique")

    @property
    def injectors(self) -> list[Well]:
        return [w for w in self.wells if w.role == "injector"]

    @property
    def producers(self) -> list[Well]:
        return [w for w in self.wells if w.role == "producer"]

    @property
    def total_injection(self) -> float:
        return sum(w.rate for w in self.wells if w.rate > 0)

    def validate(self, grid: GridSpec, rtol: float = 1e-10) -> None:
        for w in self.wells:
            if not 0 <= w.cell < grid.n_cells:
                raise ValueError(f"well {w.name!r} cell {w.cell} out of range")
        imbalance = sum(w.rate for w in self.wells)
        scale = max(sum(abs(w.rate) for w in self.wells), 1e-300)
        if abs(imbalance) > rtol * scale:
            raise ValueError(f"well rates do not balance (net {imbalance:g} m3/day)")

    def source_vector(self, grid: GridSpec) -> np.ndarray:
        """Per-cell volumetric source in m^3/s."""
        q = np.zeros(grid.n_cells)
        for w in self.wells:
            q[w.cell] += w.rate / DAY
        return q


@dataclass
class PermeabilityField:
    """Cell permeabilities in millidarcy, row-major over ``grid``."""

    values: np.ndarray
    grid: GridSpec

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).ravel()
        if self.values.size != self.grid.n_cells:
            raise ValueError(
                f"field has {self.values.size} values, grid has {self.grid.n_cells} cells"
            )

    @property
    def si(self) -> np.ndarray:
        """Floored permeability in m^2."""
        return np.maximum(self.values, PERM_FLOOR_MD) * MILLIDARCY

    def as_array(self) -> np.ndarray:
        return self.values.reshape(self.grid.shape)

    def to_csv(self, path) -> None:
        write_field_csv(path, self.as_array())

    @classmethod
    def from_csv(cls, path, grid: GridSpec) -> "PermeabilityField":
        return cls(read_field_csv(path), grid)


@dataclass
class SimulationState:
    time: float  # days
    pressure: np.ndarray  # Pa, zero mean
    saturation: np.ndarray


@dataclass
class ObservationSet:
    """Stacked observations with per-entry provenance.

    Rows are ordered time-major, then by well, pressure before saturation.
    """

    values: np.ndarray
    times: np.ndarray
    wells: np.ndarray
    kinds: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.times = np.asarray(self.times, dtype=float)
        self.wells = np.asarray(self.wells, dtype=object)
        self.kinds = np.asarray(self.kinds, dtype=object)
        n = self.values.size
        if not (self.times.size == self.wells.size == self.kinds.size == n):
            raise ValueError("observation metadata length mismatch")
        bad = set(self.kinds) - {PRESSURE_DROP, SATURATION}
        if bad:
            raise ValueError(f"unknown observation kinds {sorted(bad)}")

    def __len__(self) -> int:
        return self.values.size

    @property
    def saturation_index(self) -> np.ndarray:
        return np.flatnonzero(self.kinds == SATURATION)

    @property
    def pressure_index(self) -> np.ndarray:
        return np.flatnonzero(self.kinds == PRESSURE_DROP)

    def with_values(self, values) -> "ObservationSet":
        return ObservationSet(np.asarray(values, float).copy(), self.times, self.wells, self.kinds)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["time_days", "well_id", "kind", "value"])
            for t, w, k, v in zip(self.times, self.wells, self.kinds, self.values):
                writer.writerow([repr(float(t)), w, k, repr(float(v))])

    @classmethod
    def from_csv(cls, path) -> "ObservationSet":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        return cls(
            [float(r["value"]) for r in rows],
            [float(r["time_days"]) for r in rows],
            [r["well_id"] for r in rows],
            [r["kind"] for r in rows],
        )


@dataclass
class SimulationResult:
    states: list[SimulationState]
    observations: ObservationSet
    substeps: list[int] = field(default_factory=list)
    water_injected: list[float] = field(default_factory=list)  # m^3 per interval
    water_produced: list[float] = field(default_factory=list)  # m^3 per interval


def mobilities(s_w, props: FluidProps):
    """Water/oil/total mobility and water fractional flow.

    Returns ``(lam_w, lam_o, lam_t, f_w)``; mobilities are in 1/(Pa.s).
    """
    s = np.asarray(s_w, dtype=float)
    lo, hi = props.s_wc, 1.0 - props.s_or
    tol = 1e-12
    if np.any(s < lo - tol) or np.any(s > hi + tol) or np.any(~np.isfinite(s)):
        raise ValueError(f"water saturation outside [{lo}, {hi}]")
    se = np.clip((s - lo) / (hi - lo), 0.0, 1.0)
    lam_w = se**2 / props.mu_w
    lam_o = (1.0 - se) ** 2 / props.mu_o
    lam_t = lam_w + lam_o
    return lam_w, lam_o, lam_t, lam_w / lam_t


def _fractional_flow(s: np.ndarray, props: FluidProps) -> np.ndarray:
    # unchecked fast path for the transport loop
    se = (s - props.s_wc) / (1.0 - props.s_or - props.s_wc)
    w = se * se / props.mu_w
    o = (1.0 - se) * (1.0 - se) / props.mu_o
    return w / (w + o)


def transmissibility(grid: GridSpec, k_si: np.ndarray) -> np.ndarray:
    """Face transmissibilities (m^3) with harmonic permeability averaging."""
    left, right, geo = grid.faces
    kl, kr = k_si[left], k_si[right]
    return geo * 2.0 * kl * kr / (kl + kr)


def pressure_matrix(grid: GridSpec, t_face: np.ndarray, pin: float = 0.0) -> sparse.csc_matrix:
    """TPFA matrix for face transmissibilities ``t_face``.

    A non-zero ``pin`` is added to the (0, 0) entry to remove the constant
    null space of the closed-boundary operator.
    """
    left, right, _ = grid.faces
    n = grid.n_cells
    rows = np.concatenate([left, right, left, right, [0]])
    cols = np.concatenate([right, left, left, right, [0]])
    data = np.concatenate([-t_face, -t_face, t_face, t_face, [pin]])
    return sparse.csc_matrix((data, (rows, cols)), shape=(n, n))


def _banded_upper(grid: GridSpec, t_face: np.ndarray, pin: float) -> np.ndarray:
    """Upper band storage of the pinned TPFA matrix for ``solveh_banded``."""
    left, right, _ = grid.faces
    n, u = grid.n_cells, (grid.nx if grid.ny > 1 else 1)
    ab = np.zeros((u + 1, n))
    diag = np.bincount(left, t_face, n) + np.bincount(right, t_face, n)
    diag[0] += pin
    ab[u] = diag
    ab[u - (right - left), right] = -t_face
    return ab


def _solve_gauged(grid: GridSpec, t_face: np.ndarray, q: np.ndarray) -> np.ndarray:
    if not np.any(q):
        return np.zeros_like(q)
    pin = t_face.max() if t_face.size else 1.0
    if not np.isfinite(pin) or pin <= 0:
        raise SimulationError("singular pressure system (zero mobility)")
    # Pinning cell 0 is exact for a compatible right-hand side (sum q = 0):
    # the summed rows force p0 = 0 and every original equation still holds.
    try:
        p = solveh_banded(_banded_upper(grid, t_face, pin), q, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SimulationError(f"pressure factorisation failed: {exc}") from exc
    if not np.all(np.isfinite(p)):
        raise SimulationError("pressure solve produced non-finite values")
    return p - p.mean()


def _pressure_and_flux(grid, k_si, s, q, fluids):
    lam_t = mobilities(s, fluids)[2]
    left, right, _ = grid.faces
    t_face = transmissibility(grid, k_si) * 0.5 * (lam_t[left] + lam_t[right])
    p = _solve_gauged(grid, t_face, q)
    return p, t_face * (p[left] - p[right])


def solve_pressure(
    k: PermeabilityField,
    s: np.ndarray,
    wells: WellSpec,
    fluids: FluidProps = FluidProps(),
) -> np.ndarray:
    """Pressure (Pa, zero mean) for the given saturation and well rates.

    Face mobility is the arithmetic mean of the adjacent cells' total
    mobility; permeability is averaged harmonically.
    """
    grid = k.grid
    wells.validate(grid)
    return _pressure_and_flux(grid, k.si, np.asarray(s, float), wells.source_vector(grid), fluids)[0]


def face_flux(grid: GridSpec, k_si, s, fluids: FluidProps, p) -> np.ndarray:
    """Total Darcy flux (m^3/s) across interior faces, positive left to right."""
    lam_t = mobilities(s, fluids)[2]
    left, right, _ = grid.faces
    t_face = transmissibility(grid, k_si) * 0.5 * (lam_t[left] + lam_t[right])
    return t_face * (p[left] - p[right])


class _Transport:
    """Upstream-weighted water transport for a frozen total-flux field."""

    def __init__(self, grid: GridSpec, flux: np.ndarray, q: np.ndarray, fluids: FluidProps):
        left, right, _ = grid.faces
        n = grid.n_cells
        pos = flux > 0
        self.up = np.where(pos, left, right)
        self.down = np.where(pos, right, left)
        self.mag = np.abs(flux)
        self.n = n
        self.inj = np.maximum(q, 0.0)
        self.prod = np.minimum(q, 0.0)
        self.outflow = np.bincount(self.up, self.mag, n) - self.prod
        self.pv = grid.cell_pore_volume
        self.fluids = fluids
        rate = self.outflow.max() * fluids.max_dfw
        self.dt_max = self.pv / rate if rate > 0 else math.inf  # seconds, CFL = 1

    def water_rate(self, s: np.ndarray) -> np.ndarray:
        """Net water inflow per cell (m^3/s)."""
        f = _fractional_flow(s, self.fluids)
        w = self.mag * f[self.up]
        return (np.bincount(self.down, w, self.n) - np.bincount(self.up, w, self.n)
                + self.prod * f + self.inj)

    def step(self, s: np.ndarray, dt: float) -> np.ndarray:
        s_new = s + (dt / self.pv) * self.water_rate(s)
        return np.clip(s_new, self.fluids.s_wc, 1.0 - self.fluids.s_or)


def advance_saturation(
    state: SimulationState,
    flux: np.ndarray,
    dt: float,
    grid: GridSpec,
    wells: WellSpec,
    fluids: FluidProps = FluidProps(),
) -> np.ndarray:
    """One explicit upwind transport step of ``dt`` days.

    Raises :class:`StepSizeError` if ``dt`` violates the CFL bound; the
    caller is expected to sub-step.
    """
    tr = _Transport(grid, np.asarray(flux, float), wells.source_vector(grid), fluids)
    dt_s = dt * DAY
    if dt_s > tr.dt_max * (1.0 + 1e-12):
        raise StepSizeError(
            f"dt = {dt:g} d exceeds CFL limit {tr.dt_max / DAY:g} d; sub-step"
        )
    return tr.step(np.asarray(state.saturation, float), dt_s)


def run_simulation(
    k: PermeabilityField,
    fluids: FluidProps,
    wells: WellSpec,
    report_times: Sequence[float],
    substeps: Sequence[int] | None = None,
    cfl: float = CFL_TARGET,
) -> SimulationResult:
    """IMPES forward run returning states and observations at ``report_times``.

    One pressure solve per report interval, then explicit transport
    sub-steps at CFL number ``cfl``. Passing ``substeps`` (as returned by a
    previous run) reuses that schedule, which keeps finite-difference
    perturbations smooth; it is rejected if any step would exceed CFL 1.
    """
    grid = k.grid
    wells.validate(grid)
    times = np.asarray(report_times, dtype=float)
    if times.size and (np.any(np.diff(times) <= 0) or times[0] < 0):
        raise ValueError("report times must be non-negative and strictly increasing")
    k_si = k.si
    q = wells.source_vector(grid)
    s = np.full(grid.n_cells, fluids.s_wc)
    p, flux = _pressure_and_flux(grid, k_si, s, q, fluids)
    initial = SimulationState(0.0, p, s.copy())

    states: list[SimulationState] = []
    used: list[int] = []
    injected: list[float] = []
    withdrawn: list[float] = []
    tr_inj = np.maximum(q, 0.0)
    t = 0.0
    for idx, t_rep in enumerate(times):
        interval = (t_rep - t) * DAY
        if interval > 0:
            tr = _Transport(grid, flux, q, fluids)
            if substeps is not None:
                n_sub = int(substeps[idx])
                if interval / n_sub > tr.dt_max * (1.0 + 1e-12):
                    raise StepSizeError(f"fixed schedule violates CFL in interval {idx}")
            else:
                n_sub = max(1, math.ceil(interval / (cfl * tr.dt_max)))
            dt = interval / n_sub
            produced = 0.0
            for _ in range(n_sub):
                produced -= dt * float(tr.prod @ _fractional_flow(s, fluids))
                s = tr.step(s, dt)
            p, flux = _pressure_and_flux(grid, k_si, s, q, fluids)
        else:
            n_sub, produced = 0, 0.0
        used.append(n_sub)
        injected.append(float(tr_inj.sum()) * interval)
        withdrawn.append(produced)
        t = t_rep
        states.append(SimulationState(float(t_rep), p, s.copy()))
    obs = extract_observations(states, wells, initial)
    return SimulationResult(states, obs, used, injected, withdrawn)


def _incidence(grid: GridSpec):
    """Face-to-cell incidence: ``(right - left, left, right)``."""
    left, right, _ = grid.faces
    n, f = grid.n_cells, left.size
    cols = np.arange(f)
    L = sparse.csr_matrix((np.ones(f), (left, cols)), shape=(n, f))
    R = sparse.csr_matrix((np.ones(f), (right, cols)), shape=(n, f))
    return (R - L).tocsr(), L, R


def simulate_batch(
    grid: GridSpec,
    k_md: np.ndarray,
    fluids: FluidProps,
    wells: WellSpec,
    report_times: Sequence[float],
    substeps: Sequence[int],
) -> np.ndarray:
    """Observations for a stack of permeability fields on a shared schedule.

    ``k_md`` is ``(n_cells, n_fields)``; returns ``(n_obs, n_fields)`` in the
    stacking order of :func:`extract_observations`. Every field is advanced
    with the same number of transport sub-steps per interval, which is how
    finite-difference perturbations of one base run are evaluated.
    """
    wells.validate(grid)
    k_md = np.asarray(k_md, dtype=float)
    if k_md.ndim != 2 or k_md.shape[0] != grid.n_cells:
        raise ValueError("k_md must have shape (n_cells, n_fields)")
    times = np.asarray(report_times, dtype=float)
    n, K = k_md.shape
    left, right, geo = grid.faces
    k_si = np.maximum(k_md, PERM_FLOOR_MD) * MILLIDARCY
    kl, kr = k_si[left], k_si[right]
    t_geo = geo[:, None] * 2.0 * kl * kr / (kl + kr)
    q = wells.source_vector(grid)
    inj, prod = np.maximum(q, 0.0)[:, None], np.minimum(q, 0.0)[:, None]
    div, L, R = _incidence(grid)
    pv = grid.cell_pore_volume

    u = grid.nx if grid.ny > 1 else 1
    band_row = u - (right - left)

    def pressure_flux(s):
        lam_t = mobilities(s, fluids)[2]
        t_face = t_geo * 0.5 * (lam_t[left] + lam_t[right])
        if not np.any(q):
            return np.zeros((n, K)), np.zeros_like(t_face)
        ab = np.zeros((u + 1, n, K), order="F")  # each ab[..., c] is Fortran-contiguous
        ab[u] = L @ t_face + R @ t_face
        ab[u, 0] += t_face.max(axis=0)  # pin, see _solve_gauged
        ab[band_row, right] = -t_face
        p = np.empty((n, K))
        for c in range(K):
            _, x, info = _pbsv(ab[..., c], q, lower=0, overwrite_ab=1)
            if info != 0:
                raise SimulationError(f"pressure factorisation failed (info={info})")
            p[:, c] = x
        if not np.all(np.isfinite(p)):
            raise SimulationError("pressure solve produced non-finite values")
        p -= p.mean(axis=0)
        return p, t_face * (p[left] - p[right])

    cells = np.array([w.cell for w in wells.wells])
    is_prod = np.array([w.role == "producer" for w in wells.wells])
    s = np.full((n, K), fluids.s_wc)
    p0, flux = pressure_flux(s)
    p = p0
    rows = []
    t = 0.0
    for idx, t_rep in enumerate(times):
        interval = (t_rep - t) * DAY
        if interval > 0:
            n_sub = int(substeps[idx])
            dt = interval / n_sub
            out = L @ np.maximum(flux, 0.0) + R @ np.maximum(-flux, 0.0) - prod
            if dt * out.max() * fluids.max_dfw > pv * (1.0 + 1e-12):
                raise StepSizeError(f"fixed schedule violates CFL in interval {idx}")
            pos = flux > 0
            for _ in range(n_sub):
                f = _fractional_flow(s, fluids)
                w = flux * np.where(pos, f[left], f[right])
                s = np.clip(s + (dt / pv) * (div @ w + prod * f + inj),
                            fluids.s_wc, 1.0 - fluids.s_or)
            p, flux = pressure_flux(s)
        t = t_rep
        for c, producer in zip(cells, is_prod):
            rows.append(p0[c] - p[c])
            if producer:
                rows.append(s[c])
    return np.array(rows).reshape(-1, K)


def extract_observations(
    states: Sequence[SimulationState],
    wells: WellSpec,
    initial: SimulationState,
) -> ObservationSet:
    """Pressure drops ``p(0) - p(t)`` at every well and water saturation at producers."""
    values, times, names, kinds = [], [], [], []
    for st in states:
        if st is None:
            raise ValueError("missing simulation state")
        for w in wells.wells:
            values.append(initial.pressure[w.cell] - st.pressure[w.cell])
            times.append(st.time)
            names.append(w.name)
            kinds.append(PRESSURE_DROP)
            if w.role == "producer":
                values.append(st.saturation[w.cell])
                times.append(st.time)
                names.append(w.name)
                kinds.append(SATURATION)
    return ObservationSet(np.array(values), np.array(times), np.array(names, dtype=object),
                          np.array(kinds, dtype=object))


# -- I/O ---------------------------------------------------------------------


def write_field_csv(path, array: np.ndarray) -> None:
    """Write an ``ny`` x ``nx`` array, one grid row per line."""
    arr = np.atleast_2d(np.asarray(array, dtype=float))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for row in arr:
            writer.writerow([repr(float(v)) for v in row])


def read_field_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        return np.array([[float(v) for v in row] for row in csv.reader(fh) if row])


def scenario_to_dict(grid: GridSpec, fluids: FluidProps, wells: WellSpec,
                     report_times: Sequence[float]) -> dict:
    return {
        "grid": {"nx": grid.nx, "ny": grid.ny, "dx": grid.dx, "dy": grid.dy,
                 "dz": grid.dz, "porosity": grid.porosity},
        "fluids": {"mu_w": fluids.mu_w, "mu_o": fluids.mu_o,
                   "s_wc": fluids.s_wc, "s_or": fluids.s_or},
        "wells": {"label": wells.label,
                  "list": [{"name": w.name, "cell": w.cell, "rate": w.rate} for w in wells.wells]},
        "schedule": [float(t) for t in report_times],
    }


def scenario_from_dict(d: dict):
    """Inverse of :func:`scenario_to_dict`; returns ``(grid, fluids, wells, times)``."""
    grid = GridSpec(**d["grid"])
    fluids = FluidProps(**d.get("fluids", {}))
    wells = WellSpec(tuple(Well(**w) for w in d["wells"]["list"]), d["wells"].get("label", ""))
    wells.validate(grid)
    return grid, fluids, wells, list(d["schedule"])


def load_scenario(path):
    return scenario_from_dict(json.loads(Path(path).read_text()))
