"""Forward-map adapters and finite-difference sensitivities in coefficient space.

A forward model maps a parameter vector ``m`` (cell values) to an
observation vector ``g(m)``. The Jacobian with respect to transform
coefficients, ``G @ Phi.T`` restricted to the active coefficients, is built
column by column by perturbing ``alpha`` along unit vectors.
"""
from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .simulator import (
    PRESSURE_DROP,
    SATURATION,
    FluidProps,
    GridSpec,
    PermeabilityField,
    SimulationError,
    WellSpec,
    run_simulation,
    simulate_batch,
)

FLAG_TOL = 1e-2
BATCH_COLUMNS = 128  # fields per batched simulation chunk


class JacobianError(RuntimeError):
    def __init__(self, column: int, cause: Exception):
        super().__init__(f"forward run failed for coefficient column {column}: {cause}")
        self.column = column


class LinearForwardModel:
    """``g(m) = A @ m`` with an optional block partition for weighting."""

    def __init__(self, A, saturation_rows: Sequence[int] = ()):
        self.A = np.asarray(A, dtype=float)
        self.saturation_rows = np.asarray(saturation_rows, dtype=int)

    @property
    def n_obs(self) -> int:
        return self.A.shape[0]

    def partition(self) -> tuple[np.ndarray, np.ndarray]:
        """``(saturation rows, pressure rows)``."""
        sat = np.zeros(self.n_obs, bool)
        sat[self.saturation_rows] = True
        return np.flatnonzero(sat), np.flatnonzero(~sat)

    def evaluate(self, m) -> np.ndarray:
        return self.A @ np.asarray(m, dtype=float)

    def local(self, m):
        return self.evaluate(m), self.evaluate

    def exact_jacobian(self, basis, alpha, active) -> np.ndarray:
        return self.A @ basis.columns(active)

    def fingerprint(self) -> str:
        return hashlib.sha256(self.A.tobytes()).hexdigest()


class FlowForwardModel:
    """Observation map of the two-phase simulator.

    ``parameterization`` is ``"natural"`` (``m`` in mD) or ``"log"``
    (``m = ln k`` with ``k`` in mD).
    """

    def __init__(self, grid: GridSpec, fluids: FluidProps, wells: WellSpec,
                 report_times: Sequence[float], parameterization: str = "natural"):
        if parameterization not in ("natural", "log"):
            raise ValueError(f"unknown parameterization {parameterization!r}")
        wells.validate(grid)
        self.grid, self.fluids, self.wells = grid, fluids, wells
        self.report_times = np.asarray(report_times, dtype=float)
        self.parameterization = parameterization

    def permeability(self, m) -> PermeabilityField:
        m = np.asarray(m, dtype=float)
        k = np.exp(m) if self.parameterization == "log" else m
        return PermeabilityField(k, self.grid)

    def to_parameters(self, k_md) -> np.ndarray:
        k_md = np.asarray(k_md, dtype=float)
        return np.log(k_md) if self.parameterization == "log" else k_md.copy()

    def run(self, m, substeps=None):
        return run_simulation(self.permeability(m), self.fluids, self.wells,
                              self.report_times, substeps=substeps)

    def evaluate(self, m) -> np.ndarray:
        return self.run(m).observations.values

    def local(self, m):
        """Observations at ``m`` and an evaluator that reuses its time-step schedule."""
        base = self.run(m)
        return base.observations.values, _FrozenSchedule(self, tuple(base.substeps))

    def kinds(self) -> np.ndarray:
        """Observation kinds in stacking order, without running the simulator."""
        per_time = []
        for w in self.wells.wells:
            per_time.append(PRESSURE_DROP)
            if w.role == "producer":
                per_time.append(SATURATION)
        return np.array(per_time * self.report_times.size, dtype=object)

    @property
    def n_obs(self) -> int:
        return self.kinds().size

    def partition(self) -> tuple[np.ndarray, np.ndarray]:
        kinds = self.kinds()
        return np.flatnonzero(kinds == SATURATION), np.flatnonzero(kinds == PRESSURE_DROP)

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(repr((self.grid, self.fluids, self.wells, self.parameterization)).encode())
        h.update(self.report_times.tobytes())
        return h.hexdigest()


class _FrozenSchedule:
    def __init__(self, model: FlowForwardModel, substeps):
        self.model, self.substeps = model, substeps

    def __call__(self, m) -> np.ndarray:
        return self.model.run(m, substeps=self.substeps).observations.values

    def batch(self, ms) -> np.ndarray:
        """Observations for the columns of ``ms`` (``n_cells x k``), one per column."""
        mdl = self.model
        ms = np.asarray(ms, dtype=float)
        k = np.exp(ms) if mdl.parameterization == "log" else ms
        return simulate_batch(mdl.grid, k, mdl.fluids, mdl.wells, mdl.report_times, self.substeps)


@dataclass
class SensitivityMatrix:
    """``M x K`` Jacobian of observations w.r.t. the active coefficients."""

    entries: np.ndarray
    active: np.ndarray
    alpha: np.ndarray
    g0: np.ndarray
    step: float

    def __post_init__(self):
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("sensitivity matrix has non-finite entries")

    @property
    def shape(self):
        return self.entries.shape

    def to_csv(self, path) -> None:
        header = ",".join(f"c{int(a)}" for a in self.active)
        np.savetxt(path, self.entries, delimiter=",", header=header, comments="", fmt="%.17g")


def fd_step(alpha) -> float:
    """Perturbation size ``max(1e-4 * ||alpha||_inf, 1e-6)``."""
    return max(1e-4 * float(np.max(np.abs(alpha))) if np.size(alpha) else 0.0, 1e-6)


def _column(args):
    evaluator, basis, alpha, j, h, sign = args
    a = alpha.copy()
    a[j] += sign * h
    return evaluator(basis.inverse(a))


def _map_columns(evaluator, basis, alpha, active, h, sign, workers):
    batch = getattr(evaluator, "batch", None)
    if batch is not None and workers <= 1:
        return _batched_columns(batch, basis, alpha, active, h, sign)
    tasks = [(evaluator, basis, alpha, int(j), h, sign) for j in active]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_column, tasks))
    out = []
    for j, t in zip(active, tasks):
        try:
            out.append(_column(t))
        except SimulationError as exc:
            raise JacobianError(int(j), exc) from exc
    return out


def _batched_columns(batch, basis, alpha, active, h, sign):
    out = []
    for start in range(0, len(active), BATCH_COLUMNS):
        chunk = np.asarray(active[start:start + BATCH_COLUMNS], dtype=int)
        a = np.repeat(alpha[:, None], chunk.size, axis=1)
        a[chunk, np.arange(chunk.size)] += sign * h
        try:
            g = batch(basis.inverse(a))
        except SimulationError as exc:
            raise JacobianError(int(chunk[0]), exc) from exc
        out.extend(g.T)
    return out


def jacobian_fd(model, basis, alpha, active=None, step: float | None = None,
                workers: int = 1, cache: "JacobianCache | None" = None) -> SensitivityMatrix:
    """Forward-difference Jacobian ``[g(Phi.T(alpha + h e_j)) - g(Phi.T alpha)] / h``.

    Perturbed runs share the base run's transport sub-step schedule so the
    difference quotient is not polluted by step-count jumps.
    """
    alpha = np.asarray(alpha, dtype=float)
    active = np.arange(alpha.size) if active is None else np.asarray(active, dtype=int)
    h = fd_step(alpha) if step is None else float(step)
    key = None
    if cache is not None:
        key = cache.key(model, alpha, active, h, "forward")
        hit = cache.load(key)
        if hit is not None:
            return SensitivityMatrix(hit["G"], active, alpha, hit["g0"], h)
    g0, evaluator = model.local(basis.inverse(alpha))
    if getattr(evaluator, "batch", None) is not None and workers <= 1:
        # same arithmetic as the perturbed columns
        g0 = evaluator.batch(basis.inverse(alpha)[:, None])[:, 0]
    cols = _map_columns(evaluator, basis, alpha, active, h, +1.0, workers)
    G = (np.column_stack(cols) - g0[:, None]) / h if cols else np.zeros((g0.size, 0))
    out = SensitivityMatrix(G, active, alpha, g0, h)
    if cache is not None:
        cache.store(key, G=G, g0=g0)
    return out


def coefficient_jacobian(model, basis, alpha, active, workers: int = 1,
                         cache: "JacobianCache | None" = None) -> SensitivityMatrix:
    """Exact Jacobian when the model provides one, forward differences otherwise."""
    exact = getattr(model, "exact_jacobian", None)
    if exact is None:
        return jacobian_fd(model, basis, alpha, active, workers=workers, cache=cache)
    alpha = np.asarray(alpha, dtype=float)
    active = np.asarray(active, dtype=int)
    g0 = model.evaluate(basis.inverse(alpha))
    return SensitivityMatrix(exact(basis, alpha, active), active, alpha, g0, 0.0)


def jacobian_central(model, basis, alpha, active=None, step: float | None = None,
                     workers: int = 1) -> SensitivityMatrix:
    """Central-difference oracle with the same step rule and frozen schedule."""
    alpha = np.asarray(alpha, dtype=float)
    active = np.arange(alpha.size) if active is None else np.asarray(active, dtype=int)
    h = fd_step(alpha) if step is None else float(step)
    g0, evaluator = model.local(basis.inverse(alpha))
    plus = _map_columns(evaluator, basis, alpha, active, h, +1.0, workers)
    minus = _map_columns(evaluator, basis, alpha, active, h, -1.0, workers)
    if not plus:
        return SensitivityMatrix(np.zeros((g0.size, 0)), active, alpha, g0, h)
    G = (np.column_stack(plus) - np.column_stack(minus)) / (2.0 * h)
    return SensitivityMatrix(G, active, alpha, g0, h)


@dataclass
class JacobianReport:
    column_error: np.ndarray
    flagged: np.ndarray
    max_error: float
    mean_error: float

    @property
    def passed(self) -> bool:
        return self.flagged.size == 0

    def summary(self) -> str:
        return (f"columns={self.column_error.size} max_rel_err={self.max_error:.3e} "
                f"mean_rel_err={self.mean_error:.3e} flagged={self.flagged.size}")


def jacobian_check(G, oracle, tol: float = FLAG_TOL) -> JacobianReport:
    """Per-column relative error ``||G_j - O_j|| / ||O_j||`` against an oracle."""
    G = np.asarray(getattr(G, "entries", G), dtype=float)
    O = np.asarray(getattr(oracle, "entries", oracle), dtype=float)
    if G.shape != O.shape:
        raise ValueError(f"shape mismatch {G.shape} vs {O.shape}")
    if G.shape[1] == 0:
        empty = np.zeros(0)
        return JacobianReport(empty, np.zeros(0, int), 0.0, 0.0)
    num = np.linalg.norm(G - O, axis=0)
    den = np.linalg.norm(O, axis=0)
    err = np.where(den > 0, num / np.where(den > 0, den, 1.0), num)
    return JacobianReport(err, np.flatnonzero(err > tol), float(err.max()), float(err.mean()))


def cell_jacobian_fd(model, m, step: float) -> np.ndarray:
    """Per-cell forward-difference Jacobian ``dg/dm`` (small grids only)."""
    m = np.asarray(m, dtype=float)
    g0, evaluator = model.local(m)
    cols = []
    for i in range(m.size):
        mp = m.copy()
        mp[i] += step
        cols.append((evaluator(mp) - g0) / step)
    return np.column_stack(cols)


class JacobianCache:
    """On-disk ``.npz`` cache keyed by linearisation point, active set and model."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def key(model, alpha, active, h, scheme) -> str:
        h_ = hashlib.sha256()
        h_.update(np.ascontiguousarray(alpha).tobytes())
        h_.update(np.ascontiguousarray(active).tobytes())
        h_.update(repr((float(h), scheme)).encode())
        h_.update(model.fingerprint().encode())
        return h_.hexdigest()

    def load(self, key):
        path = self.directory / f"{key}.npz"
        if not path.exists():
            return None
        with np.load(path) as data:
            return {k: data[k] for k in data.files}

    def store(self, key, **arrays) -> None:
        np.savez(self.directory / f"{key}.npz", **arrays)
