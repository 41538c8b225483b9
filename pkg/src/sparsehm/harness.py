"""Waterflood scenarios, synthetic channel truths, experiment runs and metrics."""
from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .sbl import InversionConfig, InversionResult, run_inversion
from .sensitivity import FlowForwardModel, LinearForwardModel
from .simulator import (
    PERM_FLOOR_MD,
    PRESSURE_DROP,
    SATURATION,
    FluidProps,
    GridSpec,
    ObservationSet,
    PermeabilityField,
    Well,
    WellSpec,
    run_simulation,
    scenario_from_dict,
    scenario_to_dict,
)
from .transform import DCTBasis, IdentityBasis

DOMAIN = (320.0, 320.0, 10.0)  # m
HORIZON = 365.0  # days
N_REPORTS = 30
BACKGROUND_MD = 20.0
CHANNEL_MD = 200.0
PV_MULTIPLE = {"A": 1.1, "B": 1.1, "C": 1.0}


@dataclass
class ReservoirScenario:
    name: str
    grid: GridSpec
    fluids: FluidProps
    wells: WellSpec
    horizon: float
    report_times: np.ndarray
    pv_multiple: float

    def __post_init__(self):
        self.report_times = np.asarray(self.report_times, dtype=float)
        if np.any(self.report_times > self.horizon + 1e-9) or np.any(self.report_times < 0):
            raise ValueError("report schedule outside the simulation horizon")

    def forward_model(self, parameterization: str = "natural") -> FlowForwardModel:
        return FlowForwardModel(self.grid, self.fluids, self.wells, self.report_times,
                                parameterization)

    def basis(self) -> DCTBasis:
        return DCTBasis(self.grid.nx, self.grid.ny)

    def to_dict(self) -> dict:
        d = scenario_to_dict(self.grid, self.fluids, self.wells, self.report_times)
        d.update(name=self.name, horizon=self.horizon, pv_multiple=self.pv_multiple)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ReservoirScenario":
        grid, fluids, wells, times = scenario_from_dict(d)
        return cls(d.get("name", "custom"), grid, fluids, wells, float(d["horizon"]), times,
                   float(d.get("pv_multiple", 0.0)))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))

    @classmethod
    def load(cls, path) -> "ReservoirScenario":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _edge_positions(n_wells: int, length: int) -> list[int]:
    """Evenly spread ``n_wells`` cells along an edge of ``length`` cells."""
    return [int(math.floor((k + 0.5) * length / n_wells)) for k in range(n_wells)]


def build_scenario(name: str, scale: float = 0.5) -> ReservoirScenario:
    """Reservoir A (line drive), B (4 injectors / 6 producers) or C (corner injector).

    ``scale`` 1 gives the 32 x 32 grid, 0.5 a 16 x 16 grid over the same
    320 m x 320 m x 10 m domain. Injection totals ``pv_multiple`` pore
    volumes over one year at constant rate, split equally between
    injectors, and the producers withdraw the same total volume.
    """
    if scale not in (1, 1.0, 0.5):
        raise ValueError("scale must be 1 or 0.5")
    return scenario_on_grid(name, int(round(32 * scale)))


def scenario_on_grid(name: str, n: int) -> ReservoirScenario:
    """Well layout of reservoir ``name`` on an ``n`` x ``n`` grid over the standard domain."""
    name = name.upper()
    if name not in PV_MULTIPLE:
        raise ValueError(f"unknown scenario {name!r}; expected A, B or C")
    if n < 4:
        raise ValueError("need at least a 4 x 4 grid")
    grid = GridSpec(n, n, DOMAIN[0] / n, DOMAIN[1] / n, DOMAIN[2], 0.20)
    pv_mult = PV_MULTIPLE[name]
    total = pv_mult * grid.pore_volume / HORIZON  # m3/day

    if name == "A":
        inj_cells = [grid.cell_index(0, j) for j in range(n)]
        prod_cells = [grid.cell_index(n - 1, j) for j in range(n)]
    elif name == "B":
        inj_cells = [grid.cell_index(0, j) for j in _edge_positions(4, n)]
        prod_cells = [grid.cell_index(n - 1, j) for j in _edge_positions(6, n)]
    else:
        inj_cells = [grid.cell_index(0, 0)]
        h = n // 2
        prod_cells = [grid.cell_index(n - 1, 0), grid.cell_index(n - 1, h),
                      grid.cell_index(n - 1, n - 1), grid.cell_index(h, n - 1),
                      grid.cell_index(0, n - 1)]

    wells = [Well(f"I{k + 1}", c, total / len(inj_cells)) for k, c in enumerate(inj_cells)]
    wells += [Well(f"P{k + 1}", c, -total / len(prod_cells)) for k, c in enumerate(prod_cells)]
    spec = WellSpec(tuple(wells), label=f"reservoir-{name}")
    times = np.arange(1, N_REPORTS + 1) * HORIZON / N_REPORTS
    return ReservoirScenario(name, grid, FluidProps(), spec, HORIZON, times, pv_mult)


@dataclass
class TruthModel:
    field: PermeabilityField
    facies: np.ndarray  # 1 = channel
    seed: int

    @property
    def channel_fraction(self) -> float:
        return float(self.facies.mean())


def generate_truth(grid: GridSpec, seed: int, contrast: float = CHANNEL_MD / BACKGROUND_MD,
                   background: float = BACKGROUND_MD) -> TruthModel:
    """One or two sinuous left-to-right channels in a uniform background.

    Centrelines are damped random walks, one cell of lateral drift per
    column at most (scaled to the grid), so channels stay connected.
    Channel width is 3-5 cells at 32 x 32 and scales with the grid.
    """
    if contrast <= 1:
        raise ValueError("contrast must exceed 1")
    rng = np.random.default_rng(seed)
    nx, ny = grid.nx, grid.ny
    s = ny / 32.0
    n_channels = int(rng.integers(1, 3))
    widths = rng.integers(4, 6, n_channels) if n_channels == 1 else rng.integers(3, 5, n_channels)
    facies = np.zeros((ny, nx), dtype=np.int8)
    rows = np.arange(ny) + 0.5
    for c in range(n_channels):
        half = widths[c] * s / 2.0
        lo, hi = half + 0.5 * s, ny - half - 0.5 * s
        band = (hi - lo) / n_channels
        y = rng.uniform(lo + c * band, lo + (c + 1) * band)
        v = 0.0
        for i in range(nx):
            v = float(np.clip(0.75 * v + rng.normal(0.0, 0.5), -1.0, 1.0))
            y += v * s
            if y < lo or y > hi:
                v = -v
                y = float(np.clip(y, lo, hi))
            facies[np.abs(rows - y) < half, i] = 1
    k = np.where(facies.ravel() == 1, background * contrast, background)
    return TruthModel(PermeabilityField(k, grid), facies.ravel(), seed)


def synthesize_observations(truth: TruthModel, scenario: ReservoirScenario,
                            noise_std: dict | None = None, seed: int = 0) -> ObservationSet:
    """Simulate the truth and add independent Gaussian noise per observation kind."""
    res = run_simulation(truth.field, scenario.fluids, scenario.wells, scenario.report_times)
    obs = res.observations
    noise_std = noise_std or {}
    if any(v < 0 for v in noise_std.values()):
        raise ValueError("noise standard deviations must be non-negative")
    if not any(noise_std.values()):
        return obs
    rng = np.random.default_rng(seed)
    noisy = obs.values.copy()
    for kind in (PRESSURE_DROP, SATURATION):
        std = float(noise_std.get(kind, 0.0))
        idx = np.flatnonzero(obs.kinds == kind)
        noise = rng.standard_normal(idx.size)
        if std > 0:
            noisy[idx] += std * noise
    return obs.with_values(noisy)


def support_f1(estimate, truth_support) -> float:
    est, tru = set(map(int, estimate)), set(map(int, truth_support))
    tp = len(est & tru)
    if tp == 0:
        return 0.0
    precision, recall = tp / len(est), tp / len(tru)
    return 2 * precision * recall / (precision + recall)


def significant(alpha, rel: float = 1e-3) -> np.ndarray:
    """Indices with ``|alpha_i| >= rel * max |alpha|``."""
    a = np.abs(np.asarray(alpha, dtype=float))
    return np.flatnonzero(a >= rel * a.max()) if a.size and a.max() > 0 else np.zeros(0, int)


def sparsity_fraction(alpha, rel: float = 1e-3) -> float:
    a = np.asarray(alpha, dtype=float)
    return 1.0 - significant(a, rel).size / a.size


@dataclass
class ExperimentReport:
    misfit_history: list[float]
    model_error: float
    misfit_ratio: float
    sparsity_fraction: float
    support_f1: float
    iterations: int
    active: int
    wall_clock: float = 0.0
    files: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def evaluate(result: InversionResult, truth_field, y=None, *, truth_alpha=None,
             support_fraction: float = 0.05, wall_clock: float = 0.0, files=()) -> ExperimentReport:
    """Score an inversion against the true field.

    ``truth_field`` is compared with the floored final field in physical
    units. Supports are chosen by the same rule on both sides: the top
    ``support_fraction`` coefficients by magnitude, or, when sparse
    ``truth_alpha`` is given, the significant coefficients of each.
    """
    true = np.asarray(getattr(truth_field, "values", truth_field), dtype=float)
    est = _physical_field(result)
    if est.shape != true.shape:
        raise ValueError(f"field size {est.size} != truth size {true.size}")
    misfits = [float(v) for v in result.misfits]
    if truth_alpha is None:
        coef = result.basis.forward(_to_params(result, true))
        k = math.ceil(support_fraction * coef.size)
        truth_support = top_support(coef, k)
        est_support = top_support(result.alpha, k)
    else:
        truth_support = significant(truth_alpha)
        est_support = significant(result.alpha)
    ratio = misfits[-1] / misfits[0] if misfits[0] > 0 else 0.0
    return ExperimentReport(
        misfit_history=misfits,
        model_error=float(np.linalg.norm(est - true) / np.linalg.norm(true)),
        misfit_ratio=float(ratio),
        sparsity_fraction=sparsity_fraction(result.alpha),
        support_f1=support_f1(est_support, truth_support),
        iterations=result.iterations,
        active=int(result.active.size),
        wall_clock=wall_clock,
        files=list(files),
    )


def top_support(alpha, k: int) -> np.ndarray:
    """Indices of the ``k`` largest ``|alpha_i|`` (ties to the lower index)."""
    return np.argsort(-np.abs(np.asarray(alpha, dtype=float)), kind="stable")[:k]


def _physical_field(result: InversionResult) -> np.ndarray:
    if result.config.parameterization == "log" and isinstance(result.basis, DCTBasis):
        return np.exp(result.m)
    if isinstance(result.basis, DCTBasis):
        return np.maximum(result.m, PERM_FLOOR_MD)
    return np.asarray(result.m, dtype=float)


def _to_params(result: InversionResult, true: np.ndarray) -> np.ndarray:
    if result.config.parameterization == "log" and isinstance(result.basis, DCTBasis):
        return np.log(true)
    return true


def initial_model_error(truth: TruthModel, initial_perm: float = BACKGROUND_MD) -> float:
    true = truth.field.values
    return float(np.linalg.norm(initial_perm - true) / np.linalg.norm(true))


def run_experiment(scenario: ReservoirScenario, truth: TruthModel, config: InversionConfig,
                   y: ObservationSet | None = None, out_dir=None) -> tuple[InversionResult, ExperimentReport]:
    """Invert synthetic (or supplied) data for ``truth`` and score the result."""
    if y is None:
        y = synthesize_observations(truth, scenario)
    model = scenario.forward_model(config.parameterization)
    t0 = time.perf_counter()
    result = run_inversion(model, scenario.basis(), y.values, config)
    elapsed = time.perf_counter() - t0
    files = []
    if out_dir is not None:
        result.save(out_dir, scenario.grid.shape, _physical_field(result),
                    extra_manifest={"scenario": scenario.name})
        files = sorted(p.name for p in Path(out_dir).iterdir())
    return result, evaluate(result, truth.field, y.values, wall_clock=elapsed, files=files)


# -- linear sparse-recovery battery ---------------------------------------------


@dataclass
class LinearProblem:
    model: LinearForwardModel
    basis: IdentityBasis
    x: np.ndarray
    y: np.ndarray

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.x)


def linear_sparse_problem(seed: int, n: int = 256, k: int = 10, m: int = 100,
                          noise_std: float = 0.0) -> LinearProblem:
    """Gaussian sensing matrix with a ``k``-sparse Gaussian coefficient vector."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n)) / np.sqrt(m)
    x = np.zeros(n)
    x[rng.choice(n, k, replace=False)] = rng.standard_normal(k)
    y = A @ x
    if noise_std > 0:
        y = y + noise_std * rng.standard_normal(m)
    return LinearProblem(LinearForwardModel(A), IdentityBasis(n), x, y)


def linear_recovery(problem: LinearProblem, config: InversionConfig) -> dict:
    """Support F1 and relative l2 error of one linear inversion."""
    res = run_inversion(problem.model, problem.basis, problem.y, config, m0=np.zeros(problem.x.size))
    return {
        "f1": support_f1(significant(res.alpha), problem.support),
        "rel_error": float(np.linalg.norm(res.alpha - problem.x) / np.linalg.norm(problem.x)),
        "iterations": res.iterations,
        "active": int(res.active.size),
    }
