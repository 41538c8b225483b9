"""Sparse Bayesian estimation of transform coefficients for nonlinear forward maps.

Each outer iteration linearises the forward map at the current model,
re-estimates the coefficient prior variances ``gamma`` and the noise
precisions ``beta`` from the previous Gaussian posterior, and solves for the
new posterior over the active coefficients::

    y_lin = y - g(m) + G alpha
    Sigma = (diag(1/gamma) + G.T B G)^-1
    mu    = Sigma G.T B y_lin

Algorithm I keeps one precision per measurement; Algorithm II rescales the
saturation and pressure blocks to unit residual norm and shares a single
precision. The Gaussian baseline runs the Algorithm II loop with a fixed,
non-sparse prior.
"""
from __future__ import annotations

import hashlib
import json
import logging
import math
import platform
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np
import scipy
from scipy import linalg
from scipy.special import gammaln

from .sensitivity import coefficient_jacobian
from .simulator import write_field_csv

log = logging.getLogger(__name__)

EPSILON = 1e-6
BETA_MIN, BETA_MAX = 1e-8, 1e8
PRUNE_THRESHOLD = 1e-8
ALGORITHMS = ("i", "ii", "gaussian")


class NumericalError(RuntimeError):
    pass


class DegenerateModelError(RuntimeError):
    """Every coefficient has been pruned."""


class InversionError(RuntimeError):
    def __init__(self, iteration: int, cause: Exception):
        super().__init__(f"iteration {iteration}: {cause}")
        self.iteration = iteration


@dataclass
class HyperState:
    """Prior variances, noise precisions and Laplace rates.

    ``gamma`` and ``lam`` cover all ``N`` coefficients (pruned entries hold
    0); ``beta`` is a length-``M`` vector or a scalar.
    """

    gamma: np.ndarray
    beta: np.ndarray | float
    lam: np.ndarray
    a_beta: float = 1.0 + EPSILON
    b_beta: float = EPSILON

    def __post_init__(self):
        self.gamma = np.asarray(self.gamma, dtype=float)
        self.lam = np.broadcast_to(np.asarray(self.lam, dtype=float), self.gamma.shape).copy()
        if np.any(self.gamma < 0) or np.any(self.lam < 0):
            raise ValueError("gamma and lambda must be non-negative")
        if np.any(np.asarray(self.beta) <= 0):
            raise ValueError("beta must be positive")

    @classmethod
    def initial(cls, n: int, y, gamma_init: float = 1.0, lam: float = 0.0) -> "HyperState":
        """Default start: ``gamma = gamma_init``, ``beta = 100 / var(y)``."""
        var = float(np.var(y))
        return cls(np.full(n, gamma_init), 100.0 / var if var > 0 else 1.0, np.full(n, lam))


@dataclass
class LinearizedSystem:
    """Local linear-Gaussian model around the current coefficients."""

    y: np.ndarray  # linearised data y^(n)
    G: np.ndarray  # M x K sensitivities of the active coefficients
    alpha: np.ndarray  # active coefficients at the linearisation point
    eta_s: float = 1.0
    eta_p: float = 1.0

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=float)
        self.G = np.atleast_2d(np.asarray(self.G, dtype=float))
        self.alpha = np.asarray(self.alpha, dtype=float)
        if self.G.shape != (self.y.size, self.alpha.size):
            raise ValueError(
                f"inconsistent dimensions: G {self.G.shape}, y {self.y.size}, alpha {self.alpha.size}"
            )
        if self.eta_s <= 0 or self.eta_p <= 0:
            raise ValueError("block weights must be positive")

    @property
    def M(self) -> int:
        return self.y.size

    @property
    def K(self) -> int:
        return self.alpha.size


@dataclass
class PosteriorState:
    """Gaussian posterior of the active coefficients.

    ``gamma`` and ``beta`` are the hyperparameters that produced it.
    """

    mu: np.ndarray
    Sigma: np.ndarray
    active: np.ndarray
    gamma: np.ndarray
    beta: np.ndarray | float
    evidence: float = float("nan")
    spatial_variance: np.ndarray | None = None

    @property
    def sigma_diag(self) -> np.ndarray:
        return np.diag(self.Sigma).copy()

    def restrict(self, keep: np.ndarray) -> "PosteriorState":
        """Marginal over the subset ``keep`` (positions within ``active``)."""
        return PosteriorState(self.mu[keep], self.Sigma[np.ix_(keep, keep)], self.active[keep],
                              self.gamma[keep], self.beta, self.evidence)


# -- linear-algebra kernels ----------------------------------------------------


def _beta_vector(beta, M: int) -> np.ndarray:
    return np.broadcast_to(np.asarray(beta, dtype=float), (M,))


def _cholesky(A: np.ndarray, what: str):
    """Cholesky factor with diagonal jitter escalation on failure."""
    K = A.shape[0]
    jitter = 1e-10 * np.trace(A) / max(K, 1)
    for attempt in range(6):
        try:
            if attempt == 0:
                return linalg.cho_factor(A, lower=True, check_finite=True)
            return linalg.cho_factor(A + jitter * np.eye(K), lower=True)
        except (linalg.LinAlgError, ValueError):
            if attempt:
                jitter *= 100.0
    raise NumericalError(f"{what} is not positive definite after jitter escalation")


def posterior_update(sys: LinearizedSystem, gamma, beta, method: str = "auto") -> PosteriorState:
    """Posterior mean and covariance of the active coefficients.

    Works with the scaled matrix ``W = B^1/2 G Gamma^1/2`` so that the
    factorised matrix is ``I + W.T W`` (or ``I + W W.T`` on the data side
    when ``M < K``), which stays well conditioned however widely the
    prior variances spread.
    """
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (sys.K,):
        raise ValueError(f"gamma has shape {gamma.shape}, expected ({sys.K},)")
    if np.any(gamma <= 0):
        raise ValueError("active prior variances must be positive")
    b = _beta_vector(beta, sys.M)
    sg, sb = np.sqrt(gamma), np.sqrt(b)
    W = sb[:, None] * sys.G * sg[None, :]
    if method == "auto":
        method = "data" if sys.M < sys.K else "coef"
    if method == "coef":
        A = np.eye(sys.K) + W.T @ W
        cf = _cholesky(A, "I + W'W")
        inner = linalg.cho_solve(cf, np.eye(sys.K))
    elif method == "data":
        # Woodbury: (I + W'W)^-1 = I - W' (I + W W')^-1 W
        C = np.eye(sys.M) + W @ W.T
        cf = _cholesky(C, "I + WW'")
        inner = np.eye(sys.K) - W.T @ linalg.cho_solve(cf, W)
    else:
        raise ValueError(f"unknown method {method!r}")
    Sigma = sg[:, None] * inner * sg[None, :]
    Sigma = 0.5 * (Sigma + Sigma.T)
    mu = Sigma @ (sys.G.T @ (b * sys.y))
    return PosteriorState(mu, Sigma, np.arange(sys.K), gamma, beta)


def update_gamma(mu, sigma_diag, lam) -> np.ndarray:
    """Prior-variance update maximising the evidence.

    ``lam = 0`` gives ``mu**2 + Sigma_ii``; otherwise the positive root of
    ``lam g^2 + g - (mu^2 + Sigma_ii) = 0``, evaluated in a
    cancellation-free form.
    """
    mu = np.asarray(mu, dtype=float)
    s = np.asarray(sigma_diag, dtype=float)
    if np.any(s < 0):
        raise ValueError("posterior variances must be non-negative")
    lam = np.broadcast_to(np.asarray(lam, dtype=float), mu.shape)
    x = mu * mu + s
    return 2.0 * x / (1.0 + np.sqrt(1.0 + 4.0 * lam * x))


def predictive_variance(G: np.ndarray, Sigma: np.ndarray) -> np.ndarray:
    """``diag(G Sigma G.T)``."""
    return np.einsum("ij,ij->i", G @ Sigma, G)


def update_beta_alg1(sys: LinearizedSystem, post: PosteriorState, eps: float = EPSILON) -> np.ndarray:
    """Per-measurement precisions ``1 / ((G Sigma G')_ii + r_i^2 + eps)``."""
    r = sys.y - sys.G @ post.mu
    return 1.0 / (predictive_variance(sys.G, post.Sigma) + r * r + eps)


def update_beta_alg2(sys: LinearizedSystem, post: PosteriorState, gamma=None,
                     beta_min: float = BETA_MIN, beta_max: float = BETA_MAX) -> float:
    """Shared precision ``(M - K + sum_i Sigma_ii / gamma_i) / ||y - G mu||^2``.

    ``gamma`` defaults to the prior variances that produced ``post``.
    """
    gamma = post.gamma if gamma is None else np.asarray(gamma, dtype=float)
    r = sys.y - sys.G @ post.mu
    rss = float(r @ r)
    num = sys.M - sys.K + float(np.sum(post.sigma_diag / gamma))
    if rss <= 0.0:
        return beta_max
    return float(np.clip(num / rss, beta_min, beta_max))


def update_beta_trace(sys: LinearizedSystem, post: PosteriorState) -> float:
    """``M / (Tr(G Sigma G') + ||y - G mu||^2)``; agrees with update_beta_alg2 at its fixed point."""
    r = sys.y - sys.G @ post.mu
    return sys.M / (float(np.sum(predictive_variance(sys.G, post.Sigma))) + float(r @ r))


def weight_observations(y, g, G, sat_idx, pres_idx):
    """Rescale the saturation and pressure blocks to unit residual norm.

    Returns ``(eta_s, eta_p, y_w, g_w, G_w)``. A block whose residual is
    exactly zero (or which is empty) keeps weight 1.
    """
    y, g, G = (np.asarray(a, dtype=float) for a in (y, g, G))
    w = np.ones(y.size)
    etas = []
    for idx in (np.asarray(sat_idx, int), np.asarray(pres_idx, int)):
        norm = float(np.linalg.norm(y[idx] - g[idx])) if idx.size else 0.0
        eta = 1.0 / norm if norm > 0 else 1.0
        w[idx] = eta
        etas.append(eta)
    return etas[0], etas[1], w * y, w * g, w[:, None] * G


def linearize(y, g0, G, alpha, eta_s: float = 1.0, eta_p: float = 1.0) -> LinearizedSystem:
    """``y^(n) = y - g(m^(n)) + G alpha^(n)``."""
    y, g0, alpha = (np.asarray(a, dtype=float) for a in (y, g0, alpha))
    G = np.atleast_2d(np.asarray(G, dtype=float))
    if y.shape != g0.shape:
        raise ValueError("observed and simulated data differ in length")
    if G.shape != (y.size, alpha.size):
        raise ValueError(f"sensitivity shape {G.shape} incompatible with ({y.size}, {alpha.size})")
    return LinearizedSystem(y - g0 + G @ alpha, G, alpha, eta_s, eta_p)


def prune(gamma, active, threshold: float = PRUNE_THRESHOLD, protect=(0,)) -> np.ndarray:
    """Boolean mask over ``active`` of coefficients that stay in the model.

    A coefficient is dropped when its prior variance falls below
    ``threshold * max(gamma)``; indices in ``protect`` (the DC term) are
    always kept.
    """
    gamma = np.asarray(gamma, dtype=float)
    active = np.asarray(active, dtype=int)
    if gamma.size == 0:
        raise DegenerateModelError("no active coefficients")
    keep = gamma >= threshold * gamma.max()
    keep |= np.isin(active, np.asarray(protect, dtype=int))
    if not keep.any():
        raise DegenerateModelError("all coefficients pruned")
    return keep


@dataclass
class Evidence:
    log_det_C: float
    quad: float
    prior: float

    @property
    def value(self) -> float:
        return -0.5 * self.log_det_C - 0.5 * self.quad + self.prior


def evidence_terms(sys: LinearizedSystem, gamma, beta, lam=None,
                   a_beta: float = 1.0 + EPSILON, b_beta: float = EPSILON) -> Evidence:
    """Log evidence split into ``log|C|``, ``y' C^-1 y`` and hyperprior terms.

    ``log|C| = -log|B| + log|I + W'W|`` (the determinant identity in
    scaled form) and ``y' C^-1 y = ||y - G mu||_B^2 + mu' Lambda mu``;
    the ``M x M`` matrix ``C`` is never formed. Rate-0 Laplace
    hyperpriors contribute nothing. The ``-(M/2) log 2 pi`` constant is
    omitted.
    """
    gamma = np.asarray(gamma, dtype=float)
    b = _beta_vector(beta, sys.M)
    sg, sb = np.sqrt(gamma), np.sqrt(b)
    W = sb[:, None] * sys.G * sg[None, :]
    if sys.M < sys.K:
        cf = _cholesky(np.eye(sys.M) + W @ W.T, "I + WW'")
    else:
        cf = _cholesky(np.eye(sys.K) + W.T @ W, "I + W'W")
    log_det_A = 2.0 * float(np.sum(np.log(np.diag(cf[0]))))
    log_det_C = log_det_A - float(np.sum(np.log(b)))
    post = posterior_update(sys, gamma, beta)
    r = sys.y - sys.G @ post.mu
    quad = float(r @ (b * r)) + float(post.mu @ (post.mu / gamma))
    prior = 0.0
    if lam is not None:
        lam = np.broadcast_to(np.asarray(lam, dtype=float), gamma.shape)
        nz = lam > 0
        prior += float(np.sum(np.log(lam[nz] / 2.0) - lam[nz] * gamma[nz] / 2.0))
    # one Gamma hyperprior per distinct precision: M of them, or one shared
    bs = np.atleast_1d(np.asarray(beta, dtype=float)) if np.ndim(beta) == 0 else b
    prior += float(np.sum(a_beta * math.log(b_beta) - gammaln(a_beta)
                          + (a_beta - 1.0) * np.log(bs) - b_beta * bs))
    return Evidence(log_det_C, quad, prior)


def evidence(sys: LinearizedSystem, hyper_or_gamma, beta=None, **kw) -> float:
    """Log evidence (up to a constant) of the linearised model."""
    if isinstance(hyper_or_gamma, HyperState):
        h = hyper_or_gamma
        return evidence_terms(sys, h.gamma, h.beta, h.lam, h.a_beta, h.b_beta).value
    return evidence_terms(sys, hyper_or_gamma, beta, **kw).value


def spatial_variance(post: PosteriorState, basis) -> np.ndarray:
    """Per-cell variance ``diag(Phi.T Sigma Phi)``; pruned coefficients contribute 0."""
    V = basis.columns(post.active)
    return np.einsum("ik,ik->i", V @ post.Sigma, V)


# -- drivers -------------------------------------------------------------------


@dataclass
class InversionConfig:
    algorithm: str = "ii"
    max_iter: int = 50
    tol: float = 1e-4
    patience: int = 3
    misfit_atol: float = 1e-10
    gamma_init: float = 400.0  # (20 mD)^2, same scale as gamma_fix
    gamma_fix: float = 400.0
    lam: float = 0.0
    epsilon: float = EPSILON
    beta_min: float = BETA_MIN
    beta_max: float = BETA_MAX
    prune_threshold: float = PRUNE_THRESHOLD
    damping: float = 1.0
    max_backtracks: int = 3
    parameterization: str = "natural"
    initial_perm: float = 20.0
    workers: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")
        if self.max_iter < 1 or self.patience < 1:
            raise ValueError("max_iter and patience must be positive")
        if self.gamma_init <= 0 or self.gamma_fix <= 0:
            raise ValueError("prior variances must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "InversionConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "InversionConfig":
        return cls.from_dict(json.loads(text))

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()


@dataclass
class InversionResult:
    m: np.ndarray  # final parameter field (cell values)
    alpha: np.ndarray  # full coefficient vector, zeros at pruned indices
    posterior: PosteriorState
    history: list[dict]
    config: InversionConfig
    converged: bool
    basis: object = field(repr=False, default=None)

    @property
    def active(self) -> np.ndarray:
        return self.posterior.active

    @property
    def spatial_variance(self) -> np.ndarray:
        return self.posterior.spatial_variance

    @property
    def misfits(self) -> np.ndarray:
        return np.array([h["misfit"] for h in self.history])

    @property
    def iterations(self) -> int:
        return max(len(self.history) - 1, 0)

    def save(self, directory, grid_shape=None, field_values=None, extra_manifest=None) -> dict:
        """Write field, coefficient, variance, log and manifest files.

        ``field_values`` overrides the exported field (e.g. floored
        permeability in mD). Returns the manifest.
        """
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        shape = grid_shape or (1, self.m.size)
        values = self.m if field_values is None else field_values
        write_field_csv(out / "field.csv", np.asarray(values).reshape(shape))
        write_field_csv(out / "variance.csv", np.asarray(self.spatial_variance).reshape(shape))
        if hasattr(self.basis, "write_coefficients"):
            self.basis.write_coefficients(out / "coefficients.csv", self.alpha)
        else:
            with open(out / "coefficients.csv", "w") as fh:
                fh.write("index,kx,ky,value\n")
                for i, v in enumerate(self.alpha):
                    fh.write(f"{i},{i},0,{float(v)!r}\n")
        (out / "log.json").write_text(json.dumps(self.history, indent=2, sort_keys=True))
        files = {}
        for name in ("field.csv", "coefficients.csv", "variance.csv", "log.json"):
            files[name] = hashlib.sha256((out / name).read_bytes()).hexdigest()
        manifest = {
            "config": self.config.to_dict(),
            "config_hash": self.config.digest(),
            "seed": self.config.seed,
            "converged": self.converged,
            "iterations": self.iterations,
            "versions": {"python": platform.python_version(), "numpy": np.__version__,
                         "scipy": scipy.__version__},
            "files": files,
        }
        if extra_manifest:
            manifest.update(extra_manifest)
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
        return manifest


def _converged(misfits: list[float], tol: float, patience: int) -> bool:
    if len(misfits) <= patience:
        return False
    recent = misfits[-(patience + 1):]
    for prev, cur in zip(recent[:-1], recent[1:]):
        if prev == 0.0 or abs(cur - prev) / prev >= tol:
            return False
    return True


def _beta_summary(beta) -> dict:
    b = np.atleast_1d(np.asarray(beta, dtype=float))
    return {"min": float(b.min()), "median": float(np.median(b)), "max": float(b.max())}


def run_inversion(model, basis, y, config: InversionConfig, m0=None, callback=None) -> InversionResult:
    """Iteratively linearised sparse Bayesian inversion.

    ``model`` supplies ``evaluate(m)``, ``local(m)`` and ``partition()``
    (see :mod:`sparsehm.sensitivity`); ``basis`` maps fields to
    coefficients. ``m0`` defaults to a homogeneous field at
    ``config.initial_perm`` in the model's parameterisation.
    """
    cfg = config
    y = np.asarray(y, dtype=float)
    N = basis.size
    if m0 is None:
        to_params = getattr(model, "to_parameters", lambda k: np.asarray(k, float))
        m0 = to_params(np.full(N, cfg.initial_perm))
    alpha = basis.forward(np.asarray(m0, dtype=float))
    sparse = cfg.algorithm in ("i", "ii")
    weighted = cfg.algorithm in ("ii", "gaussian")
    sat_idx, pres_idx = model.partition()
    lam_full = np.full(N, cfg.lam)

    prior0 = cfg.gamma_init if sparse else cfg.gamma_fix
    active = np.arange(N)
    # Start from the current model as posterior mean with the prior as covariance.
    post = PosteriorState(alpha.copy(), np.diag(np.full(N, prior0)), active, np.full(N, prior0), 1.0)

    # Evaluate the starting model itself: the round trip through the basis
    # leaves ~1e-15 noise that Pa-scale pressures turn into a spurious residual.
    g = model.evaluate(np.asarray(m0, dtype=float))
    misfit = float(np.linalg.norm(y - g))
    history = [{"iteration": 0, "misfit": misfit, "active": int(N), "beta": None,
                "evidence": None, "step": None}]
    misfits = [misfit]
    converged = misfit < cfg.misfit_atol

    it = 0
    while not converged and it < cfg.max_iter:
        it += 1
        try:
            J = coefficient_jacobian(model, basis, alpha, active, workers=cfg.workers)
            G = J.entries
            g0 = J.g0
            if weighted:
                eta_s, eta_p, y_w, g_w, G_w = weight_observations(y, g0, G, sat_idx, pres_idx)
            else:
                eta_s, eta_p, y_w, g_w, G_w = 1.0, 1.0, y, g0, G
            sys = linearize(y_w, g_w, G_w, alpha[active], eta_s, eta_p)

            if sparse:
                gamma = update_gamma(post.mu, post.sigma_diag, lam_full[active])
                gamma = np.maximum(gamma, np.finfo(float).tiny)
            else:
                gamma = np.full(active.size, cfg.gamma_fix)
            if cfg.algorithm == "i":
                # no clamp: beta_i spans many decades when kinds have different units
                beta = update_beta_alg1(sys, post, cfg.epsilon)
            else:
                beta = update_beta_alg2(sys, post, None, cfg.beta_min, cfg.beta_max)

            new = posterior_update(sys, gamma, beta)
            new.evidence = evidence(sys, gamma, beta, lam=lam_full[active])
            new.active = active.copy()
            if sparse:
                keep = prune(gamma, active, cfg.prune_threshold)
                if not keep.all():
                    # drop pruned rows/cols: the gamma -> 0 limit of the full posterior
                    sys_k = LinearizedSystem(sys.y, sys.G[:, keep], sys.alpha[keep], eta_s, eta_p)
                    ev = new.evidence
                    new = posterior_update(sys_k, gamma[keep], beta)
                    new.evidence = ev
                    new.active = active[keep]
        except Exception as exc:  # surface the failing iteration
            raise InversionError(it, exc) from exc

        # Backtrack on a merit that is blind to block scale when data are weighted.
        if weighted:
            def merit(r):
                return (eta_s * np.linalg.norm(r[sat_idx])) ** 2 + (eta_p * np.linalg.norm(r[pres_idx])) ** 2
        else:
            def merit(r):
                return float(r @ r)
        current = merit(y - g0)
        target = np.zeros(N)
        target[new.active] = new.mu
        theta = cfg.damping
        for attempt in range(cfg.max_backtracks + 1):
            trial = alpha + theta * (target - alpha)
            trial[np.setdiff1d(np.arange(N), new.active)] = 0.0
            try:
                g = model.evaluate(basis.inverse(trial))
            except Exception as exc:
                raise InversionError(it, exc) from exc
            if merit(y - g) <= current or attempt == cfg.max_backtracks:
                break
            theta *= 0.5
        new_misfit = float(np.linalg.norm(y - g))
        alpha, misfit, active = trial, new_misfit, new.active
        post = new
        misfits.append(misfit)
        history.append({"iteration": it, "misfit": misfit, "active": int(active.size),
                        "beta": _beta_summary(beta), "evidence": float(new.evidence),
                        "step": theta, "eta_s": eta_s, "eta_p": eta_p})
        log.info("iter %d misfit %.6g active %d", it, misfit, active.size)
        if callback is not None:
            callback(it, alpha, post)
        converged = misfit < cfg.misfit_atol or _converged(misfits, cfg.tol, cfg.patience)

    post.spatial_variance = spatial_variance(post, basis)
    return InversionResult(basis.inverse(alpha), alpha, post, history, cfg, converged, basis)


def _with_algorithm(config, algorithm):
    cfg = InversionConfig() if config is None else config
    if cfg.algorithm != algorithm:
        cfg = InversionConfig.from_dict({**cfg.to_dict(), "algorithm": algorithm})
    return cfg


def run_algorithm_i(model, basis, y, config: InversionConfig | None = None, m0=None, **kw):
    """Per-measurement noise precisions."""
    return run_inversion(model, basis, y, _with_algorithm(config, "i"), m0, **kw)


def run_algorithm_ii(model, basis, y, config: InversionConfig | None = None, m0=None, **kw):
    """Block-weighted data with one shared noise precision."""
    return run_inversion(model, basis, y, _with_algorithm(config, "ii"), m0, **kw)


def run_gaussian_baseline(model, basis, y, config: InversionConfig | None = None, m0=None, **kw):
    """Fixed isotropic Gaussian coefficient prior; no sparsity, no pruning."""
    return run_inversion(model, basis, y, _with_algorithm(config, "gaussian"), m0, **kw)
