"""Command-line interface: ``sparsehm {truth,simulate,invert,report,selftest}``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from .harness import (
    ExperimentReport,
    build_scenario,
    evaluate,
    generate_truth,
    run_experiment,
    sparsity_fraction,
    support_f1,
    synthesize_observations,
    top_support,
)
from .sbl import InversionConfig, LinearizedSystem, posterior_update
from .simulator import (
    PRESSURE_DROP,
    SATURATION,
    ObservationSet,
    PermeabilityField,
    read_field_csv,
    run_simulation,
    write_field_csv,
)
from .transform import DCTBasis

# keys of a --config file that describe the experiment rather than the inversion
RUN_KEYS = {"scenario", "scale", "truth_seed", "noise"}


def _scenario_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", choices=["A", "B", "C"], default="B")
    p.add_argument("--scale", type=float, choices=[1.0, 0.5], default=0.5)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sparsehm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("truth", help="generate a channelized permeability truth")
    _scenario_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--contrast", type=float, default=10.0)
    p.add_argument("--out", type=Path, required=True, help="output directory")

    p = sub.add_parser("simulate", help="forward run, observations to CSV")
    _scenario_args(p)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--perm", type=Path, help="permeability grid CSV (mD)")
    src.add_argument("--seed", type=int, default=0, help="truth seed when --perm is absent")
    p.add_argument("--noise-pressure", type=float, default=0.0, help="std (Pa)")
    p.add_argument("--noise-saturation", type=float, default=0.0)
    p.add_argument("--noise-seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True, help="observations CSV")

    p = sub.add_parser("invert", help="history-match a seeded synthetic truth")
    p.add_argument("--algorithm", choices=["i", "ii", "gaussian"], default="ii")
    p.add_argument("--scenario", choices=["A", "B", "C"], default=None)
    p.add_argument("--scale", type=float, choices=[1.0, 0.5], default=None)
    p.add_argument("--config", type=Path, help="JSON config file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--observations", type=Path, help="observed data CSV (default: synthetic)")
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--out", type=Path, required=True, help="output directory")

    p = sub.add_parser("report", help="metrics JSON and plot-ready CSVs for a run")
    p.add_argument("run", type=Path, help="directory written by `invert`")
    p.add_argument("--truth", type=Path, help="truth grid CSV (default: RUN/truth.csv)")

    sub.add_parser("selftest", help="run the transform, identity and mass-balance suites")
    return parser


def _cmd_truth(a) -> int:
    sc = build_scenario(a.scenario, a.scale)
    truth = generate_truth(sc.grid, a.seed, a.contrast)
    a.out.mkdir(parents=True, exist_ok=True)
    write_field_csv(a.out / "truth.csv", truth.field.as_array())
    write_field_csv(a.out / "facies.csv", truth.facies.reshape(sc.grid.shape))
    meta = {"seed": a.seed, "scenario": sc.name, "contrast": a.contrast,
            "channel_fraction": truth.channel_fraction, "shape": list(sc.grid.shape)}
    (a.out / "truth.json").write_text(json.dumps(meta, indent=2, sort_keys=True))
    print(json.dumps(meta, sort_keys=True))
    return 0


def _cmd_simulate(a) -> int:
    sc = build_scenario(a.scenario, a.scale)
    if a.perm is not None:
        field = PermeabilityField(read_field_csv(a.perm).ravel(), sc.grid)
        obs = run_simulation(field, sc.fluids, sc.wells, sc.report_times).observations
        if a.noise_pressure or a.noise_saturation:
            rng = np.random.default_rng(a.noise_seed)
            std = np.where(obs.kinds == SATURATION, a.noise_saturation, a.noise_pressure)
            obs = obs.with_values(obs.values + std * rng.standard_normal(len(obs)))
    else:
        truth = generate_truth(sc.grid, a.seed)
        obs = synthesize_observations(
            truth, sc, {PRESSURE_DROP: a.noise_pressure, SATURATION: a.noise_saturation},
            seed=a.noise_seed)
    a.out.parent.mkdir(parents=True, exist_ok=True)
    obs.to_csv(a.out)
    print(f"wrote {len(obs)} observations to {a.out}")
    return 0


def _load_run_config(a) -> tuple[dict, InversionConfig]:
    raw = json.loads(a.config.read_text()) if a.config else {}
    run = {k: raw.pop(k) for k in list(raw) if k in RUN_KEYS}
    known = {f.name for f in fields(InversionConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    raw["algorithm"] = a.algorithm
    if a.seed is not None:
        raw["seed"] = a.seed
    if a.max_iter is not None:
        raw["max_iter"] = a.max_iter
    cfg = InversionConfig.from_dict(raw)
    run.setdefault("scenario", "B")
    run.setdefault("scale", 0.5)
    if a.scenario is not None:
        run["scenario"] = a.scenario
    if a.scale is not None:
        run["scale"] = a.scale
    run.setdefault("truth_seed", cfg.seed)
    if a.seed is not None:
        run["truth_seed"] = a.seed
    run.setdefault("noise", {})
    return run, cfg


def _cmd_invert(a) -> int:
    run, cfg = _load_run_config(a)
    sc = build_scenario(run["scenario"], run["scale"])
    truth = generate_truth(sc.grid, int(run["truth_seed"]))
    if a.observations is not None:
        y = ObservationSet.from_csv(a.observations)
    else:
        y = synthesize_observations(truth, sc, run["noise"], seed=cfg.seed)
    a.out.mkdir(parents=True, exist_ok=True)
    write_field_csv(a.out / "truth.csv", truth.field.as_array())
    y.to_csv(a.out / "observations.csv")
    (a.out / "run.json").write_text(json.dumps(
        {**run, "scale": float(run["scale"])}, indent=2, sort_keys=True))
    result, rep = run_experiment(sc, truth, cfg, y, out_dir=a.out)
    (a.out / "report.json").write_text(json.dumps(_report_dict(rep), indent=2, sort_keys=True))
    print(f"iterations={rep.iterations} misfit_ratio={rep.misfit_ratio:.3e} "
          f"model_error={rep.model_error:.4f} sparsity={rep.sparsity_fraction:.3f}")
    return 0


def _report_dict(rep: ExperimentReport) -> dict:
    d = rep.to_dict()
    d.pop("misfit_history")
    return d


def _cmd_report(a) -> int:
    run = a.run
    log = json.loads((run / "log.json").read_text())
    field = read_field_csv(run / "field.csv").ravel()
    truth_path = a.truth or run / "truth.csv"
    truth = read_field_csv(truth_path).ravel()
    coef = np.genfromtxt(run / "coefficients.csv", delimiter=",", names=True)
    alpha = np.atleast_1d(coef["value"])
    ny, nx = read_field_csv(truth_path).shape
    basis = DCTBasis(nx, ny)
    manifest = json.loads((run / "manifest.json").read_text())
    param = manifest["config"].get("parameterization", "natural")
    t_alpha = basis.forward(np.log(truth) if param == "log" else truth)
    k = int(np.ceil(0.05 * t_alpha.size))
    t_support = top_support(t_alpha, k)
    misfits = [h["misfit"] for h in log]
    out = {
        "misfit_ratio": misfits[-1] / misfits[0] if misfits[0] > 0 else 0.0,
        "model_error": float(np.linalg.norm(field - truth) / np.linalg.norm(truth)),
        "sparsity_fraction": sparsity_fraction(alpha),
        "support_f1": support_f1(top_support(alpha, k), t_support),
        "iterations": len(log) - 1,
        "active": int(log[-1]["active"]),
    }
    (run / "metrics.json").write_text(json.dumps(out, indent=2, sort_keys=True))
    with open(run / "misfit_history.csv", "w") as fh:
        fh.write("iteration,misfit,active\n")
        for h in log:
            fh.write(f"{h['iteration']},{h['misfit']!r},{h['active']}\n")
    with open(run / "coefficient_magnitude.csv", "w") as fh:
        fh.write("index,log10_abs\n")
        for i, v in enumerate(alpha):
            fh.write(f"{i},{float(np.log10(abs(v))) if v else float('-inf')!r}\n")
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def selftest() -> list[tuple[str, int, int]]:
    """Quick oracle suites; returns ``(name, passed, total)`` per suite."""
    rng = np.random.default_rng(0)
    results = []

    ok = 0
    sizes = (8, 16, 32)
    for n in sizes:
        b = DCTBasis(n, n)
        m = rng.standard_normal(n * n)
        P = b.matrix
        ok += (np.abs(b.inverse(b.forward(m)) - m).max() < 1e-12
               and np.abs(P @ P.T - np.eye(n * n)).max() < 1e-10)
    results.append(("dct round-trip/orthogonality", ok, len(sizes)))

    ok, total = 0, 50
    for _ in range(total):
        M, K = rng.integers(10, 31), rng.integers(5, 21)
        G = rng.standard_normal((M, K))
        sys_ = LinearizedSystem(rng.standard_normal(M), G, np.zeros(K), 1.0, 1.0)
        gamma, beta = rng.uniform(0.1, 2.0, K), rng.uniform(0.5, 5.0, M)
        a, b = posterior_update(sys_, gamma, beta, "coef"), posterior_update(sys_, gamma, beta, "data")
        ok += (np.allclose(a.Sigma, b.Sigma, rtol=1e-8, atol=1e-12)
               and np.allclose(a.mu, b.mu, rtol=1e-8, atol=1e-12))
    results.append(("woodbury posterior routes", ok, total))

    ok, total = 0, 3
    for name in ("A", "B", "C"):
        sc = build_scenario(name, 0.5)
        truth = generate_truth(sc.grid, 1)
        res = run_simulation(truth.field, sc.fluids, sc.wells, sc.report_times)
        stored = np.array([0.0] + [st.saturation.sum() for st in res.states])
        stored *= sc.grid.cell_pore_volume
        net = np.array(res.water_injected) - np.array(res.water_produced)
        ok += bool(np.all(np.abs(np.diff(stored) - net) <= 1e-8 * np.array(res.water_injected)))
    results.append(("water mass balance per interval", ok, total))
    return results


def _cmd_selftest(a) -> int:
    failed = 0
    for name, passed, total in selftest():
        print(f"{'PASS' if passed == total else 'FAIL'} {name}: {passed}/{total}")
        failed += passed != total
    return 1 if failed else 0


COMMANDS = {"truth": _cmd_truth, "simulate": _cmd_simulate, "invert": _cmd_invert,
            "report": _cmd_report, "selftest": _cmd_selftest}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)  # exits with status 2 on bad flags
    try:
        return COMMANDS[args.command](args)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"sparsehm {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
