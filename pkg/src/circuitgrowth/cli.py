"""Command-line experiment runner.

    circuitgrowth dimension-curve --config configs/dimension_single2.json --out out/
    circuitgrowth validate --config configs/walk_lattice2.json

Every CSV starts with two comment lines: the config hash and seed, then a
``# generated`` timestamp that is excluded from golden-file comparison.

Exit codes: 0 success, 2 config error, 3 numerical-stability flag,
4 censoring above the configured threshold.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import dimension, walk
from .config import ConfigError, ExperimentConfig, build_backend, validate

EXIT_OK, EXIT_CONFIG, EXIT_UNSTABLE, EXIT_CENSORED = 0, 2, 3, 4


@dataclass
class Outcome:
    status: int
    files: list[Path]
    verdicts: dict[str, bool]


def _header(cfg: ExperimentConfig) -> str:
    stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    return f"# circuitgrowth {cfg.kind} config_hash={cfg.config_hash()} seed={cfg.seed}\n# generated {stamp}\n"


def strip_generated(text: str) -> str:
    """CSV body without the timestamp line, for golden comparisons."""
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("# generated"))


def _write(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _verdict_block(cfg: ExperimentConfig, verdicts: dict[str, bool]) -> str:
    lines = [f"config_hash={cfg.config_hash()} seed={cfg.seed}"]
    lines += [f"{'PASS' if ok else 'FAIL'} {name}" for name, ok in verdicts.items()]
    return "\n".join(lines) + "\n"


def _meta(cfg: ExperimentConfig) -> dict:
    return {"config_hash": cfg.config_hash(), "seed": cfg.seed, "kind": cfg.kind}


def _read_curve(cfg: ExperimentConfig) -> dimension.DimensionCurve:
    text = cfg.resolve(cfg.curve_csv).read_text()
    rows = list(csv.DictReader(line for line in io.StringIO(text) if not line.startswith("#")))
    return dimension.DimensionCurve.from_values(
        cfg.load_architecture(), [int(r["d_estimate"]) for r in rows], rel_tol=cfg.rel_tol, seed=cfg.seed
    )


def _run_dimension(cfg: ExperimentConfig, out: Path) -> Outcome:
    arch = cfg.load_architecture()
    if cfg.kind == "growth-report" and cfg.curve_csv is not None:
        curve = _read_curve(cfg)
    else:
        curve = dimension.dimension_curve(
            arch, cfg.k_max, cfg.samples, cfg.rel_tol, np.random.default_rng(cfg.seed), cfg.threads, cfg.seed
        )
    report = dimension.growth_report(curve, cfg.shortcut_c)
    stable = all(e.tol_stable for e in curve.entries)
    verdicts = {
        "eq2_pass": report.eq2_pass,
        "monotone_pass": report.monotone_pass,
        "subadditive_pass": report.subadditive_pass,
        "tol_stable": stable,
    }
    summary = dict(_meta(cfg), **json.loads(report.to_json()))
    files = [
        _write(out / "curve.csv", _header(cfg) + curve.to_csv()),
        _write(out / "report.json", json.dumps(summary, indent=2, sort_keys=True) + "\n"),
        _write(out / "verdict.txt", _verdict_block(cfg, verdicts)),
    ]
    return Outcome(EXIT_OK if stable else EXIT_UNSTABLE, files, verdicts)


def _run_walk(cfg: ExperimentConfig, out: Path) -> Outcome:
    backend = build_backend(cfg)
    est = walk.kingman_estimate(
        backend, cfg.k_list, cfg.trials, cfg.radius_cap, cfg.memory_cap,
        np.random.default_rng(cfg.seed), cfg.threads, cfg.weights, cfg.seed,
    )
    total = len(est.records)
    frac = est.censored_total / total
    verdicts = {
        "complexity_le_k": all(r.complexity <= r.k for r in est.records if not r.censored),
        "censoring_within_threshold": frac <= cfg.censor_threshold,
    }
    meta = dict(_meta(cfg), backend=backend.name, radius_cap=cfg.radius_cap, memory_cap=cfg.memory_cap)
    files = [
        _write(out / "walk.csv", _header(cfg) + est.to_csv()),
        _write(out / "summary.json", walk.summary_json(est.summary(), meta)),
        _write(out / "verdict.txt", _verdict_block(cfg, verdicts)),
    ]
    return Outcome(EXIT_OK if frac <= cfg.censor_threshold else EXIT_CENSORED, files, verdicts)


def _run_return(cfg: ExperimentConfig, out: Path) -> Outcome:
    backend = build_backend(cfg)
    ests = walk.return_probability(
        backend, cfg.k_list, cfg.trials, np.random.default_rng(cfg.seed), cfg.threads, cfg.weights, cfg.seed
    )
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["backend", "k", "steps", "trials", "returns", "rho_estimate", "upper_bound", "seed"])
    for e in ests:
        w.writerow([backend.name, e.k, e.steps, e.trials, e.returns, repr(e.rho_estimate), str(e.upper_bound).lower(), cfg.seed])
    verdicts = {"rho_in_unit_interval": all(0.0 < e.rho_estimate <= 1.0 for e in ests)}
    files = [
        _write(out / "return.csv", _header(cfg) + buf.getvalue()),
        _write(out / "summary.json", walk.summary_json([e.to_dict() for e in ests], dict(_meta(cfg), backend=backend.name))),
        _write(out / "verdict.txt", _verdict_block(cfg, verdicts)),
    ]
    return Outcome(EXIT_OK, files, verdicts)


def run(cfg: ExperimentConfig, out: str | Path | None = None) -> Outcome:
    """Validate and execute one experiment, writing its artifacts under ``out``."""
    findings = validate(cfg)
    if findings:
        raise ConfigError(findings)
    out = Path(out if out is not None else cfg.out)
    if cfg.kind in ("dimension-curve", "growth-report"):
        return _run_dimension(cfg, out)
    if cfg.kind == "walk-complexity":
        return _run_walk(cfg, out)
    return _run_return(cfg, out)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="circuitgrowth", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("dimension-curve", "growth-report", "walk-complexity", "return-prob", "validate"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="experiment config (JSON)")
        p.add_argument("--seed", type=int, help="override the config's master seed")
        p.add_argument("--out", help="output directory")
        p.add_argument("--threads", type=int, help="worker cap; never changes results")
    return ap


def _error(findings: list[str]) -> int:
    print(json.dumps({"error": "invalid config", "findings": findings}), file=sys.stderr)
    return EXIT_CONFIG


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = ExperimentConfig.load(args.config)
    except ConfigError as exc:
        return _error(exc.findings)
    except TypeError as exc:
        return _error([str(exc)])
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.out = args.out
    if args.threads is not None:
        cfg.threads = args.threads
    if args.command == "validate":
        findings = validate(cfg)
        print(json.dumps({"findings": findings}))
        return EXIT_OK if not findings else EXIT_CONFIG
    if cfg.kind != args.command:
        return _error([f"config kind {cfg.kind!r} does not match subcommand {args.command!r}"])
    try:
        outcome = run(cfg)
    except ConfigError as exc:
        return _error(exc.findings)
    for f in outcome.files:
        print(f)
    for name, ok in outcome.verdicts.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return outcome.status


if __name__ == "__main__":
    sys.exit(main())
