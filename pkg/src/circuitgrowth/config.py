"""Experiment configuration: loading, hashing and validation."""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .architecture import BlockArchitecture, brickwork, single_slot
from .exact import ExactUnitary, GateSet, gateset_findings
from .walk import CliffordTBackend, GroupBackend, make_backend

KINDS = ("dimension-curve", "growth-report", "walk-complexity", "return-prob")
BACKENDS = ("clifford_t", "clifford_t_unquotiented", "lattice", "permutation")


class ConfigError(ValueError):
    def __init__(self, findings: list[str]):
        super().__init__("; ".join(findings))
        self.findings = findings


@dataclass
class ExperimentConfig:
    kind: str
    # continuous experiments: a JSON file path, or "brickwork:N" / "single:N"
    architecture: str | None = None
    curve_csv: str | None = None
    k_max: int | None = None
    samples: int = 5
    rel_tol: float = 1e-7
    shortcut_c: float | None = None
    # discrete experiments
    backend: str | None = None
    backend_params: dict = field(default_factory=dict)
    gateset: str | None = None
    weights: list[float] | None = None
    k_list: list[int] | None = None
    trials: int = 1
    radius_cap: int = 6
    memory_cap: int = 10**6
    censor_threshold: float = 0.0
    # run control; out and threads never affect results and are not hashed
    seed: int = 0
    out: str = "out"
    threads: int = 1
    base_dir: str = field(default=".", repr=False)

    @classmethod
    def from_dict(cls, data: dict, base_dir: str | Path = ".") -> ExperimentConfig:
        names = {f.name for f in fields(cls)} - {"base_dir"}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ConfigError([f"unknown config field {u!r}" for u in unknown])
        if "kind" not in data:
            raise ConfigError(["missing field 'kind'"])
        return cls(**data, base_dir=str(base_dir))

    @classmethod
    def load(cls, path: str | Path) -> ExperimentConfig:
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError([f"cannot read config: {exc}"]) from exc
        return cls.from_dict(data, path.parent)

    def hashed_fields(self) -> dict:
        d = asdict(self)
        for k in ("out", "threads", "base_dir"):
            d.pop(k)
        return d

    def config_hash(self) -> str:
        blob = json.dumps(self.hashed_fields(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def resolve(self, p: str) -> Path:
        q = Path(p)
        return q if q.is_absolute() else Path(self.base_dir) / q

    def load_architecture(self) -> BlockArchitecture:
        spec = self.architecture
        if spec is None:
            raise ConfigError(["architecture is required"])
        for prefix, maker in (("brickwork:", brickwork), ("single:", single_slot)):
            if spec.startswith(prefix):
                return maker(int(spec[len(prefix):]))
        return BlockArchitecture.load(self.resolve(spec))


def build_backend(cfg: ExperimentConfig) -> GroupBackend:
    if cfg.gateset is not None:
        projective = cfg.backend != "clifford_t_unquotiented"
        return CliffordTBackend(GateSet.load(cfg.resolve(cfg.gateset), projective), projective)
    return make_backend(cfg.backend, **cfg.backend_params)


def _architecture_findings(cfg: ExperimentConfig) -> list[str]:
    spec = cfg.architecture
    if spec is None:
        return ["architecture is required"]
    if spec.startswith(("brickwork:", "single:")):
        try:
            cfg.load_architecture()
        except ValueError as exc:
            return [str(exc)]
        return []
    path = cfg.resolve(spec)
    if not path.exists():
        return [f"architecture file not found: {spec}"]
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        return [f"architecture file is not JSON: {exc}"]
    out = []
    n, slots = data.get("n"), data.get("slots")
    if not isinstance(n, int) or n < 2:
        return ["architecture needs an integer n >= 2"]
    if not slots:
        return ["architecture needs at least one slot"]
    for s in slots:
        if len(s) != 2:
            out.append(f"slot {s} is not a pair")
        elif s[0] == s[1]:
            out.append(f"slot indices must differ: {s}")
        elif not all(0 <= q < n for q in s):
            out.append(f"slot {s} out of range for n={n}")
    return out


def _gateset_file_findings(cfg: ExperimentConfig) -> list[str]:
    path = cfg.resolve(cfg.gateset)
    if not path.exists():
        return [f"gate set file not found: {cfg.gateset}"]
    try:
        data = json.loads(path.read_text())
        labels = [str(g["label"]) for g in data["gates"]]
        elems = []
        for g in data["gates"]:
            (e00, e01), (e10, e11) = g["matrix"]
            elems.append(ExactUnitary.of([tuple(e) for e in (e00, e01, e10, e11)],
                                         cfg.backend != "clifford_t_unquotiented"))
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        return [f"malformed gate set file: {exc}"]
    return gateset_findings(labels, elems)


def validate(cfg: ExperimentConfig) -> list[str]:
    """Problems with ``cfg``; an empty list means it can be run."""
    out: list[str] = []
    if cfg.kind not in KINDS:
        return [f"unknown experiment kind {cfg.kind!r}"]
    if cfg.seed < 0 or cfg.seed >= 2**64:
        out.append("seed must be an unsigned 64-bit integer")
    if cfg.threads < 1:
        out.append("threads must be >= 1")
    if cfg.kind in ("dimension-curve", "growth-report"):
        out += _architecture_findings(cfg)
        if cfg.kind == "growth-report" and cfg.curve_csv is not None:
            if not cfg.resolve(cfg.curve_csv).exists():
                out.append(f"curve file not found: {cfg.curve_csv}")
        elif cfg.k_max is None or cfg.k_max < 1:
            out.append("k_max must be >= 1")
        if cfg.samples < 1:
            out.append("samples must be >= 1")
        if not 0 < cfg.rel_tol < 1:
            out.append("rel_tol must lie in (0, 1)")
        return out
    if cfg.backend not in BACKENDS:
        out.append(f"unknown backend {cfg.backend!r}")
    if not cfg.k_list:
        out.append("k_list must be nonempty")
    elif any(k < (1 if cfg.kind == "return-prob" else 0) for k in cfg.k_list):
        out.append("k_list values out of range")
    if cfg.trials < 1:
        out.append("trials must be >= 1")
    if cfg.gateset is not None:
        if cfg.backend not in ("clifford_t", "clifford_t_unquotiented"):
            out.append("gateset only applies to Clifford+T backends")
        else:
            out += _gateset_file_findings(cfg)
    if cfg.kind == "walk-complexity":
        if cfg.radius_cap < 1:
            out.append("radius_cap must be >= 1")
        if not 0 <= cfg.censor_threshold <= 1:
            out.append("censor_threshold must lie in [0, 1]")
        if not out:
            try:
                gens = len(build_backend(cfg).generators)
            except ValueError as exc:
                return out + [str(exc)]
            if cfg.memory_cap < 1 + gens:
                out.append(f"memory_cap {cfg.memory_cap} is smaller than the radius-1 ball ({1 + gens})")
    return out
