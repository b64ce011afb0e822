"""Rewrite configs/golden/ from the shipped example configs.

Only run this after an intentional change to experiment output.
"""
from pathlib import Path

from circuitgrowth.cli import run
from circuitgrowth.config import ExperimentConfig

ROOT = Path(__file__).resolve().parent.parent / "configs"
EXAMPLES = [
    "dimension_single2", "dimension_brickwork3", "growth_brickwork3",
    "walk_lattice2", "walk_clifford_t", "walk_clifford_t_file",
    "return_lattice1", "return_perm3",
]

if __name__ == "__main__":
    for name in EXAMPLES:
        outcome = run(ExperimentConfig.load(ROOT / f"{name}.json"), ROOT / "golden" / name)
        print(name, outcome.status, [f.name for f in outcome.files])
