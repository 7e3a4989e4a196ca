"""Observed orders in tau for both schemes against the exact discrete solution.

    python scripts/convergence_study.py --n 64 --steps 20 40 80 160
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

from fracell.experiments import ExperimentSpec, convergence_sweep


@dataclass
class StudyConfig:
    n: int = 64
    steps: list = field(default_factory=lambda: [20, 40, 80, 160])
    thetas: list = field(default_factory=lambda: [1.0, 0.5])
    alpha: float = 0.5


def run(cfg: StudyConfig):
    specs = [
        ExperimentSpec(n1=[cfg.n], alpha=[cfg.alpha], theta=cfg.thetas, sigma=[0.5, 1.0],
                       steps=cfg.steps),
        ExperimentSpec(n1=[cfg.n], alpha=[cfg.alpha], theta=cfg.thetas, scheme="splitting",
                       steps=cfg.steps, coupling="parallel"),
        ExperimentSpec(n1=[cfg.n], alpha=[cfg.alpha], theta=cfg.thetas, scheme="splitting",
                       steps=cfg.steps, coupling="sequential"),
    ]
    for spec in specs:
        for o in convergence_sweep(spec):
            tag = o.scheme if o.scheme == "two_level" else f"splitting/{spec.coupling}"
            errs = " ".join(f"{e:.3e}" for e in o.errors)
            print(f"{tag:<22} theta={o.theta:<4g} sigma={o.sigma1:<4g} comp={o.component} "
                  f"order={o.order:6.3f}  errors: {errs}")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=StudyConfig.n)
    parser.add_argument("--steps", type=int, nargs="+", default=StudyConfig().steps)
    parser.add_argument("--thetas", type=float, nargs="+", default=StudyConfig().thetas)
    parser.add_argument("--alpha", type=float, default=StudyConfig.alpha)
    run(StudyConfig(**vars(parser.parse_args(argv))))


if __name__ == "__main__":
    main()
