"""Reproduce the error tables and print them next to the published values.

    python scripts/reproduce_tables.py --tables 1 2 5 6
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import published  # noqa: E402

from fracell.experiments import TABLE_COUPLING, TABLE_DELTA_RULE, reproduce_table  # noqa: E402

PUBLISHED = {1: published.TABLE_1, 2: published.TABLE_2, 3: published.TABLE_3,
             4: published.TABLE_4, 5: published.TABLE_5, 6: published.TABLE_6}


@dataclass
class RunConfig:
    tables: list = field(default_factory=lambda: [1, 2, 4, 5, 6])
    delta_rule: str = TABLE_DELTA_RULE
    coupling: str = TABLE_COUPLING


def comparison(table_id, result) -> str:
    spec = result.spec
    lines = []
    for key, values in PUBLISHED[table_id].items():
        if spec.scheme == "splitting":
            quantity, comp = key
            group, label = 0, f"{quantity}({comp})"
        else:
            value, quantity = key
            comp = 0
            param = next(iter(spec.row_groups[0]))
            group = [g[param] for g in spec.row_groups].index(value)
            label = f"{quantity} {param}={value:g}"
        ours = [result.cell(group, c, quantity, comp) for c in spec.column_values]
        worst = max(abs(o - v) / v for o, v in zip(ours, values))
        lines.append(f"  {label:<20} max rel. deviation {worst:8.2e}")
    return "\n".join(lines)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--tables", type=int, nargs="+", default=RunConfig().tables)
    parser.add_argument("--delta-rule", default=RunConfig.delta_rule)
    parser.add_argument("--coupling", default=RunConfig.coupling)
    cfg = RunConfig(**{k.replace("-", "_"): v for k, v in vars(parser.parse_args(argv)).items()})
    for tid in cfg.tables:
        start = time.perf_counter()
        result = reproduce_table(tid, cfg.delta_rule, cfg.coupling)
        print(result.format())
        print(f"  ({time.perf_counter() - start:.1f} s)")
        print(comparison(tid, result))
        print()


if __name__ == "__main__":
    main()
