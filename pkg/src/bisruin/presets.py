"""Model settings and published values for the four reference tables."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources

from .joint import BivariatePoisson, Clayton, DependenceSpec
from .marginal import Poisson, ShiftedZeta

__all__ = ["TableSetting", "TABLES", "TOLERANCE", "published_values"]


@dataclass(frozen=True)
class TableSetting:
    label: str
    model: DependenceSpec


def _clayton_column(x, y):
    return tuple(
        TableSetting(f"theta={t}", Clayton(t, x, y)) for t in ("-0.9", "0.01", "100")
    )


TABLES: dict[int, tuple[TableSetting, ...]] = {
    1: tuple(
        TableSetting(f"lambda={lam}", BivariatePoisson("0.3", "1.4", lam))
        for lam in ("0.01", "0.15", "0.29")
    ),
    2: _clayton_column(Poisson("0.3"), Poisson("1.4")),
    3: _clayton_column(Poisson("1.4"), Poisson("0.3")),
    4: _clayton_column(Poisson("0.2"), ShiftedZeta("2.3")),
}

# Published values carry 4 decimals; tables built on the copula
# discretisation are held to a looser bound.
TOLERANCE = {1: 5e-5, 2: 1e-3, 3: 1e-3, 4: 1e-3}

# Published upper bounds on the psi(0) error per column.
DELTA_BOUND = {
    1: (1e-11, 1e-10, 1e-9),
    2: (1e-20, 1e-11, 1e-10),
    3: (1e-20, 1e-11, 1e-9),
    4: (1e-6, 1e-6, 1e-5),
}


def published_values(table: int) -> list[list[float]]:
    """``values[column][u]`` for u = 0..12, columns in TABLES order."""
    if table not in TABLES:
        raise KeyError(f"no table {table}")
    text = resources.files(__package__).joinpath("data/published_tables.csv").read_text()
    cols: list[dict[int, float]] = [{}, {}, {}]
    for row in csv.DictReader(io.StringIO(text)):
        if int(row["table"]) == table:
            cols[int(row["column"]) - 1][int(row["u"])] = float(row["psi"])
    return [[c[u] for u in sorted(c)] for c in cols]
