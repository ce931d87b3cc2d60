"""Standard result tables: fixed product rows evaluated under several assumptions."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

from . import gompertz
from .closed_form import ProductSpec
from .fractional_age import Assumption
from .life_table import LifeTable, example_table
from .products import Product, compute

EXACT = "G"     # column computed from the continuous Gompertz law

ANNUAL_ROWS: Tuple[Tuple[str, Product, int], ...] = (
    ("A", Product.TERM_INSURANCE, 1),
    ("2A", Product.TERM_INSURANCE, 2),
    ("e", Product.LIFETIME, 1),
    ("ET2", Product.LIFETIME, 2),
    ("IbarA", Product.INCREASING_CONTINUOUS, 1),
    ("2IbarA", Product.INCREASING_CONTINUOUS, 2),
    ("IA", Product.INCREASING_ANNUAL, 1),
    ("2IA", Product.INCREASING_ANNUAL, 2),
)

MTHLY_ROWS: Tuple[Tuple[str, Product, int], ...] = (
    ("A(j)", Product.MTHLY_INSURANCE, 1),
    ("2A(j)", Product.MTHLY_INSURANCE, 2),
    ("I(j)A", Product.MTHLY_INCREASING, 1),
    ("2I(j)A", Product.MTHLY_INCREASING, 2),
)

TABLE_SPECS = {
    # name: (rows, discrete-table source, base spec)
    "table2": (ANNUAL_ROWS, "csv", ProductSpec(x=50, defer=2, term=7, i=0.03)),
    "table3": (MTHLY_ROWS, "csv", ProductSpec(x=50, defer=2, term=7, i=0.03, j=12)),
    "table5": (ANNUAL_ROWS, "gompertz", ProductSpec(x=0, defer=1, i=0.03)),
    "table6": (MTHLY_ROWS, "gompertz", ProductSpec(x=0, defer=1, i=0.03, j=12)),
}


@dataclass
class ResultTable:
    name: str
    columns: List[str]
    rows: List[Tuple[str, Dict[str, float]]] = field(default_factory=list)

    def value(self, label: str, column: str) -> float:
        for lab, vals in self.rows:
            if lab == label:
                return vals[column]
        raise KeyError(label)

    def column(self, column: str) -> List[float]:
        return [vals[column] for _, vals in self.rows]


def evaluate_rows(
    rows: Sequence[Tuple[str, Product, int]],
    base: ProductSpec,
    table: LifeTable,
    assumptions: Sequence[str],
    params: Optional[gompertz.GompertzParams] = None,
    name: str = "custom",
) -> ResultTable:
    cols = [c if c == EXACT else Assumption.parse(c).value for c in assumptions]
    if EXACT in cols and params is None:
        raise ValueError("the G column needs Gompertz parameters")
    out = ResultTable(name, cols)
    for label, product, m in rows:
        spec = replace(base, m=m)
        vals = {}
        for c in cols:
            if c == EXACT:
                vals[c] = gompertz.exact_moment(params, product, spec)
            else:
                vals[c] = compute(table, product, spec, Assumption(c)).value
        out.rows.append((label, vals))
    return out


def build_table(
    name: str,
    table: Optional[LifeTable] = None,
    params: Optional[gompertz.GompertzParams] = None,
    max_age: int = gompertz.EXAMPLE_MAX_AGE,
    assumptions: Optional[Sequence[str]] = None,
) -> ResultTable:
    """Evaluate one of the standard tables.

    table2/table3 default to the bundled example table; table5/table6 use
    the discretized Gompertz law and add the exact G column.
    """
    try:
        rows, source, base = TABLE_SPECS[name]
    except KeyError:
        raise ValueError(f"unknown table {name!r}; choose from {', '.join(TABLE_SPECS)}") from None
    if source == "csv":
        table = table if table is not None else example_table()
        cols = list(assumptions or ("UDD", "C", "B"))
        params = None
    else:
        params = params or gompertz.EXAMPLE_PARAMS
        table = table if table is not None else gompertz.discretize(params, max_age)
        cols = list(assumptions or ("UDD", "C", "B", EXACT))
    return evaluate_rows(rows, base, table, cols, params, name)
