"""
Discrete life tables.

A table is a run of consecutive integer ages with expected survivor
counts l_x.  Everything downstream works with ratios of survivor counts,
so the radix only matters for display.

    p_x  = l_{x+1} / l_x
    q_x  = 1 - p_x
    kp_x = l_{x+k} / l_x
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass
from importlib import resources
from typing import IO, Iterable, Optional, Sequence, Union

from .errors import (
    EmptyTableError,
    MalformedCsvError,
    NonConsecutiveAgesError,
    NonMonotoneError,
    OutOfRangeError,
    ZeroExposureError,
)

CsvSource = Union[bytes, str, os.PathLike, IO[str], IO[bytes]]


@dataclass(frozen=True)
class ProbabilityBundle:
    """One-year and k-year probabilities for a life aged x."""

    p: float
    q: float
    kpx: float


@dataclass(frozen=True)
class LifeTable:
    """Expected survivors l_x for ages base_age, base_age + 1, ...

    Trailing zero-survivor ages are kept: the first of them is the
    terminal age.
    """

    base_age: int
    survivors: tuple

    def __post_init__(self):
        values = tuple(float(v) for v in self.survivors)
        object.__setattr__(self, "survivors", values)
        if not values:
            raise EmptyTableError("life table has no rows")
        for age, value in zip(self.ages, values):
            if not math.isfinite(value) or value < 0:
                raise MalformedCsvError(f"l_{age} = {value!r} is not a non-negative real")
        if values[0] <= 0:
            raise MalformedCsvError("radix l at the first age must be positive")
        for age, (a, b) in enumerate(zip(values, values[1:]), start=self.base_age):
            if b > a:
                raise NonMonotoneError(f"survivors increase from age {age} to {age + 1}")

    @classmethod
    def from_survivors(cls, survivors: Sequence[float], base_age: int = 0) -> "LifeTable":
        return cls(base_age=base_age, survivors=tuple(survivors))

    @property
    def radix(self) -> float:
        return self.survivors[0]

    @property
    def last_age(self) -> int:
        return self.base_age + len(self.survivors) - 1

    @property
    def ages(self) -> range:
        return range(self.base_age, self.base_age + len(self.survivors))

    def __len__(self) -> int:
        return len(self.survivors)

    def __contains__(self, age: int) -> bool:
        return self.base_age <= age <= self.last_age

    def l(self, age: int) -> float:
        if age not in self:
            raise OutOfRangeError(f"age {age} outside table [{self.base_age}, {self.last_age}]")
        return self.survivors[age - self.base_age]

    def d(self, age: int) -> float:
        """Expected deaths between age and age + 1."""
        return self.l(age) - self.l(age + 1)

    def survival(self, age: int) -> float:
        """s(age) = l_age / l_0 relative to the first tabulated age."""
        return self.l(age) / self.radix

    # -- probabilities ---------------------------------------------------

    def _exposure(self, age: int) -> float:
        lx = self.l(age)
        if lx == 0:
            raise ZeroExposureError(f"no survivors at age {age}")
        return lx

    def one_year_p(self, age: int) -> float:
        lx = self._exposure(age)
        return self.l(age + 1) / lx

    def one_year_q(self, age: int) -> float:
        return 1.0 - self.one_year_p(age)

    def log_one_year_p(self, age: int) -> float:
        """log p_age, accurate near p = 1 and for tiny p (-inf when p = 0)."""
        lx = self._exposure(age)
        lx1 = self.l(age + 1)
        if lx1 == 0:
            return -math.inf
        if lx1 < 0.5 * lx:
            # q rounds to 1 long before p underflows
            return math.log(lx1) - math.log(lx)
        return math.log1p(-(lx - lx1) / lx)

    def k_year_p(self, age: int, k: int) -> float:
        if k < 0:
            raise OutOfRangeError("k must be non-negative")
        lx = self._exposure(age)
        return self.l(age + k) / lx

    def probabilities(self, age: int, k: int = 1) -> ProbabilityBundle:
        p = self.one_year_p(age)
        return ProbabilityBundle(p=p, q=1.0 - p, kpx=self.k_year_p(age, k))

    def terminal_age(self) -> Optional[int]:
        """First age with no survivors, or None if the table never reaches zero."""
        for age, value in zip(self.ages, self.survivors):
            if value == 0:
                return age
        return None

    # -- serialisation ---------------------------------------------------

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("age,lx\n")
        for age, value in zip(self.ages, self.survivors):
            out.write(f"{age},{_format_survivor(value)}\n")
        return out.getvalue()


def _format_survivor(value: float) -> str:
    if value.is_integer() and abs(value) < 2**53:
        return str(int(value))
    return repr(value)


def _read_text(source: CsvSource) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, (str, os.PathLike)):
        if isinstance(source, str) and "\n" in source:
            return source
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def parse_rows(rows: Iterable[Sequence[str]]) -> LifeTable:
    rows = iter(rows)
    header = next(rows, None)
    if header is None:
        raise EmptyTableError("empty CSV")
    if [h.strip().lower() for h in header] != ["age", "lx"]:
        raise MalformedCsvError(f"expected header 'age,lx', got {','.join(header)!r}")

    ages, survivors = [], []
    for lineno, row in enumerate(rows, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise MalformedCsvError(f"line {lineno}: expected 2 fields, got {len(row)}")
        try:
            age = int(row[0].strip())
            lx = float(row[1].strip())
        except ValueError as exc:
            raise MalformedCsvError(f"line {lineno}: {exc}") from None
        if not math.isfinite(lx) or lx < 0:
            raise MalformedCsvError(f"line {lineno}: l_x must be a non-negative real")
        ages.append(age)
        survivors.append(lx)

    if not ages:
        raise EmptyTableError("CSV has a header but no rows")
    for a, b in zip(ages, ages[1:]):
        if b != a + 1:
            raise NonConsecutiveAgesError(f"age {b} follows {a}")
    return LifeTable(base_age=ages[0], survivors=tuple(survivors))


def load_life_table(source: CsvSource) -> LifeTable:
    """Read an ``age,lx`` CSV from bytes, text, a path or an open file."""
    text = _read_text(source)
    return parse_rows(csv.reader(io.StringIO(text)))


def example_table() -> LifeTable:
    """Ages 50-59 of the 2024 Lithuanian table (both sexes, l_0 = 100000)."""
    data = resources.files("lifemoments").joinpath("data/table1.csv").read_text("utf-8")
    return load_life_table(data)
