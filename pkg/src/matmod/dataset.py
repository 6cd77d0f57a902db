"""CSV ingestion.

One observation per row. Response components go in columns ``y1 .. yp``; an
optional ``group`` column holds one-way layout labels, or optional columns
``x1 .. xm`` hold regressors (not both). Rows are transposed into the
``p x n`` array form on read. Grouped data are reordered group by group, groups
in order of first appearance and rows in file order within a group; the
permutation is kept in :attr:`Dataset.order`.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .arrays import Array
from .errors import ParseError, SchemaError

_INDEXED = re.compile(r"^([yx])(\d+)$")


@dataclass(frozen=True, eq=False)
class Dataset:
    values: np.ndarray
    response_names: tuple[str, ...]
    order: tuple[int, ...]
    groups: tuple[str, ...] | None = None
    group_names: tuple[str, ...] | None = None
    group_sizes: tuple[int, ...] | None = None
    regressors: np.ndarray | None = None
    regressor_names: tuple[str, ...] | None = None

    @property
    def p(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @property
    def array(self) -> Array:
        return Array(self.values)

    @property
    def layout(self) -> str:
        if self.groups is not None:
            return "one-way"
        if self.regressors is not None:
            return "regression"
        return "sample"


def _indexed_columns(header: list[str], prefix: str) -> list[str]:
    found = {}
    for name in header:
        m = _INDEXED.match(name)
        if m and m.group(1) == prefix:
            found[int(m.group(2))] = name
    if found and sorted(found) != list(range(1, len(found) + 1)):
        raise SchemaError(f"{prefix} columns must be numbered {prefix}1..{prefix}{len(found)}")
    return [found[i] for i in sorted(found)]


def _number(cell: str, line: int, column: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(
            f"line {line}, column {column!r}: cannot read {cell!r} as a number", line, column
        ) from None
    if not math.isfinite(value):
        raise ParseError(f"line {line}, column {column!r}: non-finite value {cell!r}", line, column)
    return value


def parse_csv(path) -> Dataset:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise SchemaError(f"{path}: empty file, header required") from None
        rows = [(reader.line_num, row) for row in reader if any(c.strip() for c in row)]

    if len(set(header)) != len(header):
        raise SchemaError("duplicate column names in header")
    ys = _indexed_columns(header, "y")
    xs = _indexed_columns(header, "x")
    has_group = "group" in header
    unknown = set(header) - set(ys) - set(xs) - {"group"}
    if unknown:
        raise SchemaError(f"unrecognized columns: {sorted(unknown)}")
    if not ys:
        raise SchemaError("no response columns (y1..yp) in header")
    if has_group and xs:
        raise SchemaError("a file may have a group column or regressor columns, not both")
    if not rows:
        raise SchemaError("no observations")

    col = {name: i for i, name in enumerate(header)}
    y_vals, x_vals, labels = [], [], []
    for line, row in rows:
        if len(row) != len(header):
            raise ParseError(f"line {line}: expected {len(header)} fields, got {len(row)}", line)
        y_vals.append([_number(row[col[c]].strip(), line, c) for c in ys])
        if xs:
            x_vals.append([_number(row[col[c]].strip(), line, c) for c in xs])
        if has_group:
            label = row[col["group"]].strip()
            if not label:
                raise ParseError(f"line {line}: empty group label", line, "group")
            labels.append(label)

    y = np.array(y_vals).T
    if has_group:
        names = list(dict.fromkeys(labels))
        order = [i for g in names for i, lab in enumerate(labels) if lab == g]
        sizes = tuple(labels.count(g) for g in names)
        return Dataset(
            values=y[:, order],
            response_names=tuple(ys),
            order=tuple(order),
            groups=tuple(labels[i] for i in order),
            group_names=tuple(names),
            group_sizes=sizes,
        )
    return Dataset(
        values=y,
        response_names=tuple(ys),
        order=tuple(range(y.shape[1])),
        regressors=np.array(x_vals).T if xs else None,
        regressor_names=tuple(xs) if xs else None,
    )
