"""Dataset ingestion, quantile binarization, splits, and synthetic data.

CSV dialect: comma-separated, UTF-8, header row required, ``.`` decimal. A
column is numeric when every cell parses as an exact rational (integers,
decimals, or scientific notation); anything else makes it categorical.
"""

from __future__ import annotations

import csv
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .domain import AttributeDomain, DatasetSchema, DeterministicDataset, Value
from .modelio import dumps_canonical, _loads, write_text_atomic


class EmptyFile(Exception):
    """CSV has no header or no data rows."""


class MissingLabel(Exception):
    """The requested label column is absent from the header."""


class RaggedRows(Exception):
    """A CSV row has the wrong number of cells."""


class DegenerateColumn(UserWarning):
    """A constant column yields no derived feature and is dropped."""


# ---------------------------------------------------------------------------
# Raw tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RawColumn:
    name: str
    kind: str  # "numeric" | "categorical"
    cells: tuple[Union[Fraction, str], ...]


@dataclass(frozen=True)
class RawTable:
    features: tuple[RawColumn, ...]
    label: RawColumn

    @property
    def n_rows(self) -> int:
        return len(self.label.cells)


def _parse_number(cell: str) -> Optional[Fraction]:
    try:
        return Fraction(cell)
    except (ValueError, ZeroDivisionError):
        return None


def _type_column(name: str, cells: list[str]) -> RawColumn:
    numbers = [_parse_number(c.strip()) for c in cells]
    if all(v is not None for v in numbers):
        return RawColumn(name=name, kind="numeric", cells=tuple(numbers))
    return RawColumn(name=name, kind="categorical", cells=tuple(c.strip() for c in cells))


def load_csv(path, label_column: str) -> RawTable:
    """Read a CSV into typed columns, with the label column set aside."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyFile(f"{path}: no header row") from None
        rows = list(reader)
    if not rows:
        raise EmptyFile(f"{path}: no data rows")
    header = [h.strip() for h in header]
    if label_column not in header:
        raise MissingLabel(f"{path}: no column named {label_column!r} in header {header}")
    width = len(header)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise RaggedRows(f"{path}: row {i + 2} has {len(row)} cells, header has {width}")
    columns = [_type_column(name, [row[k] for row in rows]) for k, name in enumerate(header)]
    label_idx = header.index(label_column)
    return RawTable(
        features=tuple(c for k, c in enumerate(columns) if k != label_idx),
        label=columns[label_idx],
    )


def _column_as_values(column: RawColumn) -> tuple[Value, ...]:
    """Exact column cells as dataset values; numeric cells must be integers."""
    if column.kind == "categorical":
        return column.cells  # type: ignore[return-value]
    out = []
    for cell in column.cells:
        if cell.denominator != 1:
            raise ValueError(
                f"column {column.name!r} holds non-integer value {cell}; "
                "binarize it before building a dataset"
            )
        out.append(int(cell))
    return tuple(out)


def table_to_dataset(table: RawTable) -> DeterministicDataset:
    """Build a dataset directly from a table, each domain being the sorted set
    of observed values. Non-integer numeric columns are rejected (use
    binarize)."""
    feature_values = [_column_as_values(c) for c in table.features]
    label_values = _column_as_values(table.label)
    schema = DatasetSchema(
        attributes=tuple(
            AttributeDomain(c.name, tuple(sorted(set(values))))
            for c, values in zip(table.features, feature_values)
        ),
        label_domain=AttributeDomain(table.label.name, tuple(sorted(set(label_values)))),
    )
    rows = tuple(zip(*feature_values)) if feature_values else tuple(() for _ in label_values)
    return DeterministicDataset(schema=schema, rows=rows, labels=label_values)


# ---------------------------------------------------------------------------
# Binarization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ColumnSpec:
    name: str
    kind: str  # "binary" | "numeric" | "categorical" | "constant"
    cuts: tuple[Fraction, ...] = ()
    values: tuple[str, ...] = ()


@dataclass(frozen=True)
class BinarizationSpec:
    """Recorded transformation, replayable on unseen rows with identical
    derived-column order and naming."""

    columns: tuple[ColumnSpec, ...]


def _quantile_cuts(cells: tuple[Fraction, ...], q: int) -> tuple[Fraction, ...]:
    """Empirical order-statistic quantiles with midpoint interpolation at the
    fractions i/q; duplicates and always-true cuts are dropped."""
    xs = sorted(cells)
    m = len(xs)
    cuts = []
    for i in range(1, q):
        h = Fraction(i, q) * (m - 1)
        lo = int(h)
        if h == lo:
            cut = xs[lo]
        else:
            cut = Fraction(xs[lo] + xs[lo + 1], 2)
        cuts.append(cut)
    top = max(xs)
    unique = sorted(set(cut for cut in cuts if cut < top))
    return tuple(unique)


def _derive_spec(table: RawTable, q: int) -> BinarizationSpec:
    specs = []
    for column in table.features:
        distinct = set(column.cells)
        if len(distinct) == 1:
            warnings.warn(
                f"column {column.name!r} is constant and yields no feature",
                DegenerateColumn,
                stacklevel=3,
            )
            specs.append(ColumnSpec(name=column.name, kind="constant"))
        elif column.kind == "numeric" and distinct <= {Fraction(0), Fraction(1)}:
            specs.append(ColumnSpec(name=column.name, kind="binary"))
        elif column.kind == "numeric":
            specs.append(
                ColumnSpec(name=column.name, kind="numeric", cuts=_quantile_cuts(column.cells, q))
            )
        else:
            specs.append(
                ColumnSpec(name=column.name, kind="categorical", values=tuple(sorted(distinct)))
            )
    return BinarizationSpec(columns=tuple(specs))


def binarize(
    table: RawTable, q: int = 4, spec: Optional[BinarizationSpec] = None
) -> tuple[DeterministicDataset, BinarizationSpec]:
    """Turn every feature column into 0/1 columns.

    Numeric columns become one threshold column per quantile cut, named
    ``<col>__le__<cut>``; categorical columns are one-hot encoded as
    ``<col>__eq__<val>``; already-binary columns pass through. Passing a
    recorded spec replays the exact same transformation on new rows.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    if spec is None:
        spec = _derive_spec(table, q)
    by_name = {c.name: c for c in table.features}
    names: list[str] = []
    columns: list[tuple[int, ...]] = []
    for cspec in spec.columns:
        if cspec.name not in by_name:
            raise ValueError(f"spec references column {cspec.name!r} missing from the table")
        column = by_name[cspec.name]
        if cspec.kind == "constant":
            continue
        if cspec.kind == "binary":
            names.append(column.name)
            columns.append(tuple(int(c) for c in column.cells))
        elif cspec.kind == "numeric":
            for cut in cspec.cuts:
                names.append(f"{column.name}__le__{_cut_label(cut)}")
                columns.append(tuple(1 if c <= cut else 0 for c in column.cells))
        else:
            for value in cspec.values:
                names.append(f"{column.name}__eq__{value}")
                columns.append(tuple(1 if c == value else 0 for c in column.cells))
    label_values = _column_as_values(table.label)
    schema = DatasetSchema(
        attributes=tuple(AttributeDomain(name, (0, 1)) for name in names),
        label_domain=AttributeDomain(table.label.name, tuple(sorted(set(label_values)))),
    )
    rows = tuple(zip(*columns)) if columns else tuple(() for _ in label_values)
    return DeterministicDataset(schema=schema, rows=rows, labels=label_values), spec


def _cut_label(cut: Fraction) -> str:
    if cut.denominator == 1:
        return str(cut.numerator)
    as_float = float(cut)
    if Fraction(as_float) == cut:
        return f"{as_float:g}"
    return f"{cut.numerator}_{cut.denominator}"


# ---------------------------------------------------------------------------
# Splits and synthetic data
# ---------------------------------------------------------------------------

def split(
    dataset: DeterministicDataset, train_fraction: float, seed: int
) -> tuple[DeterministicDataset, DeterministicDataset]:
    """Deterministic random train/test split; both sides keep the original row
    order and the full schema."""
    if not 0 < train_fraction < 1:
        raise ValueError("train_fraction must be strictly between 0 and 1")
    if dataset.n < 2:
        raise ValueError("need at least 2 rows to split")
    indices = list(range(dataset.n))
    random.Random(seed).shuffle(indices)
    n_train = min(max(round(train_fraction * dataset.n), 1), dataset.n - 1)
    train_idx = sorted(indices[:n_train])
    test_idx = sorted(indices[n_train:])

    def take(idx):
        return DeterministicDataset(
            schema=dataset.schema,
            rows=tuple(dataset.rows[i] for i in idx),
            labels=tuple(dataset.labels[i] for i in idx),
        )

    return take(train_idx), take(test_idx)


def planted_rulelist_dataset(
    n_rows: int,
    n_attrs: int,
    concept_depth: int = 3,
    noise: float = 0.1,
    seed: int = 0,
) -> DeterministicDataset:
    """Synthetic binary dataset whose labels follow a planted rule-list
    concept on the first ``concept_depth`` attributes, with a fraction of
    labels flipped."""
    if n_attrs < concept_depth:
        raise ValueError("need at least as many attributes as the concept depth")
    rng = random.Random(seed)
    rows = []
    labels = []
    for _ in range(n_rows):
        row = tuple(rng.randint(0, 1) for _ in range(n_attrs))
        label = (concept_depth + 1) % 2  # default continues the alternation
        for level in range(concept_depth):
            if row[level] == 1:
                label = (level + 1) % 2  # rules alternate 1, 0, 1, ...
                break
        if rng.random() < noise:
            label = 1 - label
        rows.append(row)
        labels.append(label)
    schema = DatasetSchema(
        attributes=tuple(AttributeDomain(f"a{k}", (0, 1)) for k in range(n_attrs)),
        label_domain=AttributeDomain("label", (0, 1)),
    )
    return DeterministicDataset(schema=schema, rows=tuple(rows), labels=tuple(labels))


def write_csv(dataset: DeterministicDataset, path) -> None:
    """Write a dataset back out as CSV (features then label)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([a.name for a in dataset.schema.attributes] + [dataset.schema.label_domain.name])
        for row, label in zip(dataset.rows, dataset.labels):
            writer.writerow(list(row) + [label])


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------

def binspec_to_doc(spec: BinarizationSpec) -> dict:
    columns = []
    for c in spec.columns:
        entry: dict = {"name": c.name, "kind": c.kind}
        if c.kind == "numeric":
            entry["cuts"] = [str(cut) for cut in c.cuts]
        elif c.kind == "categorical":
            entry["values"] = list(c.values)
        columns.append(entry)
    return {"columns": columns}


def binspec_from_doc(doc: dict) -> BinarizationSpec:
    columns = []
    for entry in doc["columns"]:
        columns.append(
            ColumnSpec(
                name=entry["name"],
                kind=entry["kind"],
                cuts=tuple(Fraction(c) for c in entry.get("cuts", ())),
                values=tuple(entry.get("values", ())),
            )
        )
    return BinarizationSpec(columns=tuple(columns))


def binspec_to_text(spec: BinarizationSpec) -> str:
    return dumps_canonical(binspec_to_doc(spec))


def binspec_from_text(text: str) -> BinarizationSpec:
    return binspec_from_doc(_loads(text))


def save_binspec(spec: BinarizationSpec, path) -> None:
    write_text_atomic(path, binspec_to_text(spec))
