"""Core vocabulary: finite attribute domains, datasets, conditions, conjunctions,
and the two interpretable model families (decision trees and rule lists).

Everything here is immutable after construction and safe to share across
threads. Attribute values are plain ``int`` (numeric codes) or ``str``
(categorical codes); comparison thresholds are exact ``Fraction`` instances so
that domain membership never depends on float equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Value = Union[int, str]

#: Operators allowed in a Condition. "le"/"gt" compare against an exact
#: threshold and only apply to numeric domains; "eq"/"ne" test one value.
CONDITION_OPS = ("le", "gt", "eq", "ne")


class ContradictoryPath(Exception):
    """A decision path with positive support admits no feature vector."""


class EmptyCapture(Exception):
    """A rule with positive support captures zero feature vectors."""


# ---------------------------------------------------------------------------
# Domains and datasets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AttributeDomain:
    """A named column with a finite, strictly increasing value list.

    All-int values form a numeric domain (orderable, threshold splits are
    meaningful); all-str values form a categorical domain restricted to
    equality tests. Binary attributes are the special case ``(0, 1)``.
    """

    name: str
    values: tuple[Value, ...]

    def __post_init__(self):
        if not self.name:
            raise ValueError("attribute name must be non-empty")
        if not self.values:
            raise ValueError(f"domain {self.name!r} must have at least one value")
        kinds = {type(v) for v in self.values}
        if kinds == {int}:
            pass
        elif kinds == {str}:
            pass
        else:
            raise ValueError(
                f"domain {self.name!r} mixes value types {sorted(k.__name__ for k in kinds)}"
            )
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError(f"domain {self.name!r} values must be strictly increasing")

    @property
    def is_numeric(self) -> bool:
        return isinstance(self.values[0], int)

    @property
    def cardinality(self) -> int:
        return len(self.values)

    def __contains__(self, value: object) -> bool:
        return value in self.values


@dataclass(frozen=True)
class DatasetSchema:
    """Feature columns plus a separate label column."""

    attributes: tuple[AttributeDomain, ...]
    label_domain: AttributeDomain

    def __post_init__(self):
        names = [a.name for a in self.attributes] + [self.label_domain.name]
        if len(set(names)) != len(names):
            raise ValueError("attribute and label names must be pairwise distinct")

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    def attribute_index(self, name: str) -> int:
        for k, attr in enumerate(self.attributes):
            if attr.name == name:
                return k
        raise KeyError(f"no attribute named {name!r}")

    def full_world_count(self) -> int:
        """Number of distinct feature vectors over the full domains (exact)."""
        total = 1
        for attr in self.attributes:
            total *= attr.cardinality
        return total


@dataclass(frozen=True)
class DeterministicDataset:
    """Fully known examples: one feature tuple and one label per row."""

    schema: DatasetSchema
    rows: tuple[tuple[Value, ...], ...]
    labels: tuple[Value, ...]

    def __post_init__(self):
        if len(self.rows) < 1:
            raise ValueError("dataset must contain at least one row")
        if len(self.rows) != len(self.labels):
            raise ValueError("rows and labels must have equal length")
        d = self.schema.n_attributes
        for i, row in enumerate(self.rows):
            if len(row) != d:
                raise ValueError(f"row {i} has {len(row)} cells, expected {d}")
            for attr, v in zip(self.schema.attributes, row):
                if v not in attr:
                    raise ValueError(f"row {i}: value {v!r} outside domain of {attr.name!r}")
        for i, y in enumerate(self.labels):
            if y not in self.schema.label_domain:
                raise ValueError(f"row {i}: label {y!r} outside label domain")

    @property
    def n(self) -> int:
        return len(self.rows)


# ---------------------------------------------------------------------------
# Conditions and conjunctions
# ---------------------------------------------------------------------------

def _as_threshold(value) -> Fraction:
    if isinstance(value, bool):
        raise ValueError("boolean is not a valid threshold")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, float, str)):
        return Fraction(value)
    raise ValueError(f"cannot interpret {value!r} as an exact threshold")


@dataclass(frozen=True)
class Condition:
    """One boolean test on a single attribute.

    ``le``/``gt`` hold an exact Fraction threshold (numeric domains only);
    ``eq``/``ne`` hold a domain value.
    """

    attribute: int
    op: str
    value: Union[Value, Fraction]

    def __post_init__(self):
        if self.op not in CONDITION_OPS:
            raise ValueError(f"unknown condition op {self.op!r}")
        if self.attribute < 0:
            raise ValueError("attribute index must be non-negative")
        if self.op in ("le", "gt"):
            object.__setattr__(self, "value", _as_threshold(self.value))

    def holds(self, value: Value) -> bool:
        if self.op == "eq":
            return value == self.value
        if self.op == "ne":
            return value != self.value
        if isinstance(value, str):
            raise ValueError(f"threshold comparison {self.op!r} on categorical value {value!r}")
        if self.op == "le":
            return value <= self.value
        return value > self.value

    def describe(self, schema: DatasetSchema) -> str:
        name = schema.attributes[self.attribute].name
        symbol = {"le": "<=", "gt": ">", "eq": "=", "ne": "!="}[self.op]
        return f"{name} {symbol} {format_value(self.value)}"


def format_value(value: Union[Value, Fraction]) -> str:
    """Render a cell value or threshold for display (not for round-trips)."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        as_float = float(value)
        if Fraction(as_float) == value:
            return f"{as_float:g}"
        return f"{value.numerator}/{value.denominator}"
    return str(value)


@dataclass(frozen=True)
class Conjunction:
    """A logical AND of conditions. The empty conjunction is the constant True."""

    conditions: tuple[Condition, ...] = ()

    @property
    def is_true(self) -> bool:
        return not self.conditions

    def satisfies(self, row: Sequence[Value]) -> bool:
        return all(c.holds(row[c.attribute]) for c in self.conditions)

    def reduced_domains(self, schema: DatasetSchema) -> tuple[tuple[Value, ...], ...]:
        """Per-attribute subsets induced by this conjunction (empty = contradiction)."""
        per_attr: list[list[Condition]] = [[] for _ in schema.attributes]
        for cond in self.conditions:
            if cond.attribute >= schema.n_attributes:
                raise ValueError(f"condition references attribute {cond.attribute}, schema has {schema.n_attributes}")
            per_attr[cond.attribute].append(cond)
        return tuple(
            reduce_domain(attr, conds) for attr, conds in zip(schema.attributes, per_attr)
        )

    def is_contradictory(self, schema: DatasetSchema) -> bool:
        return any(not dom for dom in self.reduced_domains(schema))

    def describe(self, schema: DatasetSchema) -> str:
        if self.is_true:
            return "true"
        return " and ".join(c.describe(schema) for c in self.conditions)


TRUE = Conjunction()


def reduce_domain(domain: AttributeDomain, conditions: Iterable[Condition]) -> tuple[Value, ...]:
    """Values of ``domain`` satisfying every condition; may be empty.

    Every condition must reference the same attribute as the caller intends;
    only the tests are applied here, the index is not re-checked.
    """
    values = domain.values
    for cond in conditions:
        values = tuple(v for v in values if cond.holds(v))
        if not values:
            break
    return values


def conjoin(a: Conjunction, b: Conjunction) -> Conjunction:
    """Concatenate two condition sets; contradiction shows up as an empty
    reduced domain, never as an error."""
    if a.is_true:
        return b
    if b.is_true:
        return a
    return Conjunction(a.conditions + b.conditions)


def canonical_box(f: Conjunction, schema: DatasetSchema) -> tuple[tuple[Value, ...], ...]:
    """Canonical form of a conjunction: its per-attribute reduced domains.

    Two conjunctions with the same satisfier set map to the same box, which is
    what memoized counting keys on.
    """
    return f.reduced_domains(schema)


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecisionPath:
    """One branch of a tree or one rule of a rule list: a conjunction guarding
    a prediction, with exact per-class training counts."""

    conjunction: Conjunction
    prediction: Value
    class_counts: tuple[int, ...]

    @property
    def support(self) -> int:
        return sum(self.class_counts)


def _validate_paths(schema: DatasetSchema, paths: Sequence[DecisionPath], what: str) -> None:
    if not paths:
        raise ValueError(f"{what} must have at least one decision path")
    n_labels = schema.label_domain.cardinality
    for j, path in enumerate(paths):
        if len(path.class_counts) != n_labels:
            raise ValueError(
                f"{what} path {j}: class_counts has {len(path.class_counts)} entries, "
                f"label domain has {n_labels}"
            )
        if any(c < 0 for c in path.class_counts):
            raise ValueError(f"{what} path {j}: negative class count")
        if path.prediction not in schema.label_domain:
            raise ValueError(f"{what} path {j}: prediction {path.prediction!r} outside label domain")
        for cond in path.conjunction.conditions:
            if not 0 <= cond.attribute < schema.n_attributes:
                raise ValueError(f"{what} path {j}: condition on unknown attribute {cond.attribute}")
            attr = schema.attributes[cond.attribute]
            if cond.op in ("le", "gt") and not attr.is_numeric:
                raise ValueError(
                    f"{what} path {j}: threshold condition on categorical attribute {attr.name!r}"
                )
            if cond.op in ("eq", "ne") and not isinstance(cond.value, type(attr.values[0])):
                raise ValueError(
                    f"{what} path {j}: {cond.op} value {cond.value!r} has wrong type for {attr.name!r}"
                )
    if sum(p.support for p in paths) < 1:
        raise ValueError(f"{what}: total support must be at least 1")


@dataclass(frozen=True)
class DecisionTreeModel:
    """A trained tree reduced to its root-to-leaf branches.

    The branches partition the training set; internal-node statistics carry no
    extra information and are not stored.
    """

    schema: DatasetSchema
    branches: tuple[DecisionPath, ...]

    def __post_init__(self):
        _validate_paths(self.schema, self.branches, "tree")

    @property
    def model_kind(self) -> str:
        return "tree"

    @property
    def paths(self) -> tuple[DecisionPath, ...]:
        return self.branches

    @property
    def n_training_examples(self) -> int:
        return sum(b.support for b in self.branches)

    def predict(self, row: Sequence[Value]) -> Value:
        for branch in self.branches:
            if branch.conjunction.satisfies(row):
                return branch.prediction
        raise ValueError("row satisfies no branch (branches do not cover the space)")

    def capture_index(self, row: Sequence[Value]) -> int:
        """Index of the unique branch containing the row."""
        matches = [j for j, b in enumerate(self.branches) if b.conjunction.satisfies(row)]
        if len(matches) != 1:
            raise ValueError(f"row matched {len(matches)} branches, expected exactly 1")
        return matches[0]


@dataclass(frozen=True)
class RuleListModel:
    """An ordered rule list; the final rule is the default (antecedent True)."""

    schema: DatasetSchema
    rules: tuple[DecisionPath, ...]

    def __post_init__(self):
        _validate_paths(self.schema, self.rules, "rule list")
        if not self.rules[-1].conjunction.is_true:
            raise ValueError("last rule's antecedent must be the constant True")

    @property
    def model_kind(self) -> str:
        return "rulelist"

    @property
    def paths(self) -> tuple[DecisionPath, ...]:
        return self.rules

    @property
    def n_training_examples(self) -> int:
        return sum(r.support for r in self.rules)

    def capture_index(self, row: Sequence[Value]) -> int:
        """Index of the first rule whose antecedent the row satisfies."""
        for j, rule in enumerate(self.rules):
            if rule.conjunction.satisfies(row):
                return j
        raise AssertionError("unreachable: default rule is True")

    def predict(self, row: Sequence[Value]) -> Value:
        return self.rules[self.capture_index(row)].prediction


Model = Union[DecisionTreeModel, RuleListModel]
