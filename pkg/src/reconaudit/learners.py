"""Self-contained greedy learners with exact per-path class counts.

Both learners minimize weighted child Gini impurity at each step and break
ties deterministically (lowest attribute index first; for rule candidates the
positive literal before the negative, for numeric splits the lowest
threshold). Impurity comparisons are done in exact rational arithmetic so that
tie-breaking never depends on float rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

from .domain import (
    Condition,
    Conjunction,
    DatasetSchema,
    DecisionPath,
    DecisionTreeModel,
    DeterministicDataset,
    Model,
    RuleListModel,
    TRUE,
    Value,
    conjoin,
)


class NonBinarySchema(Exception):
    """The rule-list learner needs every feature domain to be exactly {0, 1}."""


class SchemaMismatch(Exception):
    """Model and dataset disagree on schema."""


@dataclass(frozen=True)
class LearnerConfig:
    """Budget for a greedy learner.

    max_depth caps tree depth / rule count; min_support is the relative floor
    applied to both sides of every split (and to both the captured and
    remaining sets of every rule). The seed is recorded for experiment
    bookkeeping; the learners themselves are deterministic.
    """

    max_depth: int
    min_support: float
    seed: int = 0

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if not 0 < self.min_support <= 0.5:
            raise ValueError("min_support must be in (0, 0.5]")

    def support_count(self, n: int) -> int:
        """Absolute support floor; always at least one example."""
        return max(1, math.ceil(self.min_support * n))


def gini(class_counts: Sequence[int]) -> float:
    """Gini impurity 1 - sum((c/total)^2); 0 for a pure node."""
    total = sum(class_counts)
    if total <= 0:
        raise ValueError("class counts must not all be zero")
    return float(1 - sum(Fraction(c, total) ** 2 for c in class_counts))


def _gini_exact(class_counts: Sequence[int]) -> Fraction:
    total = sum(class_counts)
    return 1 - sum(Fraction(c, total) ** 2 for c in class_counts)


def _label_counts(data: DeterministicDataset, indices: Sequence[int]) -> tuple[int, ...]:
    order = {v: i for i, v in enumerate(data.schema.label_domain.values)}
    counts = [0] * len(order)
    for i in indices:
        counts[order[data.labels[i]]] += 1
    return tuple(counts)


def _majority_label(schema: DatasetSchema, counts: Sequence[int]) -> Value:
    best = max(range(len(counts)), key=lambda i: (counts[i], -i))
    return schema.label_domain.values[best]


def _weighted_child_gini(left: Sequence[int], right: Sequence[int]) -> Fraction:
    n_left, n_right = sum(left), sum(right)
    total = n_left + n_right
    return (n_left * _gini_exact(left) + n_right * _gini_exact(right)) / total


# ---------------------------------------------------------------------------
# Greedy decision trees
# ---------------------------------------------------------------------------

def _split_candidates(data: DeterministicDataset, indices: Sequence[int], attr_index: int):
    """Binary split conditions to try on one attribute: threshold tests at
    midpoints between consecutive observed values (numeric), or one-vs-rest
    equality tests (categorical)."""
    attr = data.schema.attributes[attr_index]
    observed = sorted({data.rows[i][attr_index] for i in indices})
    if len(observed) < 2:
        return
    if attr.is_numeric:
        for lo, hi in zip(observed, observed[1:]):
            threshold = Fraction(lo + hi, 2)
            yield (
                Condition(attr_index, "le", threshold),
                Condition(attr_index, "gt", threshold),
            )
    else:
        for value in observed:
            yield (
                Condition(attr_index, "eq", value),
                Condition(attr_index, "ne", value),
            )


def train_greedy_tree(data: DeterministicDataset, cfg: LearnerConfig) -> DecisionTreeModel:
    """CART-style greedy tree.

    Recursion stops at max_depth, at a pure node, or when no split leaves both
    children with at least the support floor. A feasible zero-improvement
    split is still taken (needed e.g. to solve XOR), so the only guarantees
    are the stopping rules, not monotone impurity decrease.
    """
    schema = data.schema
    floor = cfg.support_count(data.n)
    branches: list[DecisionPath] = []

    def grow(indices: list[int], depth: int, path: Conjunction) -> None:
        counts = _label_counts(data, indices)
        pure = sum(1 for c in counts if c > 0) <= 1
        best = None  # (weighted gini, left cond, right cond, left idx, right idx)
        if depth < cfg.max_depth and not pure:
            for k in range(schema.n_attributes):
                for cond_left, cond_right in _split_candidates(data, indices, k):
                    left = [i for i in indices if cond_left.holds(data.rows[i][k])]
                    if len(left) < floor or len(indices) - len(left) < floor:
                        continue
                    right = [i for i in indices if not cond_left.holds(data.rows[i][k])]
                    score = _weighted_child_gini(
                        _label_counts(data, left), _label_counts(data, right)
                    )
                    if best is None or score < best[0]:
                        best = (score, cond_left, cond_right, left, right)
        if best is None:
            branches.append(
                DecisionPath(
                    conjunction=path,
                    prediction=_majority_label(schema, counts),
                    class_counts=counts,
                )
            )
            return
        _, cond_left, cond_right, left, right = best
        grow(left, depth + 1, conjoin(path, Conjunction((cond_left,))))
        grow(right, depth + 1, conjoin(path, Conjunction((cond_right,))))

    grow(list(range(data.n)), 0, TRUE)
    return DecisionTreeModel(schema=schema, branches=tuple(branches))


# ---------------------------------------------------------------------------
# Greedy rule lists
# ---------------------------------------------------------------------------

def _require_binary(schema: DatasetSchema) -> None:
    for attr in schema.attributes:
        if attr.values != (0, 1):
            raise NonBinarySchema(
                f"rule-list learning needs binary features; {attr.name!r} has domain {attr.values}"
            )


def best_single_rule(
    data: DeterministicDataset, indices: Sequence[int], floor: int
) -> Optional[tuple[int, int, list[int], list[int]]]:
    """Best admissible single-literal rule on the remaining examples.

    Candidates are a_k = 1 and a_k = 0 for every attribute; admissible means
    both the captured and the remaining sets stay at or above the floor.
    Returns (attribute, literal value, captured, remaining) or None. Ties go
    to the lowest attribute index, positive literal first.
    """
    best = None
    for k in range(data.schema.n_attributes):
        for value in (1, 0):
            captured = [i for i in indices if data.rows[i][k] == value]
            remaining = [i for i in indices if data.rows[i][k] != value]
            if len(captured) < floor or len(remaining) < floor:
                continue
            score = _weighted_child_gini(
                _label_counts(data, captured), _label_counts(data, remaining)
            )
            if best is None or score < best[0]:
                best = (score, k, value, captured, remaining)
    if best is None:
        return None
    return best[1:]


def train_greedy_rulelist(data: DeterministicDataset, cfg: LearnerConfig) -> RuleListModel:
    """Top-down greedy rule list over single-literal antecedents.

    At each level the rule with the best Gini improvement on the remaining
    examples is appended, until max_depth rules are placed, no rule is
    admissible, or the remainder is pure; the default rule predicts the
    majority of what is left. As with the tree learner, a zero-improvement
    rule on an impure remainder is still taken (it can unlock later gains).
    """
    _require_binary(data.schema)
    schema = data.schema
    floor = cfg.support_count(data.n)
    remaining = list(range(data.n))
    rules: list[DecisionPath] = []
    while len(rules) < cfg.max_depth:
        if sum(1 for c in _label_counts(data, remaining) if c > 0) <= 1:
            break
        choice = best_single_rule(data, remaining, floor)
        if choice is None:
            break
        k, value, captured, rest = choice
        counts = _label_counts(data, captured)
        rules.append(
            DecisionPath(
                conjunction=Conjunction((Condition(k, "eq", value),)),
                prediction=_majority_label(schema, counts),
                class_counts=counts,
            )
        )
        remaining = rest
    default_counts = _label_counts(data, remaining)
    rules.append(
        DecisionPath(
            conjunction=TRUE,
            prediction=_majority_label(schema, default_counts),
            class_counts=default_counts,
        )
    )
    return RuleListModel(schema=schema, rules=tuple(rules))


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

def attach_supports(model: Model, data: DeterministicDataset) -> Model:
    """Recompute every path's class counts by routing each row to its
    capturing path. Restores the partition invariant for externally supplied
    models; a rule capturing nothing keeps an all-zero count."""
    if model.schema != data.schema:
        raise SchemaMismatch("model and dataset schemas differ")
    order = {v: i for i, v in enumerate(model.schema.label_domain.values)}
    counts = [[0] * len(order) for _ in model.paths]
    for row, label in zip(data.rows, data.labels):
        counts[model.capture_index(row)][order[label]] += 1
    new_paths = tuple(
        replace(path, class_counts=tuple(c)) for path, c in zip(model.paths, counts)
    )
    if isinstance(model, DecisionTreeModel):
        return DecisionTreeModel(schema=model.schema, branches=new_paths)
    return RuleListModel(schema=model.schema, rules=new_paths)


def training_accuracy(model: Model, data: DeterministicDataset) -> float:
    hits = sum(1 for row, label in zip(data.rows, data.labels) if model.predict(row) == label)
    return hits / data.n


def model_size(model: Model) -> int:
    """Internal-node count for a tree, rule count excluding the default for a
    rule list."""
    if isinstance(model, RuleListModel):
        return len(model.rules) - 1
    prefixes = set()
    for branch in model.branches:
        conds = branch.conjunction.conditions
        for cut in range(len(conds)):
            prefixes.add(conds[:cut])
    return len(prefixes)
