"""Shared fixtures and independent brute-force oracles for the test suite.

The toy models mirror the worked examples used throughout the docs: a small
numeric dataset with a three-branch tree, and a five-row binary dataset with a
three-rule list. The oracles here enumerate explicitly and never call the
closed-form counting code they are used to check.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from reconaudit import (
    AttributeDomain,
    Condition,
    Conjunction,
    DatasetSchema,
    DecisionPath,
    DecisionTreeModel,
    DeterministicDataset,
    RuleListModel,
    TRUE,
)


def le(attr: int, threshold) -> Condition:
    return Condition(attr, "le", Fraction(threshold))


def gt(attr: int, threshold) -> Condition:
    return Condition(attr, "gt", Fraction(threshold))


def eq(attr: int, value) -> Condition:
    return Condition(attr, "eq", value)


# ---------------------------------------------------------------------------
# Toy numeric dataset + tree
# ---------------------------------------------------------------------------

def toy_tree_schema() -> DatasetSchema:
    return DatasetSchema(
        attributes=(
            AttributeDomain("a1", (10, 11, 12, 13, 14, 15)),
            AttributeDomain("a2", (0, 1)),
            AttributeDomain("a3", (1, 2, 3)),
        ),
        label_domain=AttributeDomain("label", (0, 1)),
    )


def toy_tree_data() -> DeterministicDataset:
    return DeterministicDataset(
        schema=toy_tree_schema(),
        rows=((12, 0, 3), (14, 1, 2), (11, 1, 2), (14, 0, 1)),
        labels=(0, 0, 1, 1),
    )


def toy_tree_model() -> DecisionTreeModel:
    """Perfect-accuracy tree on the toy data: split a3 at 1.5, then a1 at 11.5."""
    half3 = Fraction(3, 2)
    half11 = Fraction(23, 2)
    return DecisionTreeModel(
        schema=toy_tree_schema(),
        branches=(
            DecisionPath(Conjunction((le(2, half3),)), 1, (0, 1)),
            DecisionPath(Conjunction((gt(2, half3), le(0, half11))), 1, (0, 1)),
            DecisionPath(Conjunction((gt(2, half3), gt(0, half11))), 0, (2, 0)),
        ),
    )


# ---------------------------------------------------------------------------
# Toy binary dataset + rule list
# ---------------------------------------------------------------------------

def toy_rulelist_schema() -> DatasetSchema:
    return DatasetSchema(
        attributes=(
            AttributeDomain("b1", (0, 1)),
            AttributeDomain("b2", (0, 1)),
            AttributeDomain("b3", (0, 1)),
        ),
        label_domain=AttributeDomain("label", (0, 1)),
    )


def toy_rulelist_data() -> DeterministicDataset:
    return DeterministicDataset(
        schema=toy_rulelist_schema(),
        rows=((1, 1, 1), (1, 1, 0), (0, 1, 1), (1, 0, 1), (1, 0, 0)),
        labels=(1, 1, 0, 0, 1),
    )


def toy_rulelist_model() -> RuleListModel:
    """Perfect-accuracy rule list on the toy binary data:
    if b1 and b2 then 1; else if b3 then 0; else 1."""
    return RuleListModel(
        schema=toy_rulelist_schema(),
        rules=(
            DecisionPath(Conjunction((eq(0, 1), eq(1, 1))), 1, (0, 2)),
            DecisionPath(Conjunction((eq(2, 1),)), 0, (2, 0)),
            DecisionPath(TRUE, 1, (0, 1)),
        ),
    )


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------

def random_binary_schema(rng: random.Random, max_attrs: int = 10) -> DatasetSchema:
    d = rng.randint(2, max_attrs)
    return DatasetSchema(
        attributes=tuple(AttributeDomain(f"b{k}", (0, 1)) for k in range(d)),
        label_domain=AttributeDomain("label", (0, 1)),
    )


def random_conjunction(rng: random.Random, schema: DatasetSchema, max_width: int = 3) -> Conjunction:
    width = rng.randint(1, min(max_width, schema.n_attributes))
    attrs = rng.sample(range(schema.n_attributes), width)
    return Conjunction(tuple(eq(k, rng.randint(0, 1)) for k in sorted(attrs)))


def random_antecedents(
    rng: random.Random, schema: DatasetSchema, max_rules: int = 6, max_width: int = 3
) -> list[Conjunction]:
    """Random rule-list antecedents, default rule (True) last."""
    n_rules = rng.randint(1, max_rules - 1)
    return [random_conjunction(rng, schema, max_width) for _ in range(n_rules)] + [TRUE]


def random_tree_branches(
    rng: random.Random, schema: DatasetSchema, max_depth: int = 4
) -> list[Conjunction]:
    """Branch conjunctions of a random binary-split tree over the schema."""
    branches: list[Conjunction] = []

    def grow(conds: tuple, depth: int) -> None:
        if depth >= max_depth or rng.random() < 0.35:
            branches.append(Conjunction(conds))
            return
        k = rng.randrange(schema.n_attributes)
        attr = schema.attributes[k]
        if attr.is_numeric and attr.cardinality > 1:
            lo = rng.randrange(attr.cardinality - 1)
            threshold = Fraction(attr.values[lo] + attr.values[lo + 1], 2)
            grow(conds + (Condition(k, "le", threshold),), depth + 1)
            grow(conds + (Condition(k, "gt", threshold),), depth + 1)
        else:
            value = rng.choice(attr.values)
            grow(conds + (Condition(k, "eq", value),), depth + 1)
            grow(conds + (Condition(k, "ne", value),), depth + 1)
    grow((), 0)
    return branches


def random_dataset(rng: random.Random, schema: DatasetSchema, n: int) -> DeterministicDataset:
    rows = tuple(
        tuple(rng.choice(attr.values) for attr in schema.attributes) for _ in range(n)
    )
    labels = tuple(rng.choice(schema.label_domain.values) for _ in range(n))
    return DeterministicDataset(schema=schema, rows=rows, labels=labels)


# ---------------------------------------------------------------------------
# Brute-force oracles (independent of the library's counting/assignment code)
# ---------------------------------------------------------------------------

def enumerate_vectors(schema: DatasetSchema):
    return itertools.product(*(attr.values for attr in schema.attributes))


def brute_capture_counts(antecedents, schema: DatasetSchema) -> list[int]:
    """Per-rule captured-vector counts by first-match evaluation of every
    vector in the space."""
    counts = [0] * len(antecedents)
    for vec in enumerate_vectors(schema):
        for j, f in enumerate(antecedents):
            if f.satisfies(vec):
                counts[j] += 1
                break
    return counts


def brute_satisfier_count(conjunction: Conjunction, schema: DatasetSchema) -> int:
    return sum(1 for vec in enumerate_vectors(schema) if conjunction.satisfies(vec))


def brute_assignment_cost(matrix) -> float:
    """Minimum assignment cost by enumerating all permutations (n <= ~8)."""
    n = len(matrix)
    best = None
    for perm in itertools.permutations(range(n)):
        cost = sum(matrix[i][perm[i]] for i in range(n))
        if best is None or cost < best:
            best = cost
    return best
