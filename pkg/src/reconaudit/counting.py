"""Exact counting of the feature vectors a decision path can stand for.

A conjunction's satisfier set is a box: the Cartesian product of its reduced
attribute domains, so its size is a plain product of cardinalities. A rule
deep in a rule list is harder: its examples additionally falsify every earlier
antecedent, and the negation of a conjunction is a disjunction, so the
shadowed region must be peeled off recursively. The recursion here counts, for
rule l and an arbitrary box g, the vectors inside g that rule l captures:

    capt(l, g) = |box_l ∩ g| - sum_{h < l} capt(h, box_l ∩ g)

The vectors rule j captures within the whole list are then capt(j, full box).
The recursion branches over all earlier-rule chains, which is factorial in the
rule count in the worst case; memoizing on (l, canonical box) collapses the
repeats and box intersections that turn empty prune entire subtrees.

All counts are exact arbitrary-precision integers.
"""

from __future__ import annotations

import itertools
from typing import Optional, Sequence

from .domain import Conjunction, DatasetSchema, EmptyCapture, Value, canonical_box
from .reconstruction import (
    KnowledgeGroup,
    ReconstructionKnowledge,
    TreeExampleKnowledge,
)

#: Per-attribute allowed-value tuples; the canonical, hashable form of a
#: conjunction's satisfier set.
Box = tuple[tuple[Value, ...], ...]

DEFAULT_ORACLE_CEILING = 2 ** 22


class CeilingExceeded(Exception):
    """The schema is too large for exhaustive enumeration."""


def box_size(box: Box) -> int:
    total = 1
    for dom in box:
        total *= len(dom)
        if total == 0:
            return 0
    return total


def intersect_boxes(a: Box, b: Box) -> Box:
    out = []
    for da, db in zip(a, b):
        db_set = set(db)
        out.append(tuple(v for v in da if v in db_set))
    return tuple(out)


def full_box(schema: DatasetSchema) -> Box:
    return tuple(attr.values for attr in schema.attributes)


def num(f: Conjunction, schema: DatasetSchema) -> int:
    """Number of feature vectors satisfying conjunction ``f``: the product of
    its reduced domain cardinalities. Zero iff contradictory."""
    return box_size(canonical_box(f, schema))


class CaptMemo:
    """Cache for capt queries.

    Keys carry the earlier-antecedent boxes and the canonical query box, so a
    hit is correct no matter which rule list issued it; conjunctions that are
    equal as satisfier sets share cache lines. A plain dict is used: get/set
    are atomic under the GIL, so concurrent readers may duplicate a
    computation but can never observe divergent values.
    """

    def __init__(self):
        self._cache: dict[tuple[tuple[Box, ...], Box], int] = {}

    def __len__(self) -> int:
        return len(self._cache)

    def get(self, key):
        return self._cache.get(key)

    def put(self, key, value: int) -> None:
        self._cache[key] = value


def _capt(l: int, box: Box, boxes: Sequence[Box], memo: Optional[CaptMemo]) -> int:
    """Vectors inside ``box`` satisfying antecedent l and no antecedent h < l.

    The result only depends on boxes[l] ∩ box and the prefix boxes[:l], which
    is exactly what the memo key records.
    """
    inter = intersect_boxes(boxes[l], box)
    size = box_size(inter)
    if size == 0:
        return 0
    key = (tuple(boxes[:l]), inter)
    if memo is not None:
        hit = memo.get(key)
        if hit is not None:
            return hit
    value = size
    for h in range(l):
        value -= _capt(h, inter, boxes, memo)
    if memo is not None:
        memo.put(key, value)
    return value


def _antecedent_boxes(rules: Sequence[Conjunction], schema: DatasetSchema) -> list[Box]:
    return [canonical_box(f, schema) for f in rules]


def capt_pair(
    l: int,
    j: int,
    rules: Sequence[Conjunction],
    schema: DatasetSchema,
    memo: Optional[CaptMemo] = None,
) -> int:
    """Vectors that antecedent ``j`` could capture but antecedent ``l``
    actually captures (0-based indices, l <= j)."""
    if not 0 <= l <= j < len(rules):
        raise IndexError(f"need 0 <= l <= j < {len(rules)}, got l={l}, j={j}")
    boxes = _antecedent_boxes(rules, schema)
    return _capt(l, boxes[j], boxes, memo)


def capt_rule(
    j: int,
    rules: Sequence[Conjunction],
    schema: DatasetSchema,
    memo: Optional[CaptMemo] = None,
) -> int:
    """Vectors captured by rule ``j`` within the rule list: satisfying its
    antecedent and none of the earlier ones (0-based index)."""
    if not 0 <= j < len(rules):
        raise IndexError(f"rule index {j} out of range")
    boxes = _antecedent_boxes(rules, schema)
    return _capt(j, full_box(schema), boxes, memo)


def count_excluding(
    g: Conjunction,
    excluded: Sequence[Conjunction],
    schema: DatasetSchema,
    memo: Optional[CaptMemo] = None,
) -> int:
    """Vectors satisfying ``g`` and none of ``excluded`` (the capt query for a
    rule with antecedent g placed after the excluded antecedents)."""
    boxes = _antecedent_boxes(list(excluded) + [g], schema)
    return _capt(len(excluded), full_box(schema), boxes, memo)


def group_world_count(
    group: KnowledgeGroup, schema: DatasetSchema, memo: Optional[CaptMemo] = None
) -> int:
    """Possible feature vectors for each example of one knowledge group."""
    know = group.knowledge
    if isinstance(know, TreeExampleKnowledge):
        return box_size(know.reduced_domains)
    return count_excluding(know.matched, know.excluded, schema, memo)


def worlds_per_example(
    knowledge: ReconstructionKnowledge, memo: Optional[CaptMemo] = None
) -> tuple[int, ...]:
    """World count per group, in group order.

    Raises EmptyCapture when a group with positive multiplicity admits no
    vector (a rule fully shadowed by its predecessors).
    """
    if memo is None:
        memo = CaptMemo()
    counts = []
    for group in knowledge.groups:
        count = group_world_count(group, knowledge.schema, memo)
        if count == 0 and group.multiplicity > 0:
            raise EmptyCapture(
                f"path {group.path_id} claims {group.multiplicity} examples but admits no vector"
            )
        counts.append(count)
    return tuple(counts)


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

def oracle_worlds(
    group: KnowledgeGroup,
    schema: DatasetSchema,
    ceiling: int = DEFAULT_ORACLE_CEILING,
) -> tuple[int, tuple[tuple[Value, ...], ...]]:
    """Exhaustively enumerate the schema's vectors and keep those the group's
    knowledge admits. Returns (count, vectors).

    Deliberately independent of the closed-form path: membership is decided by
    evaluating the knowledge predicate on each concrete vector.
    """
    total = schema.full_world_count()
    if total > ceiling:
        raise CeilingExceeded(
            f"schema has {total} vectors, above the ceiling of {ceiling}; "
            "raise the ceiling to enumerate anyway"
        )
    admitted = tuple(
        vec
        for vec in itertools.product(*(attr.values for attr in schema.attributes))
        if group.knowledge.admits(vec)
    )
    return len(admitted), admitted


def oracle_check(
    knowledge: ReconstructionKnowledge,
    ceiling: int = DEFAULT_ORACLE_CEILING,
) -> tuple[tuple[int, int, int], ...]:
    """Closed-form vs enumerated count per decision path: (path_id, closed,
    oracle). A path's label groups share feature knowledge, so each path is
    checked once."""
    memo = CaptMemo()
    rows = []
    seen: set[int] = set()
    for group in knowledge.groups:
        if group.path_id in seen:
            continue
        seen.add(group.path_id)
        closed = group_world_count(group, knowledge.schema, memo)
        enumerated, _ = oracle_worlds(group, knowledge.schema, ceiling)
        rows.append((group.path_id, closed, enumerated))
    return tuple(rows)
