"""Extract per-example knowledge from a trained model.

A released tree or rule list pins down, for every training example, the set of
feature vectors it could have been. Examples captured by the same decision
path are indistinguishable, so knowledge is stored once per path together with
the path's support, never once per physical row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .domain import (
    Conjunction,
    ContradictoryPath,
    DatasetSchema,
    DecisionTreeModel,
    EmptyCapture,
    Model,
    RuleListModel,
    Value,
    format_value,
)


@dataclass(frozen=True)
class TreeExampleKnowledge:
    """Tree-branch knowledge: one independent value set per attribute, plus the
    determined label."""

    reduced_domains: tuple[tuple[Value, ...], ...]
    label: Value

    def admits(self, row: Sequence[Value]) -> bool:
        return all(v in dom for v, dom in zip(row, self.reduced_domains))


@dataclass(frozen=True)
class RuleExampleKnowledge:
    """Rule knowledge: the capturing antecedent must hold and every earlier
    antecedent must fail."""

    matched: Conjunction
    excluded: tuple[Conjunction, ...]
    label: Value

    def admits(self, row: Sequence[Value]) -> bool:
        return self.matched.satisfies(row) and not any(f.satisfies(row) for f in self.excluded)


ExampleKnowledge = Union[TreeExampleKnowledge, RuleExampleKnowledge]


@dataclass(frozen=True)
class KnowledgeGroup:
    path_id: int
    knowledge: ExampleKnowledge
    multiplicity: int


@dataclass(frozen=True)
class ReconstructionKnowledge:
    """Everything a model reveals about its training set, grouped by decision
    path and example label.

    A path with impure class counts yields one group per label carrying
    training examples: the counts pin down each captured example's label even
    when the path's prediction does not, so every per-example record has a
    determined label. Feature knowledge is identical across a path's groups.
    """

    model_kind: str
    schema: DatasetSchema
    groups: tuple[KnowledgeGroup, ...]

    @property
    def n(self) -> int:
        return sum(g.multiplicity for g in self.groups)


def _label_slots(path, schema: DatasetSchema):
    """(label, count) pairs revealed by a path's class counts; a support-0
    path keeps a single empty slot so it stays visible in reports."""
    if path.support == 0:
        return ((path.prediction, 0),)
    return tuple(
        (label, count)
        for label, count in zip(schema.label_domain.values, path.class_counts)
        if count > 0
    )


def reconstruct_tree(model: DecisionTreeModel) -> ReconstructionKnowledge:
    """Follow every branch and reduce each attribute's domain by the branch's
    conditions.

    Raises ContradictoryPath for a branch that claims training examples but
    admits no feature vector.
    """
    groups = []
    for j, branch in enumerate(model.branches):
        reduced = branch.conjunction.reduced_domains(model.schema)
        if branch.support > 0 and any(not dom for dom in reduced):
            raise ContradictoryPath(
                f"branch {j} has support {branch.support} but an empty reduced domain"
            )
        for label, count in _label_slots(branch, model.schema):
            groups.append(
                KnowledgeGroup(
                    path_id=j,
                    knowledge=TreeExampleKnowledge(reduced_domains=reduced, label=label),
                    multiplicity=count,
                )
            )
    return ReconstructionKnowledge(model_kind="tree", schema=model.schema, groups=tuple(groups))


def reconstruct_rulelist(model: RuleListModel) -> ReconstructionKnowledge:
    """For the j-th rule, an example satisfies its antecedent and none of the
    earlier ones.

    Only an outright contradictory antecedent is rejected here; a rule fully
    shadowed by earlier rules is detected when its worlds are counted (see
    counting.worlds_per_example), which also raises EmptyCapture.
    """
    groups = []
    for j, rule in enumerate(model.rules):
        if rule.support > 0 and rule.conjunction.is_contradictory(model.schema):
            raise EmptyCapture(f"rule {j} has support {rule.support} but a contradictory antecedent")
        excluded = tuple(r.conjunction for r in model.rules[:j])
        for label, count in _label_slots(rule, model.schema):
            groups.append(
                KnowledgeGroup(
                    path_id=j,
                    knowledge=RuleExampleKnowledge(
                        matched=rule.conjunction, excluded=excluded, label=label
                    ),
                    multiplicity=count,
                )
            )
    return ReconstructionKnowledge(model_kind="rulelist", schema=model.schema, groups=tuple(groups))


def reconstruct(model: Model) -> ReconstructionKnowledge:
    if isinstance(model, DecisionTreeModel):
        return reconstruct_tree(model)
    return reconstruct_rulelist(model)


def describe_group(group: KnowledgeGroup, schema: DatasetSchema) -> str:
    """Human-readable rendering of one group's knowledge, in the style of a
    reconstructed-dataset table row."""
    know = group.knowledge
    if isinstance(know, TreeExampleKnowledge):
        cells = []
        for attr, dom in zip(schema.attributes, know.reduced_domains):
            if len(dom) == attr.cardinality:
                cells.append(f"{attr.name} in *")
            elif len(dom) == 1:
                cells.append(f"{attr.name} = {format_value(dom[0])}")
            else:
                cells.append(f"{attr.name} in {{{', '.join(format_value(v) for v in dom)}}}")
        body = "; ".join(cells)
    else:
        body = f"matches [{know.matched.describe(schema)}]"
        if know.excluded:
            body += "; fails " + ", ".join(f"[{f.describe(schema)}]" for f in know.excluded)
    return f"{body}; label = {format_value(know.label)}"
