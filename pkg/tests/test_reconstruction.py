import itertools
import random

import pytest

from reconaudit import (
    AttributeDomain,
    Conjunction,
    ContradictoryPath,
    DatasetSchema,
    DecisionPath,
    DecisionTreeModel,
    EmptyCapture,
    LearnerConfig,
    RuleListModel,
    TRUE,
    oracle_worlds,
    train_greedy_rulelist,
    train_greedy_tree,
    worlds_per_example,
)
from reconaudit.reconstruction import (
    RuleExampleKnowledge,
    TreeExampleKnowledge,
    describe_group,
    reconstruct,
    reconstruct_tree,
    reconstruct_rulelist,
)
from helpers import (
    eq,
    le,
    random_binary_schema,
    random_dataset,
    toy_rulelist_model,
    toy_tree_data,
    toy_tree_model,
)


def test_toy_tree_reconstruction_matches_reduced_domains():
    know = reconstruct_tree(toy_tree_model())
    assert know.model_kind == "tree"
    assert [g.multiplicity for g in know.groups] == [1, 1, 2]
    by_path = {g.path_id: g.knowledge for g in know.groups}
    # branch 0: a3 <= 1.5 -> a3 pinned to {1}, everything else free
    assert by_path[0].reduced_domains == ((10, 11, 12, 13, 14, 15), (0, 1), (1,))
    assert by_path[0].label == 1
    # branch 1: a3 > 1.5 and a1 <= 11.5
    assert by_path[1].reduced_domains == ((10, 11), (0, 1), (2, 3))
    assert by_path[1].label == 1
    # branch 2: a3 > 1.5 and a1 > 11.5 holds the two class-0 examples
    assert by_path[2].reduced_domains == ((12, 13, 14, 15), (0, 1), (2, 3))
    assert by_path[2].label == 0


def test_single_leaf_tree_reveals_nothing():
    data = toy_tree_data()
    model = DecisionTreeModel(
        schema=data.schema, branches=(DecisionPath(TRUE, 1, (0, 4)),)
    )
    know = reconstruct_tree(model)
    assert len(know.groups) == 1
    assert know.groups[0].multiplicity == 4
    assert know.groups[0].knowledge.reduced_domains == tuple(
        a.values for a in data.schema.attributes
    )


def test_impure_path_splits_into_label_groups():
    # Class counts reveal each captured example's label even when the
    # prediction does not; an impure leaf therefore yields one group per label.
    data = toy_tree_data()
    model = DecisionTreeModel(
        schema=data.schema, branches=(DecisionPath(TRUE, 0, (3, 1)),)
    )
    know = reconstruct_tree(model)
    assert [(g.path_id, g.knowledge.label, g.multiplicity) for g in know.groups] == [
        (0, 0, 3),
        (0, 1, 1),
    ]
    assert know.n == 4


def test_toy_rulelist_reconstruction_consistent_sets():
    model = toy_rulelist_model()
    know = reconstruct_rulelist(model)
    assert [g.multiplicity for g in know.groups] == [2, 2, 1]
    # rule 1 (b3 = 1, after excluding b1 and b2): three (b1, b2) readings
    _, worlds = oracle_worlds(know.groups[1], model.schema)
    assert worlds == ((0, 0, 1), (0, 1, 1), (1, 0, 1))
    # first rule has no exclusions: its worlds are exactly the satisfiers
    assert know.groups[0].knowledge.excluded == ()
    _, worlds0 = oracle_worlds(know.groups[0], model.schema)
    assert worlds0 == ((1, 1, 0), (1, 1, 1))
    # default rule: b3 = 0 and (b1, b2) != (1, 1)
    _, worlds2 = oracle_worlds(know.groups[2], model.schema)
    assert worlds2 == ((0, 0, 0), (0, 1, 0), (1, 0, 0))


def test_compatibility_with_training_rows():
    # Whatever a greedy model learned, each training row must stay admissible
    # under the knowledge of the path that captures it.
    rng = random.Random(77)
    for _ in range(25):
        schema = random_binary_schema(rng, max_attrs=6)
        data = random_dataset(rng, schema, n=rng.randint(5, 30))
        cfg = LearnerConfig(max_depth=rng.randint(1, 4), min_support=0.1)
        for model in (train_greedy_tree(data, cfg), train_greedy_rulelist(data, cfg)):
            know = reconstruct(model)
            assert know.n == data.n
            for row, label in zip(data.rows, data.labels):
                j = model.capture_index(row)
                slot = [
                    g for g in know.groups
                    if g.path_id == j and g.knowledge.label == label
                ]
                assert len(slot) == 1 and slot[0].multiplicity > 0
                assert slot[0].knowledge.admits(row)


def test_tree_group_worlds_are_cartesian_products():
    rng = random.Random(99)
    for _ in range(10):
        schema = random_binary_schema(rng, max_attrs=5)
        data = random_dataset(rng, schema, n=rng.randint(4, 16))
        model = train_greedy_tree(data, LearnerConfig(max_depth=3, min_support=0.1))
        for group in reconstruct(model).groups:
            know = group.knowledge
            assert isinstance(know, TreeExampleKnowledge)
            _, worlds = oracle_worlds(group, schema)
            assert set(worlds) == set(itertools.product(*know.reduced_domains))


def test_contradictory_tree_branch_raises():
    schema = toy_tree_data().schema
    model = DecisionTreeModel(
        schema=schema,
        branches=(
            DecisionPath(Conjunction((le(0, 5),)), 0, (1, 0)),  # a1 <= 5 is impossible
            DecisionPath(TRUE, 1, (1, 2)),
        ),
    )
    with pytest.raises(ContradictoryPath):
        reconstruct_tree(model)


def test_shadowed_rule_raises_empty_capture_when_counted():
    schema = DatasetSchema(
        attributes=(AttributeDomain("b1", (0, 1)), AttributeDomain("b2", (0, 1))),
        label_domain=AttributeDomain("label", (0, 1)),
    )
    model = RuleListModel(
        schema=schema,
        rules=(
            DecisionPath(Conjunction((eq(0, 1),)), 1, (0, 2)),
            DecisionPath(Conjunction((eq(0, 1),)), 0, (1, 0)),  # fully shadowed, support 1
            DecisionPath(TRUE, 0, (1, 0)),
        ),
    )
    know = reconstruct_rulelist(model)
    with pytest.raises(EmptyCapture):
        worlds_per_example(know)


def test_contradictory_matched_rule_raises_at_reconstruction():
    schema = DatasetSchema(
        attributes=(AttributeDomain("b1", (0, 1)),),
        label_domain=AttributeDomain("label", (0, 1)),
    )
    model = RuleListModel(
        schema=schema,
        rules=(
            DecisionPath(Conjunction((eq(0, 1), eq(0, 0))), 1, (0, 1)),
            DecisionPath(TRUE, 0, (1, 0)),
        ),
    )
    with pytest.raises(EmptyCapture):
        reconstruct_rulelist(model)


def test_describe_group_is_table_like():
    know = reconstruct(toy_rulelist_model())
    text = describe_group(know.groups[1], know.schema)
    assert "b3 = 1" in text and "fails" in text and "label = 0" in text
    tree_know = reconstruct(toy_tree_model())
    tree_text = describe_group(tree_know.groups[1], tree_know.schema)
    assert "a1 in {10, 11}" in tree_text


def test_rule_knowledge_admits():
    know = RuleExampleKnowledge(
        matched=Conjunction((eq(2, 1),)),
        excluded=(Conjunction((eq(0, 1), eq(1, 1))),),
        label=0,
    )
    assert know.admits((0, 1, 1))
    assert not know.admits((1, 1, 1))  # hits the excluded conjunction
    assert not know.admits((0, 1, 0))  # misses the matched conjunction
