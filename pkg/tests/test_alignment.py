import random

import pytest

from reconaudit import (
    LearnerConfig,
    SizeMismatch,
    assign,
    min_cost_assignment,
    pair_cost,
    train_greedy_rulelist,
    train_greedy_tree,
)
from reconaudit.reconstruction import reconstruct
from helpers import (
    brute_assignment_cost,
    random_binary_schema,
    random_dataset,
    toy_rulelist_data,
    toy_rulelist_model,
    toy_tree_data,
    toy_tree_model,
)


def test_assignment_matches_brute_force_on_random_matrices():
    rng = random.Random(13)
    for _ in range(60):
        n = rng.randint(1, 6)
        matrix = [[rng.uniform(0, 10) for _ in range(n)] for _ in range(n)]
        _, cost = min_cost_assignment(matrix)
        assert abs(cost - brute_assignment_cost(matrix)) < 1e-9


def test_assignment_permutation_is_bijective():
    rng = random.Random(14)
    matrix = [[rng.uniform(0, 5) for _ in range(5)] for _ in range(5)]
    perm, cost = min_cost_assignment(matrix)
    assert sorted(perm) == list(range(5))
    assert abs(cost - sum(matrix[i][perm[i]] for i in range(5))) < 1e-12


def test_identity_for_single_row():
    perm, cost = min_cost_assignment([[3.0]])
    assert perm == (0,) and cost == 3.0


def test_own_training_data_aligns_at_zero_cost():
    for model, data in (
        (toy_tree_model(), toy_tree_data()),
        (toy_rulelist_model(), toy_rulelist_data()),
    ):
        result = assign(reconstruct(model), data)
        assert result.total_cost == 0.0
        assert sorted(result.permutation) == list(range(data.n))


def test_trained_models_align_at_zero_cost():
    rng = random.Random(5150)
    for _ in range(10):
        schema = random_binary_schema(rng, max_attrs=6)
        data = random_dataset(rng, schema, n=rng.randint(5, 20))
        cfg = LearnerConfig(max_depth=3, min_support=0.1)
        for model in (train_greedy_tree(data, cfg), train_greedy_rulelist(data, cfg)):
            assert assign(reconstruct(model), data).total_cost == 0.0


def test_pair_cost_tree_groups():
    know = reconstruct(toy_tree_model())
    data = toy_tree_data()
    schema = know.schema
    groups = {g.path_id: g for g in know.groups}
    # the third row is captured by branch 1 and is fully compatible with it
    assert pair_cost(groups[1], schema, data.rows[2], data.labels[2]) == 0
    # branch 0 pins a3 to {1}; the first row has a3 = 3 and label 0 vs 1
    assert pair_cost(groups[0], schema, data.rows[0], data.labels[0]) == 2
    # no-knowledge group costs nothing against anything with the same label
    from reconaudit.reconstruction import KnowledgeGroup, TreeExampleKnowledge

    free = KnowledgeGroup(
        9, TreeExampleKnowledge(tuple(a.values for a in schema.attributes), 0), 1
    )
    assert pair_cost(free, schema, data.rows[0], 0) == 0


def test_pair_cost_rule_group_uses_joint_knowledge():
    know = reconstruct(toy_rulelist_model())
    schema = know.schema
    default_group = know.groups[2]  # b3 = 0 and not (b1 = 1 and b2 = 1)
    # (1, 1, 0) is jointly impossible, but each attribute value alone still
    # appears in some admitted vector, so only the label can cost here
    assert pair_cost(default_group, schema, (1, 1, 0), 1) == 0
    # b3 = 1 contradicts the default rule's knowledge outright
    assert pair_cost(default_group, schema, (0, 0, 1), 1) == 1
    assert pair_cost(default_group, schema, (0, 0, 1), 0) == 2  # plus label


def test_assign_size_mismatch():
    know = reconstruct(toy_tree_model())
    small = toy_tree_data()
    truncated = type(small)(
        schema=small.schema, rows=small.rows[:3], labels=small.labels[:3]
    )
    with pytest.raises(SizeMismatch):
        assign(know, truncated)
