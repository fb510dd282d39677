import random

import pytest

from reconaudit import (
    CaptMemo,
    CeilingExceeded,
    Conjunction,
    TRUE,
    capt_pair,
    capt_rule,
    num,
    oracle_worlds,
    worlds_per_example,
)
from reconaudit.reconstruction import reconstruct
from helpers import (
    brute_capture_counts,
    brute_satisfier_count,
    eq,
    random_antecedents,
    random_binary_schema,
    random_tree_branches,
    toy_rulelist_model,
    toy_rulelist_schema,
    toy_tree_model,
    toy_tree_schema,
)


def toy_antecedents():
    model = toy_rulelist_model()
    return [r.conjunction for r in model.rules], model.schema


def test_num_by_enumeration_and_frozen_values():
    schema = toy_rulelist_schema()
    f = Conjunction((eq(0, 1), eq(1, 1)))
    assert brute_satisfier_count(f, schema) == 2  # the oracle that froze the value
    assert num(f, schema) == 2

    wide = toy_tree_schema()
    assert num(TRUE, wide) == 36  # 6 * 2 * 3
    contradictory = Conjunction((eq(0, 1), eq(0, 0)))
    assert num(contradictory, schema) == 0


def test_capt_pair_examples():
    rules, schema = toy_antecedents()
    # overlap of rules 1 and 2 (0-based 0 and 1): the single all-ones vector
    assert capt_pair(0, 1, rules, schema) == 1
    # a rule paired with itself at position 0 is just its satisfier count
    assert capt_pair(0, 0, rules, schema) == num(rules[0], schema) == 2
    # what the default rule could take from rule 2: num(f2) - overlap = 4 - 1
    assert capt_pair(1, 2, rules, schema) == 3


def test_capt_rule_toy_values():
    rules, schema = toy_antecedents()
    assert [capt_rule(j, rules, schema) for j in range(3)] == [2, 3, 3]


def test_capt_rule_disjoint_antecedents_equal_num():
    schema = toy_rulelist_schema()
    rules = [Conjunction((eq(0, 1),)), Conjunction((eq(0, 0),)), TRUE]
    for j in range(2):
        assert capt_rule(j, rules, schema) == num(rules[j], schema)


def test_capt_rule_bounds_and_partition_random():
    rng = random.Random(421)
    for _ in range(120):
        schema = random_binary_schema(rng, max_attrs=8)
        rules = random_antecedents(rng, schema)
        counts = [capt_rule(j, rules, schema) for j in range(len(rules))]
        for j, count in enumerate(counts):
            assert 0 <= count <= num(rules[j], schema)
        # every vector is captured by exactly one rule
        assert sum(counts) == schema.full_world_count()


def test_capt_rule_matches_brute_force_random():
    rng = random.Random(31337)
    for _ in range(80):
        schema = random_binary_schema(rng, max_attrs=8)
        rules = random_antecedents(rng, schema)
        memo = CaptMemo()
        closed = [capt_rule(j, rules, schema, memo) for j in range(len(rules))]
        assert closed == brute_capture_counts(rules, schema)


def test_tree_branch_num_matches_brute_force_random():
    rng = random.Random(2718)
    for _ in range(60):
        schema = random_binary_schema(rng, max_attrs=7)
        branches = random_tree_branches(rng, schema)
        for f in branches:
            assert num(f, schema) == brute_satisfier_count(f, schema)
        # structural tree branches partition the whole vector space
        assert sum(num(f, schema) for f in branches) == schema.full_world_count()


def test_memoized_and_unmemoized_agree():
    rng = random.Random(606)
    for _ in range(40):
        schema = random_binary_schema(rng, max_attrs=6)
        rules = random_antecedents(rng, schema)
        memo = CaptMemo()
        with_memo = [capt_rule(j, rules, schema, memo) for j in range(len(rules))]
        without = [capt_rule(j, rules, schema, None) for j in range(len(rules))]
        assert with_memo == without
        assert len(memo) > 0 or len(rules) == 1


def test_memo_is_shared_across_queries():
    rules, schema = toy_antecedents()
    memo = CaptMemo()
    first = capt_rule(2, rules, schema, memo)
    size_after = len(memo)
    assert capt_rule(2, rules, schema, memo) == first
    assert len(memo) == size_after  # pure cache hits the second time


def test_memo_shared_across_rule_lists_stays_correct():
    # Both lists put a different first antecedent in position 0; a naive
    # (index, box) cache key would let the second query hit the first's entry.
    schema = toy_rulelist_schema()
    list_a = [Conjunction((eq(0, 1),)), TRUE]
    list_b = [Conjunction((eq(0, 1), eq(1, 1))), TRUE]
    memo = CaptMemo()
    assert capt_rule(1, list_a, schema, memo) == 4
    assert capt_rule(1, list_b, schema, memo) == 6


def test_memo_shared_across_threads_never_diverges():
    from concurrent.futures import ThreadPoolExecutor

    rng = random.Random(17)
    schema = random_binary_schema(rng, max_attrs=8)
    rules = random_antecedents(rng, schema, max_rules=6)
    expected = [capt_rule(j, rules, schema) for j in range(len(rules))]
    memo = CaptMemo()
    jobs = [j for _ in range(8) for j in range(len(rules))]
    with ThreadPoolExecutor(max_workers=4) as pool:
        got = list(pool.map(lambda j: capt_rule(j, rules, schema, memo), jobs))
    assert got == [expected[j] for j in jobs]


def test_worlds_per_example_toy_models():
    assert worlds_per_example(reconstruct(toy_rulelist_model())) == (2, 3, 3)
    # tree worlds are plain products of the reduced-domain sizes
    assert worlds_per_example(reconstruct(toy_tree_model())) == (12, 8, 16)


def test_oracle_worlds_toy_tree_group():
    know = reconstruct(toy_tree_model())
    count, worlds = oracle_worlds(know.groups[1], know.schema)
    assert count == 8 == len(worlds)  # {10,11} x {0,1} x {2,3}


def test_oracle_worlds_contradictory_group_is_zero():
    from reconaudit.reconstruction import KnowledgeGroup, TreeExampleKnowledge

    schema = toy_rulelist_schema()
    group = KnowledgeGroup(0, TreeExampleKnowledge(((), (0, 1), (0, 1)), 0), 0)
    count, worlds = oracle_worlds(group, schema)
    assert count == 0 and worlds == ()


def test_oracle_ceiling():
    know = reconstruct(toy_tree_model())
    with pytest.raises(CeilingExceeded):
        oracle_worlds(know.groups[0], know.schema, ceiling=10)


def test_capt_index_validation():
    rules, schema = toy_antecedents()
    with pytest.raises(IndexError):
        capt_pair(2, 1, rules, schema)
    with pytest.raises(IndexError):
        capt_rule(3, rules, schema)
