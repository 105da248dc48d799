from __future__ import annotations

import pytest

from smti import (
    GenParams,
    ProblemKind,
    classify_instance,
    gen_instance,
    paper_instance,
    serialize_instance,
    validate_instance,
)


def test_empty_when_nothing_acceptable():
    inst = gen_instance(GenParams(num_men=4, num_women=4, acceptance_probability=0.0, seed=1))
    assert all(groups == () for groups in inst.men_lists)
    assert all(groups == () for groups in inst.women_lists)


def test_complete_strict_instance_is_sm():
    params = GenParams(num_men=3, num_women=3, acceptance_probability=1.0, seed=5)
    inst = gen_instance(params)
    assert classify_instance(inst).kind is ProblemKind.SM


def test_deterministic_given_seed():
    params = GenParams(
        num_men=4, num_women=4, acceptance_probability=0.6,
        tie_probability_men=0.5, tie_probability_women=0.5, seed=42,
    )
    assert serialize_instance(gen_instance(params)) == serialize_instance(gen_instance(params))


def test_different_seeds_differ():
    base = dict(num_men=5, num_women=5, acceptance_probability=0.6, tie_probability_men=0.5)
    a = gen_instance(GenParams(seed=1, **base))
    b = gen_instance(GenParams(seed=2, **base))
    assert a != b


def test_generated_instances_validate_and_are_mutual():
    for seed in range(50):
        inst = gen_instance(
            GenParams(
                num_men=2 + seed % 5,
                num_women=2 + (seed // 5) % 5,
                acceptance_probability=0.5,
                tie_probability_men=0.4,
                tie_probability_women=0.4,
                seed=900_000 + seed,
            )
        )
        assert validate_instance(inst) == []
        for m in range(1, inst.num_men + 1):
            for groups in (inst.men_lists[m - 1],):
                for group in groups:
                    for w in group:
                        assert m in inst.women_rank[w - 1], "acceptability must be mutual"


def test_one_tm_outputs_classify_one_tm():
    for seed in range(30):
        params = GenParams(
            num_men=4, num_women=4, acceptance_probability=0.7,
            tie_probability_men=0.6, tie_probability_women=0.6,
            one_tm=True, seed=seed,
        )
        assert params.tie_probability_women == 0.0
        assert classify_instance(gen_instance(params)).one_tm


def test_params_validation():
    with pytest.raises(ValueError):
        GenParams(num_men=2, num_women=2, acceptance_probability=1.5)
    with pytest.raises(ValueError):
        GenParams(num_men=-1, num_women=2)


def test_paper_instance_i1_literal():
    i1 = paper_instance("i1")
    assert i1.men_lists == (((2,), (1,)), ((2,), (3,)), ())
    assert i1.women_lists == (((1,),), ((1, 2),), ((2,),))


def test_paper_instance_i3_literal():
    i3 = paper_instance("i3")
    assert i3.num_men == 4 and i3.num_women == 4
    assert i3.men_lists[1] == ((2, 3),)
    assert i3.men_lists[3] == ()
    assert i3.women_lists[3] == ((3,),)


def test_paper_instance_na_true_literal():
    na = paper_instance("na-true")
    assert na.men_lists[1] == ((1, 3),)
    assert na.women_lists[0] == ((2,), (4,), (1,))
    assert na.women_lists[3] == ()


def test_paper_instance_unknown_id():
    with pytest.raises(ValueError, match="unknown instance id"):
        paper_instance("i7")
