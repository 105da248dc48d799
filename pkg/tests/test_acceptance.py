"""Acceptance suite: one test per criterion, each printing a PASS line.

The random streams are fully determined by the GenParams seeds below, so
every run checks the same instances.  Expect the whole module to take a
couple of minutes; run it alone with ``pytest -v -s tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import time
from fractions import Fraction

from smti import (
    AuditVerdict,
    Instance,
    Matching,
    MechanismId,
    Side,
    SpaceKind,
    StrategySpace,
    approx_ratio,
    enumerate_stable_matchings,
    find_coalition_manipulation,
    find_manipulation,
    gadget_audit,
    has_unbalanced_three_path,
    is_stable,
    kiraly_na,
    lex_max_stable_matching,
    man,
    max_stable_size,
    onetm_run,
    paper_instance,
    serialize_instance,
    tiebreak_mechanism,
    woman,
)
from helpers import (
    all_pref_lists_with_ties,
    random_instances,
    random_smi_instances,
)

M1 = Matching.of([(1, 1), (2, 2)])
M2 = Matching.of([(1, 2), (2, 3)])
M3 = Matching.of([(1, 1), (2, 2), (3, 3)])
M6 = Matching.of([(1, 2), (2, 3), (3, 4)])


def test_criterion_1_gadget_reproduction():
    started = time.perf_counter()
    i1 = paper_instance("i1")
    assert set(enumerate_stable_matchings(i1)) == {M1, M2}
    assert max_stable_size(i1)[0] == 2

    i3 = paper_instance("i3")
    stable3 = enumerate_stable_matchings(i3)
    assert {m for m in stable3 if m.size == 3} == {M3, M6}
    assert max_stable_size(i3)[0] == 3
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"gadget reproduction took {elapsed:.2f}s"
    print("criterion 1 (gadget reproduction): PASS")


def test_criterion_2_counter_example_reproduction():
    started = time.perf_counter()
    assert kiraly_na(paper_instance("na-true")) == Matching.of([(2, 1), (3, 3), (4, 2)])
    assert kiraly_na(paper_instance("na-manip")) == Matching.of([(1, 2), (2, 3), (4, 1)])
    witness = find_manipulation(
        paper_instance("na-true"),
        MechanismId.KIRALY_NA,
        man(1),
        StrategySpace(SpaceKind.PERMUTE),
    )
    assert witness is not None
    assert witness.falsified_lists == (((1,), (2,)),)  # the list "w1 w2"
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"counter-example reproduction took {elapsed:.2f}s"
    print("criterion 2 (counter-example reproduction): PASS")


def test_criterion_3_ratio_guarantees():
    # tie-break mechanism: stable and exactly within ratio 2 on general SMTI
    for k, inst in enumerate(random_instances(1000, base_seed=3_000_000)):
        best, _ = max_stable_size(inst)
        for side in (Side.MAN, Side.WOMAN):
            result = tiebreak_mechanism(inst, side)
            assert is_stable(inst, result), f"smti instance {k} ({side})"
            if result.size == 0:
                assert best == 0, f"smti instance {k}: empty output but opt={best}"
            else:
                assert Fraction(best, result.size) <= 2, f"smti instance {k} ({side})"
        if k % 50 == 0:
            computed = approx_ratio(inst, tiebreak_mechanism(inst, Side.MAN))
            assert computed <= 2

    # translate-then-propose mechanism: stable and within 3/2 on 1TM instances
    for k, inst in enumerate(random_instances(1000, base_seed=3_100_000, one_tm=True)):
        result = onetm_run(inst).matching
        assert is_stable(inst, result), f"1tm instance {k}"
        best, _ = max_stable_size(inst)
        if result.size == 0:
            assert best == 0, f"1tm instance {k}: empty output but opt={best}"
        else:
            assert Fraction(best, result.size) <= Fraction(3, 2), f"1tm instance {k}"
    print("criterion 3 (ratio guarantees, 2000 seeded instances): PASS")


def _assert_no_witness(inst, mech, person, space, label):
    witness = find_manipulation(inst, mech, person, space)
    assert witness is None, (
        f"{label}: {person} manipulates {mech.value} on\n{serialize_instance(inst)}"
        f"falsified: {witness.falsified_lists}"
    )


def test_criterion_4_strategy_proofness_exhaustive():
    ties_space = StrategySpace(SpaceKind.EXHAUSTIVE_TIES)
    strict_space = StrategySpace(SpaceKind.EXHAUSTIVE_STRICT)
    lists2 = all_pref_lists_with_ties(2)
    strict2 = [lst for lst in lists2 if all(len(g) == 1 for g in lst)]

    # every 2x2 instance, every list combination with ties
    count = 0
    for men in itertools.product(lists2, repeat=2):
        for women in itertools.product(lists2, repeat=2):
            inst = Instance(2, 2, men, women)
            count += 1
            for i in (1, 2):
                _assert_no_witness(inst, MechanismId.TIEBREAK_MAN, man(i), ties_space, "2x2")
            if any(any(len(g) > 1 for g in lst) for lst in women):
                continue  # the 1TM mechanisms are not admissible here
            for i in (1, 2):
                _assert_no_witness(inst, MechanismId.ONETM_FIFTEEN, man(i), ties_space, "2x2")
            for j in (1, 2):
                _assert_no_witness(
                    inst, MechanismId.TIEBREAK_WOMAN, woman(j), strict_space, "2x2"
                )
    assert count == len(lists2) ** 4 == 1296
    assert len(strict2) == 5

    # seeded random instances with up to 3 persons a side
    for inst in random_instances(200, base_seed=3_200_000, max_n=3):
        for i in range(1, inst.num_men + 1):
            _assert_no_witness(inst, MechanismId.TIEBREAK_MAN, man(i), ties_space, "random n<=3")
    for inst in random_instances(200, base_seed=3_250_000, max_n=3, one_tm=True):
        for i in range(1, inst.num_men + 1):
            _assert_no_witness(
                inst, MechanismId.ONETM_FIFTEEN, man(i), ties_space, "random 1tm n<=3"
            )
        for j in range(1, inst.num_women + 1):
            _assert_no_witness(
                inst, MechanismId.TIEBREAK_WOMAN, woman(j), strict_space, "random 1tm n<=3"
            )
    print("criterion 4 (exhaustive strategy-proofness): PASS")


def test_criterion_5_coalition_strategy_proofness():
    spaces = (StrategySpace(SpaceKind.TRUNCATE), StrategySpace(SpaceKind.PERMUTE))
    mechs = (MechanismId.ONETM_FIFTEEN, MechanismId.TIEBREAK_MAN)
    checked = 0
    for k, inst in enumerate(random_instances(100, base_seed=3_300_000, max_n=4, one_tm=True)):
        for pair in itertools.combinations(range(1, inst.num_men + 1), 2):
            coalition = [man(pair[0]), man(pair[1])]
            for mech in mechs:
                for space in spaces:
                    witness = find_coalition_manipulation(inst, mech, coalition, space)
                    assert witness is None, (
                        f"instance {k}: coalition {pair} manipulates {mech.value}\n"
                        f"{serialize_instance(inst)}"
                    )
                    checked += 1
    assert checked >= 100
    print(f"criterion 5 (coalition strategy-proofness, {checked} searches): PASS")


def test_criterion_6_translation_invariants():
    for k, inst in enumerate(random_instances(1000, base_seed=3_400_000, one_tm=True)):
        run = onetm_run(inst)
        for j in range(1, inst.num_women + 1):
            guard_partner = run.translated_matching.man_partner(run.tmap.b(j))
            assert guard_partner in (run.tmap.s(j), run.tmap.t(j)), (
                f"instance {k}: guard of w{j} matched to {guard_partner}"
            )
        best, _ = max_stable_size(inst)
        for opt in enumerate_stable_matchings(inst):
            if opt.size != best:
                continue
            assert not has_unbalanced_three_path(run.matching, opt), (
                f"instance {k}: forbidden path against {opt}\n{serialize_instance(inst)}"
            )
    print("criterion 6 (translation invariants, 1000 seeded instances): PASS")


def test_criterion_7_rural_hospitals():
    from smti import rural_hospitals_check

    for k, inst in enumerate(random_smi_instances(200, base_seed=3_500_000)):
        report = rural_hospitals_check(inst)
        assert report.equal_sizes, f"instance {k}: stable matchings of different sizes"
        assert report.same_matched_people, f"instance {k}: different matched sets"
    print("criterion 7 (rural hospitals, 200 seeded SMI instances): PASS")


def test_criterion_8_gadget_audits():
    for mech, gadget in (
        (MechanismId.TIEBREAK_MAN, "i1"),
        (MechanismId.TIEBREAK_WOMAN, "i2"),
        (MechanismId.ONETM_FIFTEEN, "i3"),
    ):
        result = gadget_audit(mech, gadget)
        assert result.verdict is AuditVerdict.CONSISTENT, (mech, gadget, result)

    planted = gadget_audit(lex_max_stable_matching, "i1")
    assert planted.verdict is AuditVerdict.MANIPULATION_FOUND
    assert planted.witness is not None
    assert planted.witness.manipulators == (man(1),)
    print("criterion 8 (gadget audits): PASS")
