"""Exhaustive ground truth on small instances.

Everything here trades speed for checkability: stable matchings are found by
backtracking over all assignments, manipulation search literally tries every
falsified list in a deterministic order, and ratios are exact rationals so
threshold comparisons like "at most 3/2" never hinge on floating point.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .generate import paper_instance
from .mechanisms import (
    Mechanism,
    MechanismId,
    MechanismPreconditionError,
    run_mechanism,
)
from .model import (
    Instance,
    Matching,
    PersonId,
    PrefList,
    Side,
    classify_instance,
    flatten,
    man,
    prefers_matching,
    woman,
)
from .stability import is_stable

DEFAULT_SEARCH_CAP = 10**12
DEFAULT_STRICT_SPACE_CAP = 5
DEFAULT_TIES_SPACE_CAP = 3
DEFAULT_COALITION_CANDIDATES = 1_000_000


class OracleBoundError(ValueError):
    """The requested exhaustive computation exceeds its configured budget."""


def _check_search_bound(inst: Instance, search_cap: int) -> None:
    budget = 1
    for groups in itertools.chain(inst.men_lists, inst.women_lists):
        budget *= len(flatten(groups)) + 1
        if budget > search_cap:
            raise OracleBoundError(
                f"instance too large for oracle: assignment bound exceeds {search_cap}"
            )


def enumerate_stable_matchings(
    inst: Instance, *, search_cap: int = DEFAULT_SEARCH_CAP
) -> list[Matching]:
    """All weakly stable matchings, canonically sorted.

    Backtracks over each man's mutually acceptable options (or staying
    single).  A branch is abandoned as soon as it contains a blocking pair
    both of whose sides are already fixed — a man's assignment never changes
    once made and a matched woman stays matched within a branch, so such a
    pair blocks every completion.  Surviving leaves get a full stability
    check, which also covers pairs involving still-single women.
    """
    _check_search_bound(inst, search_cap)
    num_men = inst.num_men
    mutual = inst.mutual_pairs
    options = [sorted(flatten(inst.mutual_men_lists[m - 1])) for m in range(1, num_men + 1)]
    men_rank = inst.men_rank
    women_rank = inst.women_rank

    taken: dict[int, int] = {}
    assigned: list[Optional[int]] = [None] * (num_men + 1)
    results: list[Matching] = []

    def certain_block(i: int, w: Optional[int]) -> bool:
        my_rank = men_rank[i - 1]
        limit = my_rank[w] if w is not None else None
        for v, holder in taken.items():
            if v == w or (i, v) not in mutual:
                continue
            if (limit is None or my_rank[v] < limit) and (
                women_rank[v - 1][i] < women_rank[v - 1][holder]
            ):
                return True
        if w is not None:
            her_rank = women_rank[w - 1]
            for k in range(1, i):
                if (k, w) not in mutual or her_rank[k] >= her_rank[i]:
                    continue
                wk = assigned[k]
                if wk is None or men_rank[k - 1][w] < men_rank[k - 1][wk]:
                    return True
        return False

    def descend(i: int) -> None:
        if i > num_men:
            matching = Matching.of(
                (m, assigned[m]) for m in range(1, num_men + 1) if assigned[m] is not None
            )
            if is_stable(inst, matching):
                results.append(matching)
            return
        if not certain_block(i, None):
            descend(i + 1)
        for w in options[i - 1]:
            if w in taken or certain_block(i, w):
                continue
            taken[w] = i
            assigned[i] = w
            descend(i + 1)
            del taken[w]
            assigned[i] = None

    descend(1)
    results.sort(key=Matching.sorted_pairs)
    return results


def max_stable_size(
    inst: Instance, *, search_cap: int = DEFAULT_SEARCH_CAP
) -> tuple[int, Matching]:
    """Size of the largest stable matching, with one canonical witness."""
    stable = enumerate_stable_matchings(inst, search_cap=search_cap)
    best = max(m.size for m in stable)
    witness = next(m for m in stable if m.size == best)
    return best, witness


def approx_ratio(
    inst: Instance, m: Matching, *, search_cap: int = DEFAULT_SEARCH_CAP
) -> Fraction:
    """|largest stable matching| / |m| as an exact rational; 1 when both are empty."""
    if not is_stable(inst, m):
        raise ValueError("approx_ratio requires a stable matching")
    if m.size == 0:
        # a stable empty matching means no pair is mutually acceptable
        return Fraction(1)
    best, _ = max_stable_size(inst, search_cap=search_cap)
    return Fraction(best, m.size)


def lex_max_stable_matching(inst: Instance, *, search_cap: int = DEFAULT_SEARCH_CAP) -> Matching:
    """Canonically first maximum stable matching.

    A deliberately naive oracle-backed mechanism: it maximizes size, which
    makes it manipulable (see :func:`gadget_audit`).  Useful as an audit
    subject and as a ground-truth comparator.
    """
    best, _ = max_stable_size(inst, search_cap=search_cap)
    candidates = [
        m for m in enumerate_stable_matchings(inst, search_cap=search_cap) if m.size == best
    ]
    return min(candidates, key=Matching.sorted_pairs)


def has_unbalanced_three_path(m: Matching, reference: Matching) -> bool:
    """Whether the union multigraph of ``m`` and ``reference`` has a component
    that is a three-edge path whose two outer edges belong to ``reference``.

    Such a component contributes two reference pairs against one ``m`` pair,
    which is exactly what a size ratio above 3/2 would require.
    """
    for m_man, m_woman in m.pairs:
        outer_man = reference.woman_partner(m_woman)
        outer_woman = reference.man_partner(m_man)
        if outer_man is None or outer_woman is None:
            continue
        if outer_man == m_man or outer_woman == m_woman:
            continue
        if m.man_partner(outer_man) is None and m.woman_partner(outer_woman) is None:
            return True
    return False


class SpaceKind(Enum):
    EXHAUSTIVE_STRICT = "exhaustive-strict"
    EXHAUSTIVE_TIES = "exhaustive-ties"
    TRUNCATE = "truncate"
    PERMUTE = "permute"


@dataclass(frozen=True)
class StrategySpace:
    """A family of falsified preference lists for one manipulator.

    The exhaustive kinds range over *all* subsets of the opposite side (a
    liar may claim anyone acceptable): every strict order of every subset,
    or every tie-group sequence of every subset.  ``TRUNCATE`` yields each
    prefix of the true list, cutting inside a tie-group where necessary;
    ``PERMUTE`` yields every strict order of the true list's support.
    ``cap`` bounds the opposite-side count for the exhaustive kinds
    (defaults: 5 strict, 3 with ties — tie-group sequences grow much
    faster).
    """

    kind: SpaceKind
    cap: Optional[int] = None

    @property
    def effective_cap(self) -> Optional[int]:
        if self.cap is not None:
            return self.cap
        if self.kind is SpaceKind.EXHAUSTIVE_STRICT:
            return DEFAULT_STRICT_SPACE_CAP
        if self.kind is SpaceKind.EXHAUSTIVE_TIES:
            return DEFAULT_TIES_SPACE_CAP
        return None


def _subsets_by_size(indices: Sequence[int]) -> Iterator[tuple[int, ...]]:
    for size in range(len(indices) + 1):
        yield from itertools.combinations(indices, size)


def _ordered_partitions(s: tuple[int, ...]) -> Iterator[PrefList]:
    if not s:
        yield ()
        return
    for size in range(1, len(s) + 1):
        for first in itertools.combinations(s, size):
            rest = tuple(x for x in s if x not in first)
            for tail in _ordered_partitions(rest):
                yield (first,) + tail


def _truncations(groups: PrefList) -> Iterator[PrefList]:
    total = len(flatten(groups))
    for cut in range(total + 1):
        remaining = cut
        prefix: list[tuple[int, ...]] = []
        for group in groups:
            if remaining <= 0:
                break
            prefix.append(group[:remaining] if len(group) > remaining else group)
            remaining -= len(prefix[-1])
        yield tuple(prefix)


def _canonical(groups: PrefList) -> PrefList:
    return tuple(tuple(sorted(g)) for g in groups)


def candidate_lists(inst: Instance, person: PersonId, space: StrategySpace) -> list[PrefList]:
    """The falsified lists of ``space`` for ``person``, in deterministic order.

    Exhaustive kinds run over subsets in (size, lexicographic) order and
    then over orders / tie-group sequences lexicographically.  Lists
    semantically equal to the person's true list are skipped.
    """
    opposite_count = inst.num_women if person.side is Side.MAN else inst.num_men
    true_list = inst.list_of(person)
    cap = space.effective_cap
    if cap is not None and opposite_count > cap:
        raise OracleBoundError(
            f"strategy space too large: {opposite_count} opposite-side persons exceed cap {cap}"
        )

    indices = range(1, opposite_count + 1)
    if space.kind is SpaceKind.EXHAUSTIVE_STRICT:
        raw: Iterator[PrefList] = (
            tuple((x,) for x in order)
            for subset in _subsets_by_size(indices)
            for order in itertools.permutations(subset)
        )
    elif space.kind is SpaceKind.EXHAUSTIVE_TIES:
        raw = (
            partition
            for subset in _subsets_by_size(indices)
            for partition in _ordered_partitions(subset)
        )
    elif space.kind is SpaceKind.TRUNCATE:
        raw = _truncations(true_list)
    elif space.kind is SpaceKind.PERMUTE:
        support = sorted(flatten(true_list))
        raw = (tuple((x,) for x in order) for order in itertools.permutations(support))
    else:  # pragma: no cover
        raise ValueError(f"unknown strategy space kind: {space.kind}")

    honest = _canonical(true_list)
    return [cand for cand in raw if _canonical(cand) != honest]


@dataclass(frozen=True)
class ManipulationWitness:
    """Evidence that submitting falsified lists strictly helps the manipulators.

    Improvement is always judged against the manipulators' *true* lists.
    """

    manipulators: tuple[PersonId, ...]
    falsified_lists: tuple[PrefList, ...]
    honest: Matching
    manipulated: Matching


def _candidate_outcome(args: tuple[Instance, MechanismId, PersonId, PrefList]) -> Optional[Matching]:
    inst, mech, person, cand = args
    try:
        return run_mechanism(mech, inst.with_list(person, cand))
    except MechanismPreconditionError:
        return None


def find_manipulation(
    inst: Instance,
    mech: Mechanism,
    person: PersonId,
    space: StrategySpace,
    *,
    jobs: int = 1,
) -> Optional[ManipulationWitness]:
    """First falsified list of ``space`` that strictly improves ``person``, or None.

    The honest outcome is computed once on ``inst``.  Candidates that put
    the instance outside the mechanism's domain (say, a tie where the
    mechanism demands strict lists) are skipped.  With ``jobs > 1`` and a
    mechanism id, candidates are evaluated in a process pool; the witness is
    still chosen by candidate order, so the result does not depend on the
    job count.
    """
    honest = run_mechanism(mech, inst)
    candidates = candidate_lists(inst, person, space)

    if jobs > 1 and isinstance(mech, MechanismId):
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunk = max(1, len(candidates) // (jobs * 4))
            outcomes = list(
                pool.map(
                    _candidate_outcome,
                    [(inst, mech, person, cand) for cand in candidates],
                    chunksize=chunk,
                )
            )
        for cand, outcome in zip(candidates, outcomes):
            if outcome is not None and prefers_matching(inst, person, outcome, honest):
                return ManipulationWitness((person,), (cand,), honest, outcome)
        return None

    for cand in candidates:
        try:
            outcome = run_mechanism(mech, inst.with_list(person, cand))
        except MechanismPreconditionError:
            continue
        if prefers_matching(inst, person, outcome, honest):
            return ManipulationWitness((person,), (cand,), honest, outcome)
    return None


def find_coalition_manipulation(
    inst: Instance,
    mech: Mechanism,
    coalition: Sequence[PersonId],
    space: StrategySpace,
    *,
    max_candidates: int = DEFAULT_COALITION_CANDIDATES,
) -> Optional[ManipulationWitness]:
    """First joint falsification that strictly improves *every* coalition member.

    Members must share a side.  Each member ranges over its own candidate
    lists plus its true list (a member may stand pat while others lie); the
    all-honest combination is skipped, so a singleton coalition reduces
    exactly to :func:`find_manipulation`.
    """
    members = tuple(sorted(set(coalition), key=lambda p: p.index))
    if not members:
        raise ValueError("coalition must not be empty")
    if len({p.side for p in members}) != 1:
        raise ValueError("coalition members must be on the same side")

    honest = run_mechanism(mech, inst)
    per_member = [
        [inst.list_of(p)] + candidate_lists(inst, p, space) for p in members
    ]
    total = 1
    for lists in per_member:
        total *= len(lists)
    if total > max_candidates:
        raise OracleBoundError(
            f"coalition space too large: {total} joint candidates exceed cap {max_candidates}"
        )

    for combo in itertools.product(*per_member):
        if all(lst is lists[0] for lst, lists in zip(combo, per_member)):
            continue
        trial = inst
        for p, lst in zip(members, combo):
            trial = trial.with_list(p, lst)
        try:
            outcome = run_mechanism(mech, trial)
        except MechanismPreconditionError:
            continue
        if all(prefers_matching(inst, p, outcome, honest) for p in members):
            return ManipulationWitness(members, tuple(combo), honest, outcome)
    return None


@dataclass(frozen=True)
class RuralHospitalsReport:
    """Outcome of the equal-cardinality check on an instance without ties."""

    equal_sizes: bool
    same_matched_people: bool

    def __bool__(self) -> bool:
        return self.equal_sizes and self.same_matched_people


def rural_hospitals_check(
    inst: Instance, *, search_cap: int = DEFAULT_SEARCH_CAP
) -> RuralHospitalsReport:
    """For strict lists: do all stable matchings have the same size, and do
    they match the same set of people?"""
    cls = classify_instance(inst)
    if cls.men_have_ties or cls.women_have_ties:
        raise ValueError("rural hospitals check requires strict lists")
    stable = enumerate_stable_matchings(inst, search_cap=search_cap)
    sizes = {m.size for m in stable}
    matched_sets = {
        (frozenset(p for p, _ in m.pairs), frozenset(w for _, w in m.pairs)) for m in stable
    }
    return RuralHospitalsReport(len(sizes) == 1, len(matched_sets) == 1)


class AuditVerdict(Enum):
    CONSISTENT = "consistent"
    RATIO_VIOLATED = "ratio-violated"
    MANIPULATION_FOUND = "manipulation-found"


@dataclass(frozen=True)
class AuditResult:
    gadget: str
    verdict: AuditVerdict
    honest: Matching
    manipulator: Optional[PersonId]
    branch_output: Optional[Matching]
    witness: Optional[ManipulationWitness]
    notes: tuple[str, ...]


@dataclass(frozen=True)
class _GadgetPlan:
    max_size: int
    ratio_label: str
    # honest output (canonical pairs) -> (manipulator, entry to delete from its list)
    branches: dict[tuple[tuple[int, int], ...], tuple[PersonId, int]]


_GADGET_PLANS: dict[str, _GadgetPlan] = {
    "i1": _GadgetPlan(
        max_size=2,
        ratio_label="2",
        branches={
            ((1, 1), (2, 2)): (man(1), 1),
            ((1, 2), (2, 3)): (man(2), 3),
        },
    ),
    "i2": _GadgetPlan(
        max_size=2,
        ratio_label="2",
        branches={
            ((1, 1), (2, 2)): (woman(1), 1),
            ((2, 1), (3, 2)): (woman(2), 3),
        },
    ),
    "i3": _GadgetPlan(
        max_size=3,
        ratio_label="1.5",
        branches={
            ((1, 1), (2, 2), (3, 3)): (man(1), 1),
            ((1, 2), (2, 3), (3, 4)): (man(3), 4),
        },
    ),
}


def gadget_audit(mech: Mechanism, gadget: str) -> AuditResult:
    """Run the deletion-based manipulation argument for one built-in gadget.

    Each gadget has exactly two maximum stable matchings, and for either one
    a designated person can delete one entry so that any mechanism
    guaranteeing a better-than-threshold size ratio would be forced onto
    the other matching, improving the manipulator.  The audit executes that
    case split against a concrete mechanism: an honest output below the
    maximum size disproves the sharper ratio outright (RATIO_VIOLATED for
    the threshold claim); otherwise the deletion branch either improves the
    manipulator (MANIPULATION_FOUND) or does not (CONSISTENT), with the
    branch output recorded as evidence.
    """
    if gadget not in _GADGET_PLANS:
        raise ValueError(f"unknown audit gadget {gadget!r}; known: i1, i2, i3")
    plan = _GADGET_PLANS[gadget]
    inst = paper_instance(gadget)
    honest = run_mechanism(mech, inst)
    if not is_stable(inst, honest):
        raise ValueError("gadget audit requires a stable mechanism output")
    if honest.size < plan.max_size:
        return AuditResult(
            gadget=gadget,
            verdict=AuditVerdict.RATIO_VIOLATED,
            honest=honest,
            manipulator=None,
            branch_output=None,
            witness=None,
            notes=(
                f"honest output has size {honest.size} but the largest stable matching "
                f"has size {plan.max_size}: not ({plan.ratio_label}-eps)-approximate",
            ),
        )
    manipulator, delete_target = plan.branches[honest.sorted_pairs()]
    target = PersonId(manipulator.side.opposite, delete_target)
    trial = inst.without_entry(manipulator, delete_target)
    branch_output = run_mechanism(mech, trial)
    notes = [f"{manipulator} deletes {target}; deletion branch output {branch_output}"]
    if branch_output.size < plan.max_size:
        notes.append(
            f"output size {branch_output.size} on deletion branch: "
            f"not ({plan.ratio_label}-eps)-approximate"
        )
    if prefers_matching(inst, manipulator, branch_output, honest):
        witness = ManipulationWitness(
            (manipulator,), (trial.list_of(manipulator),), honest, branch_output
        )
        return AuditResult(
            gadget=gadget,
            verdict=AuditVerdict.MANIPULATION_FOUND,
            honest=honest,
            manipulator=manipulator,
            branch_output=branch_output,
            witness=witness,
            notes=tuple(notes),
        )
    return AuditResult(
        gadget=gadget,
        verdict=AuditVerdict.CONSISTENT,
        honest=honest,
        manipulator=manipulator,
        branch_output=branch_output,
        witness=None,
        notes=tuple(notes),
    )
