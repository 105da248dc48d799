"""Deterministic matching mechanisms.

Six mechanisms are exposed, all total functions from admissible instances to
matchings:

* ``mgs`` / ``mgs_woman`` — man- and woman-proposing deferred acceptance for
  instances with strict lists (SM/SMI).
* ``tiebreak_mechanism`` — break every tie in ascending index order, then run
  deferred acceptance from the chosen side.  Works on any instance.
* ``onetm_mechanism`` — for instances whose women have strict lists: encode
  each man-side tie into a strict gadget instance (``translate_1tm``), run
  man-proposing deferred acceptance there, and project the result back.
* ``kiraly_na`` — a proposal algorithm that handles men's ties directly by
  preferring free women inside the top tie.  Shipped as a study subject for
  manipulation search; no approximation guarantee is claimed for it.

Every mechanism is a pure function; instances are never mutated.  Free-man
selection is always "smallest index", which pins down a single deterministic
run.  Proposals are only ever sent to mutually acceptable partners: entries
whose target does not list the owner back are ignored, which matches the
convention that matchings consist of mutually acceptable pairs.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Union

from .model import (
    Instance,
    Matching,
    PersonId,
    PrefList,
    Side,
    classify_instance,
    flatten,
)


class MechanismPreconditionError(ValueError):
    """The instance is outside the mechanism's admissible domain."""


class MechanismId(Enum):
    MGS_MAN = "mgs-man"
    MGS_WOMAN = "mgs-woman"
    TIEBREAK_MAN = "tiebreak-man"
    TIEBREAK_WOMAN = "tiebreak-woman"
    ONETM_FIFTEEN = "onetm-15"
    KIRALY_NA = "kiraly-na"


Mechanism = Union[MechanismId, Callable[[Instance], Matching]]


def _deferred_acceptance(
    num_men: int,
    men_lists: list[list[int]],
    women_rank: tuple[dict[int, int], ...],
) -> Matching:
    """Man-proposing deferred acceptance over strict, mutually acceptable lists.

    ``men_lists`` holds each man's remaining choices best-first; a rejected
    man advances past the rejecting woman, which is how list deletion is
    realized.  The smallest-index free man with a non-empty list proposes.
    """
    pos = [0] * (num_men + 1)
    partner_of_man: dict[int, int] = {}
    partner_of_woman: dict[int, int] = {}
    free = [m for m in range(1, num_men + 1) if men_lists[m - 1]]
    heapq.heapify(free)
    while free:
        m = heapq.heappop(free)
        if m in partner_of_man:
            continue
        lst = men_lists[m - 1]
        while pos[m] < len(lst):
            w = lst[pos[m]]
            holder = partner_of_woman.get(w)
            if holder is None:
                partner_of_woman[w] = m
                partner_of_man[m] = w
                break
            if women_rank[w - 1][m] < women_rank[w - 1][holder]:
                del partner_of_man[holder]
                pos[holder] += 1
                heapq.heappush(free, holder)
                partner_of_woman[w] = m
                partner_of_man[m] = w
                break
            pos[m] += 1
    return Matching.of(partner_of_man.items())


def mgs(inst: Instance) -> Matching:
    """Man-proposing deferred acceptance; requires strict lists on both sides.

    Returns the man-optimal stable matching of the instance.
    """
    cls = classify_instance(inst)
    if cls.men_have_ties or cls.women_have_ties:
        raise MechanismPreconditionError("mechanism requires strict lists")
    men_lists = [list(flatten(groups)) for groups in inst.mutual_men_lists]
    return _deferred_acceptance(inst.num_men, men_lists, inst.women_rank)


def mgs_woman(inst: Instance) -> Matching:
    """Woman-proposing deferred acceptance; requires strict lists on both sides."""
    from .model import swap_roles

    return mgs(swap_roles(inst)).swapped()


def break_ties_by_index(inst: Instance) -> Instance:
    """Flatten every tie-group into ascending-index strict order.

    Strict lists come back unchanged, so the operation is idempotent.
    """

    def broken(groups: PrefList) -> PrefList:
        out: list[tuple[int, ...]] = []
        for group in groups:
            if len(group) <= 1:
                out.append(group)
            else:
                out.extend((x,) for x in sorted(group))
        return tuple(out)

    return Instance(
        num_men=inst.num_men,
        num_women=inst.num_women,
        men_lists=tuple(broken(g) for g in inst.men_lists),
        women_lists=tuple(broken(g) for g in inst.women_lists),
    )


def tiebreak_mechanism(inst: Instance, side: Side = Side.MAN) -> Matching:
    """Index tie-break followed by deferred acceptance with ``side`` proposing.

    Admissible on any instance.  The output is stable for the original
    instance: a pair blocking it would also block the tie-broken strict
    matching, since tie-breaking only refines preferences.
    """
    from .model import swap_roles

    if side is Side.MAN:
        return mgs(break_ties_by_index(inst))
    return mgs(break_ties_by_index(swap_roles(inst))).swapped()


@dataclass(frozen=True)
class TranslationMap:
    """Index bookkeeping for the tie-encoding gadget instance.

    An original instance with men ``m_1..m_n`` and women ``w_1..w_k`` turns
    into a strict instance with men ``a_1..a_n, b_1..b_k`` and women
    ``s_1..s_k, t_1..t_k``: each original man m_i becomes proposer a_i, and
    each original woman w_j is represented by the pair (s_j, t_j) plus a
    guard man b_j that always absorbs one of the two.
    """

    num_men: int
    num_women: int

    def a(self, man_index: int) -> int:
        return man_index

    def b(self, woman_index: int) -> int:
        return self.num_men + woman_index

    def s(self, woman_index: int) -> int:
        return 2 * woman_index - 1

    def t(self, woman_index: int) -> int:
        return 2 * woman_index

    def original_man(self, translated_man: int) -> Optional[int]:
        """The original man for an a-man, or None for a guard (b) man."""
        return translated_man if translated_man <= self.num_men else None

    def guarded_woman(self, translated_man: int) -> Optional[int]:
        """The original woman guarded by a b-man, or None for an a-man."""
        if translated_man > self.num_men:
            return translated_man - self.num_men
        return None

    def original_woman(self, translated_woman: int) -> int:
        return (translated_woman + 1) // 2

    def is_t_copy(self, translated_woman: int) -> bool:
        return translated_woman % 2 == 0


def translate_1tm(inst: Instance) -> tuple[Instance, TranslationMap]:
    """Encode man-side ties into a strict instance.

    Requires strict women's lists.  Each tie ``(w_j1 .. w_jk)`` in a man's
    list, members taken in ascending index order, expands to the strict run
    ``t_j1 .. t_jk s_j1 .. s_jk``; a non-tied entry w_j is treated as a tie
    of length one and expands to ``t_j s_j``.  Guard man b_j lists
    ``s_j t_j``; s_j ranks the translated suitors of w_j above b_j, while
    t_j ranks b_j first.
    """
    cls = classify_instance(inst)
    if cls.women_have_ties:
        raise MechanismPreconditionError("women's lists must be strict")
    tmap = TranslationMap(inst.num_men, inst.num_women)

    men_lists: list[PrefList] = []
    for groups in inst.men_lists:
        entries: list[int] = []
        for group in groups:
            members = sorted(group)
            entries.extend(tmap.t(j) for j in members)
            entries.extend(tmap.s(j) for j in members)
        men_lists.append(tuple((x,) for x in entries))
    for j in range(1, inst.num_women + 1):
        men_lists.append(((tmap.s(j),), (tmap.t(j),)))

    women_lists: list[PrefList] = [()] * (2 * inst.num_women)
    for j in range(1, inst.num_women + 1):
        suitors = [tmap.a(m) for m in flatten(inst.women_lists[j - 1])]
        women_lists[tmap.s(j) - 1] = tuple((x,) for x in suitors + [tmap.b(j)])
        women_lists[tmap.t(j) - 1] = tuple((x,) for x in [tmap.b(j)] + suitors)

    translated = Instance(
        num_men=inst.num_men + inst.num_women,
        num_women=2 * inst.num_women,
        men_lists=tuple(men_lists),
        women_lists=tuple(women_lists),
    )
    return translated, tmap


@dataclass(frozen=True)
class OneTmRun:
    """All intermediates of one ``onetm_mechanism`` invocation."""

    translated: Instance
    tmap: TranslationMap
    translated_matching: Matching
    matching: Matching


def onetm_run(inst: Instance) -> OneTmRun:
    """Translate, run man-proposing deferred acceptance, project back.

    A pair (a_i, s_j) or (a_i, t_j) in the gadget matching becomes
    (m_i, w_j).  Every guard man b_j ends up matched to s_j or t_j — the
    unmatched copy would immediately block with him — so each original
    woman appears at most once in the projection.
    """
    translated, tmap = translate_1tm(inst)
    m_prime = mgs(translated)
    pairs = []
    for j in range(1, inst.num_women + 1):
        guard_partner = m_prime.man_partner(tmap.b(j))
        if guard_partner not in (tmap.s(j), tmap.t(j)):
            raise RuntimeError(f"translation invariant violated: guard of w{j} unmatched")
    for tman, twoman in m_prime.pairs:
        original = tmap.original_man(tman)
        if original is not None:
            pairs.append((original, tmap.original_woman(twoman)))
    return OneTmRun(translated, tmap, m_prime, Matching.of(pairs))


def onetm_mechanism(inst: Instance) -> Matching:
    """The translate-then-propose mechanism for instances with strict women's lists.

    Its output is stable for the input instance, and its size is always
    within a factor 1.5 of the largest stable matching.
    """
    return onetm_run(inst).matching


def kiraly_na(inst: Instance) -> Matching:
    """Proposal algorithm handling men's ties in place; women's lists must be strict.

    The smallest-index free man with a non-empty list proposes: to the sole
    woman when his top group is a singleton; inside a tie, to the
    smallest-index free woman when one exists, otherwise to the
    smallest-index member.  Acceptance and rejection follow deferred
    acceptance, with a rejection deleting the woman from the man's list.
    On strict lists the tie branches never fire and the run coincides with
    ``mgs``.
    """
    cls = classify_instance(inst)
    if cls.women_have_ties:
        raise MechanismPreconditionError("women's lists must be strict")

    lists: list[list[list[int]]] = [
        [list(group) for group in groups] for groups in inst.mutual_men_lists
    ]
    women_rank = inst.women_rank
    partner_of_man: dict[int, int] = {}
    partner_of_woman: dict[int, int] = {}

    def remove(man: int, woman: int) -> None:
        groups = lists[man - 1]
        for group in groups:
            if woman in group:
                group.remove(woman)
                if not group:
                    groups.remove(group)
                return

    free = [m for m in range(1, inst.num_men + 1) if lists[m - 1]]
    heapq.heapify(free)
    while free:
        m = heapq.heappop(free)
        if m in partner_of_man:
            continue
        while lists[m - 1]:
            top = lists[m - 1][0]
            if len(top) == 1:
                w = top[0]
            else:
                free_in_tie = [x for x in top if x not in partner_of_woman]
                w = min(free_in_tie) if free_in_tie else min(top)
            holder = partner_of_woman.get(w)
            if holder is None:
                partner_of_woman[w] = m
                partner_of_man[m] = w
                break
            if women_rank[w - 1][m] < women_rank[w - 1][holder]:
                del partner_of_man[holder]
                remove(holder, w)
                if lists[holder - 1]:
                    heapq.heappush(free, holder)
                partner_of_woman[w] = m
                partner_of_man[m] = w
                break
            remove(m, w)
    return Matching.of(partner_of_man.items())


_DISPATCH: dict[MechanismId, Callable[[Instance], Matching]] = {
    MechanismId.MGS_MAN: mgs,
    MechanismId.MGS_WOMAN: mgs_woman,
    MechanismId.TIEBREAK_MAN: lambda inst: tiebreak_mechanism(inst, Side.MAN),
    MechanismId.TIEBREAK_WOMAN: lambda inst: tiebreak_mechanism(inst, Side.WOMAN),
    MechanismId.ONETM_FIFTEEN: onetm_mechanism,
    MechanismId.KIRALY_NA: kiraly_na,
}


def run_mechanism(mech: Mechanism, inst: Instance) -> Matching:
    """Apply a mechanism given by id or as a plain ``Instance -> Matching`` callable."""
    if isinstance(mech, MechanismId):
        return _DISPATCH[mech](inst)
    return mech(inst)


def is_admissible(mech: Mechanism, inst: Instance) -> bool:
    """Whether the mechanism's precondition holds for ``inst``."""
    cls = classify_instance(inst)
    if mech in (MechanismId.MGS_MAN, MechanismId.MGS_WOMAN):
        return not cls.men_have_ties and not cls.women_have_ties
    if mech in (MechanismId.ONETM_FIFTEEN, MechanismId.KIRALY_NA):
        return not cls.women_have_ties
    if isinstance(mech, MechanismId):
        return True
    try:
        mech(inst)
    except MechanismPreconditionError:
        return False
    return True


def mechanism_name(mech: Mechanism) -> str:
    if isinstance(mech, MechanismId):
        return mech.value
    return getattr(mech, "__name__", repr(mech))
