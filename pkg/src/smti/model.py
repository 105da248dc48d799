"""Core data model: two-sided preference instances, matchings, and rank comparisons.

Preference lists are sequences of tie-groups over opposite-side indices
(1-based).  A singleton group is an ordinary strict entry; a group with two
or more members expresses indifference.  A person missing from a list is
unacceptable to its owner.  Acceptability in raw data may be asymmetric;
every matching- or blocking-related computation works on *mutual*
acceptability, which is derived, never assumed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, NamedTuple, Optional

PrefGroup = tuple[int, ...]
PrefList = tuple[PrefGroup, ...]


class Side(Enum):
    MAN = "m"
    WOMAN = "w"

    @property
    def opposite(self) -> "Side":
        return Side.WOMAN if self is Side.MAN else Side.MAN


class PersonId(NamedTuple):
    side: Side
    index: int

    @classmethod
    def parse(cls, token: str) -> "PersonId":
        """Parse a person token such as ``m3`` or ``w12``."""
        token = token.strip()
        if len(token) < 2 or token[0] not in ("m", "w") or not token[1:].isdigit():
            raise ValueError(f"not a person token: {token!r}")
        return cls(Side(token[0]), int(token[1:]))

    def __str__(self) -> str:
        return f"{self.side.value}{self.index}"


def man(index: int) -> PersonId:
    return PersonId(Side.MAN, index)


def woman(index: int) -> PersonId:
    return PersonId(Side.WOMAN, index)


def as_groups(entries: Iterable[Iterable[int] | int]) -> PrefList:
    """Normalize a mixed description into tie-group form.

    A bare int becomes a singleton group; any other iterable becomes one
    tie-group.  ``as_groups([2, (1, 4)])`` is the list "2 (1 4)".
    """
    groups: list[PrefGroup] = []
    for entry in entries:
        if isinstance(entry, int):
            groups.append((entry,))
        else:
            groups.append(tuple(entry))
    return tuple(groups)


def flatten(groups: PrefList) -> tuple[int, ...]:
    return tuple(itertools.chain.from_iterable(groups))


def has_tie(groups: PrefList) -> bool:
    return any(len(g) > 1 for g in groups)


@dataclass(frozen=True)
class Matching:
    """A one-to-one assignment of men to women, stored as (man, woman) pairs.

    Construction rejects any man or woman appearing twice.  Mutual
    acceptability is a property of a matching *relative to an instance* and
    is checked by :func:`smti.stability.is_valid_matching`, not here.
    """

    pairs: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        men_seen = [m for m, _ in self.pairs]
        women_seen = [w for _, w in self.pairs]
        if len(set(men_seen)) != len(men_seen) or len(set(women_seen)) != len(women_seen):
            raise ValueError("a person appears in more than one pair")

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> "Matching":
        return cls(frozenset((m, w) for m, w in pairs))

    @cached_property
    def _by_man(self) -> dict[int, int]:
        return {m: w for m, w in self.pairs}

    @cached_property
    def _by_woman(self) -> dict[int, int]:
        return {w: m for m, w in self.pairs}

    @property
    def size(self) -> int:
        return len(self.pairs)

    def man_partner(self, man_index: int) -> Optional[int]:
        return self._by_man.get(man_index)

    def woman_partner(self, woman_index: int) -> Optional[int]:
        return self._by_woman.get(woman_index)

    def partner_of(self, person: PersonId) -> Optional[int]:
        if person.side is Side.MAN:
            return self.man_partner(person.index)
        return self.woman_partner(person.index)

    def sorted_pairs(self) -> tuple[tuple[int, int], ...]:
        """Canonical pair order, used for deterministic output and dedup."""
        return tuple(sorted(self.pairs))

    def swapped(self) -> "Matching":
        """The same matching with the roles of the two sides exchanged."""
        return Matching(frozenset((w, m) for m, w in self.pairs))

    def __iter__(self):
        return iter(self.sorted_pairs())

    def __str__(self) -> str:
        return "{" + ", ".join(f"(m{m}, w{w})" for m, w in self.sorted_pairs()) + "}"


EMPTY_MATCHING = Matching(frozenset())


@dataclass(frozen=True)
class Instance:
    """A two-sided preference instance with ties and incomplete lists.

    ``men_lists[i - 1]`` is man i's preference list; likewise for women.
    Counts may disagree with list lengths or entries may be out of range in
    raw data; :func:`validate_instance` reports such problems.
    """

    num_men: int
    num_women: int
    men_lists: tuple[PrefList, ...]
    women_lists: tuple[PrefList, ...]

    @classmethod
    def of(
        cls,
        men_lists: Iterable[Iterable[Iterable[int] | int]],
        women_lists: Iterable[Iterable[Iterable[int] | int]],
        num_men: int | None = None,
        num_women: int | None = None,
    ) -> "Instance":
        men = tuple(as_groups(lst) for lst in men_lists)
        women = tuple(as_groups(lst) for lst in women_lists)
        return cls(
            num_men=len(men) if num_men is None else num_men,
            num_women=len(women) if num_women is None else num_women,
            men_lists=men,
            women_lists=women,
        )

    def list_of(self, person: PersonId) -> PrefList:
        if person.side is Side.MAN:
            return self.men_lists[person.index - 1]
        return self.women_lists[person.index - 1]

    def with_list(self, person: PersonId, groups: PrefList) -> "Instance":
        """A copy in which only ``person``'s list is replaced."""
        if person.side is Side.MAN:
            lists = list(self.men_lists)
            lists[person.index - 1] = groups
            return Instance(self.num_men, self.num_women, tuple(lists), self.women_lists)
        lists = list(self.women_lists)
        lists[person.index - 1] = groups
        return Instance(self.num_men, self.num_women, self.men_lists, tuple(lists))

    def without_entry(self, person: PersonId, target_index: int) -> "Instance":
        """A copy in which ``target_index`` is deleted from ``person``'s list."""
        old = self.list_of(person)
        new = tuple(
            g for g in (tuple(x for x in group if x != target_index) for group in old) if g
        )
        return self.with_list(person, new)

    # Derived structures.  Instances are immutable, so these are computed
    # once and shared by every stability / mechanism / oracle call.

    @cached_property
    def men_rank(self) -> tuple[dict[int, int], ...]:
        """Per man: woman index -> 0-based tie-group position (first occurrence)."""
        return tuple(_rank_table(groups) for groups in self.men_lists)

    @cached_property
    def women_rank(self) -> tuple[dict[int, int], ...]:
        return tuple(_rank_table(groups) for groups in self.women_lists)

    @cached_property
    def mutual_pairs(self) -> frozenset[tuple[int, int]]:
        """All (man, woman) pairs that list each other."""
        pairs = set()
        for m in range(1, self.num_men + 1):
            ranks = self.men_rank[m - 1]
            for w in ranks:
                if 1 <= w <= self.num_women and m in self.women_rank[w - 1]:
                    pairs.add((m, w))
        return frozenset(pairs)

    @cached_property
    def mutual_men_lists(self) -> tuple[PrefList, ...]:
        """Men's lists restricted to mutually acceptable women (empty groups dropped)."""
        out = []
        for m in range(1, self.num_men + 1):
            kept = tuple(
                g
                for g in (
                    tuple(w for w in group if (m, w) in self.mutual_pairs)
                    for group in self.men_lists[m - 1]
                )
                if g
            )
            out.append(kept)
        return tuple(out)

    @cached_property
    def mutual_women_lists(self) -> tuple[PrefList, ...]:
        out = []
        for w in range(1, self.num_women + 1):
            kept = tuple(
                g
                for g in (
                    tuple(m for m in group if (m, w) in self.mutual_pairs)
                    for group in self.women_lists[w - 1]
                )
                if g
            )
            out.append(kept)
        return tuple(out)


class ProblemKind(Enum):
    SM = "SM"
    SMI = "SMI"
    SMT = "SMT"
    SMTI = "SMTI"


@dataclass(frozen=True)
class InstanceClass:
    kind: ProblemKind
    men_have_ties: bool
    women_have_ties: bool
    lists_complete: bool

    @property
    def one_tm(self) -> bool:
        """True when ties can only appear on the men's side (women strict)."""
        return not self.women_have_ties


@dataclass(frozen=True)
class Violation:
    person: Optional[PersonId]
    kind: str
    message: str

    def __str__(self) -> str:
        where = f"{self.person}: " if self.person else ""
        return f"{where}{self.message}"


def validate_instance(inst: Instance) -> list[Violation]:
    """Check structural invariants; an empty report means the instance is valid."""
    report: list[Violation] = []
    if inst.num_men < 0 or inst.num_women < 0:
        report.append(Violation(None, "count", "negative person count"))
    if len(inst.men_lists) != inst.num_men:
        report.append(
            Violation(None, "count-mismatch",
                      f"declared {inst.num_men} men but {len(inst.men_lists)} lists")
        )
    if len(inst.women_lists) != inst.num_women:
        report.append(
            Violation(None, "count-mismatch",
                      f"declared {inst.num_women} women but {len(inst.women_lists)} lists")
        )

    def check_lists(side: Side, lists: tuple[PrefList, ...], limit: int) -> None:
        target = side.opposite.value
        for idx, groups in enumerate(lists, start=1):
            owner = PersonId(side, idx)
            seen: set[int] = set()
            for group in groups:
                if not group:
                    report.append(Violation(owner, "empty-group", "empty tie-group"))
                for entry in group:
                    if entry < 1 or entry > limit:
                        report.append(
                            Violation(owner, "out-of-range",
                                      f"lists {target}{entry}, valid range is 1..{limit}")
                        )
                    if entry in seen:
                        report.append(
                            Violation(owner, "duplicate-entry",
                                      f"lists {target}{entry} more than once")
                        )
                    seen.add(entry)

    check_lists(Side.MAN, inst.men_lists, inst.num_women)
    check_lists(Side.WOMAN, inst.women_lists, inst.num_men)
    return report


def is_valid_instance(inst: Instance) -> bool:
    return not validate_instance(inst)


def classify_instance(inst: Instance) -> InstanceClass:
    men_ties = any(has_tie(groups) for groups in inst.men_lists)
    women_ties = any(has_tie(groups) for groups in inst.women_lists)
    complete = all(
        len(flatten(groups)) == inst.num_women for groups in inst.men_lists
    ) and all(len(flatten(groups)) == inst.num_men for groups in inst.women_lists)
    any_ties = men_ties or women_ties
    if any_ties:
        kind = ProblemKind.SMT if complete else ProblemKind.SMTI
    else:
        kind = ProblemKind.SM if complete else ProblemKind.SMI
    return InstanceClass(kind, men_ties, women_ties, complete)


def _rank_table(groups: PrefList) -> dict[int, int]:
    table: dict[int, int] = {}
    for position, group in enumerate(groups):
        for entry in group:
            table.setdefault(entry, position)
    return table


def rank(inst: Instance, owner: PersonId, target: PersonId) -> Optional[int]:
    """0-based tie-group position of ``target`` in ``owner``'s list.

    Smaller is better; members of one tie-group share a rank.  Returns None
    when ``target`` is not acceptable to ``owner``.
    """
    if owner.side is target.side:
        raise ValueError("rank is defined between persons on opposite sides")
    if owner.side is Side.MAN:
        return inst.men_rank[owner.index - 1].get(target.index)
    return inst.women_rank[owner.index - 1].get(target.index)


def prefers_matching(inst: Instance, p: PersonId, m_new: Matching, m_old: Matching) -> bool:
    """True iff ``p`` strictly prefers ``m_new`` to ``m_old`` under its list in ``inst``.

    Holds when the new partner is acceptable and either ranks strictly
    better than the old one, or ``p`` was single in ``m_old``.  Moving into
    the same tie-group, becoming single, or gaining an unacceptable partner
    never counts as an improvement.  The old partner is compared by its rank
    in ``inst``; a partner missing from ``p``'s list (possible only when
    ``m_old`` came from a different instance) ranks below everyone listed.
    """
    new = m_new.partner_of(p)
    if new is None:
        return False
    r_new = rank(inst, p, PersonId(p.side.opposite, new))
    if r_new is None:
        return False
    old = m_old.partner_of(p)
    if old is None:
        return True
    r_old = rank(inst, p, PersonId(p.side.opposite, old))
    return r_old is None or r_new < r_old


def swap_roles(inst: Instance) -> Instance:
    """Exchange the two sides: every man becomes a woman and vice versa.

    Entries keep their numeric indices since they now name the relabeled
    opposite side.  This is an involution.
    """
    return Instance(
        num_men=inst.num_women,
        num_women=inst.num_men,
        men_lists=inst.women_lists,
        women_lists=inst.men_lists,
    )
