"""Weak-stability verification: matching validity, blocking pairs, stability.

A pair blocks a matching when the two persons are mutually acceptable and
each is either single or *strictly* prefers the other to the assigned
partner.  Indifference (same tie-group) never blocks, which is the weak
notion of stability; super- and strong stability are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .model import Instance, Matching


class BlockReason(Enum):
    SINGLE = "single"
    PREFERS_OVER_PARTNER = "prefers"


@dataclass(frozen=True)
class BlockingPair:
    man: int
    woman: int
    man_reason: BlockReason
    woman_reason: BlockReason

    def __str__(self) -> str:
        return (
            f"(m{self.man}, w{self.woman}) "
            f"man={self.man_reason.value} woman={self.woman_reason.value}"
        )


def is_valid_matching(inst: Instance, m: Matching) -> bool:
    """True iff every pair is mutually acceptable (no person repeats by construction)."""
    return all(pair in inst.mutual_pairs for pair in m.pairs)


def _man_side_reason(inst: Instance, m: Matching, man: int, woman: int) -> BlockReason | None:
    partner = m.man_partner(man)
    if partner is None:
        return BlockReason.SINGLE
    ranks = inst.men_rank[man - 1]
    if ranks[woman] < ranks[partner]:
        return BlockReason.PREFERS_OVER_PARTNER
    return None


def _woman_side_reason(inst: Instance, m: Matching, man: int, woman: int) -> BlockReason | None:
    partner = m.woman_partner(woman)
    if partner is None:
        return BlockReason.SINGLE
    ranks = inst.women_rank[woman - 1]
    if ranks[man] < ranks[partner]:
        return BlockReason.PREFERS_OVER_PARTNER
    return None


def blocking_pairs(inst: Instance, m: Matching) -> list[BlockingPair]:
    """All blocking pairs, sorted by (man, woman) so reports are deterministic."""
    if not is_valid_matching(inst, m):
        raise ValueError("matching is not valid for this instance")
    found = []
    for man, woman in sorted(inst.mutual_pairs):
        man_reason = _man_side_reason(inst, m, man, woman)
        if man_reason is None:
            continue
        woman_reason = _woman_side_reason(inst, m, man, woman)
        if woman_reason is None:
            continue
        found.append(BlockingPair(man, woman, man_reason, woman_reason))
    return found


def is_stable(inst: Instance, m: Matching) -> bool:
    """True iff ``m`` is valid for ``inst`` and admits no blocking pair."""
    if not is_valid_matching(inst, m):
        raise ValueError("matching is not valid for this instance")
    for man, woman in inst.mutual_pairs:
        if m.man_partner(man) == woman:
            continue
        if _man_side_reason(inst, m, man, woman) is None:
            continue
        if _woman_side_reason(inst, m, man, woman) is not None:
            return False
    return True
