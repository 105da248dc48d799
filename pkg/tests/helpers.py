"""Shared test utilities: seeded instance streams and independent oracles.

The checkers here deliberately avoid the package's search code so they can
serve as cross-checks: ``brute_force_stable`` filters every subset of the
mutual-pair list, and ``strict_blocking_pairs`` recomputes blocking pairs
from flattened strict lists with plain position arithmetic.
"""

from __future__ import annotations

import itertools

from smti import GenParams, Instance, Matching, gen_instance, is_stable

# acceptance/tie probabilities cycled through the seeded streams
_ACCEPT = (0.4, 0.55, 0.7)


def smti_params(i: int, *, base_seed: int, max_n: int = 6, one_tm: bool = False,
                ties: float = 0.4) -> GenParams:
    span = max_n - 1
    return GenParams(
        num_men=2 + i % span,
        num_women=2 + (i // span) % span,
        acceptance_probability=_ACCEPT[i % len(_ACCEPT)],
        tie_probability_men=ties,
        tie_probability_women=0.0 if one_tm else ties,
        one_tm=one_tm,
        seed=base_seed + i,
    )


def random_instances(count: int, *, base_seed: int, max_n: int = 6,
                     one_tm: bool = False, ties: float = 0.4):
    for i in range(count):
        yield gen_instance(smti_params(i, base_seed=base_seed, max_n=max_n,
                                       one_tm=one_tm, ties=ties))


def random_smi_instances(count: int, *, base_seed: int, max_n: int = 6):
    for i in range(count):
        yield gen_instance(smti_params(i, base_seed=base_seed, max_n=max_n, ties=0.0))


def brute_force_stable(inst: Instance) -> list[Matching]:
    """Stable matchings by filtering every subset of the mutual-pair list.

    Exponential in the pair count; meant for instances with at most ~16
    mutually acceptable pairs.
    """
    pairs = sorted(inst.mutual_pairs)
    assert len(pairs) <= 16, "instance too large for the bitmask filter"
    found = []
    for mask in range(1 << len(pairs)):
        chosen = [pairs[k] for k in range(len(pairs)) if mask >> k & 1]
        men = [m for m, _ in chosen]
        women = [w for _, w in chosen]
        if len(set(men)) != len(men) or len(set(women)) != len(women):
            continue
        matching = Matching.of(chosen)
        if is_stable(inst, matching):
            found.append(matching)
    found.sort(key=Matching.sorted_pairs)
    return found


def strict_blocking_pairs(inst: Instance, m: Matching) -> list[tuple[int, int]]:
    """Blocking pairs for strict lists, via flattened positions only."""
    men_pos = [
        {w: p for p, (w,) in enumerate(groups)} for groups in inst.men_lists
    ]
    women_pos = [
        {man: p for p, (man,) in enumerate(groups)} for groups in inst.women_lists
    ]
    blocks = []
    for man, woman in itertools.product(
        range(1, inst.num_men + 1), range(1, inst.num_women + 1)
    ):
        if woman not in men_pos[man - 1] or man not in women_pos[woman - 1]:
            continue
        his = m.man_partner(man)
        hers = m.woman_partner(woman)
        man_wants = his is None or men_pos[man - 1][woman] < men_pos[man - 1][his]
        woman_wants = hers is None or women_pos[woman - 1][man] < women_pos[woman - 1][hers]
        if man_wants and woman_wants and his != woman:
            blocks.append((man, woman))
    return blocks


def all_pref_lists_with_ties(n: int):
    """Every tie-group sequence over every subset of 1..n (independent of the
    package's strategy-space generator)."""
    indices = range(1, n + 1)
    out = []
    for size in range(n + 1):
        for subset in itertools.combinations(indices, size):
            out.extend(_ordered_partitions(subset))
    return out


def _ordered_partitions(subset):
    if not subset:
        return [()]
    results = []
    for k in range(1, len(subset) + 1):
        for first in itertools.combinations(subset, k):
            rest = tuple(x for x in subset if x not in first)
            for tail in _ordered_partitions(rest):
                results.append((first,) + tail)
    return results
