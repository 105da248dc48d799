"""Seeded random instance generation and the bundled worked-example instances."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .model import Instance, PrefList


@dataclass(frozen=True)
class GenParams:
    """Parameters for :func:`gen_instance`.

    ``one_tm`` forces women's lists strict by zeroing their tie probability.
    """

    num_men: int
    num_women: int
    acceptance_probability: float = 0.5
    tie_probability_men: float = 0.0
    tie_probability_women: float = 0.0
    one_tm: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("acceptance_probability", "tie_probability_men", "tie_probability_women"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.num_men < 0 or self.num_women < 0:
            raise ValueError("person counts must be non-negative")
        if self.one_tm:
            object.__setattr__(self, "tie_probability_women", 0.0)


def _grouped(entries: list[int], tie_probability: float, rng: random.Random) -> PrefList:
    """Merge adjacent entries into tie-groups; one draw per adjacency."""
    groups: list[list[int]] = []
    for entry in entries:
        merge = bool(groups) and rng.random() < tie_probability
        if merge:
            groups[-1].append(entry)
        else:
            groups.append([entry])
    return tuple(tuple(g) for g in groups)


def gen_instance(params: GenParams) -> Instance:
    """Generate a random instance, deterministic given ``params``.

    Draw order (fixed so outputs are reproducible): one acceptability draw
    per (man, woman) pair in row-major order — an accepted pair lands on
    both lists, so acceptability is mutual by construction; then, for each
    man in index order, one shuffle of his list followed by one tie draw per
    adjacency; then the same for each woman.  The generator is
    ``random.Random(seed)`` (Mersenne Twister), whose outputs for these
    calls are stable across platforms.
    """
    rng = random.Random(params.seed)
    accepted: list[list[int]] = [[] for _ in range(params.num_men)]
    accepted_by_woman: list[list[int]] = [[] for _ in range(params.num_women)]
    for m in range(1, params.num_men + 1):
        for w in range(1, params.num_women + 1):
            if rng.random() < params.acceptance_probability:
                accepted[m - 1].append(w)
                accepted_by_woman[w - 1].append(m)

    men_lists = []
    for m in range(1, params.num_men + 1):
        entries = list(accepted[m - 1])
        rng.shuffle(entries)
        men_lists.append(_grouped(entries, params.tie_probability_men, rng))
    women_lists = []
    for w in range(1, params.num_women + 1):
        entries = list(accepted_by_woman[w - 1])
        rng.shuffle(entries)
        women_lists.append(_grouped(entries, params.tie_probability_women, rng))

    return Instance(
        num_men=params.num_men,
        num_women=params.num_women,
        men_lists=tuple(men_lists),
        women_lists=tuple(women_lists),
    )


# Worked-example instances used by the demonstration audits and the demo CLI.
# i1/i2 are the smallest instances on which every better-than-2-approximate
# stable mechanism is manipulable (i2 is i1 with the sides swapped); i3 plays
# the same role for the 1.5 threshold when only men have ties; na-true and
# na-manip differ only in m1's list and witness that the in-place tie
# algorithm can be gamed.
_BUILTIN: dict[str, Instance] = {
    "i1": Instance.of(
        men_lists=[[2, 1], [2, 3], []],
        women_lists=[[1], [(1, 2)], [2]],
    ),
    "i2": Instance.of(
        men_lists=[[1], [(1, 2)], [2]],
        women_lists=[[2, 1], [2, 3], []],
    ),
    "i3": Instance.of(
        men_lists=[[2, 1], [(2, 3)], [3, 4], []],
        women_lists=[[1], [2, 1], [2, 3], [3]],
    ),
    "na-true": Instance.of(
        men_lists=[[2, 1], [(1, 3)], [3], [1, 2]],
        women_lists=[[2, 4, 1], [4, 1], [2, 3], []],
    ),
    "na-manip": Instance.of(
        men_lists=[[1, 2], [(1, 3)], [3], [1, 2]],
        women_lists=[[2, 4, 1], [4, 1], [2, 3], []],
    ),
}

PAPER_INSTANCE_IDS: tuple[str, ...] = tuple(sorted(_BUILTIN))


def paper_instance(instance_id: str) -> Instance:
    """Return a bundled worked-example instance by id (see PAPER_INSTANCE_IDS)."""
    try:
        return _BUILTIN[instance_id]
    except KeyError:
        raise ValueError(
            f"unknown instance id {instance_id!r}; known: {', '.join(PAPER_INSTANCE_IDS)}"
        ) from None
