"""Text formats: the instance grammar, matching files, and canonical output.

Instance format::

    # comment
    men 3
    women 3
    m1: w2 w1
    m2: w2 w3
    m3:
    w1: m1
    w2: (m1 m2)
    w3: m2

Header lines declare the person counts (men first).  Every declared person
needs a line, even if the list after the colon is empty.  Ties are
parenthesized groups; parentheses may be attached to entries ("(m1 m2)") or
stand alone.  ``#`` starts a comment, blank lines are ignored.

Serialization is canonical — single spaces, persons in ascending index
order, trailing newline — so equal instances serialize identically and
``serialize(parse(text))`` normalizes any accepted text.

Matching files hold one ``m<i> w<j>`` pair per line.
"""

from __future__ import annotations

import re

from .model import Instance, Matching, PrefGroup, PrefList, Side

_TOKEN = re.compile(r"[()]|[^\s()]+")
_HEADER = re.compile(r"^(men|women)\s+(\d+)$")
_PERSON = re.compile(r"^([mw])(\d+)\s*:\s*(.*)$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int | None = None):
        at = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{at}: {message}")
        self.line = line
        self.column = column


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def _parse_entries(text: str, owner_side: Side, line_no: int) -> PrefList:
    target = owner_side.opposite.value
    groups: list[PrefGroup] = []
    current: list[int] | None = None
    for match in _TOKEN.finditer(text):
        token = match.group()
        column = match.start() + 1
        if token == "(":
            if current is not None:
                raise ParseError("nested '(' in tie-group", line_no, column)
            current = []
        elif token == ")":
            if current is None:
                raise ParseError("')' without matching '('", line_no, column)
            if not current:
                raise ParseError("empty tie-group", line_no, column)
            groups.append(tuple(current))
            current = None
        else:
            if not token.startswith(target) or not token[1:].isdigit():
                raise ParseError(
                    f"expected a {target}-token, got {token!r}", line_no, column
                )
            index = int(token[1:])
            if current is not None:
                current.append(index)
            else:
                groups.append((index,))
    if current is not None:
        raise ParseError("unbalanced '(': tie-group never closed", line_no)
    return tuple(groups)


def parse_instance(text: str) -> Instance:
    """Parse instance text.  Raises :class:`ParseError` on syntax problems.

    Semantic problems that keep the structure parseable (duplicate entries,
    out-of-range indices) are *not* rejected here; run
    :func:`smti.model.validate_instance` on the result.
    """
    counts: dict[str, int] = {}
    lists: dict[Side, dict[int, PrefList]] = {Side.MAN: {}, Side.WOMAN: {}}
    header_order = ["men", "women"]

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if header_order:
            header = _HEADER.match(line)
            if not header or header.group(1) != header_order[0]:
                raise ParseError(f"expected '{header_order[0]} N' header", line_no)
            counts[header.group(1)] = int(header.group(2))
            header_order.pop(0)
            continue
        person = _PERSON.match(line)
        if not person:
            raise ParseError("expected a person line like 'm1: w2 w1'", line_no)
        side = Side(person.group(1))
        index = int(person.group(2))
        limit = counts["men"] if side is Side.MAN else counts["women"]
        if not 1 <= index <= limit:
            raise ParseError(f"person {side.value}{index} not declared", line_no)
        if index in lists[side]:
            raise ParseError(f"duplicate line for {side.value}{index}", line_no)
        lists[side][index] = _parse_entries(person.group(3), side, line_no)

    if header_order:
        raise ParseError(f"missing '{header_order[0]} N' header", 1)
    for side, label in ((Side.MAN, "m"), (Side.WOMAN, "w")):
        limit = counts["men"] if side is Side.MAN else counts["women"]
        missing = [i for i in range(1, limit + 1) if i not in lists[side]]
        if missing:
            raise ParseError(
                f"missing preference line for {label}{missing[0]}", len(text.splitlines()) or 1
            )

    return Instance(
        num_men=counts["men"],
        num_women=counts["women"],
        men_lists=tuple(lists[Side.MAN][i] for i in range(1, counts["men"] + 1)),
        women_lists=tuple(lists[Side.WOMAN][i] for i in range(1, counts["women"] + 1)),
    )


def serialize_pref_list(groups: PrefList, owner_side: Side) -> str:
    """Render one list in canonical form, e.g. ``w3 (w1 w4)``."""
    target = owner_side.opposite.value
    parts = []
    for group in groups:
        tokens = " ".join(f"{target}{i}" for i in group)
        parts.append(tokens if len(group) == 1 else f"({tokens})")
    return " ".join(parts)


def serialize_instance(inst: Instance) -> str:
    lines = [f"men {inst.num_men}", f"women {inst.num_women}"]
    for i, groups in enumerate(inst.men_lists, start=1):
        entries = serialize_pref_list(groups, Side.MAN)
        lines.append(f"m{i}: {entries}" if entries else f"m{i}:")
    for j, groups in enumerate(inst.women_lists, start=1):
        entries = serialize_pref_list(groups, Side.WOMAN)
        lines.append(f"w{j}: {entries}" if entries else f"w{j}:")
    return "\n".join(lines) + "\n"


def parse_matching(text: str) -> Matching:
    """Parse a matching file: one ``m<i> w<j>`` pair per line."""
    pairs = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        tokens = line.split()
        if (
            len(tokens) != 2
            or not re.fullmatch(r"m\d+", tokens[0])
            or not re.fullmatch(r"w\d+", tokens[1])
        ):
            raise ParseError("expected a pair line like 'm1 w2'", line_no)
        pairs.append((int(tokens[0][1:]), int(tokens[1][1:])))
    try:
        return Matching.of(pairs)
    except ValueError as exc:
        raise ParseError(str(exc), len(text.splitlines()) or 1) from None


def serialize_matching(m: Matching) -> str:
    return "".join(f"m{man} w{woman}\n" for man, woman in m.sorted_pairs())
