"""Command-line interface.

Exit codes form a stable scripting contract: 0 on success (including "no
manipulation found" and failed-but-reported verifications), 1 when a demo's
embedded expectation is not reproduced, 2 for usage problems, unreadable or
malformed input, and exceeded search budgets, 3 when a mechanism's
precondition rejects the instance.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .generate import GenParams, gen_instance, paper_instance
from .mechanisms import MechanismId, MechanismPreconditionError, run_mechanism
from .model import (
    Instance,
    Matching,
    PersonId,
    validate_instance,
)
from .oracle import (
    AuditVerdict,
    OracleBoundError,
    SpaceKind,
    StrategySpace,
    approx_ratio,
    enumerate_stable_matchings,
    find_coalition_manipulation,
    find_manipulation,
    gadget_audit,
    max_stable_size,
)
from .stability import blocking_pairs, is_stable, is_valid_matching
from .textio import (
    ParseError,
    parse_instance,
    parse_matching,
    serialize_instance,
    serialize_pref_list,
)
from .mechanisms import translate_1tm

_MECHANISMS = {m.value: m for m in MechanismId}
_SPACES = {s.value: s for s in SpaceKind}


def _pairs_line(m: Matching) -> str:
    if not m.pairs:
        return "(empty)"
    return " ".join(f"m{a} w{b}" for a, b in m.sorted_pairs())


def _load_instance(args: argparse.Namespace) -> Instance:
    if getattr(args, "paper", None):
        return paper_instance(args.paper)
    text = Path(args.infile).read_text(encoding="utf-8")
    inst = parse_instance(text)
    problems = validate_instance(inst)
    if problems:
        raise ParseError("; ".join(str(p) for p in problems), 1)
    return inst


def _add_instance_source(parser: argparse.ArgumentParser, require: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=require)
    group.add_argument("--in", dest="infile", metavar="FILE", help="instance file")
    group.add_argument(
        "--paper",
        choices=["i1", "i2", "i3", "na-true", "na-manip"],
        help="bundled worked-example instance",
    )


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = _load_instance(args)
    mech = _MECHANISMS[args.mechanism]
    matching = run_mechanism(mech, inst)
    stable = is_stable(inst, matching)
    if args.format == "json":
        payload = {
            "mechanism": args.mechanism,
            "matching": [list(pair) for pair in matching.sorted_pairs()],
            "size": matching.size,
            "stable": stable,
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        for man, woman in matching.sorted_pairs():
            print(f"m{man} w{woman}")
        print(f"size {matching.size}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    inst = _load_instance(args)
    matching = parse_matching(Path(args.matching).read_text(encoding="utf-8"))
    if not is_valid_matching(inst, matching):
        print("valid no")
        for man, woman in matching.sorted_pairs():
            if (man, woman) not in inst.mutual_pairs:
                print(f"invalid-pair m{man} w{woman} (not mutually acceptable)")
        return 0
    print("valid yes")
    blocks = blocking_pairs(inst, matching)
    print(f"stable {'yes' if not blocks else 'no'}")
    print(f"size {matching.size}")
    for pair in blocks:
        print(
            f"blocking m{pair.man} w{pair.woman} "
            f"man={pair.man_reason.value} woman={pair.woman_reason.value}"
        )
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    inst = _load_instance(args)
    if args.ratio:
        matching = parse_matching(Path(args.ratio).read_text(encoding="utf-8"))
        print(f"ratio {approx_ratio(inst, matching)}")
    elif args.enumerate:
        stable = enumerate_stable_matchings(inst)
        print(f"count {len(stable)}")
        for m in stable:
            print(_pairs_line(m))
    else:
        size, witness = max_stable_size(inst)
        print(f"size {size}")
        for man, woman in witness.sorted_pairs():
            print(f"m{man} w{woman}")
    return 0


def _cmd_manipulate(args: argparse.Namespace) -> int:
    inst = _load_instance(args)
    mech = _MECHANISMS[args.mechanism]
    space = StrategySpace(_SPACES[args.space], cap=args.space_cap)
    if args.coalition:
        members = tuple(PersonId.parse(tok) for tok in args.coalition.split(","))
        witness = find_coalition_manipulation(inst, mech, members, space)
    else:
        if not args.person:
            print("error: --person is required unless --coalition is given", file=sys.stderr)
            return 2
        witness = find_manipulation(
            inst, mech, PersonId.parse(args.person), space, jobs=args.jobs
        )
    if witness is None:
        print("none found")
        return 0
    for person, falsified in zip(witness.manipulators, witness.falsified_lists):
        print(f"manipulator {person}")
        print(f"falsified {person}: {serialize_pref_list(falsified, person.side)}")
    print(f"honest {_pairs_line(witness.honest)}")
    print(f"manipulated {_pairs_line(witness.manipulated)}")
    return 0


def _cmd_translate(args: argparse.Namespace) -> int:
    inst = _load_instance(args)
    translated, tmap = translate_1tm(inst)
    for i in range(1, inst.num_men + 1):
        print(f"# m{tmap.a(i)} = a{i} (proposer for original m{i})")
    for j in range(1, inst.num_women + 1):
        print(f"# m{tmap.b(j)} = b{j} (guard for original w{j})")
    for j in range(1, inst.num_women + 1):
        print(f"# w{tmap.s(j)} = s{j}, w{tmap.t(j)} = t{j} (copies of original w{j})")
    sys.stdout.write(serialize_instance(translated))
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    params = GenParams(
        num_men=args.men,
        num_women=args.women,
        acceptance_probability=args.accept,
        tie_probability_men=args.ties_men,
        tie_probability_women=args.ties_women,
        one_tm=args.one_tm,
        seed=args.seed,
    )
    sys.stdout.write(serialize_instance(gen_instance(params)))
    return 0


def _check(label: str, expected: object, computed: object) -> bool:
    print(f"expected {label}: {expected}")
    print(f"computed {label}: {computed}")
    return expected == computed


def _audit_demo(mech: MechanismId, gadget: str, expected_honest: Matching) -> int:
    result = gadget_audit(mech, gadget)
    ok = _check(f"{mech.value} output on {gadget}", _pairs_line(expected_honest),
                _pairs_line(result.honest))
    ok &= _check("audit verdict", AuditVerdict.CONSISTENT.value, result.verdict.value)
    for note in result.notes:
        print(f"note: {note}")
    print("ok" if ok else "MISMATCH")
    return 0 if ok else 1


def _cmd_demo(args: argparse.Namespace) -> int:
    if args.paper == "i1":
        return _audit_demo(
            MechanismId.TIEBREAK_MAN, "i1", Matching.of([(1, 2), (2, 3)])
        )
    if args.paper == "i2":
        return _audit_demo(
            MechanismId.TIEBREAK_WOMAN, "i2", Matching.of([(2, 1), (3, 2)])
        )
    if args.paper == "i3":
        return _audit_demo(
            MechanismId.ONETM_FIFTEEN, "i3", Matching.of([(1, 1), (2, 2), (3, 3)])
        )
    # na-counter: honest and manipulated runs of the in-place tie algorithm
    honest = run_mechanism(MechanismId.KIRALY_NA, paper_instance("na-true"))
    manipulated = run_mechanism(MechanismId.KIRALY_NA, paper_instance("na-manip"))
    ok = _check("honest output", _pairs_line(Matching.of([(2, 1), (3, 3), (4, 2)])),
                _pairs_line(honest))
    ok &= _check("manipulated output", _pairs_line(Matching.of([(1, 2), (2, 3), (4, 1)])),
                 _pairs_line(manipulated))
    witness = find_manipulation(
        paper_instance("na-true"),
        MechanismId.KIRALY_NA,
        PersonId.parse("m1"),
        StrategySpace(SpaceKind.PERMUTE),
    )
    found = witness is not None and witness.falsified_lists[0] == ((1,), (2,))
    ok &= _check("witness falsified list", "w1 w2",
                 serialize_pref_list(witness.falsified_lists[0], witness.manipulators[0].side)
                 if witness else "none")
    ok &= found
    print("ok" if ok else "MISMATCH")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smti",
        description="Stable matching with ties and incomplete lists: "
        "mechanisms, verification, and brute-force audits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run a mechanism on an instance")
    p_solve.add_argument("--mechanism", required=True, choices=sorted(_MECHANISMS))
    p_solve.add_argument("--format", choices=["plain", "json"], default="plain")
    _add_instance_source(p_solve)
    p_solve.set_defaults(handler=_cmd_solve)

    p_verify = sub.add_parser("verify", help="report stability of a matching")
    _add_instance_source(p_verify)
    p_verify.add_argument("--matching", required=True, metavar="FILE")
    p_verify.set_defaults(handler=_cmd_verify)

    p_oracle = sub.add_parser("oracle", help="brute-force stable matching queries")
    _add_instance_source(p_oracle)
    mode = p_oracle.add_mutually_exclusive_group()
    mode.add_argument("--max-stable", action="store_true")
    mode.add_argument("--enumerate", action="store_true")
    mode.add_argument("--ratio", metavar="MATCHFILE")
    p_oracle.set_defaults(handler=_cmd_oracle)

    p_man = sub.add_parser("manipulate", help="search for a successful strategy")
    _add_instance_source(p_man)
    p_man.add_argument("--mechanism", required=True, choices=sorted(_MECHANISMS))
    p_man.add_argument("--person", metavar="m3")
    p_man.add_argument("--coalition", metavar="m1,m2")
    p_man.add_argument("--space", required=True, choices=sorted(_SPACES))
    p_man.add_argument("--space-cap", type=int, default=None)
    p_man.add_argument("--jobs", type=int, default=1)
    p_man.set_defaults(handler=_cmd_manipulate)

    p_translate = sub.add_parser(
        "translate", help="encode man-side ties into a strict gadget instance"
    )
    _add_instance_source(p_translate)
    p_translate.set_defaults(handler=_cmd_translate)

    p_gen = sub.add_parser("gen", help="generate a seeded random instance")
    p_gen.add_argument("--men", type=int, required=True)
    p_gen.add_argument("--women", type=int, required=True)
    p_gen.add_argument("--accept", type=float, default=0.5)
    p_gen.add_argument("--ties-men", type=float, default=0.0)
    p_gen.add_argument("--ties-women", type=float, default=0.0)
    p_gen.add_argument("--one-tm", action="store_true")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.set_defaults(handler=_cmd_gen)

    p_demo = sub.add_parser("demo", help="reproduce a bundled worked example")
    p_demo.add_argument(
        "--paper", required=True, choices=["i1", "i2", "i3", "na-counter"]
    )
    p_demo.set_defaults(handler=_cmd_demo)

    return parser


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except MechanismPreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParseError, OracleBoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
