"""Command-line front end; the only module that touches files.

Subcommands: field, directions, redei, bounds, classify, verify, search.
Exit codes: 0 verified/ok, 1 violation found, 2 usage or input error,
3 enumeration budget exceeded.  All randomness flows from --seed (default 0,
never wall-clock).  JSON output is canonical and reproducible; human output
may include wall-times.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import formats, harness
from .affgroup import classify as classify_set
from .errors import (
    AllOnOneLine,
    BudgetExceeded,
    Error,
    FormatError,
    SlopeNotDetermined,
)
from .ff import construct_field
from .harness import Campaign, run_campaign
from .plane import (
    INF,
    TRIVIAL_UPPER,
    complement_and_remainder,
    direction_bounds,
    direction_set,
    maindir_check,
    redei_polynomial,
    slope_decomposition,
)


class UsageError(Exception):
    pass


def _parse_prime_power(q: int):
    if q < 2:
        raise UsageError(f"q must be at least 2, got {q}")
    p = None
    for d in range(2, q + 1):
        if q % d == 0:
            p = d
            break
    e = 0
    rest = q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise UsageError(f"q = {q} is not a prime power")
    return p, e


def _parse_sizes(text: str):
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return int(lo), int(hi)
        size = int(text)
        return size, size
    except ValueError:
        raise UsageError(f"bad size range {text!r}, expected a..b") from None


def _read_point_set(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    return formats.parse_point_set(text)


def _read_aff_set(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    return formats.parse_aff_set(text)


def _emit(args, payload: dict, human_lines):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in human_lines:
            print(line)


# -- subcommands ---------------------------------------------------------------

def _cmd_field(args) -> int:
    field = construct_field(args.p, args.e)
    payload = {"p": field.p, "e": field.e, "q": field.q,
               "modulus_code": field.modulus_code(),
               "modulus": field.modulus_string()}
    _emit(args, payload,
          [f"p={field.p} e={field.e} q={field.q} modulus={field.modulus_string()}"])
    return 0


def _cmd_directions(args) -> int:
    A = _read_point_set(args.setfile)
    rep = direction_set(A)
    payload = {"q": A.field.q, "size": len(A),
               "D": formats.slopes_to_json(rep.directions),
               "n": rep.n, "collinear": rep.collinear}
    _emit(args, payload, [
        f"q:         {A.field.q}",
        f"size:      {len(A)}",
        f"D:         {' '.join(str(d) for d in payload['D'])}",
        f"|D|:       {rep.count}",
        f"n:         {rep.n}",
        f"collinear: {rep.collinear}",
    ])
    return 0


def _cmd_redei(args) -> int:
    A = _read_point_set(args.setfile)
    field = A.field
    if not 0 <= args.slope < field.q:
        raise UsageError(f"slope {args.slope} out of range [0, {field.q})")
    H = redei_polynomial(A, args.slope)
    f, g = complement_and_remainder(A, args.slope)
    payload = {"q": field.q, "size": len(A), "slope": args.slope,
               "H": H.to_text(), "f": f.to_text(), "g": g.to_text(),
               "l1": None, "l2": None, "in_direction_set": True,
               "all_on_one_line": False}
    try:
        dec = slope_decomposition(A, args.slope)
        payload["l1"] = dec.l1
        payload["l2"] = dec.l2
    except SlopeNotDetermined:
        payload["in_direction_set"] = False
    except AllOnOneLine:
        payload["all_on_one_line"] = True
    human = [
        f"q:     {field.q}",
        f"slope: {args.slope}",
        f"H:     {H.to_text()}   ({H!r})",
        f"f:     {f.to_text()}   ({f!r})",
        f"g:     {g.to_text()}   ({g!r})",
    ]
    if payload["all_on_one_line"]:
        human.append("all points lie on a single line of this slope; l1/l2 undefined")
    elif payload["in_direction_set"]:
        human.append(f"l1:    {payload['l1']}")
        human.append(f"l2:    {payload['l2']}")
    else:
        human.append("slope is not a direction of the set; l1/l2 undefined")
    _emit(args, payload, human)
    return 0


def _cmd_bounds(args) -> int:
    A = _read_point_set(args.setfile)
    field = A.field
    if not 1 < len(A) <= field.q:
        raise UsageError(f"bounds need 1 < |A| <= q, got |A| = {len(A)}")
    rep = direction_set(A)
    res = maindir_check(A)
    payload = {"q": field.q, "size": len(A),
               "D": formats.slopes_to_json(rep.directions),
               "n": rep.n, "collinear": rep.collinear,
               "l1": None, "l2": None, "lower": None, "upper": None,
               "holds": res.holds}
    if 1 < rep.count < field.q + 1:
        b = direction_bounds(A)
        payload["l1"] = b.l1
        payload["l2"] = b.l2
        payload["lower"] = b.lower
        payload["upper"] = "trivial" if b.upper is TRIVIAL_UPPER else b.upper
    human = [
        f"q:         {field.q}",
        f"size:      {len(A)}",
        f"|D|:       {rep.count}",
        f"collinear: {rep.collinear}",
        f"l1/l2:     {payload['l1']}/{payload['l2']}",
        f"lower:     {payload['lower']}",
        f"upper:     {payload['upper']}",
        f"threshold: {formats.fraction_to_json(res.threshold)}"
        + (" (exempt: collinear)" if res.exempt else ""),
        f"holds:     {res.holds}",
    ]
    _emit(args, payload, human)
    return 0


def _case_b_json(case):
    if case is None:
        return None
    return {"pi": case.pi_size, "bound": case.bound_text, "holds": case.holds}


def _cmd_classify(args) -> int:
    A = _read_aff_set(args.setfile)
    rep = classify_set(A)
    case_c = None
    if rep.case_c is not None:
        case_c = {"pi": rep.case_c.pi_size,
                  "bound": formats.fraction_to_json(rep.case_c.bound),
                  "holds": rep.case_c.holds,
                  "u_covered": rep.case_c.u_covered}
    payload = {"q": A.field.q, "size": len(A),
               "C": formats.fraction_to_json(rep.tripling),
               "regime": rep.size_regime,
               "case_a": None if rep.case_a is None else {"x": rep.case_a},
               "case_b": _case_b_json(rep.case_b),
               "case_c": case_c,
               "holds": rep.disjunction_holds}
    human = [
        f"q:      {A.field.q}",
        f"size:   {len(A)}",
        f"C:      {formats.fraction_to_json(rep.tripling)}",
        f"regime: {rep.size_regime}",
        f"case a: {'witness x = %d' % rep.case_a if rep.case_a is not None else 'no fixed point'}",
    ]
    if rep.case_b is not None:
        human.append(f"case b: pi = {rep.case_b.pi_size}, bound {rep.case_b.bound_text}, "
                     f"holds = {rep.case_b.holds}")
    if rep.case_c is not None:
        human.append(f"case c: pi = {rep.case_c.pi_size}, "
                     f"bound {formats.fraction_to_json(rep.case_c.bound)}, "
                     f"holds = {rep.case_c.holds}, U covered = {rep.case_c.u_covered}")
    human.append(f"holds:  {rep.disjunction_holds}")
    _emit(args, payload, human)
    return 0 if rep.disjunction_holds else 1


def _cmd_verify(args) -> int:
    p, e = _parse_prime_power(args.q)
    sizes = _parse_sizes(args.sizes)
    if args.exhaustive and args.samples:
        raise UsageError("choose either --exhaustive or --samples, not both")
    if not args.exhaustive and not args.samples:
        raise UsageError("choose a mode: --exhaustive or --samples N")
    budget = harness.DEFAULT_BUDGET
    env_budget = os.environ.get("REDEI_BUDGET")
    if env_budget:
        try:
            budget = int(env_budget)
        except ValueError:
            raise UsageError(f"REDEI_BUDGET must be an integer, got {env_budget!r}")
    campaign = Campaign(target=args.target, p=p, e=e, sizes=sizes,
                        mode="exhaustive" if args.exhaustive else "random",
                        samples=args.samples, seed=args.seed, jobs=args.jobs,
                        budget=budget)
    try:
        report = run_campaign(campaign)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text)
    if args.json:
        sys.stdout.write(text)
    else:
        mode = ("exhaustive" if campaign.mode == "exhaustive"
                else f"random (samples={campaign.samples}, seed={campaign.seed})")
        print(f"target:     {campaign.target}")
        print(f"field:      q={report.q} (p={p}, e={e})")
        print(f"mode:       {mode}")
        print(f"sizes:      {sizes[0]}..{sizes[1]}")
        print(f"checked:    {report.checked}")
        print(f"violations: {len(report.violations)}")
        if report.extremal:
            for size, entry in sorted(report.extremal.items()):
                print(f"min |D| at size {size}: {entry['min_D']}")
        print(f"seconds:    {report.seconds:.2f}")
    if report.violations:
        directory = Path(args.counterexample_dir)
        for violation in report.violations:
            record = harness.make_counterexample_record(campaign, report.q, violation)
            path = harness.persist_counterexample(record, directory)
            print(f"counterexample written: {path}", file=sys.stderr)
        return 1
    return 0


def _cmd_search(args) -> int:
    p, e = _parse_prime_power(args.q)
    field = construct_field(p, e)
    budget = harness.DEFAULT_BUDGET
    env_budget = os.environ.get("REDEI_BUDGET")
    if env_budget:
        budget = int(env_budget)
    try:
        res = harness.extremal_search(field, args.size, budget=budget,
                                      samples=args.samples, seed=args.seed)
    except BudgetExceeded:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = res.to_json_dict()
    human = [
        f"q:       {field.q}",
        f"size:    {args.size}",
        f"mode:    {res.mode}",
        f"min |D|: {res.min_directions}",
        f"checked: {res.checked}",
    ]
    for w in res.witnesses[:3]:
        human.append("witness: " + " ".join(f"({a},{b})" for a, b in w))
    _emit(args, payload, human)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="redei",
        description="Exact direction counting over GF(q) and growth "
                    "experiments in the affine group.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_field = sub.add_parser("field", help="print the canonical field description")
    p_field.add_argument("p", type=int)
    p_field.add_argument("e", type=int)

    for name, help_text in [("directions", "direction set of a point-set file"),
                            ("bounds", "two-sided bounds and the threshold verdict"),
                            ("classify", "structure classification of an affine set")]:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("setfile")

    p_redei = sub.add_parser("redei", help="per-slope polynomials of a point set")
    p_redei.add_argument("setfile")
    p_redei.add_argument("--slope", type=int, required=True)

    p_verify = sub.add_parser("verify", help="run a verification campaign")
    p_verify.add_argument("--target", required=True, choices=harness.TARGETS)
    p_verify.add_argument("--q", type=int, required=True)
    p_verify.add_argument("--exhaustive", action="store_true")
    p_verify.add_argument("--samples", type=int)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--sizes", required=True)
    p_verify.add_argument("--jobs", type=int, default=1)
    p_verify.add_argument("--out", help="write the JSON report to this path")
    p_verify.add_argument("--counterexample-dir", default="counterexamples")

    p_search = sub.add_parser("search", help="minimal direction count at a size")
    p_search.add_argument("--q", type=int, required=True)
    p_search.add_argument("--size", type=int, required=True)
    p_search.add_argument("--samples", type=int, default=10000)
    p_search.add_argument("--seed", type=int, default=0)

    for sp in sub.choices.values():
        sp.add_argument("--json", action="store_true",
                        help="emit canonical JSON instead of a table")
    return parser


_COMMANDS = {
    "field": _cmd_field,
    "directions": _cmd_directions,
    "redei": _cmd_redei,
    "bounds": _cmd_bounds,
    "classify": _cmd_classify,
    "verify": _cmd_verify,
    "search": _cmd_search,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"error: {exc} (set REDEI_BUDGET to raise the cap)", file=sys.stderr)
        return 3
    except Error as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
