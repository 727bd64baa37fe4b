"""Command-line front end: ``logtc check | resolve | verify | examples``.

Exit codes: 0 unit section (or success), 2 section with a nonempty singular
locus, 1 not a section or a failed verification, 3 factorization unsupported,
64 usage or parse error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import catalog, jsonio
from .errors import FactorizationUnsupported, LogtcError, SchemaError
from .gtc import parse_gtc, serialize, validate_gtc
from .ls import check_ls_section, locus_degree, parse_section, serialize_section, singular_locus, \
    vanishing_factors
from .resolution import resolve, serialize_plan
from .verification import catalog_ghost_checks, check_ghost_resolution, fuzz_joint_lemma

EXIT_UNIT, EXIT_NOT_SECTION, EXIT_SINGULAR, EXIT_UNSUPPORTED, EXIT_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


class Output:
    def __init__(self, json_mode=False, quiet=False, stream=None):
        self.json_mode = json_mode
        self.quiet = quiet
        self.stream = stream or sys.stdout
        mode = os.environ.get("LOGTC_COLOR", "auto")
        if mode not in ("auto", "always", "never"):
            print(f"logtc: ignoring LOGTC_COLOR={mode!r}", file=sys.stderr)
            mode = "auto"
        self.color = mode == "always" or (mode == "auto" and hasattr(self.stream, "isatty")
                                          and self.stream.isatty())

    def line(self, text=""):
        if not self.quiet and not self.json_mode:
            print(text, file=self.stream)

    def verdict(self, ok, text):
        if self.color:
            text = f"\033[{32 if ok else 31}m{text}\033[0m"
        self.line(text)

    def document(self, obj):
        if self.json_mode:
            self.stream.write(jsonio.dumps(obj))


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError("$", exc.strerror or "cannot read") from None


def _load(gtc_path, section_path):
    try:
        space = parse_gtc(_read(gtc_path))
    except SchemaError as exc:
        raise SchemaError(f"{gtc_path}:{exc.path}", exc.message) from None
    if section_path is None:
        return space, None
    try:
        section = parse_section(_read(section_path), space)
    except SchemaError as exc:
        raise SchemaError(f"{section_path}:{exc.path}", exc.message) from None
    return space, section


def _undecided_walls(space, section):
    out = []
    for w in section.walls:
        try:
            vanishing_factors(space, w, section[w])
        except FactorizationUnsupported as exc:
            out.append((w, str(exc)))
    return out


# ---------------------------------------------------------------------------
# check


def cmd_check(args, out):
    space, section = _load(args.gtc, args.section)
    validation = validate_gtc(space)
    report = check_ls_section(space, section)
    locus, undecided = None, _undecided_walls(space, section)
    if report.is_section and not undecided:
        locus = singular_locus(space, section)
    if not validation.passed or not report.is_section:
        code = EXIT_NOT_SECTION
    else:
        code = EXIT_UNIT if report.is_unit else EXIT_SINGULAR
    out.line(f"space {space.name or args.gtc}: "
             f"{len(validation.checks)} model checks, {len(validation.failures())} failed")
    for c in validation.failures():
        out.line(f"  failed {c.name}: {c.witness}")
    for w, status in sorted(report.walls.items()):
        poly = section[w] if w in section.assignments else None
        out.line(f"wall {w}: f = {poly} ({status})")
    for j, rep in sorted(report.joints.items()):
        if isinstance(rep, dict):
            out.verdict(False, f"joint {j}: {rep['message']}")
            continue
        text = f"joint {j}: residuals {', '.join(rep.residual_strings())}"
        never = [c.split(": ", 1)[1] for c in rep.constraints if c.startswith("unsatisfiable")]
        if never:
            text += f"; cannot hold ({', '.join(never)})"
        elif rep.constraints:
            text += f"; holds iff {', '.join(rep.constraints)}"
        out.verdict(rep.passed, text + (" (pass)" if rep.passed else " (fail)"))
    points = None
    if locus is not None:
        for w, c in sorted(locus.items()):
            if not c.is_zero():
                out.line(f"singular locus on {w}: {c} (degree {locus_degree(space, c)})")
        if space.dimension == 2:
            points = int(sum(locus_degree(space, c) for c in locus.values()))
            out.line(f"singular points: {points}")
        else:
            pieces = sum(len(c.support()) for c in locus.values())
            out.line(f"singular locus: {pieces} irreducible component(s)")
    out.verdict(code == EXIT_UNIT, f"classification: {report.classification}")
    out.document({"validation": validation.to_json(), "section": report.to_json(),
                  "singular_locus": None if locus is None else
                  {w: str(c) for w, c in sorted(locus.items())},
                  "singular_points": points, "exit_code": code})
    return code


# ---------------------------------------------------------------------------
# resolve


def _overrides(space, pairs):
    out = dict(space.annotations.get("side_overrides", {}))
    for p in pairs or []:
        if "=" not in p:
            raise UsageError(f"--side expects WALL=COMPONENT, got {p!r}")
        w, c = p.split("=", 1)
        out[w] = c
    return out


def cmd_resolve(args, out):
    space, section = _load(args.gtc, args.section)
    before = check_ls_section(space, section)
    if not before.is_section:
        out.verdict(False, f"classification: {before.classification}; nothing to resolve")
        for w in before.witnesses:
            out.line(f"  {w}")
        out.document({"before": before.classification, "exit_code": EXIT_NOT_SECTION})
        return EXIT_NOT_SECTION
    undecided = _undecided_walls(space, section)
    if undecided:
        for w, msg in undecided:
            out.line(f"undecided wall {w}: {msg}")
        out.document({"undecided": dict(undecided), "exit_code": EXIT_UNSUPPORTED})
        return EXIT_UNSUPPORTED
    try:
        rep = resolve(space, section, _overrides(space, args.side))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.line(f"plan: {len(rep.plan)} event(s)")
    for i, e in enumerate(rep.plan.events, 1):
        out.line(f"  {i}. blow up {e.center} on {e.wall} inside {e.component} "
                 f"-> {', '.join(e.new_exceptional)}")
    for w, ident in sorted(rep.identities.items()):
        out.line(f"wall {w}: {ident.incremental} = f*({ident.before}) - ({ident.pulled_back_center})")
        out.verdict(ident.holds, f"  transform identity {'holds' if ident.holds else 'FAILS'}")
    ok = rep.log_smooth and rep.identities_hold
    out.verdict(ok, f"after resolution: {rep.after.classification}"
                    f"{' (log smooth)' if rep.log_smooth else ''}")
    if args.plan_out:
        Path(args.plan_out).write_text(serialize_plan(rep.plan), encoding="utf-8")
    out.document(rep.to_json() | {"exit_code": EXIT_UNIT if ok else EXIT_NOT_SECTION})
    return EXIT_UNIT if ok else EXIT_NOT_SECTION


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args, out):
    if args.kind == "ghost":
        if args.gtc:
            space = _load(args.gtc, None)[0]
            rows = [(space.name or args.gtc, s.id, tuple(sorted(c)), check_ghost_resolution(s.fan, c))
                    for s in space.strata for c in s.fan.cones]
        else:
            rows = catalog_ghost_checks()
        for name, sid, cone, ok in rows:
            out.verdict(ok, f"{name} {sid} cone {list(cone)}: {'exact' if ok else 'NOT exact'}")
        ok = all(r[3] for r in rows)
        out.document({"stalks": [{"space": n, "stratum": s, "cone": list(c), "exact": k}
                                 for n, s, c, k in rows], "passed": ok})
        return EXIT_UNIT if ok else EXIT_NOT_SECTION
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    if args.max_rays < 4 or args.k < 1:
        raise UsageError("--max-rays must be at least 4 and -k at least 1")
    rep = fuzz_joint_lemma(args.seed, args.trials, args.max_rays, args.k)
    for text, t in zip(rep.lines(), rep.trials):
        out.verdict(t.passed, text)
    out.document(rep.to_json())
    return EXIT_UNIT if rep.passed else EXIT_NOT_SECTION


# ---------------------------------------------------------------------------
# examples


def example_files(name, *, r=1, numeric=False, seed=None):
    """``{file name: text}`` for one catalog example."""
    e = catalog.entry(name, r=r) if name == "two-components" else catalog.entry(name)
    ann = dict(e.space.annotations)
    ann["expected"] = e.expected
    if e.overrides:
        ann["side_overrides"] = e.overrides
    space = e.space.replace(annotations=ann)
    files = {f"{name}.gtc": serialize(space), f"{name}.section": serialize_section(space, e.section)}
    if name == "dp4" and numeric:
        files["dp4-generic.section"] = serialize_section(space, catalog.dp4_numeric_section(seed))
    return files


def cmd_examples(args, out):
    names = catalog.names() if args.name == "all" else [args.name]
    if args.name != "all" and args.name not in catalog.names():
        raise UsageError(f"unknown example {args.name!r}; available: all, {', '.join(catalog.names())}")
    if args.r < 1:
        raise UsageError("--r must be a positive integer")
    target = Path(args.out)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for n in names:
        for fname, text in example_files(n, r=args.r, numeric=args.numeric, seed=args.seed).items():
            (target / fname).write_text(text, encoding="utf-8")
            written.append(str(target / fname))
            out.line(f"wrote {target / fname}")
    out.document({"written": written})
    return EXIT_UNIT


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("-q", "--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="suppress the text report")
    p = _Parser(prog="logtc", parents=[common],
                description="Check and resolve log structures on toroidal crossing spaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", parents=[common], help="classify a section")
    c.add_argument("gtc")
    c.add_argument("section")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("resolve", parents=[common], help="plan and apply a log resolution")
    r.add_argument("gtc")
    r.add_argument("section")
    r.add_argument("--side", "--side-overrides", dest="side", action="append",
                   metavar="WALL=COMPONENT",
                   help="blow up WALL's center inside COMPONENT (repeatable)")
    r.add_argument("--plan-out", metavar="FILE", help="write the plan as JSON")
    r.set_defaults(func=cmd_resolve)

    v = sub.add_parser("verify", parents=[common], help="run an independent verifier")
    v.add_argument("kind", choices=["ghost", "joint-lemma"])
    v.add_argument("--catalog", action="store_true", help="ghost: every catalog stalk (default)")
    v.add_argument("--gtc", help="ghost: every stalk of this space instead")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--max-rays", type=int, default=12)
    v.add_argument("-k", type=int, default=3, help="rank of the value group")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("examples", parents=[common], help="write the worked-example catalog")
    e.add_argument("name", help="example name or 'all'")
    e.add_argument("--out", default=".", help="output directory")
    e.add_argument("--r", type=int, default=1, help="two-components: order of the A_(r-1) point")
    e.add_argument("--numeric", action="store_true",
                   help="dp4: also write a compliant numeric section")
    e.add_argument("--seed", type=int, default=None, help="dp4 --numeric: draw coefficients")
    e.set_defaults(func=cmd_examples)
    return p


def main(argv=None, stream=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"logtc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    out = Output(getattr(args, "json", False), getattr(args, "quiet", False), stream)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"logtc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SchemaError as exc:
        print(f"logtc: parse error at {exc.path}: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    except FactorizationUnsupported as exc:
        print(f"logtc: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except LogtcError as exc:
        print(f"logtc: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_NOT_SECTION


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
