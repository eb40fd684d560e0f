"""Command-line interface: ``handlebridge <subcommand> ...``.

Exit status 0 on success, 1 on a domain error (its name goes to stderr),
2 on a usage error.  Words are read from a file argument or from stdin
when the argument is ``-`` or missing.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .diagram import canonical_code, dumps, project
from .errors import CalculusError, DepthExhausted, InvalidSite, Unreachable
from .moves import NAMES, Certificate, Move, apply, enumerate_sites, verify
from .procedures import (
    DEFAULT_DEPTH,
    align,
    common_stabilization,
    compile_r,
    plat_normalize,
    saturate,
    to_bridge,
)
from .rmoves import KINDS, RSite, enumerate_r_sites
from .search import enum_words, parse_kinds, search
from .words import (
    SlicedWord,
    classify,
    format_word,
    invariants,
    middle_gap,
    parse_word,
    validate,
)


class UsageError(Exception):
    pass


def _read_text(arg: str | None) -> str:
    if arg in (None, "-"):
        return sys.stdin.read()
    try:
        return Path(arg).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {arg}: {e.strerror}") from None


def _word(arg: str | None) -> SlicedWord:
    w = parse_word(_read_text(arg))
    validate(w)
    return w


def _rsites(text: str) -> list[RSite]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(RSite.parse(line))
        except ValueError as e:
            raise UsageError(str(e)) from None
    return out


def _emit_cert(cert: Certificate, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(cert.to_json())
        print(format_word(cert.end_word))
    else:
        sys.stdout.write(cert.to_json())


def _write_pair(ca: Certificate, cb: Certificate, common: SlicedWord, out: str | None) -> None:
    if not out:
        sys.stdout.write(ca.to_json())
        sys.stdout.write(cb.to_json())
        print(format_word(common))
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    (d / "a.cert").write_text(ca.to_json())
    (d / "b.cert").write_text(cb.to_json())
    (d / "common.gw").write_text(format_word(common) + "\n")
    print(format_word(common))


# --- subcommands --------------------------------------------------------


def cmd_validate(a) -> None:
    print(validate(_word(a.word)))


def cmd_invariants(a) -> None:
    inv = invariants(_word(a.word))
    print(f"components {inv.components}")
    print(f"genus {inv.genus}")
    print(f"width {'-' if inv.width is None else inv.width}")
    for k, v in inv.event_counts.items():
        print(f"{k} {v}")


def cmd_classify(a) -> None:
    c = classify(_word(a.word))
    print(f"morse {str(c.is_morse).lower()}")
    print(f"bridge {str(c.is_bridge).lower()}")
    print(f"plat-normal {str(c.is_plat_normal).lower()}")


def cmd_project(a) -> None:
    text = dumps(project(_word(a.word)))
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_canon(a) -> None:
    print(canonical_code(project(_word(a.word))))


def cmd_sites(a) -> None:
    w = _word(a.word)
    if a.r:
        d = project(w)
        kinds = a.kinds.split(",") if a.kinds else KINDS
        for k in kinds:
            if k not in KINDS:
                raise UsageError(f"unknown R-move {k!r}")
            for s in enumerate_r_sites(d, k):
                print(s)
        return
    try:
        kinds = parse_kinds(a.kinds) if a.kinds else [(n, None) for n in NAMES]
    except ValueError as e:
        raise UsageError(str(e)) from None
    for name, d in kinds:
        for m in enumerate_sites(w, name, d):
            print(m)


def cmd_apply(a) -> None:
    w = _word(a.word)
    if a.move not in NAMES:
        raise UsageError(f"unknown move kind {a.move!r}")
    if a.slice_gap == "mid":
        sl = middle_gap(w)
    else:
        try:
            sl = int(a.slice_gap)
        except ValueError:
            raise UsageError("--slice-gap takes an integer or 'mid'") from None
    aux = tuple(int(x) for x in a.aux.split(",")) if a.aux else ()
    m = Move(a.move, a.direction, a.variant, sl, a.pos, aux)
    if m.direction == "reverse" and m.name in ("S3", "M1", "M2", "M3"):
        raise InvalidSite(f"{m.name} has no reverse")
    print(format_word(apply(w, m)))


def cmd_verify(a) -> None:
    try:
        cert = Certificate.from_json(_read_text(a.cert))
    except (ValueError, KeyError) as e:
        raise UsageError(f"malformed certificate: {e}") from None
    print(format_word(verify(cert, _word(a.word))))


def cmd_to_bridge(a) -> None:
    _emit_cert(to_bridge(_word(a.word)), a.out)


def cmd_plat_normalize(a) -> None:
    _emit_cert(plat_normalize(_word(a.word)), a.out)


def cmd_saturate(a) -> None:
    _emit_cert(saturate(_word(a.word)), a.out)


def cmd_compile_r(a) -> None:
    w = _word(a.word)
    sites = _rsites(a.site) if a.site else _rsites(_read_text(a.rseq)) if a.rseq else []
    if len(sites) != 1:
        raise UsageError("give exactly one R-site with --site or --rseq")
    _emit_cert(compile_r(w, sites[0], a.max_depth), a.out)


def cmd_align(a) -> None:
    wa, wb = _word(a.a), _word(a.b)
    ca, cb = align(wa, wb)
    _write_pair(ca, cb, ca.end_word, a.out)


def cmd_common_stab(a) -> None:
    wa, wb = _word(a.a), _word(a.b)
    rseq = _rsites(_read_text(a.rseq)) if a.rseq else []
    ca, cb, common = common_stabilization(wa, wb, rseq, a.max_depth)
    _write_pair(ca, cb, common, a.out)


def cmd_search(a) -> None:
    start, goal = _word(a.start), _word(a.goal)
    try:
        kinds = parse_kinds(a.kinds)
    except ValueError as e:
        raise UsageError(str(e)) from None
    cert, final = search(start, goal, [f"{n}^-1" if d == "reverse" else n for n, d in kinds], a.max_depth, a.quotient_b1)
    if cert is None:
        if final:
            raise Unreachable("goal is not reachable with these moves")
        raise DepthExhausted(f"no certificate within depth {a.max_depth}")
    _emit_cert(cert, a.out)


def cmd_enum(a) -> None:
    n = 0
    for w in enum_words(a.max_slices, a.max_width):
        n += 1
        if not a.count:
            print(format_word(w))
    if a.count:
        print(n)


# --- parser -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="handlebridge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    def word_cmd(name, fn, helptext):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("word", nargs="?", default="-", help="word file (.gw) or - for stdin")
        s.set_defaults(fn=fn)
        return s

    word_cmd("validate", cmd_validate, "print the strand profile")
    word_cmd("invariants", cmd_invariants, "components, genus, width, event counts")
    word_cmd("classify", cmd_classify, "Morse / bridge / plat-normal flags")
    word_cmd("project", cmd_project, "projected diagram of a plat-normal word").add_argument("--out")
    word_cmd("canon", cmd_canon, "canonical code of the projection")
    s = word_cmd("sites", cmd_sites, "list move sites")
    s.add_argument("--kinds", help="comma list, e.g. B1,S1,S2^-1 (R1,R3 with --r)")
    s.add_argument("--r", action="store_true", help="list R-move sites on the projection")
    s = word_cmd("apply", cmd_apply, "apply one move")
    s.add_argument("--move", required=True)
    s.add_argument("--direction", choices=("forward", "reverse"), default="forward")
    s.add_argument("--variant", default="")
    s.add_argument("--slice-gap", required=True, help="1-based slice, S1 gap, or 'mid'")
    s.add_argument("--pos", type=int, required=True)
    s.add_argument("--aux", default="", help="comma list of extra site integers")
    s = sub.add_parser("verify", help="replay a certificate")
    s.add_argument("cert")
    s.add_argument("word", nargs="?", default="-")
    s.set_defaults(fn=cmd_verify)
    for name, fn in (("to-bridge", cmd_to_bridge), ("plat-normalize", cmd_plat_normalize), ("saturate", cmd_saturate)):
        word_cmd(name, fn, f"{name.replace('-', ' ')} with a certificate").add_argument("--out")
    s = word_cmd("compile-r", cmd_compile_r, "realize one R-move by word moves")
    s.add_argument("--site", help='an R-site line, e.g. "R1 reverse 1"')
    s.add_argument("--rseq", help="file whose single line is the R-site")
    s.add_argument("--max-depth", type=int, default=DEFAULT_DEPTH)
    s.add_argument("--out")
    for name, fn in (("align", cmd_align), ("common-stab", cmd_common_stab)):
        s = sub.add_parser(name, help=f"{name} two words")
        s.add_argument("a")
        s.add_argument("b")
        s.add_argument("--out", help="directory for a.cert, b.cert and common.gw")
        s.set_defaults(fn=fn)
        if name == "common-stab":
            s.add_argument("--rseq", help="R-site file, one site per line")
            s.add_argument("--max-depth", type=int, default=DEFAULT_DEPTH)
    s = sub.add_parser("search", help="breadth-first search between two words")
    s.add_argument("start")
    s.add_argument("goal")
    s.add_argument("--kinds", default="B1-B3")
    s.add_argument("--max-depth", type=int, default=4)
    s.add_argument("--quotient-b1", action="store_true")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_search)
    s = sub.add_parser("enum", help="enumerate closed valid words")
    s.add_argument("--max-slices", type=int, required=True)
    s.add_argument("--max-width", type=int, required=True)
    s.add_argument("--count", action="store_true")
    s.set_defaults(fn=cmd_enum)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        args.fn(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except CalculusError as e:
        print(f"{e.name}: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
