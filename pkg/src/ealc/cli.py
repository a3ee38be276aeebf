"""Command-line front end.

Thin wrappers over the library: every subcommand parses its inputs, calls
the corresponding library function and prints the result.  Identical inputs
and flags produce byte-identical outputs.

Exit codes: 0 success, 1 parse/type error, 2 unsupported shape,
3 resource cap or fuel exhausted, 4 verification mismatch.
"""

from __future__ import annotations

import argparse
import sys

from . import encode
from .extract import (
    UnsupportedShape, VerificationFailed, extract_lstar, extract_semantic,
    verify_dfa,
)
from .parser import ParseError, parse_term, parse_type
from .reduction import DEFAULT_FUEL, DecodeError, FuelExhausted, normalize, trace
from .regcompile import (
    AutomatonError, RegexError, compile_dfa, compile_monoid, dfa_from_json,
    dfa_to_json, monoid_from_json, regex_to_dfa,
)
from .semantics import CapExceeded, POLICY_BASE, POLICY_ERROR, SemanticsUnsupported
from .syntax import TypeStructureError, print_term, print_type
from .truncate import TruncationError, truncate_term, truncate_type
from .typecheck import EAL, MUEAL, TypeCheckError, typecheck_closed

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNSUPPORTED = 2
EXIT_RESOURCE = 3
EXIT_VERIFY = 4


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_check(args) -> int:
    term = parse_term(_read(args.file))
    expected = parse_type(args.type) if args.type else None
    ty = typecheck_closed(args.mode, term, expected)
    print(print_type(ty))
    return EXIT_OK


def _cmd_norm(args) -> int:
    term = parse_term(_read(args.file))
    lines = []
    if args.show_steps:
        n = 0
        for term, path in trace(term, args.fuel):
            n += 1
            lines.append("-- step %d: /%s" % (n, ".".join(str(i) for i in path)))
    else:
        term = normalize(term, args.fuel)
    lines.append(print_term(term))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _cmd_encode(args) -> int:
    if args.string is not None:
        term = encode.church_string(args.string)
    elif args.nat is not None:
        term = encode.church_nat(args.nat)
    elif args.scott is not None:
        term = encode.scott_string(args.scott)
    elif args.cast:
        term = encode.cast_term()
    else:
        raise ParseError("encode needs one of --string/--nat/--scott/--cast")
    _emit(print_term(term) + "\n", args.output)
    return EXIT_OK


def _cmd_cast(args) -> int:
    _emit(print_term(encode.cast_term()) + "\n", args.output)
    return EXIT_OK


def _cmd_promote(args) -> int:
    term = parse_term(_read(args.file))
    out = encode.promote(term, args.arity, args.levels, args.mode)
    typecheck_closed(args.mode, out)
    _emit(print_term(out) + "\n", args.output)
    return EXIT_OK


def _cmd_compile(args) -> int:
    if args.regex is not None:
        term = compile_dfa(regex_to_dfa(args.regex))
    elif args.dfa is not None:
        term = compile_dfa(dfa_from_json(_read(args.dfa)))
    else:
        term = compile_monoid(monoid_from_json(_read(args.monoid)))
    typecheck_closed(EAL, term)
    _emit(print_term(term) + "\n", args.output)
    return EXIT_OK


def _cmd_truncate(args) -> int:
    term = parse_term(_read(args.file))
    ty = typecheck_closed(EAL, term)
    out = truncate_term(term)
    text = print_term(out) + "\n-- type: " + print_type(truncate_type(ty)) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def _cmd_extract(args) -> int:
    term = parse_term(_read(args.file))
    policy = POLICY_BASE if args.forall_policy == "base" else POLICY_ERROR
    if args.method == "lstar":
        d = extract_lstar(term, max_len=args.max_len, seed=args.seed,
                          fuel=args.fuel)
    else:
        d = extract_semantic(term, base=args.base, policy=policy,
                             cap=args.cap, verify_len=None, fuel=args.fuel)
    if args.verify is not None:
        report = verify_dfa(d, term, args.verify, fuel=args.fuel)
        print(report, file=sys.stderr)
        if not report.ok:
            _emit(dfa_to_json(d), args.output)
            return EXIT_VERIFY
    _emit(dfa_to_json(d), args.output)
    return EXIT_OK


def _cmd_verify(args) -> int:
    term = parse_term(_read(args.file))
    d = dfa_from_json(_read(args.dfa))
    report = verify_dfa(d, term, args.max_len, fuel=args.fuel)
    print(report)
    return EXIT_OK if report.ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="eal",
        description="Elementary affine lambda-calculus toolkit: check, "
                    "normalize, encode, compile regular languages to terms, "
                    "truncate, extract automata back out.")
    p.add_argument("--version", action="version", version="%(prog)s 0.1.0")
    sub = p.add_subparsers(dest="command", required=True)

    def add_mode(sp):
        sp.add_argument("--mode", choices=[EAL, MUEAL], default=EAL,
                        help="type system: eal or mueal (with type fixpoints)")

    def add_out(sp):
        sp.add_argument("-o", "--output", default=None, metavar="FILE",
                        help="write to FILE instead of stdout")

    def add_fuel(sp):
        sp.add_argument("--fuel", type=int, default=DEFAULT_FUEL,
                        help="reduction step budget (default %(default)s)")

    sp = sub.add_parser("check", help="typecheck a term file")
    sp.add_argument("file")
    sp.add_argument("--type", default=None, help="expected type (ascription)")
    add_mode(sp)
    sp.set_defaults(fn=_cmd_check)

    sp = sub.add_parser("norm", help="normalize a term file")
    sp.add_argument("file")
    sp.add_argument("--show-steps", action="store_true",
                    help="print each contracted redex path as a comment")
    add_fuel(sp)
    add_out(sp)
    sp.set_defaults(fn=_cmd_norm)

    sp = sub.add_parser("encode", help="emit standard encodings")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--string", metavar="W", help="Church string over {0,1}")
    g.add_argument("--nat", type=int, metavar="N", help="Church numeral")
    g.add_argument("--scott", metavar="W", help="Scott string (mueal)")
    g.add_argument("--cast", action="store_true",
                   help="the Scott-to-Church conversion term")
    add_out(sp)
    sp.set_defaults(fn=_cmd_encode)

    sp = sub.add_parser("cast", help="emit the Scott-to-Church cast term")
    add_out(sp)
    sp.set_defaults(fn=_cmd_cast)

    sp = sub.add_parser("promote", help="k-fold functorial promotion of a closed term")
    sp.add_argument("file")
    sp.add_argument("--arity", type=int, required=True,
                    help="number of arrow arguments to lift")
    sp.add_argument("--levels", type=int, required=True,
                    help="how many bangs to add")
    add_mode(sp)
    add_out(sp)
    sp.set_defaults(fn=_cmd_promote)

    sp = sub.add_parser("compile", help="compile a regular language to a term")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--regex", metavar="R")
    g.add_argument("--dfa", metavar="FILE", help="DFA in JSON form")
    g.add_argument("--monoid", metavar="FILE", help="monoid presentation in JSON form")
    add_out(sp)
    sp.set_defaults(fn=_cmd_compile)

    sp = sub.add_parser("truncate", help="truncate a typed term at depth 0")
    sp.add_argument("file")
    add_out(sp)
    sp.set_defaults(fn=_cmd_truncate)

    sp = sub.add_parser("extract", help="recover the automaton a decider denotes")
    sp.add_argument("file")
    sp.add_argument("--method", choices=["lstar", "semantic"], required=True)
    sp.add_argument("--max-len", type=int, default=10,
                    help="exhaustive equivalence bound for lstar (default 10)")
    sp.add_argument("--base", type=int, default=2,
                    help="base set size for the semantic method (default 2)")
    sp.add_argument("--forall-policy", choices=["error", "base"], default="error")
    sp.add_argument("--cap", type=int, default=10 ** 6,
                    help="cell cap on enumerated spaces (default 1000000)")
    sp.add_argument("--verify", type=int, default=None, metavar="L",
                    help="re-check the result against the term up to length L")
    sp.add_argument("--seed", type=int, default=0)
    add_fuel(sp)
    add_out(sp)
    sp.set_defaults(fn=_cmd_extract)

    sp = sub.add_parser("verify", help="compare a DFA with a deciding term")
    sp.add_argument("file", help="term file")
    sp.add_argument("--dfa", required=True, metavar="FILE")
    sp.add_argument("--max-len", type=int, default=10)
    add_fuel(sp)
    sp.set_defaults(fn=_cmd_verify)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except TypeCheckError as e:
        print(e, file=sys.stderr)  # already formatted as path: kind: message
        return EXIT_INPUT
    except (ParseError, TypeStructureError, AutomatonError,
            RegexError, DecodeError, ValueError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_INPUT
    except (UnsupportedShape, SemanticsUnsupported, TruncationError) as e:
        print("unsupported: %s" % e, file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (FuelExhausted, CapExceeded) as e:
        print("resource limit: %s" % e, file=sys.stderr)
        return EXIT_RESOURCE
    except VerificationFailed as e:
        print("verification failed: %s" % e, file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
