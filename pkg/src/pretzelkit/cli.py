"""Command-line entry point: ``pretzelkit {pretzel,eq,enum,verify}``.

Data goes to stdout (or ``--out``); counts and diagnostics go to stderr.
Exit status is 0 on success, 1 on domain errors or failed checks, 2 on
usage errors.
"""
import argparse
import random
import sys

from .cancellative import FreeMonoid, load_monoid_file
from .errors import CapExceeded, PretzelError
from .graphs import condensation, export_dot, is_tree
from .idempath import tilde
from .monoidlab import (DEFAULT_CAP, enumerate_monoid, export_table,
                        verify_identities, verify_left_adequate,
                        verify_relations)
from .pretzel import (check_cayley_embedding, equal_in_presentation,
                      format_pretzel, pretzel_of_term)
from .terms import random_tree


def _alphabet(text):
    return tuple(sorted(set(text.replace(",", " ").split())))


def _add_oracle_flags(p):
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--monoid", metavar="PATH",
                       help="monoid JSON file, or a bundled name: c2, c3, z3xz3")
    group.add_argument("--free", action="store_true",
                       help="free monoid: only the empty word is the identity")
    p.add_argument("--alphabet", type=_alphabet, default=None,
                   help="generators, e.g. 'x y' (default: the monoid's, or x)")


def build_parser():
    parser = argparse.ArgumentParser(prog="pretzelkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pretzel", help="compute the pretzel of a term")
    p.add_argument("term")
    _add_oracle_flags(p)
    p.add_argument("--format", choices=("text", "dot"), default="text")
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("eq", help="decide equality of two terms")
    p.add_argument("term1")
    p.add_argument("term2")
    _add_oracle_flags(p)

    p = sub.add_parser("enum", help="enumerate the monoid and write its tables")
    _add_oracle_flags(p)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("verify", help="enumerate, then check axioms and identities")
    _add_oracle_flags(p)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--max-word-len", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trees", type=int, default=20,
                   help="random trees for the condensation check")
    return parser


def _oracle(args):
    if args.free:
        return FreeMonoid(args.alphabet or ("x",)), args.alphabet or ("x",)
    monoid = load_monoid_file(args.monoid, args.alphabet)
    return monoid, args.alphabet or monoid.alphabet


def _write(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_pretzel(args):
    oracle, alphabet = _oracle(args)
    p = pretzel_of_term(args.term, oracle, alphabet)
    _write(args, export_dot(p.graph) if args.format == "dot" else format_pretzel(p))
    print(f"{p.graph.n} vertices, {len(p.graph.edges)} edges", file=sys.stderr)
    return 0


def cmd_eq(args):
    oracle, alphabet = _oracle(args)
    same = equal_in_presentation(args.term1, args.term2, oracle, alphabet)
    print("equal" if same else "not-equal")
    return 0


def cmd_enum(args):
    oracle, alphabet = _oracle(args)
    try:
        m = enumerate_monoid(oracle, alphabet, cap=args.cap)
    except CapExceeded as exc:
        print(f"{exc} ({len(exc.partial or ())} elements found)", file=sys.stderr)
        return 1
    _write(args, export_table(m))
    print(f"{m.size} elements", file=sys.stderr)
    return 0


def cmd_verify(args):
    oracle, alphabet = _oracle(args)
    try:
        m = enumerate_monoid(oracle, alphabet, cap=args.cap)
    except CapExceeded as exc:
        print(f"{exc} ({len(exc.partial or ())} elements found)", file=sys.stderr)
        return 1
    print(f"{m.size} elements", file=sys.stderr)
    reports = [verify_left_adequate(m), verify_identities(m),
               verify_relations(m, oracle, args.max_word_len)]
    lines = []
    for rep in reports:
        lines.append(rep.render())
    if not args.free:
        bad = [(i, r.violations[0]) for i, p in enumerate(m.elements)
               for r in [check_cayley_embedding(p, oracle)] if not r.ok]
        lines.append(f"cayley embedding: {'pass' if not bad else 'FAIL'}"
                     f" ({m.size} elements)" + (f"  witness {bad[0]}" if bad else ""))
    rng = random.Random(args.seed)
    cond_bad = None
    for _ in range(args.trees):
        t = random_tree(rng, rng.randint(0, 10), alphabet)
        if not is_tree(condensation(tilde(t.graph, oracle)[0])):
            cond_bad = t.graph
            break
    lines.append(f"condensation is a tree: {'pass' if cond_bad is None else 'FAIL'}"
                 f" ({args.trees} random trees, seed {args.seed})"
                 + ("" if cond_bad is None else f"  witness {cond_bad}"))
    sys.stdout.write("\n".join(lines) + "\n")
    ok = all(r.ok for r in reports) and "FAIL" not in lines[-1] and \
        (args.free or "FAIL" not in lines[-2])
    return 0 if ok else 1


COMMANDS = {"pretzel": cmd_pretzel, "eq": cmd_eq, "enum": cmd_enum, "verify": cmd_verify}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (PretzelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
