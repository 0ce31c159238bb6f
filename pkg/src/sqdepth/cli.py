"""Command-line front end.

Exit codes: 0 success or "holds", 2 invalid input, 3 assertion or
verification failure, 4 budget timeout.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import corpus
from .constructions import check_theorem_hypotheses, derive_sets, gcd_family
from .formats import (
    FormatError,
    dump_instance,
    dump_partition,
    dump_record,
    emit_report,
    parse_instance,
    parse_partition,
)
from .homology import instance_module, koszul_homology
from .monomials import FieldSpec, Instance, InstanceError, SqMonomial, restrict_support
from .stanley import DEFAULT_BUDGET, build_poset, sdepth, sdepth_decision, verify_partition

EXIT_OK, EXIT_INPUT, EXIT_FAIL, EXIT_TIMEOUT = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_instance(path: str, char: Optional[int] = None) -> Instance:
    inst = parse_instance(_read(path))
    if char is not None:
        inst = inst.with_field(FieldSpec(char))
    return inst


def _prime(text: str) -> int:
    try:
        value = int(text)
        FieldSpec(value)
    except (ValueError, InstanceError):
        raise argparse.ArgumentTypeError(f"{text!r} is not 0 or a prime") from None
    return value


def _seed_range(text: str) -> range:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return range(int(a), int(b) + 1)
        return range(int(text), int(text) + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed range {text!r}; use A..B") from None


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        value = 0
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} is not a positive integer")
    return value


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    inst = load_instance(args.instance)
    ds = derive_sets(inst)
    fam = gcd_family(inst)
    hyp = check_theorem_hypotheses(inst, ds)
    fields = [
        ("n", inst.n), ("d", inst.d), ("r", inst.r),
        ("F", list(inst.F)), ("E", list(inst.E)),
        ("B", list(ds.B)), ("C", list(ds.C)),
        ("W", [f"w{i},{j}:{w}" for (i, j), w in ds.W]),
        ("C3", list(ds.C3)), ("s", ds.s), ("q", ds.q),
        ("e", fam.e), ("u", list(fam.u)),
        ("U", [sorted(U) for U in fam.U]),
        ("pathological", hyp.pathological), ("c_w_empty", hyp.c_w_empty),
        ("c_in_c3", hyp.c_in_c3), ("theorem_applicable", hyp.theorem_applicable),
        ("notes", hyp.notes),
    ]
    sys.stdout.write(emit_report(fields))
    return EXIT_OK


def cmd_depth(args) -> int:
    inst = load_instance(args.instance, args.char)
    small, index_map = restrict_support(inst)
    dropped = inst.n - small.n
    report = koszul_homology(instance_module(small, args.quotient), small.field)
    pd = report.pd
    fields = [("quotient", args.quotient), ("n", inst.n), ("field", inst.field)]
    if dropped:
        fields.append(("restricted", f"n={small.n} (dropped {dropped} unused variable(s), "
                                     f"depth shifted by +{dropped})"))
    if pd is None:
        fields += [("pd", "none"), ("depth", "inf")]
    else:
        fields += [("pd", pd), ("depth", small.n - pd + dropped)]
    if args.betti:
        triples = [(SqMonomial.from_indices([index_map[k - 1] for k in a]), i, dim)
                   for a, i, dim in report.triples()]
        fields.append(("betti", [f"({a},{i},{dim})" for a, i, dim in triples]))
    sys.stdout.write(emit_report(fields))
    return EXIT_OK


def cmd_sdepth(args) -> int:
    inst = load_instance(args.instance)
    poset = build_poset(inst)
    fields = [("poset_size", len(poset))]
    if args.k is not None:
        dec = sdepth_decision(poset, args.k, args.budget)
        fields += [("k", args.k), ("decision", dec.status), ("nodes", dec.nodes)]
        cert = dec.certificate
        code = EXIT_TIMEOUT if dec.status == "timeout" else EXIT_OK
    else:
        res = sdepth(poset, args.budget)
        if res.exact:
            fields += [("sdepth", res.value)]
            code = EXIT_OK
        else:
            fields += [("sdepth", "timeout"), ("lower_bound", res.value)]
            code = EXIT_TIMEOUT
        cert = res.certificate
    if args.certificate and cert is not None:
        text = dump_partition(cert) + "\n"
        if args.certificate == "-":
            fields.append(("certificate", dump_partition(cert)))
        else:
            Path(args.certificate).write_text(text)
            fields.append(("certificate", args.certificate))
    sys.stdout.write(emit_report(fields))
    return code


def cmd_verify(args) -> int:
    inst = load_instance(args.instance)
    if args.partition:
        if args.k is None:
            raise UsageError("--partition needs --k")
        part = parse_partition(_read(args.partition))
        v = verify_partition(build_poset(inst), part, args.k)
        fields = [
            ("valid_intervals", v.valid_intervals), ("disjoint", v.disjoint),
            ("covering", v.covering), ("value", v.value), ("meets_k", v.meets_k),
            ("ok", v.ok), ("diagnostics", v.diagnostics),
        ]
        sys.stdout.write(emit_report(fields))
        return EXIT_OK if v.ok else EXIT_FAIL
    if args.theorem:
        verdict = corpus.verify_theorem_t(inst)
    else:
        verdict = corpus.verify_lemma(inst, args.lemma, choice=args.choice)
    fields = [("check", verdict.check), ("status", verdict.status), ("detail", verdict.detail)]
    if verdict.dump:
        fields.append(("instance", verdict.dump))
    sys.stdout.write(emit_report(fields))
    return EXIT_FAIL if verdict.failed else EXIT_OK


def cmd_reproduce(args) -> int:
    report = corpus.audit_example(args.example, FieldSpec(args.char), args.budget, strict=False)
    out = [f"example={report.id} field={report.field}\n"]
    for c in report.claims:
        tag = "PASS" if c.ok else ("FAIL" if c.policy == "assert" else "DIFF")
        out.append(f"{tag} [{c.policy}] {c.quantity}: claimed={_short(c.claimed)} "
                   f"computed={_short(c.computed)}\n")
    for note in report.notes:
        out.append(f"note: {note}\n")
    out.append(f"result={'pass' if report.passed else 'fail'}\n")
    sys.stdout.write("".join(out))
    return EXIT_OK if report.passed else EXIT_FAIL


def _short(value) -> str:
    if isinstance(value, (list, tuple, set, frozenset)):
        return "[" + ", ".join(str(v) for v in value) + "]"
    return str(value)


def cmd_search(args) -> int:
    sink = open(args.log, "w") if args.log else sys.stdout
    counts = {"holds": 0, "inapplicable": 0, "counterexample": 0}
    try:
        for rec in corpus.search_question(args.n, args.d, args.r, args.i, args.seeds,
                                          args.sdepth_budget, args.timing, args.mode):
            counts[rec["status"]] += 1
            sink.write(dump_record(rec) + "\n")
            sink.flush()
    finally:
        if sink is not sys.stdout:
            sink.close()
    summary = " ".join(f"{k}={v}" for k, v in counts.items())
    print(f"summary {summary}", file=sys.stderr if sink is sys.stdout else sys.stdout)
    return EXIT_FAIL if counts["counterexample"] else EXIT_OK


def cmd_gen(args) -> int:
    if args.example:
        if args.partition:
            if args.example != "e":
                raise UsageError("a printed partition exists only for example e")
            text = dump_partition(corpus.paper_e_partition())
        else:
            text = dump_instance(corpus.paper_example(args.example, args.char).instance)
    else:
        missing = [f for f in ("n", "d", "r") if getattr(args, f) is None]
        if missing:
            raise UsageError("gen needs --example or all of --n --d --r")
        inst = corpus.random_instance(args.n, args.d, args.r, args.seed, args.mode, args.i,
                                      args.char)
        text = dump_instance(inst)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sqdepth", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="derived sets, gcd family and hypothesis flags")
    p.add_argument("instance")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("depth", help="depth via Koszul homology")
    p.add_argument("instance")
    p.add_argument("--char", type=_prime, default=None, help="override the file's characteristic")
    p.add_argument("--quotient", choices=("I/J", "S/J", "S/I"), default="I/J")
    p.add_argument("--betti", action="store_true", help="list nonzero (a, i, dim) triples")
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("sdepth", help="Stanley depth by exact-cover search")
    p.add_argument("instance")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    p.add_argument("--k", type=int, default=None, help="decide sdepth >= K only")
    p.add_argument("--certificate", metavar="PATH", help="write the partition ('-' to print)")
    p.set_defaults(func=cmd_sdepth)

    p = sub.add_parser("verify", help="check a lemma, the theorem, or a partition")
    p.add_argument("instance")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--lemma", choices=corpus.LEMMA_IDS)
    g.add_argument("--theorem", action="store_true")
    g.add_argument("--partition", metavar="FILE")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--choice", type=_positive, default=None,
                   help="1-based element the lemma quantifies over")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reproduce", help="audit a worked example")
    p.add_argument("--example", required=True, choices=corpus.EXAMPLE_IDS)
    p.add_argument("--char", type=_prime, default=0)
    p.add_argument("--budget", type=_positive, default=10**6)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("search", help="probe the question on random instances")
    p.add_argument("--i", type=_positive, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--d", type=_positive, required=True)
    p.add_argument("--r", type=_positive, required=True)
    p.add_argument("--seeds", type=_seed_range, default=range(0, 10))
    p.add_argument("--mode", choices=corpus.MODES, default="question")
    p.add_argument("--log", metavar="FILE")
    p.add_argument("--sdepth-budget", type=int, default=0)
    p.add_argument("--timing", action="store_true", help="add wall time (breaks byte reproducibility)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("gen", help="write an instance file")
    p.add_argument("--mode", choices=corpus.MODES, default="pathological")
    p.add_argument("--n", type=_positive)
    p.add_argument("--d", type=_positive)
    p.add_argument("--r", type=_positive)
    p.add_argument("--i", type=_positive, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--char", type=_prime, default=0)
    p.add_argument("--example", choices=corpus.EXAMPLE_IDS)
    p.add_argument("--partition", action="store_true", help="with --example e: the printed partition")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InstanceError as exc:
        print(f"error: invalid instance: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except corpus.AuditFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
