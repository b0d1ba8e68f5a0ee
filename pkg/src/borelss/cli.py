"""Command-line front end.

Exit codes: 0 success, 1 verification or internal-check failure, 2 bad
configuration (including a missing assumption flag on the exceptional
cases, where the triviality of the induced action is a hypothesis and
not a theorem).
"""

from __future__ import annotations

import argparse
import sys

from .algebra import FiberPresentation
from .driver import replay, search_cases
from .local import (SkeletonInapplicable, exceptional_case, local_e2_column,
                    nontrivial_action_obstruction, probe_shapes, twisted_rows)
from .report import build_blocks, render_json, render_text, to_document
from .verify import sweep_field

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2


class ConfigError(Exception):
    pass


def _fiber(args) -> FiberPresentation:
    return FiberPresentation(args.field, args.m, args.n)


def _guard(args) -> None:
    """The exceptional (field, m, n) triples need an explicit assumption."""
    if args.n != 4:
        return  # exploratory territory, no theorem to guard
    if exceptional_case(_fiber(args)) and not (args.assume_trivial_action or
                                               args.integral_type):
        raise ConfigError(
            f"(field={args.field}, m={args.m}) is an exceptional case: pass "
            "--assume-trivial-action or --integral-type to assert the hypothesis")


def _config_dict(args, command: str) -> dict:
    return {
        "command": command,
        "field": args.field,
        "m": args.m,
        "n": args.n,
        "assume_trivial_action": bool(getattr(args, "assume_trivial_action", False)),
        "integral_type": bool(getattr(args, "integral_type", False)),
        "format": args.format,
        "exploratory": args.n != 4,
    }


def _emit(args, doc: dict) -> None:
    out = render_json(doc) if args.format == "json" else render_text(doc)
    sys.stdout.write(out)


def cmd_enumerate(args) -> int:
    _guard(args)
    fiber = _fiber(args)
    result = search_cases(fiber, k_window=args.k_window)
    blocks = build_blocks(fiber, result)
    doc = to_document(_config_dict(args, "enumerate"), blocks, pruned=result.pruned)
    _emit(args, doc)
    return EXIT_OK


def cmd_verify(args) -> int:
    _guard(args)
    fiber = _fiber(args)
    if fiber.n != 4:
        raise ConfigError("verify reproduces the n=4 theorems; use n = 4")
    result = search_cases(fiber, k_window=args.k_window)
    records = sweep_field(fiber.field_tag, fiber.m, result.scenarios)
    blocks = build_blocks(fiber, result, records)
    failures = [f"{r.family_id} vs {r.case_id}: {f.check} ({_short(f)})"
                for r in records for f in r.failures]
    summary = {
        "records": len(records),
        "params_checked": sum(r.params_checked for r in records),
        "failures": len(failures),
        "failing": failures,
    }
    doc = to_document(_config_dict(args, "verify"), blocks,
                      extra={"verify_summary": summary})
    _emit(args, doc)
    return EXIT_OK if not failures else EXIT_VERIFY


def _short(failure) -> str:
    from .report import _params_str
    return _params_str(failure.params)


def cmd_indices(args) -> int:
    _guard(args)
    fiber = _fiber(args)
    result = search_cases(fiber, k_window=args.k_window)
    blocks = build_blocks(fiber, result)
    doc = to_document(_config_dict(args, "indices"), blocks)
    _emit(args, doc)
    return EXIT_OK


def cmd_local_action(args) -> int:
    fiber = _fiber(args)
    rows = twisted_rows(fiber)
    entries = []
    for act, is_candidate in probe_shapes(fiber):
        name = "identity" if act.is_identity else \
            ("a->a+b" if act.ga != frozenset({(1, 0)}) else "b->a^s+b")
        probe_rows = rows or [fiber.n]
        cols = [{"l": l, "k0": local_e2_column(act, l).at_zero,
                 "kpos": local_e2_column(act, l).at_positive} for l in probe_rows]
        if act.is_identity:
            verdict = "trivial action, simple coefficients"
        else:
            try:
                obs = nontrivial_action_obstruction(act)
                verdict = f"{obs.verdict} ({obs.mechanism})"
            except SkeletonInapplicable as exc:
                verdict = f"no verdict: {exc}"
        entries.append({"name": name, "candidate": is_candidate,
                        "columns": cols, "verdict": verdict})
    doc = to_document(_config_dict(args, "local-action"), [],
                      extra={"local_action": {"candidates": entries,
                                              "twisted_rows": rows}})
    _emit(args, doc)
    return EXIT_OK


def cmd_dump_page(args) -> int:
    _guard(args)
    fiber = _fiber(args)
    result = search_cases(fiber, k_window=args.k_window)
    matches = [s for s in result.scenarios if s.case_id == args.case]
    if not matches:
        known = sorted({s.case_id for s in result.scenarios})
        raise ConfigError(f"no scenario {args.case!r}; known: {known}")
    page = replay(fiber, matches[0].decisions, r_target=args.r)
    sys.stdout.write(page.dump(k_max=args.kmax))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="borelss",
        description="mod-2 spectral sequence scenarios for free involutions on "
                    "projective-space x sphere cohomology")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fiber=True):
        if fiber:
            p.add_argument("--field", required=True, choices=("R", "C", "H"))
            p.add_argument("--m", required=True, type=int)
            p.add_argument("--n", type=int, default=4)
            p.add_argument("--assume-trivial-action", action="store_true")
            p.add_argument("--integral-type", action="store_true")
            p.add_argument("--k-window", type=int, default=None)
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("enumerate", help="list admissible terminal scenarios")
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="sweep presentation families against scenarios")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("indices", help="co-index / spectral index per scenario")
    common(p)
    p.set_defaults(func=cmd_indices)

    p = sub.add_parser("local-action", help="induced-action candidates and verdicts")
    common(p)
    p.set_defaults(func=cmd_local_action)

    p = sub.add_parser("dump-page", help="dump one page of one scenario")
    common(p)
    p.add_argument("--case", required=True)
    p.add_argument("--r", required=True, type=int)
    p.add_argument("--kmax", type=int, default=8)
    p.set_defaults(func=cmd_dump_page)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, AssertionError) as exc:
        print(f"internal check failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
