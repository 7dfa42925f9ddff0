"""Command-line driver: check files, evaluate terms, export skeletons.

Exit codes: 0 all checks pass, 1 some check failed (witnesses in the report),
2 type/signature error, 3 parse error.  Reports are emitted in directive
order, as JSON lines or human text; identical (file, config) pairs produce
byte-identical JSON output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .checks import THEOREM_SUITES, CheckReport, run_theorem_suite
from .dsl import ParseError, Program, parse, resolve
from .objects import SignatureError, obj_to_str
from .semantics import (
    check_eq,
    eval_term,
    matrix_to_json,
    random_interpretation,
)
from .skeletons import StructuralError, to_dot
from .terms import HoptTypeError, term_to_str

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_TYPE_ERROR = 2
EXIT_PARSE_ERROR = 3

DEFAULT_MAX_ENTRY = 9


@dataclass
class RunConfig:
    mode: str = "causal"
    seed: int = 0
    max_dim: int = 4
    output: str = "text"  # "json" | "text"
    dot_out: str | None = None


def _default_seed() -> int:
    env = os.environ.get("HOPT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            pass
    return 0


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hopt", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--mode", choices=["causal", "full"], default="causal")
        p.add_argument("--seed", type=int, default=None,
                       help="default seed (HOPT_SEED env var if unset)")
        p.add_argument("--max-dim", type=int, default=4)
        p.add_argument("--json", action="store_true", help="JSON-lines output")

    p_check = sub.add_parser("check", help="run a file's check directives")
    p_check.add_argument("file")
    common(p_check)

    p_eval = sub.add_parser("eval", help="evaluate a let-bound term to a matrix")
    p_eval.add_argument("file")
    p_eval.add_argument("--term", required=True)
    common(p_eval)

    p_dot = sub.add_parser("export-dot", help="export skeletons as Graphviz dot")
    p_dot.add_argument("file")
    p_dot.add_argument("--skeleton", default=None, help="export just this skeleton")
    p_dot.add_argument("--dot-out", default=None, help="write to a path instead of stdout")
    common(p_dot)

    p_list = sub.add_parser("list-theorems", help="list built-in theorem suites")
    p_list.add_argument("--json", action="store_true")
    return ap


def _load(path: str) -> Program:
    with open(path, "r", encoding="utf-8") as fh:
        src = fh.read()
    return resolve(parse(src))


def _emit(report: CheckReport, cfg: RunConfig, out) -> None:
    if cfg.output == "json":
        out.write(json.dumps(report.to_json_obj(), sort_keys=True,
                             separators=(",", ":")) + "\n")
    else:
        mark = {"pass": "PASS", "fail": "FAIL", "inapplicable": "SKIP"}[report.verdict]
        extra = ""
        if report.verdict == "fail" and report.witness is not None:
            extra = " (witness in JSON mode)"
        out.write(f"{mark} {report.name}{extra}\n")


def run_directives(program: Program, cfg: RunConfig, out) -> int:
    any_fail = False
    eq_index = 0
    for directive in program.directives:
        if directive[0] == "check_eq":
            _, left, right = directive
            interp = random_interpretation(program.sig, cfg.seed,
                                           max_entry=DEFAULT_MAX_ENTRY, mode=cfg.mode)
            equal = check_eq(left, right, interp)
            report = CheckReport(
                name=f"check_eq#{eq_index}",
                verdict="pass" if equal else "fail",
                witness=None if equal else {
                    "left": term_to_str(left.term),
                    "right": term_to_str(right.term),
                },
                details={"dom": obj_to_str(left.dom), "cod": obj_to_str(left.cod),
                         "seed": cfg.seed, "mode": cfg.mode},
            )
            eq_index += 1
            _emit(report, cfg, out)
            any_fail = any_fail or not equal
        else:
            _, name, dims, seeds, samples = directive
            if name not in THEOREM_SUITES:
                raise HoptTypeError(f"unknown theorem suite {name!r};"
                                    f" see `hopt list-theorems`")
            dims = tuple(dims) if dims else (2, 2)
            for d in dims:
                if d < 1 or d > cfg.max_dim:
                    raise HoptTypeError(
                        f"dimension {d} outside 1..{cfg.max_dim} (see --max-dim)")
            seed_list = list(seeds) if seeds else [cfg.seed]
            for seed in seed_list:
                for report in run_theorem_suite(name, dims, seed, samples, cfg.mode):
                    _emit(report, cfg, out)
                    any_fail = any_fail or report.verdict == "fail"
    return EXIT_CHECK_FAILED if any_fail else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    ap = build_arg_parser()
    args = ap.parse_args(argv)
    out = sys.stdout

    if args.command == "list-theorems":
        names = sorted(THEOREM_SUITES)
        if args.json:
            payload = {n: {"operation": THEOREM_SUITES[n].operation,
                           "doc": THEOREM_SUITES[n].doc} for n in names}
            out.write(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")
        else:
            for n in names:
                out.write(f"{n}  ->  {THEOREM_SUITES[n].operation}\n")
        return EXIT_OK

    cfg = RunConfig(
        mode=args.mode,
        seed=args.seed if args.seed is not None else _default_seed(),
        max_dim=args.max_dim,
        output="json" if getattr(args, "json", False) else "text",
        dot_out=getattr(args, "dot_out", None),
    )

    try:
        program = _load(args.file)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE_ERROR
    except (HoptTypeError, SignatureError, StructuralError) as exc:
        sys.stderr.write(f"type error: {exc}\n")
        return EXIT_TYPE_ERROR
    except OSError as exc:
        sys.stderr.write(f"cannot read {args.file}: {exc}\n")
        return EXIT_TYPE_ERROR

    try:
        if args.command == "check":
            return run_directives(program, cfg, out)
        if args.command == "eval":
            if args.term not in program.term_defs:
                sys.stderr.write(f"type error: no term named {args.term!r}\n")
                return EXIT_TYPE_ERROR
            interp = random_interpretation(program.sig, cfg.seed,
                                           max_entry=DEFAULT_MAX_ENTRY, mode=cfg.mode)
            mat = eval_term(program.term_defs[args.term], interp)
            out.write(json.dumps(matrix_to_json(mat), sort_keys=True,
                                 separators=(",", ":")) + "\n")
            return EXIT_OK
        if args.command == "export-dot":
            names = [args.skeleton] if args.skeleton else sorted(program.skeletons)
            chunks = []
            for name in names:
                if name not in program.skeletons:
                    sys.stderr.write(f"type error: no skeleton named {name!r}\n")
                    return EXIT_TYPE_ERROR
                chunks.append(f"// skeleton {name}\n" + to_dot(program.skeletons[name]))
            text = "".join(chunks)
            if cfg.dot_out:
                with open(cfg.dot_out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                out.write(text)
            return EXIT_OK
    except (HoptTypeError, SignatureError, StructuralError) as exc:
        sys.stderr.write(f"type error: {exc}\n")
        return EXIT_TYPE_ERROR
    raise AssertionError("unreachable command")


if __name__ == "__main__":
    sys.exit(main())
