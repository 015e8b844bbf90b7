"""Command-line front end: ``lvmb COMMAND INPUT [options]``.

INPUT is a JSON file or the name of a built-in example. Exit codes: 0 LVM or
harness pass, 2 LVMB but not LVM, 3 not LVMB, 4 harness failure, 1 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
import time
from pathlib import Path

from .arith import I, GaussianRational
from .lp import certificate_errors
from .moment import LVM, LVMB_NOT_LVM, NOT_LVMB, LVMBData, check_lvmb, classify, verify_convexity
from .polytopes import HPolytope, normal_fan

EXIT_OK, EXIT_INPUT, EXIT_NOT_LVM, EXIT_NOT_LVMB, EXIT_HARNESS = 0, 1, 2, 3, 4
VERDICT_EXIT = {LVM: EXIT_OK, LVMB_NOT_LVM: EXIT_NOT_LVM, NOT_LVMB: EXIT_NOT_LVMB}

# A complete simplicial fan in R^3 that is not polytopal: the cone over a
# triangle (rays 3, 4, 5) sitting inside the triangle of rays 0, 1, 2,
# joined to it with a twist, closed off by the ray 6 below. Certified: the
# support LP optimum is exactly 0 and t >= 1 has an exact Farkas certificate.
NONPOLYTOPAL_FAN = {
    "ambient_dim": 3,
    "rays": [[1, 0, 0], [0, 1, 0], [0, 0, 1],
             [1, 1, 1], [1, 3, 2], [1, 2, 3], [-1, -1, -1]],
    "cones": [[3, 4, 5], [0, 1, 6], [1, 2, 6], [0, 2, 6],
              [0, 1, 3], [1, 3, 4], [1, 2, 4], [2, 4, 5], [0, 2, 5], [0, 3, 5]],
}


def _h_json(basis) -> list:
    return [[GaussianRational.coerce(z).to_json() for z in a] for a in basis]


def builtin_names() -> list[str]:
    return ["projective-space-m", "hopf", "calabi-eckmann", "nonpolytopal-fan", "bad-h"]


def builtin_example(name: str) -> dict:
    """Input data of a built-in example, as it would appear in a JSON file.

    ``projective-space-m`` stands for projective-space-2, -3, ...
    """
    mt = re.fullmatch(r"projective-space-(\d+)", name)
    if mt:
        m = int(mt.group(1))
        if m < 1:
            raise KeyError(name)
        faces = [[j for j in range(m + 1) if j != i] for i in range(m + 1)]
        return {"m": m, "maximal_faces": faces, "h_basis": []}
    if name == "hopf":
        return {"m": 2, "maximal_faces": [[1], [2]],
                "h_basis": _h_json([[1, 1 + I]])}
    if name == "calabi-eckmann":
        return {"m": 4, "maximal_faces": [[1, 3], [1, 4], [2, 3], [2, 4]],
                "h_basis": _h_json([[1, 1, I, I]])}
    if name == "nonpolytopal-fan":
        return {"fan": json.loads(json.dumps(NONPOLYTOPAL_FAN)), "h_basis": []}
    if name == "bad-h":
        return {"m": 2, "maximal_faces": [[1], [2]],
                "h_basis": _h_json([[1, 0], [I, 0]])}
    raise KeyError(name)


class InputError(Exception):
    pass


def load_input(source: str):
    """Parsed JSON of a file path, falling back to a built-in example name."""
    path = Path(source)
    if path.exists():
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        except OSError as exc:
            raise InputError(f"{source}: {exc}") from None
    try:
        return builtin_example(source)
    except KeyError:
        raise InputError(f"{source}: no such file and not a built-in example "
                         f"(available: {', '.join(builtin_names())})") from None


def _data(obj, source: str) -> LVMBData:
    try:
        return LVMBData.from_json(obj)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{source}: {exc}") from None


def _cmd_check(args, obj) -> tuple[int, dict]:
    rep = check_lvmb(_data(obj, args.input))
    return (EXIT_OK if rep.ok else EXIT_NOT_LVMB), {"lvmb": rep.to_json()}


def _classification(args, obj) -> tuple[int, dict, object]:
    rep = classify(_data(obj, args.input))
    body = rep.to_json()
    if rep.support is not None and rep.support.farkas is not None:
        errs = certificate_errors(rep.support.farkas_problem, rep.support.farkas)
        body["support_lp"]["farkas_verified"] = not errs
    return VERDICT_EXIT[rep.verdict], body, rep


def _cmd_classify(args, obj):
    code, body, _ = _classification(args, obj)
    return code, body


def _cmd_polytope(args, obj):
    code, body, rep = _classification(args, obj)
    out = {"verdict": rep.verdict}
    if rep.polytope is not None:
        out["polytope"] = body["polytope"]
        out["coordinates"] = ("quotient coordinates: the columns of g_J's echelon "
                              "form that are not pivots")
        out["q"] = body["lvmb"]["quotient"]["q"]
    return code, out


def _cmd_normal_fan(args, obj):
    if isinstance(obj, dict) and "normals" in obj:
        try:
            P = HPolytope.from_json(obj)
        except (ValueError, TypeError) as exc:
            raise InputError(f"{args.input}: {exc}") from None
        try:
            return EXIT_OK, {"normal_fan": normal_fan(P).to_json()}
        except ValueError as exc:
            raise InputError(f"{args.input}: {exc}") from None
    code, body, rep = _classification(args, obj)
    out = {"verdict": rep.verdict}
    if rep.polytope is not None:
        out["normal_fan"] = normal_fan(rep.polytope).to_json()
        out["quotient_fan"] = rep.quotient_fan.to_json()
    return code, out


def _cmd_verify(args, obj):
    code, body, rep = _classification(args, obj)
    out = {"verdict": rep.verdict}
    if rep.verdict != LVM:
        return code, out
    harness = verify_convexity(rep, args.samples, args.seed, args.tol)
    out["polytope"] = body["polytope"]
    out["harness"] = harness.to_json()
    return (EXIT_OK if harness.passed else EXIT_HARNESS), out


def _cmd_example(args, obj):
    return EXIT_OK, obj


COMMANDS = {
    "check": _cmd_check,
    "classify": _cmd_classify,
    "polytope": _cmd_polytope,
    "normal-fan": _cmd_normal_fan,
    "verify-convexity": _cmd_verify,
    "example": _cmd_example,
}


def _flatten(obj, prefix="") -> list[str]:
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            lines += _flatten(obj[k], f"{prefix}.{k}" if prefix else k)
        return lines
    if isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        lines = []
        for i, x in enumerate(obj):
            lines += _flatten(x, f"{prefix}[{i}]")
        return lines or [f"{prefix}: []"]
    if isinstance(obj, list):
        return [f"{prefix}: [{', '.join(map(_scalar, obj))}]"]
    return [f"{prefix}: {_scalar(obj)}"]


def _scalar(x) -> str:
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    return "\n".join(_flatten(report)) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lvmb", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("input", help="JSON file, or a built-in example name "
                                  f"({', '.join(builtin_names())})")
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=float, default=1e-9)
    ap.add_argument("--format", choices=["text", "json"], default="text")
    ap.add_argument("--output", help="write the report here instead of stdout")
    ap.add_argument("--timings", action="store_true",
                    help="include wall-clock runtimes (breaks byte-identical output)")
    return ap


def _setup_logging():
    level = os.environ.get("LVMB_LOG", "WARNING").upper()
    if level.isdigit():
        level = int(level)
    elif not isinstance(logging.getLevelName(level), int):
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def run(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    report = {"command": args.command, "input": args.input}
    if args.command == "verify-convexity":
        report.update(samples=args.samples, seed=args.seed, tol=args.tol)
    start = time.perf_counter()
    try:
        obj = load_input(args.input)
        code, body = COMMANDS[args.command](args, obj)
        report.update(body)
    except InputError as exc:
        code = EXIT_INPUT
        report["error"] = str(exc)
        print(f"lvmb: {exc}", file=sys.stderr)
    report["exit_code"] = code
    if args.timings:
        report["runtime_seconds"] = round(time.perf_counter() - start, 6)
    text = render(report, args.format)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
