"""Command-line front end: ``hardywco {classify,synth,check,spectrum,bbc,verify}``.

Exit codes: 0 success, 1 a check failed, 2 usage or parse error, 3 domain error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from typing import Optional

import numpy as np

from . import scalars as S
from .errors import HardyError
from .mobius import (
    MobiusMap,
    alpha,
    canonical_hyperbolic,
    canonical_parabolic,
    classify,
    denjoy_wolff,
)
from .operators import WcoSpec, _symbol_from_json, finite_section, is_hermitian, is_normal, is_unitary, matrix_to_csv
from .spectrum import (
    bbc_numeric_check,
    bbc_nu,
    bbc_residual_sq,
    compare,
    section_eigenvalues,
    sort_eigenvalues,
    sort_points,
)
from .synthesis import lfs_condition, normal_pair_interior, normal_pair_parabolic, unitary_pair
from .verify import run_all

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# deterministic JSON


def _encode(obj, indent: int, level: int = 0) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return format(x, ".17g") if math.isfinite(x) else "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (complex, np.complexfloating, S.GaussianRational)):
        return _encode(S.to_pair(obj), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        parts = [_encode(v, indent, level + 1) for v in obj]
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(parts) + "]"
        return "[\n" + ",\n".join(pad + p for p in parts) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON with floats written to 17 significant digits."""
    return _encode(obj, 2) + "\n"


# --------------------------------------------------------------------------
# argument parsing helpers


def _scalar(text) -> object:
    if isinstance(text, (list, tuple)):
        return S.from_pair(text)
    try:
        return S.parse_scalar(str(text))
    except ValueError:
        pass
    try:
        return S.from_pair(json.loads(text))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"cannot parse complex scalar {text!r}") from exc


def _load_json(text: str):
    """Inline JSON, or the contents of a file when ``text`` names one."""
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from exc


def parse_map(text: str) -> MobiusMap:
    """``alpha:P``, ``parabolic:T``, ``hyperbolic:R,T``, ``linear:D`` or a JSON coefficient list."""
    kind, sep, rest = text.partition(":")
    if sep and kind in ("alpha", "parabolic", "hyperbolic", "linear"):
        if kind == "alpha":
            return alpha(_scalar(rest))
        if kind == "parabolic":
            return canonical_parabolic(_scalar(rest))
        if kind == "linear":
            return MobiusMap.linear(_scalar(rest))
        r, comma, t = rest.partition(",")
        if not comma:
            raise UsageError("hyperbolic needs R,T")
        return canonical_hyperbolic(_scalar(r), _scalar(t))
    data = _load_json(text)
    if isinstance(data, dict):
        data = data.get("coeffs", data.get("phi", data))
    if not isinstance(data, list) or len(data) != 4:
        raise UsageError("map JSON must be four [re, im] coefficients a, b, c, d")
    try:
        return MobiusMap.from_json(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def parse_spec(text: str) -> WcoSpec:
    data = _load_json(text)
    if not isinstance(data, dict):
        raise UsageError("operator spec must be a JSON object")
    key = "symbol" if "symbol" in data else "phi"
    try:
        if isinstance(data.get(key), str):
            # map shorthand such as "alpha:0.5" for the symbol
            weight = data["weight"] if key == "symbol" else data["psi"]
            return WcoSpec(_symbol_from_json(weight, False), parse_map(data[key]))
        return WcoSpec.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad operator spec: {exc}") from exc


def _spec_arg(args) -> WcoSpec:
    text = args.spec if args.spec is not None else args.inline
    if text is None:
        raise UsageError("an operator spec is required (--spec FILE or inline JSON)")
    return parse_spec(text)


# --------------------------------------------------------------------------
# commands


def cmd_classify(args) -> tuple:
    text = args.map if args.map is not None else args.spec
    if text is None:
        raise UsageError("classify needs a map")
    m = parse_map(text)
    cls = classify(m)
    point = denjoy_wolff(cls)
    deriv = getattr(cls, "derivative", None)
    if cls.name == "Constant":
        deriv = 0
    report = {
        "class": cls.name,
        "denjoy_wolff": None if point is None else S.to_pair(point),
        "derivative": None if deriv is None else S.to_pair(deriv),
        "automorphism": bool(cls.automorphism),
    }
    return report, EXIT_OK


def cmd_synth(args) -> tuple:
    if args.kind == "unitary":
        if args.phi is None:
            raise UsageError("synth unitary needs --phi")
        pair = unitary_pair(parse_map(args.phi), _scalar(args.c))
        rep = is_unitary(pair.wco(), args.N, args.tol)
        check = {"unitary": rep.passed, **rep.to_json()}
    elif args.kind == "normal-interior":
        pair = normal_pair_interior(_scalar(args.p), _scalar(args.delta), _scalar(args.gamma))
        rep = is_normal(pair.wco(), args.N, args.tol)
        check = {"normal": rep.passed, **rep.to_json()}
    else:
        pair = normal_pair_parabolic(_scalar(args.t), _scalar(args.rho))
        rep = is_normal(pair.wco(), args.N, args.tol)
        check = {"normal": rep.passed, "lfs": lfs_condition(pair.symbol), **rep.to_json()}
    out = pair.to_json()
    out["check"] = check
    return out, EXIT_OK if rep.passed else EXIT_FAILED


def cmd_check(args) -> tuple:
    W = _spec_arg(args)
    if args.format == "csv":
        return matrix_to_csv(finite_section(W, args.N)), EXIT_OK
    tester = {"normal": is_normal, "unitary": is_unitary, "hermitian": is_hermitian}[args.test]
    rep = tester(W, args.N, args.tol)
    return rep.to_json(), EXIT_OK if rep.passed else EXIT_FAILED


def cmd_spectrum(args) -> tuple:
    W = _spec_arg(args)
    ev = sort_eigenvalues(section_eigenvalues(W, args.N))
    report = compare(W, args.N, args.tol)
    code = EXIT_FAILED if report["pass"] is False else EXIT_OK
    if args.format == "csv":
        rows = [f"{format(z.real + 0.0, '.17g')},{format(z.imag + 0.0, '.17g')}" for z in ev]
        return "\n".join(rows) + "\n", code
    report["eigenvalues"] = [S.to_pair(z) for z in sort_points(ev)]
    return report, code


def cmd_bbc(args) -> tuple:
    N = args.N
    t = _scalar(args.t)
    residual = bbc_numeric_check(t, args.s, args.lam, N)
    rho = bbc_residual_sq(t, args.s)
    gap = abs(residual - math.sqrt(rho))
    report = {
        "t": S.to_pair(t), "s": args.s, "lambda": args.lam, "N": N,
        "nu": S.to_pair(bbc_nu(t)),
        "rho": rho, "closed_form": math.sqrt(rho), "residual": residual, "gap": gap,
        "pass": gap < 5e-3,
    }
    return report, EXIT_OK if report["pass"] else EXIT_FAILED


def _verify_table(summary: dict) -> str:
    lines = [f"{'check':<18} result"]
    for row in summary["theorems"] + summary["invariants"]:
        lines.append(f"{row['name']:<18} {'pass' if row['pass'] else 'FAIL'}")
    lines.append(f"{summary['passed']}/{summary['total']} theorem checks passed")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> tuple:
    summary = run_all(seed=args.seed, N=args.N, tol=args.tol, cases=args.cases)
    code = EXIT_OK if summary["ok"] else EXIT_FAILED
    if args.format == "json":
        return summary, code
    return _verify_table(summary), code


# --------------------------------------------------------------------------
# parser


def _positive_n(text: str) -> int:
    try:
        n = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid N {text!r}") from exc
    if not 8 <= n <= 512:
        raise argparse.ArgumentTypeError("N must lie in [8, 512]")
    return n


def _tolerance(text: str) -> float:
    try:
        x = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid tolerance {text!r}") from exc
    if not 1e-14 <= x <= 1e-2:
        raise argparse.ArgumentTypeError("tol must lie in [1e-14, 1e-2]")
    return x


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--N", type=_positive_n, default=None,
                        help="section size, 8..512 (default 64; 256 for bbc)")
    common.add_argument("--tol", type=_tolerance, default=1e-8, help="tolerance (default 1e-8)")
    common.add_argument("--format", choices=("json", "csv"), default=None,
                        help="output format (default json; a text table for verify)")
    common.add_argument("--out", help="write output to FILE instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised sweeps")
    common.add_argument("--spec", help="operator/map JSON file or inline JSON")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="hardywco",
        description="Weighted composition operators with linear fractional symbols on H^2.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify a linear fractional selfmap")
    p.add_argument("map", nargs="?", help="coefficient JSON or alpha:P | parabolic:T | hyperbolic:R,T")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("synth", parents=[common], help="build a unitary or normal pair")
    p.add_argument("kind", choices=("unitary", "normal-interior", "normal-parabolic"))
    p.add_argument("--phi", help="automorphism for 'unitary'")
    p.add_argument("--c", default="1", help="unimodular constant (unitary)")
    p.add_argument("--p", default="0", help="interior fixed point (normal-interior)")
    p.add_argument("--delta", default="0.5", help="derivative at p (normal-interior)")
    p.add_argument("--gamma", default="1", help="weight value at p (normal-interior)")
    p.add_argument("--t", default="1", help="translation parameter (normal-parabolic)")
    p.add_argument("--rho", default="1", help="weight scale (normal-parabolic)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("check", parents=[common], help="normality/unitarity/Hermitian test")
    p.add_argument("inline", nargs="?", help="inline operator JSON")
    p.add_argument("--test", choices=("normal", "unitary", "hermitian"), default="normal")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("spectrum", parents=[common], help="section eigenvalues and prediction")
    p.add_argument("inline", nargs="?", help="inline operator JSON")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("bbc", parents=[common], help="parabolic approximate-eigenvector residual")
    p.add_argument("--t", default="2i", help="purely imaginary translation")
    p.add_argument("--s", type=float, default=1.2)
    p.add_argument("--lam", type=float, default=-1.0)
    p.set_defaults(func=cmd_bbc)

    p = sub.add_parser("verify", parents=[common], help="run the theorem battery")
    p.add_argument("--cases", type=int, default=1000, help="cases per invariant suite")
    p.set_defaults(func=cmd_verify)
    return parser


def _emit(result, out: Optional[str]) -> None:
    text = result if isinstance(result, str) else dumps(result)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "verify" and args.format == "csv":
        parser.error("verify supports --format json only")
    if args.N is None:
        args.N = 256 if args.command == "bbc" else 64
    if args.format is None:
        args.format = "text" if args.command == "verify" else "json"
    try:
        result, code = args.func(args)
    except UsageError as exc:
        print(f"hardywco: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HardyError as exc:
        print(f"hardywco: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    _emit(result, args.out)
    return code


def main_entry() -> None:
    sys.exit(main())
