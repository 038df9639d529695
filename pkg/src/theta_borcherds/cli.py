"""Command-line interface: ``theta-borcherds <command> ...``.

Exit codes: 0 verified, 1 verification mismatch, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import List, Optional

from . import kernels
from .borcherds import (
    borcherds_input_FA,
    exponent_sequence,
    lambert_square,
    lift_exponents,
    lift_exponents_direct,
    product_plusminus,
    vector_lift_exponents,
)
from .checks import run_all
from .cmroots import cm_representatives, hermann_candidates, hermann_roots, verify_root
from .lattice import GramMatrix, QuadForm, hermitian_to_gram, named_lattice, parse_form, theta_series, NAMED_LATTICES
from .modforms import named_series
from .multivariate import compare_polynomials, psi_m_truncated, theta_constant_m_truncated
from .qseries import QSeries, pow_binomial_product


class UsageError(Exception):
    pass


def threads() -> int:
    """Parallelism cap from ``THETA_BORCHERDS_THREADS``; the kernels run serially."""
    raw = os.environ.get("THETA_BORCHERDS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"THETA_BORCHERDS_THREADS must be an integer, got {raw!r}") from None


def _form(text: str) -> QuadForm:
    try:
        return parse_form(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _lattice(text: str):
    """A named lattice, a JSON Gram file, or a form spec."""
    if text in NAMED_LATTICES:
        return named_lattice(text), text
    p = Path(text)
    if p.suffix == ".json" or p.is_file():
        try:
            return GramMatrix.from_json(p.read_text()), str(p)
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read Gram file {text}: {exc}") from None
    A = _form(text)
    return hermitian_to_gram(A), str(A)


def _first_difference(a: QSeries, b: QSeries):
    a, b = a._common(b)
    for k in range(min(a.trunc, b.trunc)):
        if a[k] != b[k]:
            return {"key": k, "lhs": str(a[k]), "rhs": str(b[k])}
    return None


def _series_text(s: QSeries) -> str:
    return s.format()


class Output:
    def __init__(self, fmt: str):
        self.fmt = fmt

    def emit(self, payload, text: str):
        if self.fmt == "json":
            print(json.dumps(payload, indent=2, sort_keys=False))
        else:
            print(text)


# -- commands ----------------------------------------------------------------------


def cmd_theta(args, out: Output) -> int:
    G, label = _lattice(args.spec)
    s = theta_series(G, args.trunc)
    out.emit({"command": "theta", "input": label, "series": s.to_json()}, _series_text(s))
    return 0


def cmd_series(args, out: Output) -> int:
    try:
        s = named_series(args.id, args.trunc)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.emit({"command": "series", "id": args.id, "series": s.to_json()}, _series_text(s))
    return 0


def cmd_exponents(args, out: Output) -> int:
    A = _form(args.spec)
    d = exponent_sequence(A, args.n + 1)
    out.emit(
        {"command": "exponents", "form": str(A), "exponents": [[n, str(v)] for n, v in d.items()]},
        " ".join(str(v) for v in d.values()),
    )
    return 0


def cmd_product_verify(args, out: Output) -> int:
    A = _form(args.spec)
    prod = product_plusminus(A, args.trunc)
    theta = theta_series(A if A.m == 1 else hermitian_to_gram(A), args.trunc)
    diff = _first_difference(prod, theta)
    ok = diff is None
    out.emit(
        {"command": "product-verify", "form": str(A), "trunc": args.trunc, "match": ok, "first_difference": diff},
        f"{'match' if ok else 'MISMATCH'}: product vs theta for {A} to q^{args.trunc}"
        + ("" if ok else f" (first difference at q^{diff['key']}: {diff['lhs']} vs {diff['rhs']})"),
    )
    return 0 if ok else 1


def cmd_borcherds_input(args, out: Output) -> int:
    A = _form(args.spec)
    fa = borcherds_input_FA(A, None, tmax=args.trunc - 1)
    payload = {"command": "borcherds-input", "form": str(A)}
    payload.update(fa.to_json())
    lines = [f"h = {h}: {s.format()}" for h, s in sorted(fa.components.items())]
    lines.append(f"scalarized: {fa.scalarized().format()}")
    out.emit(payload, "\n".join(lines))
    return 0


def cmd_lift_verify(args, out: Output) -> int:
    A = _form(args.spec)
    T = args.trunc
    absD = -A.D
    fa = borcherds_input_FA(A, None, tmax=(T - 1) ** 2)
    vec = vector_lift_exponents(fa, T)
    direct = lift_exponents_direct(A, T)
    theta = theta_series(A if A.m == 1 else hermitian_to_gram(A), T)
    prod = pow_binomial_product(vec, -1, T)
    diff = _first_difference(prod, theta)
    ok = diff is None and vec == direct
    payload = {
        "command": "lift-verify",
        "form": str(A),
        "trunc": T,
        "match": ok,
        "exponents": [[n, str(v)] for n, v in vec.items()],
        "direct_exponents_agree": vec == direct,
        "first_difference": diff,
    }
    text = [f"{'match' if ok else 'MISMATCH'}: lift of F_A vs theta for {A} to q^{T}"]
    if A.m == 1:
        sc = dict(fa.scalarized().items())
        try:
            e = lift_exponents(sc, absD, T)
            scal_ok = pow_binomial_product(e, -1, T) == theta
        except ValueError:
            scal_ok = False
        payload["scalar_halving_match"] = scal_ok
        text.append(f"scalar input with halving modulus {absD}: {'match' if scal_ok else 'no match'}")
    text.append("exponents: " + " ".join(str(v) for v in list(vec.values())[:10]) + " ...")
    out.emit(payload, "\n".join(text))
    return 0 if ok else 1


def cmd_roots(args, out: Output) -> int:
    A = _form(args.spec)
    if A.m != 1:
        raise UsageError("roots are computed for binary forms")
    result = []
    ok = True
    for cls in hermann_roots(A):
        rep = verify_root(A, cls, T=args.trunc, tol=args.tol)
        ok &= rep.passed
        result.append({
            "N": cls.N,
            "d": cls.d,
            "h": cls.h,
            "representatives": [list(r) for r in cm_representatives(cls, 3)],
            "numeric_check": rep.to_json(),
        })
    text = [f"candidates for {A}:"]
    for c in hermann_candidates(A):
        text.append(f"  (alpha, beta, gamma) = ({c.alpha}, {c.beta}, {c.gamma})  h = {c.h}  d = {c.d}")
    text.append("roots:" if result else "roots: none")
    for r in result:
        mods = ", ".join(f"{p['modulus']:.2e}" for p in r["numeric_check"]["points"])
        text.append(f"  N = {r['N']}, d = {r['d']}, h = {r['h']}  |theta| = {mods}")
    out.emit(result, "\n".join(text))
    return 0 if ok else 1


def cmd_multivariate(args, out: Output) -> int:
    if args.m not in (1, 2, 3):
        raise UsageError("--m must be 1, 2 or 3")
    if args.bound < 1:
        raise UsageError("--bound must be positive")
    th = theta_constant_m_truncated(args.m, args.bound)
    ps = psi_m_truncated(args.m, args.bound)
    diffs = compare_polynomials(th, ps)
    ok = not diffs
    out.emit(
        {
            "command": "multivariate",
            "m": args.m,
            "bound": args.bound,
            "match": ok,
            "monomials": len(th),
            "differences": [[list(k), str(a), str(b)] for k, a, b in diffs[:20]],
        },
        f"{'match' if ok else 'MISMATCH'}: Theta_{args.m} vs Psi_{args.m} at grading {2 * args.bound}, "
        f"{len(th)} monomials" + ("" if ok else f", {len(diffs)} differ"),
    )
    return 0 if ok else 1


def cmd_checks(args, out: Output) -> int:
    results = run_all(args.trunc)
    ok = all(r["ok"] for r in results)
    text = [f"{'ok ' if r['ok'] else 'BAD'}  {r['name']}" for r in results]
    out.emit({"command": "checks", "passed": ok, "results": results}, "\n".join(text))
    return 0 if ok else 1


def cmd_lambert(args, out: Output) -> int:
    A = _form(args.spec)
    if A.m != 1:
        raise UsageError("the Lambert identity is for binary forms")
    lam = lambert_square(A, args.trunc)
    th = theta_series(A, args.trunc)
    diff = _first_difference(lam, th * th)
    ok = diff is None
    out.emit(
        {"command": "lambert", "form": str(A), "trunc": args.trunc, "match": ok, "first_difference": diff,
         "series": lam.to_json()},
        f"{'match' if ok else 'MISMATCH'}: Lambert series vs theta^2 for {A} to q^{args.trunc}",
    )
    return 0 if ok else 1


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    p = argparse.ArgumentParser(
        prog="theta-borcherds",
        description="Exact q-expansion checks of theta series and their Borcherds products.",
        epilog="Exit codes: 0 verified, 1 verification mismatch, 2 usage error.",
    )
    p.add_argument("--version", action="version", version="theta-borcherds 0.1.0 (" + kernels.BACKEND + " kernels)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, *, spec=True, trunc=40):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if spec:
            sp.add_argument("spec", help="form 'a,b1[,b2[,b3]],c'" + (" or lattice name/JSON file" if name == "theta" else ""))
        if trunc is not None:
            sp.add_argument("--trunc", type=int, default=trunc)
        sp.set_defaults(func=func)
        return sp

    add("theta", cmd_theta, "theta series of a form or lattice")
    s = add("series", cmd_series, "named q-series", spec=False)
    s.add_argument("id", help="theta, inv_theta, eta:2,1;4,-2, E2, E4, E6, delta, j")
    e = add("exponents", cmd_exponents, "product exponents d_A(1..n)", trunc=None)
    e.add_argument("--n", type=int, default=10)
    add("product-verify", cmd_product_verify, "product over (1+q^n)/(1-q^n) vs theta series")
    add("borcherds-input", cmd_borcherds_input, "components and scalarization of F_A")
    add("lift-verify", cmd_lift_verify, "lift of F_A vs theta series")
    r = add("roots", cmd_roots, "CM roots with numeric check", trunc=200)
    r.add_argument("--tol", type=float, default=1e-6)
    mv = add("multivariate", cmd_multivariate, "Theta_m vs Psi_m", spec=False, trunc=None)
    mv.add_argument("--m", type=int, default=1)
    mv.add_argument("--bound", type=int, default=6)
    c = add("checks", cmd_checks, "battery of Borcherds-product criteria", spec=False)
    c.add_argument("action", nargs="?", default="run-all", choices=("run-all",))
    add("lambert", cmd_lambert, "Lambert series vs theta squared")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for flag in ("trunc", "n"):
        v = getattr(args, flag, None)
        if v is not None and v < 1:
            parser.error(f"--{flag} must be positive")
    try:
        threads()
        return args.func(args, Output(args.format))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
