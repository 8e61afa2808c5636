"""Command-line front end: ``wvnjacobi {bands,cfunc,embed,verify,sweep}``.

Exit status is 0 on success, 2 when the mathematics rules the request out
(lambda outside the bands, a zero of C, ...) and 1 for bad input or I/O.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .bands import band_structure
from .cfunction import c_exact, c_value, c_zeros_in_bands
from .errors import DomainError, WvnError
from .operator import load_operator, make_operator
from .verify import TridiagSection, recurrence_residual, section_residual, verify_sequences
from .wvn import WvnParams, q_asymptotic_params, wvn_construct


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for domain errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _fmt(x: float) -> str:
    return "%.17g" % (x + 0.0)  # no "-0"


def _dump_json(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_grid(text: str) -> np.ndarray:
    try:
        lo, hi, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"--grid expects LO:HI:STEP, got {text!r}") from None
    if step <= 0 or hi < lo:
        raise UsageError("--grid needs LO <= HI and STEP > 0")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"{args.command} requires --{name.replace('_', '-')}")


def _params(args) -> WvnParams:
    return WvnParams(args.lam, alpha=args.alpha, N=args.n, tail_tol=args.tail_tol, q1=args.q1, q2=args.q2)


def cmd_bands(args) -> None:
    _need(args, "operator")
    _dump_json(band_structure(load_operator(args.operator)).to_json(), args.out)


def _scan_rows(n_trials: int, seed: int) -> list[tuple[int, int, int]]:
    rows = []
    for T in range(1, 7):
        for i in range(n_trials):
            s = seed + 1000 * T + i
            rng = np.random.default_rng(s)
            a = [Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 10))) for _ in range(T)]
            rows.append((T, s, len(c_zeros_in_bands(make_operator(a)))))
    return rows


def cmd_cfunc(args) -> None:
    if args.operator is None and args.scan_conjecture is None:
        raise UsageError("cfunc requires --operator and/or --scan-conjecture")
    if args.operator is not None:
        J = load_operator(args.operator)
        C = c_exact(J)
        zeros = c_zeros_in_bands(J)
        print(str(C))
        print(f"leading coefficient: {C.leading_coeff} (order {C.leading_order})")
        print("zeros in bands: [" + ", ".join(_fmt(z) for z in zeros) + "]")
    if args.scan_conjecture is not None:
        if args.scan_conjecture < 1:
            raise UsageError("--scan-conjecture needs a positive trial count")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["T", "seed", "zero_count"])
        w.writerows(_scan_rows(args.scan_conjecture, args.seed))
        if args.out:
            Path(args.out).write_text(buf.getvalue())
        else:
            sys.stdout.write(buf.getvalue())


def _embed_residuals(J, lam, u, q) -> dict:
    interior, first = recurrence_residual(J, u, q, lam)
    sec = TridiagSection.from_operator(J, q)
    bound = float(np.linalg.norm(section_residual(sec, u, lam)) / np.linalg.norm(u))
    return {"max_interior_residual": float(interior), "first_row_residual": float(first), "residual_bound": bound}


def cmd_embed(args) -> None:
    _need(args, "operator", "lam", "out")
    J = load_operator(args.operator)
    res = wvn_construct(J, _params(args))
    out = Path(args.out)
    with out.open("w", newline="") as fh:
        fh.write("n,u,q,omega\n")
        for n in range(res.N):
            fh.write(f"{n + 1},{_fmt(res.u[n])},{_fmt(res.q[n])},{_fmt(res.omega[n])}\n")
    meta = res.metadata()
    meta["q_asymptotics"] = q_asymptotic_params(J, res.lam, res.alpha).to_json()
    meta["residuals"] = _embed_residuals(J, res.lam, res.u, res.q)
    _dump_json(meta, str(out.with_suffix(".json")))


def _read_embed_csv(path: str) -> tuple[np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:3] != ["n", "u", "q"]:
            raise UsageError(f"{path}: expected header n,u,q,omega")
        rows = [(float(r[1]), float(r[2])) for r in reader if r]
    arr = np.array(rows)
    return arr[:, 0].copy(), arr[:, 1].copy()


def cmd_verify(args) -> None:
    _need(args, "operator")
    J = load_operator(args.operator)
    u, q = _read_embed_csv(args.csv)
    lam = args.lam
    if lam is None:
        sidecar = Path(args.csv).with_suffix(".json")
        if not sidecar.exists():
            raise UsageError("verify needs --lambda or the embed JSON sidecar")
        lam = float(json.loads(sidecar.read_text())["lambda"])
    report = verify_sequences(J, lam, u, q).to_json()
    report["lambda"] = lam
    report["N"] = len(u)
    _dump_json(report, args.out)


def cmd_sweep(args) -> None:
    _need(args, "operator", "grid")
    J = load_operator(args.operator)
    bs = band_structure(J)
    zeros = c_zeros_in_bands(J) if J.has_exact else []
    buf = io.StringIO()
    buf.write("lambda,C,in_band,embeddable\n")
    for lam in _parse_grid(args.grid):
        lam = float(lam)
        in_band = bs.contains(lam)
        C = c_value(J, lam)
        embeddable = (
            in_band
            and J.zero_diagonal
            and math.isfinite(C)
            and abs(C) > 1e-12
            and all(abs(lam - z) > 1e-9 for z in zeros)
        )
        buf.write(f"{_fmt(lam)},{_fmt(C)},{int(in_band)},{int(embeddable)}\n")
    if args.out:
        Path(args.out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wvnjacobi", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--operator", metavar="PATH", help='JSON file {"a": [...], "b": [...]}')
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--seed", type=int, default=0)
        return sp

    def wvn_flags(sp):
        sp.add_argument("--lambda", dest="lam", type=float, metavar="X")
        sp.add_argument("--alpha", type=float, default=2.0, metavar="X")
        sp.add_argument("--n", type=int, default=10_000, metavar="N")
        sp.add_argument("--tail-tol", type=float, default=1e-8, metavar="X")
        sp.add_argument("--q1", type=float, metavar="X")
        sp.add_argument("--q2", type=float, metavar="X")
        return sp

    common(sub.add_parser("bands", help="parabolic points and bands as JSON"))
    cf = common(sub.add_parser("cfunc", help="closed form of C and its zeros in the bands"))
    cf.add_argument("--scan-conjecture", type=int, metavar="N_TRIALS")
    wvn_flags(common(sub.add_parser("embed", help="construct u, q and write CSV + JSON sidecar")))
    vf = wvn_flags(common(sub.add_parser("verify", help="check an embed CSV")))
    vf.add_argument("csv", metavar="CSV")
    sw = wvn_flags(common(sub.add_parser("sweep", help="C, band membership and embeddability on a grid")))
    sw.add_argument("--grid", metavar="LO:HI:STEP")
    return p


COMMANDS = {"bands": cmd_bands, "cfunc": cmd_cfunc, "embed": cmd_embed, "verify": cmd_verify, "sweep": cmd_sweep}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        COMMANDS[args.command](args)
    except DomainError as exc:
        lam = getattr(args, "lam", None)
        where = f" at lambda={lam}" if lam is not None else ""
        print(f"error: {type(exc).__name__}{where}: {exc}", file=sys.stderr)
        return 2
    except (UsageError, WvnError, OSError, ValueError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0

if __name__ == "__main__":
    sys.exit(main())
