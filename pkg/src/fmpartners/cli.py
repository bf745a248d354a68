"""Command-line front end.

    fmpartners run SCENARIO [--verify fast|full] [--threads N] [--machine]
    fmpartners info LATTICE
    fmpartners shortvec LATTICE MAX_NORM
    fmpartners aut LATTICE
    fmpartners disc LATTICE

SCENARIO is a JSON file or the name of a shipped scenario (involution,
phi36); LATTICE is a JSON file with a "gram" field or a catalog label.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog
from .autgrp import automorphism_generators, discriminant_representation
from .count import check_expected, load_scenario, run_scenario, shipped_scenario
from .enumerate import short_vectors
from .errors import CountMismatch, LatticeError
from .fqm import f2_space_from, f3_space_from, full_orth_order, orth_order_f2, orth_order_f3, p_part, primes_of
from .lattice import divisibility, discriminant_group, is_even, load_lattice, signature

SHIPPED = ("involution", "phi36")


def _lattice(arg: str):
    return load_lattice(arg) if Path(arg).exists() else catalog.get(arg)


def _scenario(arg: str):
    if not Path(arg).exists() and arg in SHIPPED:
        return shipped_scenario(arg)
    return load_scenario(arg)


def _emit(args, doc: dict, text: str):
    print(json.dumps(doc, indent=2, sort_keys=True) if args.machine else text)


def cmd_run(args) -> int:
    report = run_scenario(_scenario(args.scenario), verify=args.verify, threads=args.threads)
    print(report.to_json() if args.machine else report.text())
    check_expected(report)
    return 0


def cmd_info(args) -> int:
    L = _lattice(args.lattice)
    sig = signature(L)
    doc = {"label": L.label, "rank": L.rank, "signature": list(sig), "even": is_even(L),
           "determinant": L.determinant}
    _emit(args, doc, f"{L.label}: rank {L.rank}, signature {sig}, "
                     f"{'even' if doc['even'] else 'odd'}, determinant {L.determinant}")
    return 0


def cmd_shortvec(args) -> int:
    L = _lattice(args.lattice)
    rep = short_vectors(L, args.max_norm)
    divs = {}
    for n in rep.vectors:
        hist: dict = {}
        for v in rep.all_vectors(n):
            d = divisibility(L, v)
            hist[d] = hist.get(d, 0) + 1
        divs[n] = dict(sorted(hist.items()))
    doc = {"label": L.label, "max_norm": args.max_norm,
           "counts": {str(k): v for k, v in rep.counts.items()},
           "divisibility": {str(n): {str(d): c for d, c in h.items()} for n, h in divs.items()}}
    lines = [f"{L.label}: vectors of norm <= {args.max_norm}"]
    for n, c in rep.counts.items():
        lines.append(f"  norm {n}: {c}  (by divisibility: {divs[n]})")
    _emit(args, doc, "\n".join(lines))
    return 0


def cmd_aut(args) -> int:
    L = _lattice(args.lattice)
    G = automorphism_generators(L)
    act = discriminant_representation(G)
    doc = {"label": L.label, "order": G.order, "orbit_lengths": list(G.orbit_lengths),
           "generators": len(G.generators), "discriminant_image": act.image_order,
           "kernel": act.kernel_order}
    _emit(args, doc, f"{L.label}: |O(L)| = {G.order}, image in O(D(L)) of order {act.image_order}, "
                     f"kernel of order {act.kernel_order}")
    return 0


def _describe_part(Dp, p: int) -> dict:
    out = {"p": p, "invariant_factors": list(Dp.invariant_factors())}
    try:
        if p == 3:
            V = f3_space_from(Dp)
            out.update(dim=V.dim, radical=V.radical_dim, type=V.plus_minus, orthogonal_order=orth_order_f3(V))
        elif p == 2:
            V = f2_space_from(Dp)
            out.update(dim=V.dim, nondefective=V.is_nondefective, type=V.type,
                       orthogonal_order=orth_order_f2(V) if V.is_nondefective and V.dim % 2 == 0 else None)
    except LatticeError as e:
        out["note"] = str(e)
    return out


def cmd_disc(args) -> int:
    L = _lattice(args.lattice)
    D = discriminant_group(L)
    parts = [_describe_part(p_part(D, p), p) for p in primes_of(D)]
    try:
        total = full_orth_order(D)
    except LatticeError:
        total = None
    doc = {"label": L.label, "order": D.order, "invariant_factors": list(D.invariant_factors()),
           "parts": parts, "orthogonal_order": total,
           "q_values": [str(D.Qm[i][i]) for i in range(D.ngens)]}
    lines = [f"{L.label}: D(L) of order {D.order}, invariant factors {list(D.invariant_factors())}"]
    for pt in parts:
        desc = ", ".join(f"{k} {v}" for k, v in pt.items() if k not in ("p", "invariant_factors"))
        lines.append(f"  {pt['p']}-part {pt['invariant_factors']}: {desc}")
    lines.append(f"  |O(D(L))| = {total}")
    _emit(args, doc, "\n".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fmpartners", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--machine", action="store_true", help="emit JSON instead of text")
    r = sub.add_parser("run", parents=[common], help="count partners for a scenario")
    r.add_argument("scenario")
    r.add_argument("--verify", choices=("fast", "full"), default="fast")
    r.add_argument("--threads", type=int, default=1)
    r.set_defaults(func=cmd_run)
    for name, fn, hlp in (("info", cmd_info, "signature, parity and determinant"),
                          ("aut", cmd_aut, "automorphism group order and discriminant image"),
                          ("disc", cmd_disc, "discriminant module")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("lattice")
        p.set_defaults(func=fn)
    s = sub.add_parser("shortvec", parents=[common], help="short vector histogram")
    s.add_argument("lattice")
    s.add_argument("max_norm", type=int)
    s.set_defaults(func=cmd_shortvec)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CountMismatch as e:
        print(f"count mismatch: {e}", file=sys.stderr)
        return 1
    except LatticeError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
