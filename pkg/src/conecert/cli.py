"""Command line surface: verify, certify, chambers, partitions, bases.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 for
configuration or hypothesis errors (argparse uses 2 as well).

--mode takes comma-separated tokens: "general" or "obtuse" pick the random
basis flavor used with --rank, "strict" or "exploratory" pick whether
hypothesis violations abort or are merely recorded.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Optional

from .chambers import sample_regular, wall_point
from .corpus import CORPUS_NAMES, basis_to_dict, named_basis, random_basis, resolve_basis
from .errors import ConecertError, HypothesisViolated, InvalidRank
from .geometry import EuclideanBasis
from .linalg import QVector, int_dot
from .partitions import build_frame, enumerate_ordered_partitions
from .reports import (
    coords_list,
    mask_labels,
    render_json,
    render_report_line,
    render_verdict_line,
    report_record,
    signs_str,
    summary_record,
    verdict_record,
    write_text,
)
from .subsets import bits, full_mask, is_subset, iter_nested_pairs
from .verifiers import IDENTITIES, CertifySession, collect_forms, obtuse, verify

MAX_EXHAUSTIVE_RANK = 6

_TWO_LAM = ("L33_EQ1", "P34")
_NO_LAM = ("L32", "L33_EQ2")
_MATRIX_IDS = ("L32", "L33_EQ1", "L33_EQ2", "P34", "C35", "C36")


def _parse_mode(mode: str):
    kind = "general"
    strict = True
    for tok in (t.strip() for t in mode.split(",") if t.strip()):
        if tok in ("general", "obtuse"):
            kind = tok
        elif tok == "strict":
            strict = True
        elif tok == "exploratory":
            strict = False
        else:
            raise InvalidRank(f"unknown mode token {tok!r}")
    return kind, strict


def _resolve(args) -> EuclideanBasis:
    kind, _ = _parse_mode(args.mode)
    if args.basis:
        return resolve_basis(args.basis)
    if args.rank is None:
        raise InvalidRank("need --basis or --rank")
    return random_basis(args.rank, args.seed, kind)


def _instances(basis: EuclideanBasis, identity: str, nested_only: bool) -> list[dict]:
    """Subset/partition parameter grid the CLI sweeps for one identity."""
    n = basis.rank
    full = full_mask(n)
    if identity in ("L31_THETA", "L31_THETA_HAT"):
        return [dict(p=p, q=q) for p, q in iter_nested_pairs(n)]
    if identity in _MATRIX_IDS:
        if nested_only:
            return [dict(p=p, r=r) for p, r in iter_nested_pairs(n)]
        return [dict(p=p, r=r) for p in range(1 << n) for r in range(1 << n)]
    if identity in ("STAR_RECURSION", "STARSTAR_SIGNS"):
        out = []
        for p, r in iter_nested_pairs(n):
            if p == r:
                continue
            for part in enumerate_ordered_partitions(r & ~p):
                out.append(dict(p=p, r=r, partition=part))
        return out
    if identity == "P41":
        return [dict(p=p, r=r) for p, r in iter_nested_pairs(n)]
    if identity == "BOULDER_21":
        return [dict(p=0, r=full)]
    raise InvalidRank(f"unknown identity {identity!r}")


def _inst_key(inst: dict) -> str:
    part = inst.get("partition")
    return "p{}q{}r{}b{}".format(
        inst.get("p"), inst.get("q"), inst.get("r"), part.blocks if part else None
    )


def _hypothesis_lams(basis, lam_fs, count, seed, bound):
    """Regular directions in the cone every basis form pairs <= 0 with.

    Only exists usefully for obtuse bases; otherwise the zero direction is
    the lone hypothesis-compliant choice and is returned unsampled.
    """
    if not obtuse(basis):
        return [QVector([0] * basis.rank)]
    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 20_000:
            raise HypothesisViolated("could not sample regular hypothesis directions")
        c = [rng.randint(0, bound) for _ in range(basis.rank)]
        if all(x == 0 for x in c):
            continue
        lam = QVector([0] * basis.rank)
        for i, ci in enumerate(c):
            if ci:
                lam = lam + basis.dual_vector(i).scale(-ci)
        if all(int_dot(f, lam.coords) != 0 for f in lam_fs.forms):
            out.append(lam)
    return out


def _lam_streams(basis, identity, lam_fs, args, inst_key, strict):
    """Per-instance direction samples: list of dicts of verify kwargs."""
    count = args.lambda_samples
    if identity in _NO_LAM:
        return [dict()]
    if identity == "L33_EQ1" and strict:
        lams1 = _hypothesis_lams(basis, lam_fs, count, f"{args.seed}|l1|{inst_key}", args.bound)
        lams2 = _hypothesis_lams(basis, lam_fs, count, f"{args.seed}|l2|{inst_key}", args.bound)
        k = min(len(lams1), len(lams2))
        return [dict(lam1=lams1[i], lam2=lams2[i]) for i in range(k)]
    if identity in _TWO_LAM:
        lams1 = sample_regular(lam_fs, count, f"{args.seed}|l1|{inst_key}", args.bound)
        lams2 = sample_regular(lam_fs, count, f"{args.seed}|l2|{inst_key}", args.bound)
        return [dict(lam1=a, lam2=b) for a, b in zip(lams1, lams2)]
    lams = sample_regular(lam_fs, count, f"{args.seed}|l|{inst_key}", args.bound)
    return [dict(lam=l) for l in lams]


def _emit(args, payload, text_lines) -> None:
    if args.format == "json":
        write_text(render_json(payload), args.out)
    else:
        write_text("\n".join(text_lines), args.out)


def cmd_verify(args) -> int:
    basis = _resolve(args)
    _, strict = _parse_mode(args.mode)
    identity = args.identity
    records = []
    for inst in _instances(basis, identity, nested_only=False):
        if identity in _MATRIX_IDS and not is_subset(inst["p"], inst["r"]):
            records.append(verdict_record(basis, verify(basis, identity, **inst)))
            continue
        h_fs, lam_fs = collect_forms(basis, identity, **inst)
        key = _inst_key(inst)
        if identity == "STARSTAR_SIGNS":
            h_list: list[Optional[QVector]] = [None]
        else:
            h_list = sample_regular(h_fs, args.samples, f"{args.seed}|h|{key}", args.bound)
        for lam_kw in _lam_streams(basis, identity, lam_fs, args, key, strict):
            for h in h_list:
                v = verify(basis, identity, h=h, strict=strict, **inst, **lam_kw)
                records.append(verdict_record(basis, v))
    summ = summary_record(records)
    payload = {"records": records, "summary": summ}
    lines = [render_verdict_line(r) for r in records if not r["pass"]]
    lines.append(
        f"verify {identity} basis={basis.name}: "
        f"{summ['passed']}/{summ['total']} passed, {summ['failed']} failed"
    )
    _emit(args, payload, lines)
    return 0 if summ["failed"] == 0 else 1


def _wall_records(basis, identity, session, lam_kw, args, key):
    out = []
    for w, form in enumerate(session.h_forms.forms):
        pt = wall_point(session.h_forms, w, f"{args.seed}|wall|{key}|{w}", args.bound)
        if pt is None:
            continue
        v = verify(
            basis,
            identity,
            p=session.p,
            q=session.q,
            r=session.r,
            partition=session.partition,
            h=pt,
            strict=False,
            **lam_kw,
        )
        rec = verdict_record(basis, v)
        rec["wall"] = ",".join(str(c) for c in form)
        rec["informational"] = True
        out.append(rec)
    return out


def cmd_certify(args) -> int:
    basis = _resolve(args)
    if basis.rank > MAX_EXHAUSTIVE_RANK:
        raise InvalidRank(
            f"exhaustive certification is budgeted for rank <= {MAX_EXHAUSTIVE_RANK}"
        )
    _, strict = _parse_mode(args.mode)
    identity = args.identity
    records = []
    walls = []
    for inst in _instances(basis, identity, nested_only=True):
        session = CertifySession(basis, identity, strict=strict, **inst)
        key = _inst_key(inst)
        for lam_kw in _lam_streams(basis, identity, session.lam_forms, args, key, strict):
            rep = session.run(**lam_kw)
            records.append(report_record(basis, rep, include_cells=args.format == "json"))
            if args.wall_probe:
                walls += _wall_records(basis, identity, session, lam_kw, args, key)
    summ = summary_record(records)
    payload = {"records": records, "summary": summ}
    if args.wall_probe:
        payload["wall_probes"] = walls
    lines = [render_report_line(r) for r in records]
    if args.wall_probe:
        lines += [
            f"wall {r['wall']}: lhs={r['lhs']} rhs={r['rhs']} "
            f"{'agree' if r['pass'] else 'differ'} (informational)"
            for r in walls
        ]
    lines.append(
        f"certify {identity} basis={basis.name}: "
        f"{summ['passed']}/{summ['total']} certificates passed, {summ['failed']} failed"
    )
    _emit(args, payload, lines)
    return 0 if summ["failed"] == 0 else 1


def cmd_chambers(args) -> int:
    basis = _resolve(args)
    if basis.rank > MAX_EXHAUSTIVE_RANK:
        raise InvalidRank(
            f"chamber enumeration is budgeted for rank <= {MAX_EXHAUSTIVE_RANK}"
        )
    identity = args.identity or "BOULDER_21"
    if identity in ("STAR_RECURSION", "STARSTAR_SIGNS"):
        raise InvalidRank("chambers needs a partition-free identity")
    full = full_mask(basis.rank)
    inst: dict = dict(p=0, r=full)
    if identity in ("L31_THETA", "L31_THETA_HAT"):
        inst = dict(p=0, q=full)
    session = CertifySession(basis, identity, **inst)
    payload = {
        "identity": identity,
        "basis": basis.name,
        "forms": [list(f) for f in session.h_forms.forms],
        "num_cells": len(session.cells),
        "cells": [
            {"signs": signs_str(c.signs), "witness": coords_list(c.witness)}
            for c in session.cells
        ],
    }
    lines = [f"arrangement for {identity} on {basis.name}"]
    lines += [f"form {i}: {f}" for i, f in enumerate(session.h_forms.forms)]
    lines += [
        f"cell {signs_str(c.signs)} witness=({','.join(coords_list(c.witness))})"
        for c in session.cells
    ]
    lines.append(f"{len(session.cells)} cells, {len(session.h_forms.forms)} forms")
    _emit(args, payload, lines)
    return 0


def cmd_partitions(args) -> int:
    basis = _resolve(args)
    if basis.rank > MAX_EXHAUSTIVE_RANK:
        raise InvalidRank(f"partition dump is budgeted for rank <= {MAX_EXHAUSTIVE_RANK}")
    ground = full_mask(basis.rank)
    items = []
    for part in enumerate_ordered_partitions(ground):
        frame = build_frame(basis, part)
        items.append(
            {
                "blocks": [mask_labels(basis, b) for b in part.blocks],
                "frames": {
                    basis.labels[i]: {
                        "lambda": coords_list(frame.proj_elements[i]),
                        "mu": coords_list(frame.proj_duals[i]),
                    }
                    for i in bits(ground)
                },
            }
        )
    payload = {"basis": basis.name, "count": len(items), "partitions": items}
    lines = [f"{len(items)} ordered partitions of {basis.name}"]
    for it in items:
        lines.append("partition " + " | ".join(",".join(b) for b in it["blocks"]))
        for lab, fr in it["frames"].items():
            lines.append(
                f"  {lab}: lambda=({','.join(fr['lambda'])}) mu=({','.join(fr['mu'])})"
            )
    _emit(args, payload, lines)
    return 0


def cmd_bases(args) -> int:
    if args.basis or args.rank is not None:
        basis = _resolve(args)
        payload = basis_to_dict(basis)
        lines = [f"name: {payload['name']}", f"rank: {payload['rank']}"]
        lines.append("labels: " + ",".join(payload["labels"]))
        for row in payload["gram"]:
            lines.append("  ".join(str(x) for x in row))
        _emit(args, payload, lines)
        return 0
    items = []
    for name in CORPUS_NAMES:
        b = named_basis(name)
        items.append({"name": name, "rank": b.rank, "obtuse": obtuse(b)})
    payload = {"bases": items}
    lines = [f"{it['name']}: rank {it['rank']}" for it in items]
    _emit(args, payload, lines)
    return 0


def _add_common(sp, with_identity: Optional[bool] = None, sampling: bool = False):
    if with_identity is not None:
        sp.add_argument(
            "--identity",
            choices=IDENTITIES,
            required=with_identity,
            default=None,
            help="identity token to check",
        )
    sp.add_argument("--basis", help="named family (A2, G2, ...) or a basis file")
    sp.add_argument("--rank", type=int, help="rank for a seeded random basis")
    sp.add_argument("--mode", default="", help="comma tokens: general|obtuse, strict|exploratory")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--bound", type=int, default=9, help="sampling box half-width")
    sp.add_argument("--out", help="output path (default stdout)")
    sp.add_argument("--format", choices=("json", "text"), default="text")
    if sampling:
        sp.add_argument("--samples", type=int, default=100, help="points per instance")
        sp.add_argument(
            "--lambda-samples", dest="lambda_samples", type=int, default=5,
            help="direction samples per instance",
        )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="conecert",
        description="exact verification of cone indicator identities",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("verify", help="pointwise checks at sampled regular points")
    _add_common(sp, with_identity=True, sampling=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("certify", help="exhaustive chamber certification")
    _add_common(sp, with_identity=True, sampling=True)
    sp.add_argument("--wall-probe", action="store_true", help="report wall behavior (informational)")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("chambers", help="dump an identity's arrangement")
    _add_common(sp, with_identity=False)
    sp.set_defaults(func=cmd_chambers)

    sp = sub.add_parser("partitions", help="dump ordered partitions with frames")
    _add_common(sp)
    sp.set_defaults(func=cmd_partitions)

    sp = sub.add_parser("bases", help="list or emit named Gram matrices")
    _add_common(sp)
    sp.set_defaults(func=cmd_bases)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConecertError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
