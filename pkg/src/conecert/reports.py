"""Serialization of verdicts and certificates to diffable records.

Records are plain dicts with deterministic key and element order; rationals
become fraction strings, index masks become sorted label lists, and sign
vectors become +/- strings.  The same records feed both the json and the
text renderers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Optional

from .geometry import EuclideanBasis
from .linalg import QVector
from .partitions import OrderedPartition
from .subsets import bits
from .verifiers import CertificateReport, Verdict


def frac_str(x) -> str:
    return str(Fraction(x))


def coords_list(vec) -> list[str]:
    if isinstance(vec, QVector):
        return [frac_str(c) for c in vec.coords]
    return [frac_str(c) for c in vec]


def mask_labels(basis: EuclideanBasis, mask: int) -> list[str]:
    return [basis.labels[i] for i in bits(mask)]


def _param_value(basis, key, value):
    if value is None:
        return None
    if key in ("p", "q", "r"):
        return mask_labels(basis, value)
    if key == "partition":
        part: OrderedPartition = value
        return [mask_labels(basis, b) for b in part.blocks]
    return coords_list(value)


_KEY_NAMES = {
    "p": "P",
    "q": "Q",
    "r": "R",
    "partition": "partition",
    "lam": "Lambda",
    "lam1": "Lambda1",
    "lam2": "Lambda2",
    "h": "H",
}
_KEY_ORDER = ("p", "q", "r", "partition", "lam", "lam1", "lam2", "h")


def _params_json(basis, params: dict) -> dict:
    out = {}
    for key in _KEY_ORDER:
        if key in params and params[key] is not None:
            out[_KEY_NAMES[key]] = _param_value(basis, key, params[key])
    return out


def verdict_record(basis: EuclideanBasis, v: Verdict) -> dict:
    rec = {"identity": v.identity, "basis": basis.name}
    rec.update(_params_json(basis, v.params))
    rec["lhs"] = v.lhs
    rec["rhs"] = v.rhs
    rec["pass"] = v.ok
    if v.note:
        rec["note"] = v.note
    return rec


def signs_str(signs: Iterable[int]) -> str:
    return "".join("+" if s > 0 else "-" for s in signs)


def report_record(
    basis: EuclideanBasis, rep: CertificateReport, include_cells: bool = True
) -> dict:
    rec = {"identity": rep.identity, "basis": basis.name}
    rec.update(_params_json(basis, rep.params))
    rec["num_forms"] = rep.num_forms
    rec["num_lam_forms"] = rep.num_lam_forms
    rec["num_cells"] = rep.num_cells
    rec["pass"] = rep.ok
    if include_cells:
        rec["cells"] = [
            {
                "signs": signs_str(c.signs),
                "H": coords_list(c.witness),
                "lhs": c.lhs,
                "rhs": c.rhs,
                "pass": c.ok,
            }
            for c in rep.cells
        ]
    else:
        rec["failures"] = [
            {
                "signs": signs_str(c.signs),
                "H": coords_list(c.witness),
                "lhs": c.lhs,
                "rhs": c.rhs,
            }
            for c in rep.failures()
        ]
    return rec


def summary_record(records: list[dict]) -> dict:
    passed = sum(1 for r in records if r.get("pass"))
    return {"total": len(records), "passed": passed, "failed": len(records) - passed}


def render_json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _fmt_params(rec: dict) -> str:
    parts = []
    for key in ("P", "Q", "R", "partition", "Lambda", "Lambda1", "Lambda2", "H"):
        if key in rec:
            val = rec[key]
            if key == "partition":
                txt = "|".join(",".join(b) for b in val)
            elif key in ("P", "Q", "R"):
                txt = "{" + ",".join(val) + "}"
            else:
                txt = "(" + ",".join(val) + ")"
            parts.append(f"{key}={txt}")
    return " ".join(parts)


def render_verdict_line(rec: dict) -> str:
    tag = "pass" if rec["pass"] else "FAIL"
    note = f" note={rec['note']}" if rec.get("note") else ""
    return (
        f"{tag} {rec['identity']} basis={rec['basis']} {_fmt_params(rec)} "
        f"lhs={rec['lhs']} rhs={rec['rhs']}{note}"
    )


def render_report_line(rec: dict) -> str:
    tag = "pass" if rec["pass"] else "FAIL"
    return (
        f"{tag} certificate {rec['identity']} basis={rec['basis']} {_fmt_params(rec)} "
        f"forms={rec['num_forms']} cells={rec['num_cells']}"
    )


def write_text(text: str, out: Optional[str]) -> None:
    if out in (None, "-"):
        print(text, end="" if text.endswith("\n") else "\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
