"""TSV and JSONL renderings of verification outcomes, and a reader for both.

Numbers are written in scientific notation with 20 significant digits;
JSONL carries them as strings so no reader rounds them through a double.
A missing value (an unevaluated side) is an empty TSV field or JSON null.
"""

from __future__ import annotations

import json

import mpmath
from mpmath import mp, mpf

__all__ = ["FIELDS", "format_number", "render_report", "read_report", "render_limit_study"]

FIELDS = ("id", "q", "lhs", "rhs", "rel_err", "terms", "status")
DIGITS = 20
_ZERO = "0." + "0" * (DIGITS - 1) + "e+0"


def format_number(x) -> str:
    if x is None:
        return ""
    with mp.workprec(96):
        x = mpf(x)
        if x == 0:
            return _ZERO
        return mpmath.nstr(x, DIGITS, min_fixed=1, max_fixed=0, strip_zeros=False)


def _row(o) -> dict:
    return {
        "id": o.identity_id,
        "q": format_number(o.q),
        "lhs": format_number(o.lhs),
        "rhs": format_number(o.rhs),
        "rel_err": format_number(o.rel_err),
        "terms": str(o.terms_used),
        "status": o.status.value,
    }


def render_report(outcomes, fmt: str = "tsv") -> str:
    fmt = fmt.lower()
    rows = [_row(o) for o in outcomes]
    if fmt == "tsv":
        lines = ["\t".join(FIELDS)]
        lines += ["\t".join(r[f] for f in FIELDS) for r in rows]
        return "\n".join(lines) + "\n"
    if fmt == "jsonl":
        out = []
        for r in rows:
            rec = {f: (r[f] or None) for f in FIELDS}
            rec["terms"] = int(r["terms"])
            out.append(json.dumps(rec, separators=(",", ":")))
        return "".join(line + "\n" for line in out)
    raise ValueError(f"unknown report format {fmt!r}; expected tsv or jsonl")


def _parse_row(raw: dict) -> dict:
    row = {}
    for f in FIELDS:
        v = raw.get(f)
        if f in ("id", "status"):
            row[f] = v
        elif f == "terms":
            row[f] = int(v)
        else:
            row[f] = mpf(v) if v not in (None, "") else None
    return row


def read_report(text: str, fmt: str = "tsv") -> list:
    """Parse a rendered report back into dicts with ``mpf`` numeric fields."""
    fmt = fmt.lower()
    lines = text.splitlines()
    with mp.workprec(96):
        if fmt == "tsv":
            if not lines or tuple(lines[0].split("\t")) != FIELDS:
                raise ValueError("missing or unexpected TSV header")
            rows = []
            for n, line in enumerate(lines[1:], start=2):
                cells = line.split("\t")
                if len(cells) != len(FIELDS):
                    raise ValueError(f"line {n}: expected {len(FIELDS)} fields, got {len(cells)}")
                rows.append(_parse_row(dict(zip(FIELDS, cells))))
            return rows
        if fmt == "jsonl":
            return [_parse_row(json.loads(line)) for line in lines if line.strip()]
    raise ValueError(f"unknown report format {fmt!r}; expected tsv or jsonl")


LIMIT_FIELDS = ("id", "k", "q", "value", "error", "rel_error", "target")


def render_limit_study(studies, fmt: str = "tsv") -> str:
    """One row per (study, k) followed, in TSV, by a verdict line per study."""
    fmt = fmt.lower()
    if fmt not in ("tsv", "jsonl"):
        raise ValueError(f"unknown report format {fmt!r}; expected tsv or jsonl")
    lines = ["\t".join(LIMIT_FIELDS)] if fmt == "tsv" else []
    for s in studies:
        for p in s.points:
            row = {
                "id": s.identity_id,
                "k": str(p.k),
                "q": format_number(p.q),
                "value": format_number(p.value),
                "error": format_number(p.error),
                "rel_error": format_number(p.rel_error),
                "target": format_number(s.target),
            }
            if fmt == "tsv":
                lines.append("\t".join(row[f] for f in LIMIT_FIELDS))
            else:
                rec = {f: (row[f] or None) for f in LIMIT_FIELDS}
                rec["k"] = p.k
                if p.detail:
                    rec["detail"] = p.detail
                lines.append(json.dumps(rec, separators=(",", ":")))
        verdict = "PASS" if s.passed else "FAIL"
        if fmt == "tsv":
            why = "; ".join(s.failures)
            lines.append(f"# {s.identity_id} -> {s.target_text}: {verdict}" + (f" ({why})" if why else ""))
        else:
            lines.append(json.dumps(
                {"id": s.identity_id, "verdict": verdict, "target": s.target_text, "failures": s.failures},
                separators=(",", ":"),
            ))
    return "".join(line + "\n" for line in lines)
