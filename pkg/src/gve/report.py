"""Text and JSON rendering of verdicts, axiom reports and fixture tables."""
from __future__ import annotations

import json

from .extensions import AxiomReport, TypeVerdict

__all__ = ["report", "dumps", "render_rows"]


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def _verdict_text(v: TypeVerdict) -> str:
    lines = [f"type {v.kind} ({v.label()})"]
    if v.caveat:
        lines.append(f"  caveat: {v.caveat}")
    for w in v.witnesses:
        lines.append("  witness " + str(w).replace("\n", "\n  "))
    if v.axioms:
        lines.append(f"  axioms: ii {v.axioms.get('ii')}, iii {v.axioms.get('iii')}")
    for msg in v.warnings:
        lines.append(f"  warning: {msg}")
    return "\n".join(lines)


def report(obj, fmt: str = "text") -> bytes:
    """Serialize a verdict or an axiom report deterministically."""
    if fmt not in ("text", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(obj, TypeVerdict):
        out = dumps(obj.to_json()) if fmt == "json" else _verdict_text(obj)
    elif isinstance(obj, AxiomReport):
        out = dumps(obj.to_json()) if fmt == "json" else str(obj)
    else:
        raise TypeError(f"cannot report a {type(obj).__name__}")
    return (out + "\n").encode()


def render_rows(rows, fmt: str = "text") -> str:
    if fmt == "json":
        return dumps([
            {"fixture": r.name, "expected": r.expected, "verdict": r.label(),
             "pass": r.ok, "seconds": round(r.seconds, 3), **({"error": r.error} if r.error else {})}
            for r in rows
        ])
    width = max(len(r.name) for r in rows)
    lines = [f"{'fixture':<{width}}  expected  verdict      result"]
    for r in rows:
        res = "pass" if r.ok else "FAIL"
        lines.append(f"{r.name:<{width}}  {r.expected or '?':<8}  {r.label():<11}  {res}")
        if r.error:
            lines.append(f"    {r.error}")
        elif not r.ok:
            for w in r.witnesses:
                lines.append("    witness " + str(w).replace("\n", "\n    "))
    n = sum(r.ok for r in rows)
    lines.append(f"{n}/{len(rows)} fixtures pass")
    return "\n".join(lines)
