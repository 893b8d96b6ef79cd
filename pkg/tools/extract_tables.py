#!/usr/bin/env python3
"""Extract the level-by-level result tables from the source manuscript into
src/galoisfinder/data/golden_tables.json.

Each table records the level, coefficient module, working field, the list of
Hecke operators computed (full T_ell or partial T_{ell,1}), the cohomology
dimension, and the rows (galois multiplicity, hecke multiplicity, attached
representation in the package text grammar).
"""

from __future__ import annotations

import json
import re
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
SOURCE = ROOT / "paper.md"
DEST = ROOT / "src" / "galoisfinder" / "data" / "golden_tables.json"

CHAR_TOKEN = re.compile(r"\\chi_\{?(\d+)(?:,(\d+))?\}?(?:\^\{?(\d+)\}?)?")


def char_expr_to_text(latex: str) -> str:
    """LaTeX character product -> text grammar (chi15.0*chi15.1^2)."""
    parts = []
    pos = 0
    for m in CHAR_TOKEN.finditer(latex):
        if latex[pos:m.start()].strip():
            raise ValueError(f"unparsed char fragment in {latex!r}")
        base = f"chi{m.group(1)}"
        if m.group(2) is not None:
            base += f".{m.group(2)}"
        if m.group(3) is not None and m.group(3) != "1":
            base += f"^{m.group(3)}"
        parts.append(base)
        pos = m.end()
    if latex[pos:].strip():
        raise ValueError(f"unparsed char fragment in {latex!r}")
    if not parts:
        raise ValueError(f"no character in {latex!r}")
    return "*".join(parts)


def label_to_text(latex: str) -> str:
    return latex.replace(r"\mathrm{", "").replace("}", "").replace("{", "")


TERM_RE = re.compile(
    r"^\s*(?P<chi>(?:\\chi_\{?\d+(?:,\d+)?\}?(?:\^\{?\d+\}?)?\s*)*)"
    r"\\varepsilon\^\{?(?P<w>\d+)\}?"
    r"\s*(?:\\sigma_\{(?P<label>\d+\.\d+\.\\mathrm\{\w+\}\.\\mathrm\{\w+\})\})?\s*$")


def rep_to_text(latex: str) -> str:
    terms = []
    for raw in latex.split(r"\oplus"):
        m = TERM_RE.match(raw)
        if not m:
            raise ValueError(f"cannot parse rep term {raw!r}")
        chi = m.group("chi").strip()
        prefix = "" if not chi else char_expr_to_text(chi) + "*"
        term = f"{prefix}e^{m.group('w')}"
        if m.group("label"):
            term += f"*s[{label_to_text(m.group('label'))}]"
        terms.append(term)
    return " + ".join(terms)


COEFFS_RE = re.compile(
    r"Coeffs\s*\$(?:V|\\mathrm\{Sym\}\^\{?(?P<g>\d+)\}?\(V\))"
    r"(?:\\otimes(?P<eta>.*?))?\$")
FIELD_RE = re.compile(r"GF\((\d+)(?:\^\{?(\d+)\}?)?\)")
COMPUTED_RE = re.compile(r"Computed\s*(.*?)\.\s*Dim~\$(\d+)\$\.(\s*\[(\w+)\])?")
OP_RE = re.compile(r"T_\{?(\d+)(,1)?\}?")
ROW_RE = re.compile(r"(\d+)\s*&\s*\$(\d+)\$\s*&\s*\$(.*?)\$\s*\\\\")
MULTI_G_RE = re.compile(
    r"Coeffs \$\\mathrm\{Sym\}\^g\(V\)\$ for \$g=([\d,]+)\$")


def parse_block(level: int, text: str) -> list[dict]:
    text = re.sub(r"\s+", " ", text)
    fm = FIELD_RE.search(text)
    p = int(fm.group(1))
    r = int(fm.group(2)) if fm.group(2) else 1

    mg = MULTI_G_RE.search(text)
    if mg:
        assert "Dim~$0$" in text
        return [{"level": level, "g": g, "eta": "1", "p": p, "r": r,
                 "computed": [], "dim": 0, "tag": None, "rows": []}
                for g in (int(x) for x in mg.group(1).split(","))]

    cm = COEFFS_RE.search(text)
    g = int(cm.group("g")) if cm.group("g") else 1
    eta = char_expr_to_text(cm.group("eta")) if cm.group("eta") else "1"

    table = {"level": level, "g": g, "eta": eta, "p": p, "r": r,
             "computed": [], "dim": 0, "tag": None, "rows": []}
    if "Dim~$0$" in text and "Computed" not in text:
        return [table]

    comp = COMPUTED_RE.search(text)
    ops = [[int(om.group(1)), "partial" if om.group(2) else "full"]
           for om in OP_RE.finditer(comp.group(1))]
    table["computed"] = ops
    table["dim"] = int(comp.group(2))
    table["tag"] = comp.group(4)

    for gm, hm, rep in ROW_RE.findall(text):
        table["rows"].append({"galois_mult": int(gm), "hecke_mult": int(hm),
                              "rep": rep_to_text(rep)})
    return [table]


def main() -> int:
    text = SOURCE.read_text()
    tables = []
    level = None
    for block in re.finditer(r"\\begin\{center\}(.*?)\\end\{center\}", text, re.S):
        body = block.group(1)
        lm = re.search(r"Level \$N = (\d+)\$", body)
        if lm is None:
            continue
        level = int(lm.group(1))
        tables.extend(parse_block(level, body))
    doc = {"version": 1, "tables": tables}
    DEST.write_text(json.dumps(doc, indent=1) + "\n")
    nrows = sum(len(t["rows"]) for t in tables)
    print(f"wrote {len(tables)} tables, {nrows} rows -> {DEST}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
