"""File formats: copula grids, field laws and data pairs (JSON and CSV)."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import List

import numpy as np

from .analytic import FieldLaw
from .core import DiscreteCopula
from .errors import DomainError, ShapeError
from .rational import format_float, format_rational, parse_rational


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def copula_to_json(c: DiscreteCopula) -> dict:
    """``{"k": k, "values": [[...]]}``; exact grids as ``"p/q"``, float grids as decimals."""
    if c.is_exact:
        rows = [[format_rational(x) for x in row] for row in c.to_fractions()]
    else:
        rows = [[format_float(x) for x in row] for row in c.to_float()]
    return {"k": c.k, "values": rows}


def _is_decimal(text: str) -> bool:
    return "/" not in text and any(ch in text for ch in ".eE")


def copula_from_json(obj) -> DiscreteCopula:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        k = int(obj["k"])
        rows = obj["values"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed grid document: {exc}") from None
    if len(rows) != k + 1 or any(len(r) != k + 1 for r in rows):
        raise ShapeError(f"grid for k={k} must be {k + 1} x {k + 1}")
    cells = [str(x) for row in rows for x in row]
    if any(_is_decimal(x) for x in cells):
        return DiscreteCopula(np.array([[float(x) for x in row] for row in rows]))
    return DiscreteCopula([[Fraction(str(x)) for x in row] for row in rows])


def copula_to_csv(c: DiscreteCopula) -> str:
    out = io.StringIO()
    out.write(f"# k={c.k}\n")
    for row in c.to_float():
        out.write(",".join(format_float(x) for x in row) + "\n")
    return out.getvalue()


def copula_from_csv(text: str) -> DiscreteCopula:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# k="):
        raise DomainError("grid CSV must start with a '# k=<int>' line")
    k = int(lines[0][4:])
    rows = [[float(x) for x in ln.split(",")] for ln in lines[1:]]
    if len(rows) != k + 1 or any(len(r) != k + 1 for r in rows):
        raise ShapeError(f"grid for k={k} must be {k + 1} x {k + 1}")
    return DiscreteCopula(np.array(rows))


def law_to_json(law: FieldLaw) -> dict:
    return {"atoms": [{"value": format_rational(v), "prob": format_rational(p)} for v, p in law.atoms]}


def law_from_json(obj) -> FieldLaw:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return FieldLaw(tuple((parse_rational(a["value"]), parse_rational(a["prob"])) for a in obj["atoms"]))


LAW_CSV_HEADER = ["value", "prob", "value_exact", "prob_exact"]


def law_to_csv(law: FieldLaw) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(LAW_CSV_HEADER)
    for v, p in law.atoms:
        w.writerow([format_float(v), format_float(p), format_rational(v), format_rational(p)])
    return out.getvalue()


def law_from_csv(text: str) -> FieldLaw:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != LAW_CSV_HEADER:
        raise DomainError(f"law CSV header must be {','.join(LAW_CSV_HEADER)}")
    return FieldLaw(tuple((Fraction(r[2]), Fraction(r[3])) for r in rows[1:] if r))


def pairs_to_csv(pairs: np.ndarray) -> str:
    out = io.StringIO()
    out.write("u,v\n")
    for u, v in np.asarray(pairs):
        out.write(f"{format_float(u)},{format_float(v)}\n")
    return out.getvalue()


def pairs_from_csv(text: str) -> np.ndarray:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "u,v":
        raise DomainError("pairs CSV must start with a 'u,v' header")
    rows: List[List[float]] = [[float(x) for x in ln.split(",")] for ln in lines[1:] if ln.strip()]
    return np.array(rows, dtype=np.float64).reshape(-1, 2)


def pairs_to_json(pairs: np.ndarray) -> list:
    return [[float(u), float(v)] for u, v in np.asarray(pairs)]
