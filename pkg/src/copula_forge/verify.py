"""Verification suites comparing closed forms with the oracles.

Each suite returns a list of report records
``{claim, analytic, oracle, equal | delta, se, pass}``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List

from scipy import stats

from . import analytic as an
from .core import Rect
from .errors import DomainError
from .oracle import (
    default_threads,
    dirichlet_variance_oracle,
    enumerate_conditional_table,
    enumerate_joint,
    enumerate_pmf,
    enumerate_volume_law,
    stats_from_values,
)
from .perms import check_capacity
from .rational import format_rational
from .rng import SeededRng
from .sampling import MAX_Y_GRID_K, field_samples

SUITES = ("pmf", "moments", "cov", "cond", "hat", "volume", "mc")
Z = 3.0
KS_ALPHA = 0.01
KS_SAMPLES = 100_000

# off-mesh evaluation coordinates: a/7 never lies on a mesh with k < 7
HAT_AXIS = tuple(Fraction(a, 7) for a in (1, 2, 3, 4, 6))


def _fmt(x) -> str:
    if isinstance(x, tuple):
        return "(" + ", ".join(_fmt(y) for y in x) + ")"
    if isinstance(x, Fraction):
        return format_rational(x)
    return repr(x)


def _exact(claim: str, analytic, oracle) -> Dict:
    equal = analytic == oracle
    return {"claim": claim, "analytic": _fmt(analytic), "oracle": _fmt(oracle), "equal": equal, "pass": equal}


def _law_str(law: an.FieldLaw) -> str:
    return "{" + ", ".join(f"{format_rational(v)}: {format_rational(p)}" for v, p in law.atoms) + "}"


def _exact_law(claim: str, analytic: an.FieldLaw, oracle: an.FieldLaw) -> Dict:
    equal = analytic == oracle
    return {"claim": claim, "analytic": _law_str(analytic), "oracle": _law_str(oracle), "equal": equal, "pass": equal}


def _mc(claim: str, analytic: float, estimate: float, se: float) -> Dict:
    delta = estimate - analytic
    return {
        "claim": claim,
        "analytic": repr(float(analytic)),
        "oracle": repr(float(estimate)),
        "delta": delta,
        "se": se,
        "pass": abs(delta) <= Z * se,
    }


def suite_pmf(k: int, threads: int, force: bool) -> List[Dict]:
    return [
        _exact_law(f"pmf_X k={k} at ({i},{j})", an.pmf_X(k, (i, j)), enumerate_pmf(k, (i, j), threads=threads, force=force))
        for i in range(k + 1)
        for j in range(k + 1)
    ]


def suite_moments(k: int, threads: int, force: bool) -> List[Dict]:
    out = []
    for i in range(k + 1):
        for j in range(k + 1):
            u, v = Fraction(i, k), Fraction(j, k)
            law = enumerate_pmf(k, (i, j), threads=threads, force=force)
            out.append(_exact(f"mean_X k={k} at ({i},{j})", an.mean_X(k, u, v), law.mean()))
            out.append(_exact(f"var_X k={k} at ({i},{j})", an.var_X(k, u, v), law.variance()))
            if k <= 8:
                out.append(_exact(f"var_Y k={k} at ({i},{j})", an.var_Y(k, u, v), dirichlet_variance_oracle(k, (i, j))))
    return out


_NEIGHBOURS = {
    "right": lambda i, j: ((i, j), (i + 1, j)),
    "up": lambda i, j: ((i, j), (i, j + 1)),
    "diag": lambda i, j: ((i, j), (i + 1, j + 1)),
    "antidiag": lambda i, j: ((i + 1, j), (i, j + 1)),
}


def neighbour_pair(direction: str, i: int, j: int):
    return _NEIGHBOURS[direction](i, j)


def suite_cov(k: int, threads: int, force: bool) -> List[Dict]:
    out = []
    for i in range(k):
        for j in range(k):
            law = enumerate_joint(k, [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)], threads=threads, force=force)
            index = {(i, j): 0, (i + 1, j): 1, (i, j + 1): 2, (i + 1, j + 1): 3}
            for direction in an.DIRECTIONS:
                p, q = neighbour_pair(direction, i, j)
                out.append(
                    _exact(
                        f"cov_X {direction} k={k} at ({i},{j})",
                        an.cov_X_adjacent(k, i, j, direction),
                        law.covariance(index[p], index[q]),
                    )
                )
    return out


def suite_cond(k: int, threads: int, force: bool) -> List[Dict]:
    check_capacity(k, force)
    out = []
    for i in range(k):
        for j in range(k):
            for l in an.support(k, i, j):
                out.append(
                    _exact(
                        f"conditional_table k={k} ({i},{j},{l})",
                        an.conditional_table(k, i, j, l).as_tuple(),
                        enumerate_conditional_table(k, i, j, l).as_tuple(),
                    )
                )
    return out


def hat_points():
    return [(u, v) for u in HAT_AXIS for v in HAT_AXIS]


def suite_hat(k: int, threads: int, force: bool) -> List[Dict]:
    out = []
    for u, v in hat_points():
        law = enumerate_joint(k, [(u, v)], "checkerboard", threads=threads, force=force).marginal(0)
        tag = f"k={k} at ({u},{v})"
        out.append(_exact(f"mean_Xhat {tag}", an.mean_Xhat(k, u, v), law.mean()))
        out.append(_exact(f"var_Xhat {tag}", an.var_Xhat(k, u, v), law.variance()))
        out.append(_exact_law(f"pmf_Xhat {tag}", an.pmf_Xhat(k, u, v), law))
    return out


def suite_volume(k: int, threads: int, force: bool) -> List[Dict]:
    out = []
    for du in range(k + 1):
        for dv in range(k + 1):
            reference = an.pmf_X(k, (du, dv))
            for a in range(k - du + 1):
                for b in range(k - dv + 1):
                    rect = Rect(Fraction(a, k), Fraction(b, k), Fraction(du, k), Fraction(dv, k))
                    law = enumerate_volume_law(k, rect, threads=threads, force=force)
                    out.append(_exact_law(f"volume law k={k} dims ({du},{dv}) at ({a},{b})", reference, law))
    return out


def designated_mesh_points(k: int):
    h = k // 2
    pts = [(1, 1), (h, h), (1, k - 1), (k - 1, h), (h, 1)]
    return list(dict.fromkeys(pts))


DESIGNATED_HAT_POINTS = (
    (Fraction(1, 7), Fraction(1, 7)),
    (Fraction(3, 10), Fraction(7, 10)),
    (Fraction(5, 8), Fraction(3, 8)),
    (Fraction(2, 5), Fraction(2, 5)),
    (Fraction(9, 10), Fraction(1, 3)),
)


def suite_mc(k: int, seed: int, samples: int) -> List[Dict]:
    out = []
    mesh = designated_mesh_points(k)
    hats = list(DESIGNATED_HAT_POINTS)
    kinds = [("X", mesh), ("Ypoint", mesh), ("Xhat", hats)]
    if k <= MAX_Y_GRID_K:
        kinds += [("Y", mesh), ("Yhat", hats)]
    for stream, (kind, pts) in enumerate(kinds):
        values = field_samples(kind, k, pts, samples, SeededRng(seed, stream))
        for col, p in enumerate(pts):
            st = stats_from_values(values[:, col])
            if kind in ("X", "Y", "Ypoint"):
                u, v = Fraction(p[0], k), Fraction(p[1], k)
                mean = an.mean_X(k, u, v)
                var = an.var_X(k, u, v) if kind == "X" else an.var_Y(k, u, v)
            else:
                u, v = p
                mean = an.mean_Xhat(k, u, v)
                var = an.var_Xhat(k, u, v) if kind == "Xhat" else an.var_Yhat(k, u, v)
            tag = f"{kind} k={k} at ({p[0]},{p[1]}) n={samples}"
            out.append(_mc(f"mean {tag}", float(mean), st.mean, st.se_mean))
            out.append(_mc(f"variance {tag}", float(var), st.variance, st.se_variance))
    if k <= MAX_Y_GRID_K:
        h = k // 2
        base = len(kinds)
        a = field_samples("Ypoint", k, [(h, h)], KS_SAMPLES, SeededRng(seed, base))[:, 0]
        b = field_samples("Y", k, [(h, h)], KS_SAMPLES, SeededRng(seed, base + 1))[:, 0]
        res = stats.ks_2samp(a, b)
        out.append(
            {
                "claim": f"KS Ypoint vs Ygrid k={k} at ({h},{h}) n={KS_SAMPLES}",
                "analytic": "same law",
                "oracle": f"statistic={res.statistic:.6g}",
                "delta": float(res.statistic),
                "se": None,
                "pvalue": float(res.pvalue),
                "pass": bool(res.pvalue >= KS_ALPHA),
            }
        )
    return out


def run_suite(
    k: int,
    suite: str,
    *,
    seed: int = 0,
    samples: int = 1_000_000,
    force: bool = False,
    threads: int | None = None,
) -> List[Dict]:
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}")
    threads = default_threads() if threads is None else threads
    if suite == "mc":
        if samples < 2:
            raise DomainError("mc suite needs --samples >= 2")
        return suite_mc(k, seed, samples)
    check_capacity(k, force)
    fn = {
        "pmf": suite_pmf,
        "moments": suite_moments,
        "cov": suite_cov,
        "cond": suite_cond,
        "hat": suite_hat,
        "volume": suite_volume,
    }[suite]
    return fn(k, threads, force)


def all_passed(records: List[Dict]) -> bool:
    return all(r["pass"] for r in records)


def summarize(records: List[Dict]) -> str:
    failed = sum(not r["pass"] for r in records)
    return f"{len(records) - failed}/{len(records)} checks passed"
