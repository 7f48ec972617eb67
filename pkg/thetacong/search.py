"""Naive-height point search on E_{n,theta}(Q), split into height bands.

Candidates are x = p/e^2 with gcd(p, e) = 1, so y = Y/e^3 with
Y^2 = p(p + A e^2)(p - B e^2), A = (r+s)n and B = (r-s)n. The naive height
of such a point is max(|p|, e^2). Bands of heights are scanned with integer
arithmetic only and can be fanned out with joblib.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Optional

from joblib import Parallel, delayed
from loguru import logger

from .arith import QQ
from .config import BAND_WIDTH, DEFAULT_N_JOBS, SearchBudget
from .curves import Curve, CurvePoint
from .exceptions import ThetaCongDomainError

_SQUARES_MOD_64 = frozenset(i * i % 64 for i in range(64))


def _square_root(value: int) -> Optional[int]:
    if value < 0 or value % 64 not in _SQUARES_MOD_64:
        return None
    root = isqrt(value)
    return root if root * root == value else None


def scan_band(
    A: int, B: int, lo: int, hi: int, max_numerator: int, max_denominator: int
) -> list[tuple[int, int, int]]:
    """
    Integer candidates (p, e, Y) with Y >= 0 and height max(|p|, e^2) in [lo, hi).

    Only x in [-A, 0] or x >= B can give real points, so p runs over
    [-A e^2, 0] and [B e^2, ...).
    """
    found = []
    top = min(hi - 1, max_numerator)
    for e in range(1, min(max_denominator, isqrt(hi - 1)) + 1):
        e2 = e * e
        start = 0 if e2 >= lo else lo
        if start > top:
            continue
        for size in range(start, top + 1):
            for p in (-size, size) if size else (0,):
                if p < 0 and -p > A * e2:
                    continue
                if 0 < p < B * e2:
                    continue
                if p == 0 and e != 1:
                    continue
                if gcd(p, e) != 1:
                    continue
                Y = _square_root(p * (p + A * e2) * (p - B * e2))
                if Y is not None:
                    found.append((p, e, Y))
    return found


def height_bands(max_height: int, width: int = BAND_WIDTH) -> list[tuple[int, int]]:
    """Half-open bands [lo, hi) covering heights 1..max_height."""
    if width < 1:
        raise ThetaCongDomainError(f"Band width must be positive, got {width}")
    return [(lo, min(lo + width, max_height + 1)) for lo in range(1, max_height + 1, width)]


def _points(candidates) -> list[tuple[int, CurvePoint]]:
    points = []
    for p, e, Y in candidates:
        h = max(abs(p), e * e)
        x = Fraction(p, e * e)
        y = Fraction(Y, e**3)
        points.append((h, CurvePoint(x, -y)))
        if Y:
            points.append((h, CurvePoint(x, y)))
    return points


def _point_key(item):
    h, P = item
    return (h, P.x, P.y)


def _coefficients(curve: Curve) -> tuple[int, int]:
    if curve.field != QQ:
        raise ThetaCongDomainError("Point search works over Q only")
    return -curve.roots[1], curve.roots[2]


def naive_point_search(
    curve: Curve, budget: Optional[SearchBudget] = None, n_jobs: Optional[int] = None
) -> list[CurvePoint]:
    """All affine points with |p| <= maxNumerator and e <= maxDenominator, sorted by height then x."""
    budget = budget or SearchBudget()
    n_jobs = n_jobs or DEFAULT_N_JOBS
    A, B = _coefficients(curve)
    bands = height_bands(budget.max_height)
    logger.info(f"Searching {curve} over {len(bands)} height bands with n_jobs={n_jobs}")
    results = Parallel(n_jobs=n_jobs)(
        delayed(scan_band)(A, B, lo, hi, budget.max_numerator, budget.max_denominator)
        for lo, hi in bands
    )
    points = sorted(
        (item for band in results for item in _points(band)), key=_point_key
    )
    return [P for _, P in points]


def first_witness(
    curves: list[Curve], budget: Optional[SearchBudget] = None, n_jobs: Optional[int] = None
) -> Optional[tuple[int, CurvePoint, int]]:
    """
    The least point with y != 0 over all curves, as (curve index, point, height).

    Bands are opened in ascending order, n_jobs at a time, and every curve is
    scanned in a band before the next band is looked at, so the answer is the
    minimum of (height, curve index, x, y) whatever n_jobs is.
    """
    budget = budget or SearchBudget()
    n_jobs = n_jobs or DEFAULT_N_JOBS
    coefficients = [_coefficients(curve) for curve in curves]
    bands = height_bands(budget.max_height)
    step = max(1, n_jobs)
    for start in range(0, len(bands), step):
        chunk = bands[start : start + step]
        tasks = [(i, band) for band in chunk for i in range(len(curves))]
        results = Parallel(n_jobs=n_jobs)(
            delayed(scan_band)(
                *coefficients[i], lo, hi, budget.max_numerator, budget.max_denominator
            )
            for i, (lo, hi) in tasks
        )
        hits = []
        for (i, _), band in zip(tasks, results):
            for h, P in _points(band):
                if P.y != 0:
                    hits.append((h, i, P.x, P.y, P))
        if hits:
            h, i, _, _, P = min(hits, key=lambda hit: hit[:4])
            logger.success(f"Witness {P} on {curves[i]} at height {h}")
            return i, P, h
        logger.debug(f"No witness below height {chunk[-1][1]}")
    return None


__all__ = ["scan_band", "height_bands", "naive_point_search", "first_witness"]
