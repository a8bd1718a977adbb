"""Hot numeric kernels: haversine, ray-cast point-in-ring, point-to-segment distance.

Each kernel has a pure-numpy implementation and, when numba is importable, an
@njit twin. Selection happens once at import:

    FUZZYGEO_NUMBA=0   force the numpy path
    FUZZYGEO_NUMBA=1   require numba (ImportError if missing)
    unset              numba if available, else numpy

``python -m fuzzygeo.benchmark`` (or benchmarks/bench_kernels.py) times both
paths side by side.
"""

from __future__ import annotations

import math
import os

import numpy as np

EARTH_RADIUS_KM = 6371.0088  # mean radius, sphere model
KM_PER_DEG = math.pi * EARTH_RADIUS_KM / 180.0  # 111.19492664455873


# ── numpy implementations ────────────────────────────────

def haversine_km_numpy(lat1, lon1, lat2, lon2) -> np.ndarray:
    """Great-circle distance in km between paired coordinate arrays (degrees)."""
    lat1 = np.radians(np.asarray(lat1, dtype=np.float64))
    lon1 = np.radians(np.asarray(lon1, dtype=np.float64))
    lat2 = np.radians(np.asarray(lat2, dtype=np.float64))
    lon2 = np.radians(np.asarray(lon2, dtype=np.float64))
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    a = np.sin(dlat / 2.0) ** 2 + np.cos(lat1) * np.cos(lat2) * np.sin(dlon / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * np.arcsin(np.minimum(1.0, np.sqrt(a)))


def points_in_ring_numpy(px: np.ndarray, py: np.ndarray,
                         rx: np.ndarray, ry: np.ndarray) -> np.ndarray:
    """Even-odd ray cast of points against one closed ring. Boundary points are
    arbitrary (callers needing boundary semantics combine with a distance test)."""
    x1, y1 = rx[:-1], ry[:-1]
    x2, y2 = rx[1:], ry[1:]
    pyc = py[:, None]
    crosses = (y1 > pyc) != (y2 > pyc)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = (x2 - x1) * (pyc - y1) / (y2 - y1) + x1
    hits = crosses & (px[:, None] < xint)
    return (hits.sum(axis=1) % 2).astype(bool)


def min_dist_to_segments_numpy(px: np.ndarray, py: np.ndarray,
                               ax: np.ndarray, ay: np.ndarray,
                               bx: np.ndarray, by: np.ndarray) -> np.ndarray:
    """Minimum euclidean distance from each point to any segment (a[i], b[i])."""
    dx = bx - ax
    dy = by - ay
    seg2 = dx * dx + dy * dy
    safe = np.where(seg2 > 0.0, seg2, 1.0)
    t = ((px[:, None] - ax) * dx + (py[:, None] - ay) * dy) / safe
    t = np.clip(t, 0.0, 1.0)
    qx = ax + t * dx
    qy = ay + t * dy
    d2 = (px[:, None] - qx) ** 2 + (py[:, None] - qy) ** 2
    return np.sqrt(d2.min(axis=1))


# ── numba implementations ────────────────────────────────

def _build_numba():
    from numba import njit

    @njit(cache=True)
    def haversine_kernel(lat1, lon1, lat2, lon2, out):
        for i in range(lat1.shape[0]):
            p1 = math.radians(lat1[i])
            p2 = math.radians(lat2[i])
            dlat = p2 - p1
            dlon = math.radians(lon2[i] - lon1[i])
            a = math.sin(dlat / 2.0) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dlon / 2.0) ** 2
            s = math.sqrt(a)
            if s > 1.0:
                s = 1.0
            out[i] = 2.0 * EARTH_RADIUS_KM * math.asin(s)

    @njit(cache=True)
    def ring_kernel(px, py, rx, ry, out):
        n = rx.shape[0]
        for k in range(px.shape[0]):
            x = px[k]
            y = py[k]
            inside = False
            j = n - 1
            for i in range(n):
                if (ry[i] > y) != (ry[j] > y):
                    xint = (rx[j] - rx[i]) * (y - ry[i]) / (ry[j] - ry[i]) + rx[i]
                    if x < xint:
                        inside = not inside
                j = i
            out[k] = inside

    @njit(cache=True)
    def segdist_kernel(px, py, ax, ay, bx, by, out):
        m = ax.shape[0]
        for k in range(px.shape[0]):
            x = px[k]
            y = py[k]
            best = np.inf
            for i in range(m):
                dx = bx[i] - ax[i]
                dy = by[i] - ay[i]
                seg2 = dx * dx + dy * dy
                if seg2 > 0.0:
                    t = ((x - ax[i]) * dx + (y - ay[i]) * dy) / seg2
                    if t < 0.0:
                        t = 0.0
                    elif t > 1.0:
                        t = 1.0
                else:
                    t = 0.0
                qx = ax[i] + t * dx
                qy = ay[i] + t * dy
                d2 = (x - qx) ** 2 + (y - qy) ** 2
                if d2 < best:
                    best = d2
            out[k] = math.sqrt(best)

    def haversine_km_numba(lat1, lon1, lat2, lon2):
        lat1, lon1, lat2, lon2 = np.broadcast_arrays(
            np.atleast_1d(np.asarray(lat1, dtype=np.float64)),
            np.atleast_1d(np.asarray(lon1, dtype=np.float64)),
            np.atleast_1d(np.asarray(lat2, dtype=np.float64)),
            np.atleast_1d(np.asarray(lon2, dtype=np.float64)),
        )
        out = np.empty(lat1.shape[0], dtype=np.float64)
        haversine_kernel(np.ascontiguousarray(lat1), np.ascontiguousarray(lon1),
                         np.ascontiguousarray(lat2), np.ascontiguousarray(lon2), out)
        return out

    def points_in_ring_numba(px, py, rx, ry):
        out = np.empty(px.shape[0], dtype=np.bool_)
        ring_kernel(px, py, rx, ry, out)
        return out

    def min_dist_to_segments_numba(px, py, ax, ay, bx, by):
        out = np.empty(px.shape[0], dtype=np.float64)
        segdist_kernel(px, py, ax, ay, bx, by, out)
        return out

    return haversine_km_numba, points_in_ring_numba, min_dist_to_segments_numba


def _select_backend():
    flag = os.environ.get("FUZZYGEO_NUMBA", "").strip().lower()
    if flag in ("0", "false", "off", "no"):
        return False, None
    try:
        impls = _build_numba()
    except ImportError:
        if flag in ("1", "true", "on", "yes"):
            raise
        return False, None
    return True, impls


USING_NUMBA, _numba_impls = _select_backend()

if USING_NUMBA:
    haversine_km, points_in_ring, min_dist_to_segments = _numba_impls
else:
    haversine_km = haversine_km_numpy
    points_in_ring = points_in_ring_numpy
    min_dist_to_segments = min_dist_to_segments_numpy


def haversine_scalar(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    return float(haversine_km(np.array([lat1]), np.array([lon1]),
                              np.array([lat2]), np.array([lon2]))[0])


def warmup() -> None:
    """Trigger JIT compilation (no-op on the numpy path)."""
    p = np.array([0.5])
    ring = np.array([0.0, 1.0, 1.0, 0.0, 0.0])
    haversine_km(p, p, p, p)
    points_in_ring(p, p, ring, np.array([0.0, 0.0, 1.0, 1.0, 0.0]))
    min_dist_to_segments(p, p, ring[:-1], ring[:-1], ring[1:], ring[1:])
