"""Independent reference computations used to cross-check the main code paths.

Nothing here shares logic with the recurrences, the polygon engine or the
closed forms: Farey sets come from gcd filtering plus sorting, threshold
counts from the lattice description of neighbouring denominators, and areas
from Monte Carlo sampling.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

PRNG = "numpy.random.Generator(PCG64)"


def brute_farey(Q: int, keep=None) -> list[tuple[int, int]]:
    """Sorted reduced a/q in (0, 1] with q <= Q, optionally filtered by keep(a, q)."""
    out = [(a, q) for q in range(1, Q + 1) for a in range(1, q + 1) if gcd(a, q) == 1]
    if keep is not None:
        out = [p for p in out if keep(*p)]
    out.sort(key=lambda p: Fraction(p[0], p[1]))
    return out


def brute_farey_arrays(Q: int) -> tuple[np.ndarray, np.ndarray]:
    """F_Q by vectorized gcd filtering and a sort on a/q (ties are impossible)."""
    q, a = np.meshgrid(np.arange(1, Q + 1, dtype=np.int64), np.arange(1, Q + 1, dtype=np.int64), indexing="ij")
    a, q = a.ravel(), q.ravel()
    keep = (a <= q) & (np.gcd(a, q) == 1)
    a, q = a[keep], q[keep]
    # distinct members differ by at least 1/Q^2, far above double resolution
    order = np.argsort(a / q, kind="stable")
    return a[order], q[order]


def lattice_threshold_count(Q: int, xi: Fraction) -> int:
    """#{(q, q'): q, q' <= Q, q + q' > Q, gcd = 1, q q' >= Q^2 / xi}."""
    xi = Fraction(xi)
    total = 0
    for q in range(1, Q + 1):
        for qp in range(Q - q + 1, Q + 1):
            if gcd(q, qp) == 1 and q * qp * xi.numerator >= Q * Q * xi.denominator:
                total += 1
    return total


def monte_carlo_areas(n: int, seed: int, xis: np.ndarray, Kmax: int, chunk: int = 10**6):
    """Monte Carlo estimates of A(xi) and A_K(xi) for K <= Kmax at every xi.

    Points are uniform in the unit square.  A point (x, y) of the triangle
    counts toward A(xi) once xi >= 1/(x y), and toward A_K(xi), with
    K = floor((1 + x)/y), once xi >= K/(x (K y - x)).  Returns estimates of
    the areas (fractions of the unit square) with shape (len(xis),) and
    (Kmax, len(xis)).
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    xis = np.asarray(xis, dtype=float)
    hit_A = np.zeros(len(xis), dtype=np.int64)
    hit_K = np.zeros((Kmax, len(xis)), dtype=np.int64)
    done = 0
    while done < n:
        m = min(chunk, n - done)
        pts = rng.random((m, 2))
        x, y = 1.0 - pts[:, 0], 1.0 - pts[:, 1]  # (0, 1]
        inside = x + y > 1
        x, y = x[inside], y[inside]
        t_A = np.sort(1.0 / (x * y))
        hit_A += np.searchsorted(t_A, xis, side="right")
        K = np.floor((1 + x) / y).astype(np.int64)
        for k in range(1, Kmax + 1):
            sel = K == k
            xs, ys = x[sel], y[sel]
            t = np.sort(k / (xs * (k * ys - xs)))
            hit_K[k - 1] += np.searchsorted(t, xis, side="right")
        done += m
    return hit_A / n, hit_K / n
