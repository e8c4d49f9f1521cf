"""Adaptive panel Gauss-Legendre quadrature over axis-aligned boxes.

Panels are refined globally (worst estimated error first) until the summed
error estimate drops below ``rel_tol * |integral| + abs_tol``.  Evaluation
is vectorized: the integrand receives an (n, d) array of nodes and must
return (n,) values.  Panel bookkeeping is deterministic, so results are
reproducible bit-for-bit for a given integrand.
"""

from __future__ import annotations

import heapq
import itertools
import math
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidArgumentError, QuadratureBudgetError

__all__ = ["gauss_legendre_rule", "integrate_box"]

MAX_EVALS_DEFAULT = 2**20


@lru_cache(maxsize=64)
def gauss_legendre_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the Gauss-Legendre rule on [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _tensor_rule(box: tuple[tuple[float, float], ...], order: int):
    nodes1, weights1 = gauss_legendre_rule(order)
    axes_nodes = []
    axes_weights = []
    for lo, hi in box:
        half = 0.5 * (hi - lo)
        axes_nodes.append(lo + half * (nodes1 + 1.0))
        axes_weights.append(half * weights1)
    if len(box) == 1:
        return axes_nodes[0][:, None], axes_weights[0]
    grids = np.meshgrid(*axes_nodes, indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=-1)
    w = axes_weights[0]
    for aw in axes_weights[1:]:
        w = np.multiply.outer(w, aw)
    return nodes, w.ravel()


def _panel_estimates(f, box, order):
    nodes_lo, w_lo = _tensor_rule(box, order)
    nodes_hi, w_hi = _tensor_rule(box, 2 * order)
    coarse = float(np.real_if_close(np.sum(np.asarray(f(nodes_lo)) * w_lo)))
    fine = float(np.real_if_close(np.sum(np.asarray(f(nodes_hi)) * w_hi)))
    evals = len(w_lo) + len(w_hi)
    return fine, abs(fine - coarse), evals


def _split(box: tuple[tuple[float, float], ...]):
    widths = [hi - lo for lo, hi in box]
    j = widths.index(max(widths))
    lo, hi = box[j]
    mid = 0.5 * (lo + hi)
    left = tuple((mid, hi) if i == j else e for i, e in enumerate(box))
    right = tuple((lo, mid) if i == j else e for i, e in enumerate(box))
    return right, left


def integrate_box(
    f: Callable[[np.ndarray], np.ndarray],
    box: Sequence[Sequence[float]],
    rel_tol: float = 1e-8,
    abs_tol: float = 0.0,
    max_evals: int = MAX_EVALS_DEFAULT,
    base_order: int = 16,
) -> float:
    """Integrate a real-valued integrand over a d-dimensional box.

    Raises :class:`QuadratureBudgetError` when ``max_evals`` integrand
    evaluations are exhausted before the tolerance is met.
    """
    edges = []
    for lo, hi in box:
        lo, hi = float(lo), float(hi)
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise InvalidArgumentError(f"bad integration edge ({lo}, {hi})")
        edges.append((lo, hi))
    if not edges:
        raise InvalidArgumentError("integration box needs at least one axis")
    root = tuple(edges)

    counter = itertools.count()  # tie-break so heap order never compares boxes
    value, err, used = _panel_estimates(f, root, base_order)
    heap = [(-err, next(counter), root, value, err)]
    total, total_err = value, err

    while total_err > rel_tol * abs(total) + abs_tol:
        neg_err, _, panel_box, panel_value, panel_err = heapq.heappop(heap)
        if panel_err <= 0:
            # Nothing left to gain: remaining error is pure roundoff.
            heapq.heappush(heap, (neg_err, next(counter), panel_box, panel_value, panel_err))
            break
        children = _split(panel_box)
        total -= panel_value
        total_err -= panel_err
        for child in children:
            if used >= max_evals:
                raise QuadratureBudgetError(
                    f"quadrature budget of {max_evals} evaluations exceeded"
                )
            v, e, n = _panel_estimates(f, child, base_order)
            used += n
            total += v
            total_err += e
            heapq.heappush(heap, (-e, next(counter), child, v, e))
    return total
