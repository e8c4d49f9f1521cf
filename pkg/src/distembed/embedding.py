"""Inner products, norms and pointwise values of embedded generalized measures.

The inner product is linear in the first argument and anti-linear in the
second.  For atoms a = (w_a, p, x) and b = (w_b, q, y) the pairing is

    <emb(a), emb(b)> = w_a * conj(w_b) * (-1)^(|p|+|q|) * d^(q,p) k(y, x),

which reduces to w_a conj(w_b) k(y, x) for plain point masses.  Gram
blocks are assembled vectorized per derivative-order pair and summed in
the canonical atom ordering, so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    Atom,
    GeneralizedMeasure,
    OrderLike,
    PointLike,
    as_multi_index,
    as_point,
    gm_linear_combine,
)
from .errors import InvalidArgumentError, NumericalInconsistencyError, UnsupportedOrderError
from .kernels import Kernel, pair_deriv_any, require_order

__all__ = [
    "EmbeddedFunction",
    "SpdDiagnostic",
    "gram_entry",
    "inner",
    "norm",
    "distance",
    "embed_eval",
    "embed_eval_deriv",
    "spd_check",
]

# Row-chunk cap for large order-0 Gram blocks; keeps peak memory bounded
# without changing the summation order within a block.
_BLOCK_CELLS = 2**22


def _check_measure(kernel: Kernel, measure: GeneralizedMeasure) -> None:
    if measure.dimension != kernel.dimension:
        raise InvalidArgumentError(
            f"measure dimension {measure.dimension} does not match kernel dimension {kernel.dimension}"
        )
    if measure.max_order > kernel.smoothness:
        raise UnsupportedOrderError(
            f"measure contains derivative atoms of order {measure.max_order}, "
            f"kernel smoothness is {kernel.smoothness}"
        )


def _groups(measure: GeneralizedMeasure):
    """Atoms grouped by derivative order, in canonical order."""
    grouped: dict[tuple[int, ...], list[Atom]] = {}
    for a in measure.atoms:
        grouped.setdefault(a.order.entries, []).append(a)
    out = []
    for entries in sorted(grouped):
        atoms = grouped[entries]
        out.append(
            (
                entries,
                np.asarray([a.weight for a in atoms], dtype=complex),
                np.asarray([a.location for a in atoms], dtype=float),
            )
        )
    return out


def _block_bilinear(kernel, q, p, wb, Y, wa, X) -> complex:
    """conj(wb) @ d^(q,p)k(Y, X) @ wa, row-chunked for large blocks."""
    rows = Y.shape[0]
    chunk = max(1, _BLOCK_CELLS // max(1, X.shape[0]))
    partials = []
    for start in range(0, rows, chunk):
        block = pair_deriv_any(kernel, q, p, Y[start : start + chunk], X)
        partials.append(np.conj(wb[start : start + chunk]) @ block @ wa)
    return complex(np.sum(partials))


def gram_entry(kernel: Kernel, a: Atom, b: Atom) -> complex:
    """RKHS inner product of the embeddings of two derivative point masses."""
    pa = as_multi_index(a.order, kernel.dimension)
    qb = as_multi_index(b.order, kernel.dimension)
    require_order(kernel, pa, qb)
    sign = -1.0 if (pa.order + qb.order) % 2 else 1.0
    block = pair_deriv_any(
        kernel,
        qb.entries,
        pa.entries,
        np.asarray([b.location], dtype=float),
        np.asarray([a.location], dtype=float),
    )
    return a.weight * np.conj(b.weight) * sign * complex(block[0, 0])


def inner(kernel: Kernel, d: GeneralizedMeasure, t: GeneralizedMeasure) -> complex:
    """<emb(d), emb(t)>; Hermitian: inner(d, t) == conj(inner(t, d))."""
    _check_measure(kernel, d)
    _check_measure(kernel, t)
    if d.dimension != t.dimension:
        raise InvalidArgumentError("measures have different dimensions")
    total = 0j
    for p, wa, X in _groups(d):
        for q, wb, Y in _groups(t):
            sign = -1.0 if (sum(p) + sum(q)) % 2 else 1.0
            total += sign * _block_bilinear(kernel, q, p, wb, Y, wa, X)
    return total


def norm(kernel: Kernel, measure: GeneralizedMeasure) -> float:
    """RKHS norm of the embedding; sqrt of the (real, nonnegative) self-inner product.

    Tiny negative or imaginary residues are clamped; anything beyond
    1e-10 * (1 + |value|) raises :class:`NumericalInconsistencyError`,
    which indicates a broken kernel rather than roundoff.
    """
    v = inner(kernel, measure, measure)
    tol = 1e-10 * (1.0 + abs(v))
    if abs(v.imag) > tol:
        raise NumericalInconsistencyError(
            f"self inner product has imaginary residue {v.imag:g} beyond tolerance"
        )
    if v.real < -tol:
        raise NumericalInconsistencyError(
            f"self inner product is negative ({v.real:g}): kernel is not positive definite"
        )
    return float(np.sqrt(max(0.0, v.real)))


def distance(kernel: Kernel, d: GeneralizedMeasure, t: GeneralizedMeasure) -> float:
    """Embedding semi-metric ||emb(d) - emb(t)||; a metric when the kernel separates d - t."""
    return norm(kernel, gm_linear_combine([(1.0, d), (-1.0, t)]))


def embed_eval(kernel: Kernel, measure: GeneralizedMeasure, y: PointLike) -> complex:
    """Pointwise value at y of the embedded function.

    Each atom (w, p, x) contributes w * (-1)^|p| * d^(0,p) k(y, x); for a
    point mass this is the reproducing identity emb(delta_x)(y) = k(y, x).
    """
    _check_measure(kernel, measure)
    return embed_eval_deriv(kernel, measure, (0,) * kernel.dimension, y)


def embed_eval_deriv(
    kernel: Kernel, measure: GeneralizedMeasure, q: OrderLike, y: PointLike
) -> complex:
    """q-th partial derivative of the embedded function at y."""
    _check_measure(kernel, measure)
    qi = as_multi_index(q, kernel.dimension)
    Yn = np.asarray([as_point(y, kernel.dimension)], dtype=float)
    total = 0j
    for p, w, X in _groups(measure):
        if sum(p) + qi.order > kernel.smoothness:
            raise UnsupportedOrderError(
                f"evaluation order |p| + |q| = {sum(p) + qi.order} exceeds smoothness {kernel.smoothness}"
            )
        sign = -1.0 if sum(p) % 2 else 1.0
        row = pair_deriv_any(kernel, qi.entries, p, Yn, X)[0]
        total += sign * complex(row @ w)
    return total


@dataclass(frozen=True)
class EmbeddedFunction:
    """An RKHS element represented implicitly by (kernel, source measure)."""

    kernel: Kernel
    source: GeneralizedMeasure

    def __post_init__(self) -> None:
        _check_measure(self.kernel, self.source)

    def __call__(self, y: PointLike) -> complex:
        return embed_eval(self.kernel, self.source, y)

    def derivative(self, q: OrderLike, y: PointLike) -> complex:
        return embed_eval_deriv(self.kernel, self.source, q, y)

    def norm(self) -> float:
        return norm(self.kernel, self.source)


@dataclass(frozen=True)
class SpdDiagnostic:
    """Verdict of a strict-positive-definiteness probe on a finite atom set."""

    min_eigenvalue: float
    gram_size: int
    verdict: str  # positive-definite | semidefinite-degenerate | indefinite-numerical


def spd_check(kernel: Kernel, atoms: Sequence[Atom], tol: float) -> SpdDiagnostic:
    """Assemble the Hermitian Gram matrix of unit-weight atoms and inspect its spectrum.

    ``indefinite-numerical`` (min eigenvalue < -tol) signals a kernel
    implementation bug; a positive definite kernel can at worst look
    degenerate through roundoff.
    """
    if not atoms:
        raise InvalidArgumentError("spd_check needs at least one atom")
    if not (isinstance(tol, (int, float)) and tol > 0):
        raise InvalidArgumentError(f"tolerance must be positive, got {tol!r}")
    units = [Atom(1.0, a.order, a.location) for a in atoms]
    n = len(units)
    gram = np.empty((n, n), dtype=complex)
    for i, a in enumerate(units):
        for j, b in enumerate(units):
            gram[i, j] = gram_entry(kernel, a, b)
    lam_min = float(np.linalg.eigvalsh(gram)[0])
    if lam_min > tol:
        verdict = "positive-definite"
    elif lam_min >= -tol:
        verdict = "semidefinite-degenerate"
    else:
        verdict = "indefinite-numerical"
    return SpdDiagnostic(lam_min, n, verdict)
