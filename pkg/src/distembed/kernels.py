"""Kernels with analytic mixed partial derivatives, plus combinators.

Every kernel evaluates pairwise on arrays: ``pair_eval(X, Y)`` maps point
arrays of shapes (n, d) and (m, d) to the (n, m) matrix ``k(X_i, Y_j)``,
and ``pair_deriv(p, q, X, Y)`` to the mixed partials, where the multi-index
``p`` differentiates the first slot and ``q`` the second.  Scalar wrappers
(:func:`kernel_eval`, :func:`kernel_deriv`) add the argument checking the
rest of the package relies on.

Kernels are immutable after construction and their evaluators are pure;
combinators capture their inputs by value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb
from typing import Callable, Sequence

import numpy as np

from .core import GeneralizedMeasure, MultiIndex, OrderLike, PointLike, as_multi_index, as_point
from .errors import InvalidArgumentError, UnsupportedOrderError
from .spectral import SpectralMeasure

__all__ = [
    "UNBOUNDED",
    "StationaryProfile",
    "Kernel",
    "kernel_eval",
    "kernel_deriv",
    "kernel_deriv_fd",
    "kernel_sum",
    "kernel_scale",
    "kernel_shift_constant",
    "kernel_center",
    "kernel_derived",
    "gaussian_kernel",
    "laplace_kernel",
    "sinc_kernel",
    "cosine_kernel",
    "inverse_multiquadric_kernel",
    "constant_kernel",
    "brownian_kernel",
]

UNBOUNDED = math.inf  # smoothness sentinel: any finite derivative order is available


@dataclass(frozen=True)
class StationaryProfile:
    """Profile psi with k(x, y) = psi(x - y), vectorized over (n, d) lags,
    plus the spectral measure handle when a closed form is known."""

    psi: Callable[[np.ndarray], np.ndarray]
    spectral_measure: SpectralMeasure | None = None


@dataclass(frozen=True)
class Kernel:
    """A positive definite kernel on R^d with declared smoothness.

    ``smoothness`` is the largest order m for which the mixed partials
    d^(p,q) k with |p|, |q| <= m are available (``UNBOUNDED`` for smooth
    kernels).  ``pair_deriv`` may be None, in which case derivative requests
    fall back to central finite differences with degraded guarantees.
    """

    dimension: int
    smoothness: float
    pair_eval: Callable[[np.ndarray, np.ndarray], np.ndarray]
    pair_deriv: Callable[[tuple, tuple, np.ndarray, np.ndarray], np.ndarray] | None = None
    stationary: StationaryProfile | None = None
    label: str = ""

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise InvalidArgumentError("kernel dimension must be >= 1")
        if not (self.smoothness == UNBOUNDED or (isinstance(self.smoothness, int) and self.smoothness >= 0)):
            raise InvalidArgumentError(f"smoothness must be a nonnegative int or UNBOUNDED, got {self.smoothness!r}")


def _points_array(x, dimension: int) -> np.ndarray:
    return np.asarray([as_point(x, dimension)], dtype=float)


def require_order(kernel: Kernel, p: MultiIndex, q: MultiIndex) -> None:
    if p.order > kernel.smoothness or q.order > kernel.smoothness:
        raise UnsupportedOrderError(
            f"derivative orders ({p.order}, {q.order}) exceed the kernel's "
            f"declared smoothness {kernel.smoothness}"
        )


def pair_deriv_any(kernel: Kernel, p: tuple, q: tuple, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Pairwise d^(p,q) matrix, routing order (0, 0) through pair_eval."""
    if not any(p) and not any(q):
        return kernel.pair_eval(X, Y)
    if kernel.pair_deriv is not None:
        return kernel.pair_deriv(p, q, X, Y)
    out = np.empty((X.shape[0], Y.shape[0]), dtype=complex)
    for i in range(X.shape[0]):
        for j in range(Y.shape[0]):
            out[i, j] = _fd_default(kernel, p, q, X[i], Y[j])
    return out


def kernel_eval(kernel: Kernel, x: PointLike, y: PointLike) -> complex:
    """k(x, y)."""
    X = _points_array(x, kernel.dimension)
    Y = _points_array(y, kernel.dimension)
    return complex(kernel.pair_eval(X, Y)[0, 0])


def kernel_deriv(kernel: Kernel, p: OrderLike, q: OrderLike, x: PointLike, y: PointLike) -> complex:
    """Mixed partial d^(p,q) k(x, y); p acts on the first slot, q on the second."""
    pi = as_multi_index(p, kernel.dimension)
    qi = as_multi_index(q, kernel.dimension)
    require_order(kernel, pi, qi)
    X = _points_array(x, kernel.dimension)
    Y = _points_array(y, kernel.dimension)
    return complex(pair_deriv_any(kernel, pi.entries, qi.entries, X, Y)[0, 0])


def _central_stencil(n: int) -> list[tuple[float, float]]:
    # n-th order central difference: sum_i (-1)^i C(n,i) f(x + (n/2 - i) h),
    # truncation O(h^2).
    return [((n / 2.0 - i), float((-1) ** i * comb(n, i))) for i in range(n + 1)]


def _fd_once(kernel: Kernel, p: tuple, q: tuple, x: np.ndarray, y: np.ndarray, h: float) -> complex:
    slots: list[list[tuple[np.ndarray, float]]] = []
    d = kernel.dimension
    for slot, orders in ((0, p), (1, q)):
        for axis, n in enumerate(orders):
            if n == 0:
                continue
            shifts = []
            for off, coeff in _central_stencil(n):
                delta = np.zeros((2, d))
                delta[slot, axis] = off * h
                shifts.append((delta, coeff))
            slots.append(shifts)
    total = 0j
    stack = [(np.zeros((2, d)), 1.0)]
    for shifts in slots:
        stack = [(acc + delta, c * coeff) for acc, c in stack for delta, coeff in shifts]
    for delta, coeff in stack:
        total += coeff * complex(
            kernel.pair_eval((x + delta[0])[None, :], (y + delta[1])[None, :])[0, 0]
        )
    return total / h ** (sum(p) + sum(q))


def kernel_deriv_fd(
    kernel: Kernel,
    p: OrderLike,
    q: OrderLike,
    x: PointLike,
    y: PointLike,
    h: float,
    richardson: int = 0,
) -> complex:
    """Central finite-difference estimate of d^(p,q) k(x, y) from kernel values alone.

    Truncation error is O(h^2); each Richardson level squares away the
    leading error term at the cost of one extra stencil sweep.  Serves as
    the independent oracle for analytic derivative implementations.
    """
    if not (isinstance(h, (int, float)) and math.isfinite(h) and h > 0):
        raise InvalidArgumentError(f"finite-difference step must be positive, got {h!r}")
    if not isinstance(richardson, int) or richardson < 0:
        raise InvalidArgumentError("richardson must be a nonnegative integer")
    pi = as_multi_index(p, kernel.dimension)
    qi = as_multi_index(q, kernel.dimension)
    xa = np.asarray(as_point(x, kernel.dimension))
    ya = np.asarray(as_point(y, kernel.dimension))
    if pi.order == 0 and qi.order == 0:
        return kernel_eval(kernel, x, y)
    estimates = [
        _fd_once(kernel, pi.entries, qi.entries, xa, ya, h / 2**j)
        for j in range(richardson + 1)
    ]
    for level in range(1, richardson + 1):
        factor = 4.0**level
        estimates = [
            (factor * estimates[j + 1] - estimates[j]) / (factor - 1.0)
            for j in range(len(estimates) - 1)
        ]
    return estimates[0]


def _fd_default(kernel: Kernel, p: tuple, q: tuple, x: np.ndarray, y: np.ndarray) -> complex:
    # Fallback for kernels without derivative closures: central stencils with
    # h = 1e-4 * (1 + |x|_inf) and one Richardson level (orders <= 3).
    h = 1e-4 * (1.0 + float(np.max(np.abs(x), initial=0.0)))
    a0 = _fd_once(kernel, p, q, x, y, h)
    a1 = _fd_once(kernel, p, q, x, y, h / 2)
    return (4.0 * a1 - a0) / 3.0


# ---------------------------------------------------------------------------
# combinators


def kernel_sum(k1: Kernel, k2: Kernel) -> Kernel:
    """Pointwise sum; smoothness is the weaker of the two."""
    if k1.dimension != k2.dimension:
        raise InvalidArgumentError("cannot add kernels of different dimensions")
    smooth = min(k1.smoothness, k2.smoothness)

    def pe(X, Y):
        return k1.pair_eval(X, Y) + k2.pair_eval(X, Y)

    def pd(p, q, X, Y):
        return pair_deriv_any(k1, p, q, X, Y) + pair_deriv_any(k2, p, q, X, Y)

    stat_profile = None
    if k1.stationary is not None and k2.stationary is not None:
        s1, s2 = k1.stationary, k2.stationary
        spectral = None
        if (
            s1.spectral_measure is not None
            and s2.spectral_measure is not None
            and s1.spectral_measure.density is None
            and s2.spectral_measure.density is None
        ):
            spectral = SpectralMeasure(
                k1.dimension,
                s1.spectral_measure.atoms + s2.spectral_measure.atoms,
            )
        stat_profile = StationaryProfile(lambda H: s1.psi(H) + s2.psi(H), spectral)
    return Kernel(
        k1.dimension, smooth, pe, pd, stat_profile,
        label=f"({k1.label} + {k2.label})",
    )


def kernel_scale(kernel: Kernel, a: float) -> Kernel:
    """a * k for a > 0 (keeps positive definiteness)."""
    if not (isinstance(a, (int, float)) and math.isfinite(a) and a > 0):
        raise InvalidArgumentError(f"scale factor must be a positive real, got {a!r}")
    a = float(a)

    def pe(X, Y):
        return a * kernel.pair_eval(X, Y)

    def pd(p, q, X, Y):
        return a * pair_deriv_any(kernel, p, q, X, Y)

    stat = None
    if kernel.stationary is not None:
        s = kernel.stationary
        spectral = None if s.spectral_measure is None else s.spectral_measure.scaled(a)
        stat = StationaryProfile(lambda H: a * s.psi(H), spectral)
    return Kernel(
        kernel.dimension, kernel.smoothness, pe, pd, stat,
        label=f"{a}*{kernel.label}",
    )


def kernel_shift_constant(kernel: Kernel, c: float) -> Kernel:
    """k + c for c >= 0; derivatives of order >= 1 are untouched."""
    if not (isinstance(c, (int, float)) and math.isfinite(c) and c >= 0):
        raise InvalidArgumentError(
            f"constant shift must be >= 0 to keep positive definiteness, got {c!r}"
        )
    c = float(c)
    if c == 0.0:
        return kernel

    def pe(X, Y):
        return kernel.pair_eval(X, Y) + c

    def pd(p, q, X, Y):
        out = pair_deriv_any(kernel, p, q, X, Y)
        if not any(p) and not any(q):
            out = out + c
        return out

    stat = None
    if kernel.stationary is not None:
        s = kernel.stationary
        spectral = None
        if s.spectral_measure is not None:
            spectral = s.spectral_measure.with_extra_atom((0.0,) * kernel.dimension, c)
        stat = StationaryProfile(lambda H: s.psi(H) + c, spectral)
    return Kernel(
        kernel.dimension, kernel.smoothness, pe, pd, stat,
        label=f"({kernel.label} + {c})",
    )


def kernel_center(kernel: Kernel, nu0: GeneralizedMeasure) -> Kernel:
    """The centered kernel k0(x, y) = <emb(delta_x - nu0), emb(delta_y - nu0)>.

    k0(x, y) = k(x, y) - Phi(x) - conj(Phi(y)) + |nu0|^2 with
    Phi = the embedding of nu0.  nu0 must consist of order-0 atoms.
    k0 induces the same semi-metric as k on equal-mass pairs and embeds
    nu0 itself to the null function.
    """
    if nu0.dimension != kernel.dimension:
        raise InvalidArgumentError("centering measure dimension does not match the kernel")
    if nu0.max_order > 0:
        raise InvalidArgumentError("centering requires a measure with order-0 atoms only")
    Z = np.asarray([a.location for a in nu0.atoms], dtype=float).reshape(len(nu0), kernel.dimension)
    w = np.asarray([a.weight for a in nu0.atoms], dtype=complex)
    if len(nu0) == 0:
        raise InvalidArgumentError("centering on the zero measure is a no-op; pass the kernel itself")
    gram = np.asarray(kernel.pair_eval(Z, Z))
    norm_sq = float(np.real(np.conj(w) @ gram @ w))

    def phi(X, p=None):
        if p is None or not any(p):
            block = kernel.pair_eval(X, Z)
        else:
            block = pair_deriv_any(kernel, p, (0,) * kernel.dimension, X, Z)
        return np.asarray(block) @ w

    def pe(X, Y):
        return (
            kernel.pair_eval(X, Y)
            - phi(X)[:, None]
            - np.conj(phi(Y))[None, :]
            + norm_sq
        )

    def pd(p, q, X, Y):
        out = np.asarray(pair_deriv_any(kernel, p, q, X, Y), dtype=complex).copy()
        if not any(q):
            out -= phi(X, p)[:, None]
        if not any(p):
            out -= np.conj(phi(Y, q))[None, :]
        if not any(p) and not any(q):
            out += norm_sq
        return out

    return Kernel(
        kernel.dimension, kernel.smoothness, pe, pd, None,
        label=f"center({kernel.label})",
    )


def kernel_derived(kernel: Kernel, p: OrderLike) -> Kernel:
    """The kernel d^(p,p) k registered as a kernel in its own right.

    It is positive definite (Gram of the derivative features) and, for a
    stationary base kernel, its spectral measure is xi^(2p) * Lambda.
    """
    pi = as_multi_index(p, kernel.dimension)
    require_order(kernel, pi, pi)
    smooth = kernel.smoothness
    if smooth != UNBOUNDED:
        smooth = int(smooth) - pi.order

    def pe(X, Y):
        return pair_deriv_any(kernel, pi.entries, pi.entries, X, Y)

    def pd(r, q, X, Y):
        rr = tuple(a + b for a, b in zip(pi.entries, r))
        qq = tuple(a + b for a, b in zip(pi.entries, q))
        return pair_deriv_any(kernel, rr, qq, X, Y)

    stat = None
    if kernel.stationary is not None:
        zero = np.zeros((1, kernel.dimension))

        def psi(H):
            H = np.asarray(H, dtype=float).reshape(-1, kernel.dimension)
            return pe(H, zero)[:, 0]

        spectral = None
        if kernel.stationary.spectral_measure is not None:
            spectral = kernel.stationary.spectral_measure.xi_power_weighted(
                tuple(2 * e for e in pi.entries)
            )
        stat = StationaryProfile(psi, spectral)
    return Kernel(kernel.dimension, smooth, pe, pd, stat, label=f"d^{pi.entries}{kernel.label}")


# ---------------------------------------------------------------------------
# built-in catalog


def _lags(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return X[:, None, :] - Y[None, :, :]


def _hermite(n: int, u: np.ndarray) -> np.ndarray:
    if n == 0:
        return np.ones_like(u)
    return np.polynomial.hermite.hermval(u, [0.0] * n + [1.0])


def gaussian_kernel(dimension: int = 1, sigma: float = 1.0) -> Kernel:
    """k(x, y) = exp(-|x - y|^2 / sigma^2), infinitely smooth."""
    if not (sigma > 0 and math.isfinite(sigma)):
        raise InvalidArgumentError(f"sigma must be positive, got {sigma!r}")
    sigma = float(sigma)

    def pe(X, Y):
        D = _lags(X, Y)
        return np.exp(-np.sum(D * D, axis=-1) / sigma**2)

    def pd(p, q, X, Y):
        # Per axis: d^n/dh^n exp(-(h/s)^2) = (-1/s)^n H_n(h/s) exp(-(h/s)^2);
        # differentiating the second slot flips the lag sign, leaving the
        # overall factor (-1)^|p|.
        D = _lags(X, Y)
        out = np.exp(-np.sum(D * D, axis=-1) / sigma**2)
        for j, (pj, qj) in enumerate(zip(p, q)):
            n = pj + qj
            if n:
                out = out * (_hermite(n, D[..., j] / sigma) / sigma**n)
        if sum(p) % 2:
            out = -out
        return out

    density_scale = (sigma / (2.0 * math.sqrt(math.pi))) ** dimension

    def density(xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float).reshape(-1, dimension)
        return density_scale * np.exp(-(sigma**2) * np.sum(xi * xi, axis=-1) / 4.0)

    cutoff = 16.0 / sigma
    spectral = SpectralMeasure(
        dimension, (), density, tuple((-cutoff, cutoff) for _ in range(dimension))
    )
    stat = StationaryProfile(
        lambda H: np.exp(-np.sum(np.asarray(H, dtype=float).reshape(-1, dimension) ** 2, axis=-1) / sigma**2),
        spectral,
    )
    return Kernel(dimension, UNBOUNDED, pe, pd, stat, label=f"gaussian(sigma={sigma:g})")


def laplace_kernel(dimension: int = 1, sigma: float = 1.0) -> Kernel:
    """k(x, y) = exp(-|x - y| / sigma); continuous but not differentiable (m = 0)."""
    if not (sigma > 0 and math.isfinite(sigma)):
        raise InvalidArgumentError(f"sigma must be positive, got {sigma!r}")
    sigma = float(sigma)

    def pe(X, Y):
        D = _lags(X, Y)
        return np.exp(-np.sqrt(np.sum(D * D, axis=-1)) / sigma)

    stat = StationaryProfile(
        lambda H: np.exp(-np.linalg.norm(np.asarray(H, dtype=float).reshape(-1, dimension), axis=-1) / sigma),
        None,
    )
    return Kernel(dimension, 0, pe, None, stat, label=f"laplace(sigma={sigma:g})")


def _sinc_derivs(order: int, h: np.ndarray) -> np.ndarray:
    """n-th derivative of sin(h)/h (value 1 at 0), exact even/odd symmetry."""
    h = np.asarray(h, dtype=float)
    a = np.abs(h)
    small = a < 0.5

    out = np.zeros_like(a)
    # Taylor series around 0: sinc(h) = sum (-1)^m h^(2m) / (2m+1)!.
    if np.any(small):
        asm = a[small]
        acc = np.zeros_like(asm)
        m0 = (order + 1) // 2
        for m in range(m0, m0 + 14):
            falling = math.factorial(2 * m) // math.factorial(2 * m - order)
            coeff = (-1.0) ** m * falling / math.factorial(2 * m + 1)
            acc += coeff * asm ** (2 * m - order)
        out[small] = acc
    if np.any(~small):
        ab = a[~small]
        # From h*sinc(h) = sin(h): sinc^(n) = (sin^(n)(h) - n sinc^(n-1)) / h.
        s = np.sin(ab) / ab
        for n in range(1, order + 1):
            s = (np.sin(ab + n * math.pi / 2.0) - n * s) / ab
        out[~small] = s
    if order % 2:
        out = np.where(h < 0, -out, out)
    return out


def sinc_kernel() -> Kernel:
    """k(x, y) = sinc(x - y) = sin(x - y)/(x - y) on d = 1, with sinc(0) = 1."""

    def pe(X, Y):
        return _sinc_derivs(0, _lags(X, Y)[..., 0])

    def pd(p, q, X, Y):
        n = p[0] + q[0]
        out = _sinc_derivs(n, _lags(X, Y)[..., 0])
        return -out if q[0] % 2 else out

    spectral = SpectralMeasure(
        1, (), lambda xi: np.full(np.asarray(xi).reshape(-1, 1).shape[0], 0.5), ((-1.0, 1.0),)
    )
    stat = StationaryProfile(lambda H: _sinc_derivs(0, np.asarray(H, dtype=float).reshape(-1)), spectral)
    return Kernel(1, UNBOUNDED, pe, pd, stat, label="sinc")


def cosine_kernel(
    amplitudes: Sequence[float] = (1.0,), frequencies: Sequence[float] = (1.0,)
) -> Kernel:
    """Cosine series psi(h) = sum_j a_j cos(w_j h) with a_j >= 0, on d = 1.

    Its spectral measure is purely atomic (mass a_j/2 at each of +-w_j),
    the standing example of a kernel blind to suitably periodic inputs.
    """
    a = np.asarray(amplitudes, dtype=float)
    w = np.asarray(frequencies, dtype=float)
    if a.shape != w.shape or a.ndim != 1 or a.size == 0:
        raise InvalidArgumentError("amplitudes and frequencies must be matching nonempty vectors")
    if np.any(a < 0) or not np.all(np.isfinite(a)) or not np.all(np.isfinite(w)):
        raise InvalidArgumentError("cosine kernel needs finite frequencies and nonnegative amplitudes")

    def psi_deriv(n, H):
        return np.sum(
            a * w**n * np.cos(np.multiply.outer(H, w) + n * math.pi / 2.0), axis=-1
        )

    def pe(X, Y):
        return psi_deriv(0, _lags(X, Y)[..., 0])

    def pd(p, q, X, Y):
        n = p[0] + q[0]
        out = psi_deriv(n, _lags(X, Y)[..., 0])
        return -out if q[0] % 2 else out

    atoms = []
    for aj, wj in zip(a, w):
        atoms.append(((-float(wj),), float(aj) / 2.0))
        atoms.append(((float(wj),), float(aj) / 2.0))
    spectral = SpectralMeasure(1, tuple(atoms))
    stat = StationaryProfile(lambda H: psi_deriv(0, np.asarray(H, dtype=float).reshape(-1)), spectral)
    return Kernel(1, UNBOUNDED, pe, pd, stat, label=f"cosine(a={a.tolist()}, w={w.tolist()})")


def _imq_derivs(order: int, h: np.ndarray, sigma: float) -> np.ndarray:
    # (sigma^2 + h^2) psi' = -h psi  =>  stable three-term recurrence for psi^(n).
    h = np.asarray(h, dtype=float)
    denom = sigma**2 + h * h
    prev = np.zeros_like(h)
    cur = 1.0 / np.sqrt(1.0 + (h / sigma) ** 2)
    for n in range(order):
        nxt = -((2 * n + 1) * h * cur + (n * n) * prev) / denom
        prev, cur = cur, nxt
    return cur


def inverse_multiquadric_kernel(sigma: float = 1.0) -> Kernel:
    """k(x, y) = (1 + (x - y)^2 / sigma^2)^(-1/2) on d = 1, infinitely smooth."""
    if not (sigma > 0 and math.isfinite(sigma)):
        raise InvalidArgumentError(f"sigma must be positive, got {sigma!r}")
    sigma = float(sigma)

    def pe(X, Y):
        return _imq_derivs(0, _lags(X, Y)[..., 0], sigma)

    def pd(p, q, X, Y):
        out = _imq_derivs(p[0] + q[0], _lags(X, Y)[..., 0], sigma)
        return -out if q[0] % 2 else out

    stat = StationaryProfile(
        lambda H: _imq_derivs(0, np.asarray(H, dtype=float).reshape(-1), sigma), None
    )
    return Kernel(1, UNBOUNDED, pe, pd, stat, label=f"imq(sigma={sigma:g})")


def constant_kernel(dimension: int = 1) -> Kernel:
    """The rank-one kernel k(x, y) = 1; every derivative vanishes."""

    def pe(X, Y):
        return np.ones((X.shape[0], Y.shape[0]))

    def pd(p, q, X, Y):
        if not any(p) and not any(q):
            return np.ones((X.shape[0], Y.shape[0]))
        return np.zeros((X.shape[0], Y.shape[0]))

    spectral = SpectralMeasure(dimension, (((0.0,) * dimension, 1.0),))
    stat = StationaryProfile(lambda H: np.ones(np.asarray(H).reshape(-1, dimension).shape[0]), spectral)
    return Kernel(dimension, UNBOUNDED, pe, pd, stat, label="constant")


def brownian_kernel() -> Kernel:
    """k(x, y) = min(|x|, |y|) on d = 1; continuous, not stationary, m = 0."""

    def pe(X, Y):
        return np.minimum(np.abs(X[:, None, 0]), np.abs(Y[None, :, 0]))

    return Kernel(1, 0, pe, None, None, label="brownian")
