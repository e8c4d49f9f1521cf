"""Conditionally positive definite kernels on the line.

A c.p.d. kernel has a positive semidefinite quadratic form on weight
vectors that sum to zero.  For stationary real-valued profiles psi_c the
generalized spectral representation

    psi_c(h) = integral (cos(h xi) - 1) / xi^2 dchi(xi) + P0(h)

holds with chi a positive symmetric measure without atom at the origin and
P0 an even c.p.d. polynomial of degree <= 2.  On zero-mass measures the
squared seminorm then splits as

    |mu|^2 = integral |F mu(xi)|^2 / xi^2 dchi(xi) + |C_mu|^2,

the cross-check implemented by :func:`cpd_spectral_form`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import sici

from .core import GeneralizedMeasure
from .errors import (
    InvalidArgumentError,
    QuadratureBudgetError,
    UnsupportedConfigurationError,
)
from .quadrature import MAX_EVALS_DEFAULT, integrate_box

__all__ = [
    "CpdKernel",
    "negative_distance_kernel",
    "cpd_quadratic_form",
    "cpd_spectral_form",
    "BrownianCorrespondenceReport",
    "brownian_correspondence_check",
]

ZERO_MASS_TOL = 1e-12
_HEAD_CUTOFF = 64.0


@dataclass(frozen=True)
class CpdKernel:
    """Stationary real-valued c.p.d. kernel on d = 1 with its spectral data.

    ``chi_density`` is the density of chi (symmetric, nonnegative, no atom
    at the origin).  When chi is a constant multiple of Lebesgue measure,
    ``chi_lebesgue_scale`` holds the constant and the spectral form's tail
    beyond the quadrature head is evaluated in closed form via the sine
    integral; otherwise the tail is integrated panel by panel with the
    crude bound |F mu|^2 <= (sum |mu_i|)^2, which may exhaust the budget.
    ``p0`` = (c0, c2) are the coefficients of P0(h) = c0 + c2 h^2, c2 <= 0.
    """

    psi: Callable[[np.ndarray], np.ndarray]
    chi_density: Callable[[np.ndarray], np.ndarray]
    chi_lebesgue_scale: float | None = None
    p0: tuple[float, float] = (0.0, 0.0)
    label: str = ""

    def __post_init__(self) -> None:
        c0, c2 = self.p0
        if c2 > 0:
            raise InvalidArgumentError("P0(h) = c0 + c2 h^2 is c.p.d. only for c2 <= 0")


def negative_distance_kernel() -> CpdKernel:
    """psi_c(h) = -|h|, the c.p.d. profile matching Brownian motion on zero-mass inputs.

    Its chi is Lebesgue/pi: (1/pi) * integral (1 - cos(h xi))/xi^2 dxi = |h|
    (classical Dirichlet-type integral), so -|h| = integral (cos - 1)/xi^2 d(Leb/pi).
    """
    return CpdKernel(
        psi=lambda h: -np.abs(np.asarray(h, dtype=float)),
        chi_density=lambda xi: np.full(np.asarray(xi, dtype=float).reshape(-1).shape, 1.0 / math.pi),
        chi_lebesgue_scale=1.0 / math.pi,
        p0=(0.0, 0.0),
        label="-|h|",
    )


def _zero_mass_data(measure: GeneralizedMeasure):
    if measure.dimension != 1:
        raise InvalidArgumentError("c.p.d. operations are implemented on d = 1")
    if measure.max_order > 0:
        raise InvalidArgumentError("c.p.d. forms are defined on order-0 atoms only")
    w = np.asarray([a.weight for a in measure.atoms], dtype=complex)
    x = np.asarray([a.location[0] for a in measure.atoms], dtype=float)
    if w.size and abs(np.sum(w)) > ZERO_MASS_TOL:
        raise InvalidArgumentError(
            f"total mass {np.sum(w):g} is not 0: the form is only positive on the zero-mass hyperplane"
        )
    return w, x


def cpd_quadratic_form(kernel: CpdKernel, measure: GeneralizedMeasure) -> float:
    """Re sum_ij mu_i conj(mu_j) psi_c(x_i - x_j) for a zero-mass atomic measure."""
    w, x = _zero_mass_data(measure)
    if w.size == 0:
        return 0.0
    psi_matrix = np.asarray(kernel.psi(x[:, None] - x[None, :]), dtype=float)
    value = np.einsum("i,ij,j->", w, psi_matrix, np.conj(w))
    if abs(value.imag) > 1e-10 * (1.0 + abs(value)):
        raise InvalidArgumentError(
            f"quadratic form has imaginary residue {value.imag:g}; psi_c must be real and even"
        )
    return float(value.real)


def _ft_stable(w: np.ndarray, x: np.ndarray, xi: np.ndarray) -> np.ndarray:
    # F mu(xi) for zero-mass mu, computed as sum w_j (e^{-i x_j xi} - 1) so the
    # cancellation near xi = 0 happens analytically, not in floats.
    theta = np.multiply.outer(xi, x)
    emin1 = -2.0 * np.sin(theta / 2.0) ** 2 - 1j * np.sin(theta)
    return emin1 @ w


def _p0_term(kernel: CpdKernel, w: np.ndarray, x: np.ndarray) -> float:
    # integral of c0 + c2 (x-y)^2 against mu x mu on the zero-mass hyperplane
    # reduces to -2 c2 |sum w_i x_i|^2 >= 0.
    _, c2 = kernel.p0
    if c2 == 0.0:
        return 0.0
    first_moment = np.sum(w * x)
    return float(-2.0 * c2 * abs(first_moment) ** 2)


def cpd_spectral_form(
    kernel: CpdKernel,
    measure: GeneralizedMeasure,
    rel_tol: float = 1e-8,
    max_evals: int = MAX_EVALS_DEFAULT,
) -> float:
    """The seminorm squared computed on the spectral side.

    Quadrature of |F mu(xi)|^2 / xi^2 against chi on [-cutoff, cutoff]
    (the integrand extends continuously through 0 because F mu(0) = 0),
    plus the tail and the P0 contribution.  Never evaluates psi_c, so it is
    an independent cross-check of :func:`cpd_quadratic_form`.
    """
    w, x = _zero_mass_data(measure)
    if w.size == 0:
        return 0.0

    dens = kernel.chi_density

    def integrand(nodes: np.ndarray) -> np.ndarray:
        xi = nodes[:, 0]
        ft = _ft_stable(w, x, xi)
        ratio = np.empty_like(xi)
        nz = xi != 0.0
        ratio[nz] = np.abs(ft[nz]) ** 2 / xi[nz] ** 2
        if np.any(~nz):
            ratio[~nz] = abs(np.sum(w * (-1j) * x)) ** 2
        return ratio * np.asarray(dens(xi), dtype=float)

    head = integrate_box(
        integrand,
        ((-_HEAD_CUTOFF, _HEAD_CUTOFF),),
        rel_tol=rel_tol,
        abs_tol=1e-12,
        max_evals=max_evals,
    )
    return head + _tail(kernel, w, x, _HEAD_CUTOFF, rel_tol, max_evals) + _p0_term(kernel, w, x)


def _tail(kernel, w, x, cutoff, rel_tol, max_evals) -> float:
    if kernel.chi_lebesgue_scale is not None:
        # |F mu(xi)|^2 = sum_ij w_i conj(w_j) e^{-i(x_i-x_j) xi} exactly (the
        # cross terms vanish for zero mass), so the tail integral is a finite
        # cosine sum with closed form
        #     int_X^inf cos(D xi)/xi^2 dxi = cos(D X)/X - |D| (pi/2 - Si(|D| X)).
        scale = kernel.chi_lebesgue_scale
        deltas = np.abs(x[:, None] - x[None, :])
        si, _ = sici(deltas * cutoff)
        per_pair = np.cos(deltas * cutoff) / cutoff - deltas * (math.pi / 2.0 - si)
        coeffs = np.multiply.outer(w, np.conj(w))
        return float(2.0 * scale * np.real(np.sum(coeffs * per_pair)))

    # General chi: doubling panels with the crude bound as stopping rule.
    dens = kernel.chi_density
    total = 0.0
    bound_scale = float(np.sum(np.abs(w))) ** 2
    lo = cutoff
    while True:
        hi = 2.0 * lo

        def integrand(nodes: np.ndarray) -> np.ndarray:
            xi = nodes[:, 0]
            ft = _ft_stable(w, x, xi)
            sym = _ft_stable(w, x, -xi)
            vals = (np.abs(ft) ** 2 + np.abs(sym) ** 2) / xi**2
            return vals * np.asarray(dens(xi), dtype=float)

        total += integrate_box(
            integrand, ((lo, hi),), rel_tol=rel_tol, abs_tol=1e-12, max_evals=max_evals
        )
        tail_bound = 2.0 * bound_scale * float(dens(np.asarray([hi]))[0]) / hi
        if tail_bound < 1e-6 * max(abs(total), 1e-30):
            return total
        lo = hi
        if lo > 2.0**40:
            raise QuadratureBudgetError("chi tail did not converge before the cutoff limit")


@dataclass(frozen=True)
class BrownianCorrespondenceReport:
    """Outcome of fitting min(|x|,|y|) forms against -|x-y| forms."""

    ratio: float
    max_residual: float
    rows: tuple[tuple[float, float], ...]  # (min-kernel form, -|h| form) per probe
    passed: bool


def brownian_correspondence_check(
    measures: Sequence[GeneralizedMeasure] | GeneralizedMeasure,
    tol: float = 1e-10,
) -> BrownianCorrespondenceReport:
    """Verify min(|x|,|y|) and -|x - y| induce proportional forms on zero-mass inputs.

    The proportionality constant is fitted on the first probe with a
    nonzero -|h| form and verified on the rest.  Locations must not mix
    signs: across the origin min(|x|, |y|) stops agreeing with
    (|x| + |y| - |x-y|)/2 and no single constant exists.
    """
    if isinstance(measures, GeneralizedMeasure):
        measures = [measures]
    if not measures:
        raise InvalidArgumentError("need at least one probe measure")
    neg_dist = negative_distance_kernel()
    rows = []
    for mu in measures:
        w, x = _zero_mass_data(mu)
        if x.size and np.any(x > 0) and np.any(x < 0):
            raise UnsupportedConfigurationError(
                "locations mix signs; the min-kernel correspondence is only "
                "defined on one half-line"
            )
        if w.size == 0:
            rows.append((0.0, 0.0))
            continue
        min_matrix = np.minimum(np.abs(x)[:, None], np.abs(x)[None, :])
        min_form = float(np.real(np.einsum("i,ij,j->", w, min_matrix, np.conj(w))))
        rows.append((min_form, cpd_quadratic_form(neg_dist, mu)))

    ratio = 0.5  # the analytic value; overwritten by the first usable probe
    for min_form, cpd_form in rows:
        if cpd_form != 0.0:
            ratio = min_form / cpd_form
            break
    max_residual = max(
        (abs(min_form - ratio * cpd_form) for min_form, cpd_form in rows),
        default=0.0,
    )
    scale = max((abs(c) for _, c in rows), default=1.0)
    passed = max_residual <= tol * max(1.0, scale)
    return BrownianCorrespondenceReport(ratio, max_residual, tuple(rows), passed)
