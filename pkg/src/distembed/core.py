"""Atomic generalized measures over R^d.

A generalized measure is a finite linear combination of weighted point
masses and their distributional partial derivatives.  It is the
computational representation used throughout the package: densities enter
only through explicit discretization (see :func:`gm_discretize_uniform`).

All types are immutable values; all operations are pure functions, so
everything here is safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import InvalidArgumentError

__all__ = [
    "MultiIndex",
    "Atom",
    "GeneralizedMeasure",
    "as_multi_index",
    "as_point",
    "gm_point_mass",
    "gm_derivative",
    "gm_linear_combine",
    "gm_total_mass",
    "gm_discretize_uniform",
    "gm_dipole_quotient",
]

OrderLike = Union["MultiIndex", Sequence[int], int]
PointLike = Union[Sequence[float], float]


@dataclass(frozen=True)
class MultiIndex:
    """Multi-index p in N^d encoding the mixed partial derivative d^p.

    ``order`` is the total order ``|p| = sum(p)``.
    """

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise InvalidArgumentError("multi-index needs at least one axis")
        for e in self.entries:
            if not isinstance(e, int) or isinstance(e, bool) or e < 0:
                raise InvalidArgumentError(
                    f"multi-index entries must be nonnegative integers, got {self.entries!r}"
                )

    @property
    def dimension(self) -> int:
        return len(self.entries)

    @property
    def order(self) -> int:
        return sum(self.entries)

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        if len(self.entries) != len(other.entries):
            raise InvalidArgumentError("multi-index dimensions differ")
        return MultiIndex(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __len__(self) -> int:
        return len(self.entries)


def as_multi_index(order: OrderLike, dimension: int | None = None) -> MultiIndex:
    """Coerce an int (d=1), a sequence of ints, or a MultiIndex to a MultiIndex."""
    if isinstance(order, MultiIndex):
        p = order
    elif isinstance(order, int) and not isinstance(order, bool):
        p = MultiIndex((order,))
    else:
        p = MultiIndex(tuple(int(e) for e in order))
    if dimension is not None and p.dimension != dimension:
        raise InvalidArgumentError(
            f"multi-index has dimension {p.dimension}, expected {dimension}"
        )
    return p


def as_point(x: PointLike, dimension: int | None = None) -> tuple[float, ...]:
    """Coerce a scalar (d=1) or a sequence of reals to a finite point in R^d."""
    if isinstance(x, (int, float)):
        pt = (float(x),)
    else:
        pt = tuple(float(c) for c in x)
    if not pt:
        raise InvalidArgumentError("points need at least one coordinate")
    if any(not math.isfinite(c) for c in pt):
        raise InvalidArgumentError(f"point coordinates must be finite, got {pt!r}")
    if dimension is not None and len(pt) != dimension:
        raise InvalidArgumentError(f"point has dimension {len(pt)}, expected {dimension}")
    return pt


@dataclass(frozen=True)
class Atom:
    """One term ``weight * d^order delta_location`` of a generalized measure."""

    weight: complex
    order: MultiIndex
    location: tuple[float, ...]

    def __post_init__(self) -> None:
        w = complex(self.weight)
        object.__setattr__(self, "weight", w)
        if not (math.isfinite(w.real) and math.isfinite(w.imag)):
            raise InvalidArgumentError(f"atom weight must be finite, got {w!r}")
        loc = as_point(self.location)
        object.__setattr__(self, "location", loc)
        if len(loc) != self.order.dimension:
            raise InvalidArgumentError(
                f"atom location dimension {len(loc)} does not match "
                f"derivative dimension {self.order.dimension}"
            )

    @property
    def dimension(self) -> int:
        return len(self.location)


def _canonical_atoms(atoms: Iterable[Atom]) -> tuple[Atom, ...]:
    # Merge atoms sharing (order, location) exactly -- no epsilon matching, so
    # canonicalization stays deterministic -- then drop exact-zero weights and
    # sort to obtain the canonical atom ordering used for summation.
    merged: dict[tuple[tuple[int, ...], tuple[float, ...]], complex] = {}
    for a in atoms:
        key = (a.order.entries, a.location)
        merged[key] = merged.get(key, 0j) + a.weight
    kept = [
        Atom(w, MultiIndex(p), x)
        for (p, x), w in merged.items()
        if w != 0
    ]
    kept.sort(key=lambda a: (a.order.entries, a.location))
    return tuple(kept)


@dataclass(frozen=True)
class GeneralizedMeasure:
    """Finite sum of derivative point masses, kept in canonical form.

    Canonical form: atoms are merged on exactly equal (order, location)
    pairs, zero weights are dropped, and the remainder is sorted.  The
    empty measure (the zero distribution) is a valid value.
    """

    dimension: int
    atoms: tuple[Atom, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.dimension, int) or self.dimension < 1:
            raise InvalidArgumentError(f"dimension must be a positive integer, got {self.dimension!r}")
        for a in self.atoms:
            if a.dimension != self.dimension:
                raise InvalidArgumentError(
                    f"atom dimension {a.dimension} does not match measure dimension {self.dimension}"
                )
        object.__setattr__(self, "atoms", _canonical_atoms(self.atoms))

    @property
    def is_zero(self) -> bool:
        return not self.atoms

    @property
    def max_order(self) -> int:
        return max((a.order.order for a in self.atoms), default=0)

    def __len__(self) -> int:
        return len(self.atoms)


def gm_point_mass(x: PointLike, w: complex = 1.0) -> GeneralizedMeasure:
    """The measure ``w * delta_x``."""
    loc = as_point(x)
    atom = Atom(w, MultiIndex((0,) * len(loc)), loc)
    return GeneralizedMeasure(len(loc), (atom,))


def gm_derivative(measure: GeneralizedMeasure, p: OrderLike) -> GeneralizedMeasure:
    """Distributional derivative d^p applied to every atom.

    Orders add componentwise; weights are unchanged.
    """
    pi = as_multi_index(p, measure.dimension)
    atoms = tuple(Atom(a.weight, a.order + pi, a.location) for a in measure.atoms)
    return GeneralizedMeasure(measure.dimension, atoms)


def gm_linear_combine(
    terms: Sequence[tuple[complex, GeneralizedMeasure]],
) -> GeneralizedMeasure:
    """Weighted sum ``sum_i c_i * D_i``, canonicalized.

    Raises on an empty term list or mismatched dimensions.
    """
    if not terms:
        raise InvalidArgumentError("gm_linear_combine needs at least one term")
    dim = terms[0][1].dimension
    atoms: list[Atom] = []
    for c, d in terms:
        if d.dimension != dim:
            raise InvalidArgumentError(
                f"cannot combine measures of dimensions {dim} and {d.dimension}"
            )
        c = complex(c)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise InvalidArgumentError(f"combination coefficient must be finite, got {c!r}")
        atoms.extend(Atom(c * a.weight, a.order, a.location) for a in d.atoms)
    return GeneralizedMeasure(dim, tuple(atoms))


def gm_total_mass(measure: GeneralizedMeasure) -> complex:
    """The measure applied to the constant function 1.

    Only order-0 atoms contribute; derivative atoms annihilate constants.
    """
    return sum((a.weight for a in measure.atoms if a.order.order == 0), 0j)


def _as_box(box) -> tuple[tuple[float, float], ...]:
    if (
        isinstance(box, Sequence)
        and len(box) == 2
        and isinstance(box[0], (int, float))
    ):
        box = (box,)
    edges = []
    for lo, hi in box:
        lo, hi = float(lo), float(hi)
        if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
            raise InvalidArgumentError(f"degenerate box edge ({lo}, {hi})")
        edges.append((lo, hi))
    if not edges:
        raise InvalidArgumentError("box needs at least one axis")
    return tuple(edges)


def gm_discretize_uniform(
    box, nodes_per_axis: int, normalize: bool = True
) -> GeneralizedMeasure:
    """Midpoint-rule discretization of the uniform density on an axis-aligned box.

    Places ``nodes_per_axis**d`` equally weighted order-0 atoms on the
    midpoint grid.  Total mass is 1 when ``normalize`` is set, otherwise
    the box volume.
    """
    edges = _as_box(box)
    if not isinstance(nodes_per_axis, int) or nodes_per_axis < 1:
        raise InvalidArgumentError(f"nodes_per_axis must be >= 1, got {nodes_per_axis!r}")
    d = len(edges)
    volume = math.prod(hi - lo for lo, hi in edges)
    n_atoms = nodes_per_axis**d
    weight = (1.0 if normalize else volume) / n_atoms

    axes = [
        [lo + (i + 0.5) * (hi - lo) / nodes_per_axis for i in range(nodes_per_axis)]
        for lo, hi in edges
    ]
    zero = MultiIndex((0,) * d)
    atoms = []
    idx = [0] * d
    for _ in range(n_atoms):
        atoms.append(Atom(weight, zero, tuple(axes[j][idx[j]] for j in range(d))))
        for j in reversed(range(d)):
            idx[j] += 1
            if idx[j] < nodes_per_axis:
                break
            idx[j] = 0
    return GeneralizedMeasure(d, tuple(atoms))


def gm_dipole_quotient(x: PointLike, axis: int, h: float) -> GeneralizedMeasure:
    """The difference quotient ``(delta_{x + h e_axis} - delta_x) / h``.

    Converges to minus the first derivative point mass along ``axis`` as
    h -> 0; its total mass is 0 by construction.
    """
    loc = as_point(x)
    if not 0 <= axis < len(loc):
        raise InvalidArgumentError(f"axis {axis} out of range for dimension {len(loc)}")
    if not (isinstance(h, (int, float)) and math.isfinite(h) and h > 0):
        raise InvalidArgumentError(f"step h must be a positive real, got {h!r}")
    shifted = tuple(c + h if j == axis else c for j, c in enumerate(loc))
    zero = MultiIndex((0,) * len(loc))
    return GeneralizedMeasure(
        len(loc),
        (Atom(1.0 / h, zero, shifted), Atom(-1.0 / h, zero, loc)),
    )
