"""JSON wire formats for measures, kernels and spectral measures.

Measure:   {"dim": d, "atoms": [{"w": [re, im], "p": [..], "x": [..]}, ...]}
Kernel:    {"family": "gaussian"|"laplace"|"sinc"|"cosine"|"imq"|"constant"|"brownian",
            "params": {...},
            "transform": {"shift": c} | {"center": <measure JSON>}}   (optional)
Spectral:  {"dim": d, "atoms": [{"xi": [..], "w": r}, ...],
            "density": {"family": "gaussian"|"constant", "box": [[lo, hi], ..], "params": {...}}}

Violations raise :class:`SchemaError` with a path-qualified message.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .core import Atom, GeneralizedMeasure, MultiIndex
from .errors import SchemaError
from .kernels import (
    Kernel,
    brownian_kernel,
    constant_kernel,
    cosine_kernel,
    gaussian_kernel,
    inverse_multiquadric_kernel,
    kernel_center,
    kernel_shift_constant,
    laplace_kernel,
    sinc_kernel,
)
from .spectral import SpectralMeasure

__all__ = [
    "measure_from_json",
    "measure_to_json",
    "kernel_from_json",
    "spectral_from_json",
    "loads",
]

KERNEL_FAMILIES = ("gaussian", "laplace", "sinc", "cosine", "imq", "constant", "brownian")
_SCALAR_FAMILIES = ("sinc", "cosine", "imq", "brownian")


def loads(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{what}: not valid JSON ({exc})") from exc


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise SchemaError(msg)


def _number(value, where: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool), f"{where}: expected a number")
    value = float(value)
    _require(math.isfinite(value), f"{where}: must be finite")
    return value


def measure_from_json(doc: Any) -> GeneralizedMeasure:
    _require(isinstance(doc, dict), "measure: expected an object")
    _require("dim" in doc, "measure: missing 'dim'")
    dim = doc["dim"]
    _require(isinstance(dim, int) and not isinstance(dim, bool) and dim >= 1, "measure.dim: expected a positive integer")
    raw_atoms = doc.get("atoms", [])
    _require(isinstance(raw_atoms, list), "measure.atoms: expected a list")
    atoms = []
    for i, entry in enumerate(raw_atoms):
        where = f"measure.atoms[{i}]"
        _require(isinstance(entry, dict), f"{where}: expected an object")
        w = entry.get("w")
        _require(isinstance(w, list) and len(w) == 2, f"{where}.w: expected [re, im]")
        weight = complex(_number(w[0], f"{where}.w[0]"), _number(w[1], f"{where}.w[1]"))
        p = entry.get("p")
        _require(isinstance(p, list) and len(p) == dim, f"{where}.p: expected {dim} integers")
        for e in p:
            _require(isinstance(e, int) and not isinstance(e, bool) and e >= 0, f"{where}.p: entries must be >= 0")
        x = entry.get("x")
        _require(isinstance(x, list) and len(x) == dim, f"{where}.x: expected {dim} coordinates")
        loc = tuple(_number(c, f"{where}.x") for c in x)
        atoms.append(Atom(weight, MultiIndex(tuple(p)), loc))
    return GeneralizedMeasure(dim, tuple(atoms))


def measure_to_json(measure: GeneralizedMeasure) -> dict:
    return {
        "dim": measure.dimension,
        "atoms": [
            {
                "w": [a.weight.real, a.weight.imag],
                "p": list(a.order.entries),
                "x": list(a.location),
            }
            for a in measure.atoms
        ],
    }


def kernel_from_json(doc: Any, dimension: int) -> Kernel:
    """Build a kernel for the given ambient dimension from its JSON spec."""
    _require(isinstance(doc, dict), "kernel: expected an object")
    family = doc.get("family")
    _require(family in KERNEL_FAMILIES, f"kernel.family: expected one of {KERNEL_FAMILIES}")
    params = doc.get("params", {})
    _require(isinstance(params, dict), "kernel.params: expected an object")
    if family in _SCALAR_FAMILIES:
        _require(dimension == 1, f"kernel.family {family!r} is defined on d = 1 only")

    if family == "gaussian":
        kernel = gaussian_kernel(dimension, _number(params.get("sigma", 1.0), "kernel.params.sigma"))
    elif family == "laplace":
        kernel = laplace_kernel(dimension, _number(params.get("sigma", 1.0), "kernel.params.sigma"))
    elif family == "sinc":
        kernel = sinc_kernel()
    elif family == "cosine":
        amps = params.get("amplitudes", [1.0])
        freqs = params.get("frequencies", [1.0])
        _require(isinstance(amps, list) and isinstance(freqs, list), "kernel.params: amplitudes/frequencies must be lists")
        kernel = cosine_kernel(
            [_number(v, "kernel.params.amplitudes") for v in amps],
            [_number(v, "kernel.params.frequencies") for v in freqs],
        )
    elif family == "imq":
        kernel = inverse_multiquadric_kernel(_number(params.get("sigma", 1.0), "kernel.params.sigma"))
    elif family == "constant":
        kernel = constant_kernel(dimension)
    else:
        kernel = brownian_kernel()

    transform = doc.get("transform")
    if transform is None:
        return kernel
    _require(isinstance(transform, dict) and len(transform) == 1, "kernel.transform: expected exactly one of 'shift'/'center'")
    if "shift" in transform:
        c = _number(transform["shift"], "kernel.transform.shift")
        _require(c >= 0, "kernel.transform.shift: must be >= 0")
        return kernel_shift_constant(kernel, c)
    if "center" in transform:
        nu0 = measure_from_json(transform["center"])
        _require(nu0.dimension == dimension, "kernel.transform.center: dimension mismatch")
        _require(nu0.max_order == 0, "kernel.transform.center: centering measure must be order 0")
        return kernel_center(kernel, nu0)
    raise SchemaError("kernel.transform: expected 'shift' or 'center'")


def spectral_from_json(doc: Any) -> SpectralMeasure:
    _require(isinstance(doc, dict), "spectral: expected an object")
    dim = doc.get("dim", 1)
    _require(isinstance(dim, int) and not isinstance(dim, bool) and dim >= 1, "spectral.dim: expected a positive integer")
    atoms = []
    for i, entry in enumerate(doc.get("atoms", [])):
        where = f"spectral.atoms[{i}]"
        _require(isinstance(entry, dict), f"{where}: expected an object")
        xi = entry.get("xi")
        _require(isinstance(xi, list) and len(xi) == dim, f"{where}.xi: expected {dim} coordinates")
        weight = _number(entry.get("w"), f"{where}.w")
        _require(weight >= 0, f"{where}.w: spectral weights must be >= 0")
        atoms.append((tuple(_number(c, f"{where}.xi") for c in xi), weight))

    density = None
    box = None
    dens_doc = doc.get("density")
    if dens_doc is not None:
        _require(isinstance(dens_doc, dict), "spectral.density: expected an object")
        family = dens_doc.get("family")
        raw_box = dens_doc.get("box")
        _require(isinstance(raw_box, list) and len(raw_box) == dim, f"spectral.density.box: expected {dim} edges")
        box = []
        for edge in raw_box:
            _require(isinstance(edge, list) and len(edge) == 2, "spectral.density.box: edges are [lo, hi]")
            lo, hi = _number(edge[0], "spectral.density.box"), _number(edge[1], "spectral.density.box")
            _require(lo < hi, "spectral.density.box: lo < hi required")
            box.append((lo, hi))
        params = dens_doc.get("params", {})
        _require(isinstance(params, dict), "spectral.density.params: expected an object")
        if family == "gaussian":
            sigma = _number(params.get("sigma", 1.0), "spectral.density.params.sigma")
            _require(sigma > 0, "spectral.density.params.sigma: must be positive")
            scale = (sigma / (2.0 * math.sqrt(math.pi))) ** dim

            def density(xi: np.ndarray, _s=sigma, _c=scale) -> np.ndarray:
                xi = np.asarray(xi, dtype=float).reshape(-1, dim)
                return _c * np.exp(-(_s**2) * np.sum(xi * xi, axis=-1) / 4.0)

        elif family == "constant":
            value = _number(params.get("value", 0.5), "spectral.density.params.value")
            _require(value >= 0, "spectral.density.params.value: must be >= 0")

            def density(xi: np.ndarray, _v=value) -> np.ndarray:
                return np.full(np.asarray(xi).reshape(-1, dim).shape[0], _v)

        else:
            raise SchemaError("spectral.density.family: expected 'gaussian' or 'constant'")
        box = tuple(box)

    return SpectralMeasure(dim, tuple(atoms), density, box)
