import math

import numpy as np
import pytest

from distembed import (
    SchemaError,
    gm_derivative,
    gm_point_mass,
    gm_linear_combine,
    kernel_eval,
    norm,
    spectral_norm_sq,
    gaussian_kernel,
)
from distembed.schemas import (
    kernel_from_json,
    loads,
    measure_from_json,
    measure_to_json,
    spectral_from_json,
)
from conftest import random_measure


def test_measure_round_trip(rng):
    original = random_measure(rng, dim=2, max_order=2)
    recovered = measure_from_json(measure_to_json(original))
    assert recovered.atoms == original.atoms


def test_measure_parsing():
    doc = {"dim": 1, "atoms": [{"w": [1.0, 0.0], "p": [1], "x": [0.5]}]}
    measure = measure_from_json(doc)
    assert measure.atoms[0].order.entries == (1,)
    assert measure.atoms[0].location == (0.5,)


@pytest.mark.parametrize(
    "doc",
    [
        {"atoms": []},
        {"dim": 0, "atoms": []},
        {"dim": 1, "atoms": [{"w": [1.0], "p": [0], "x": [0.0]}]},
        {"dim": 1, "atoms": [{"w": [1.0, 0.0], "p": [-1], "x": [0.0]}]},
        {"dim": 1, "atoms": [{"w": [1.0, 0.0], "p": [0, 0], "x": [0.0]}]},
        {"dim": 1, "atoms": [{"w": [1.0, 0.0], "p": [0], "x": [0.0, 1.0]}]},
    ],
)
def test_measure_schema_violations(doc):
    with pytest.raises(SchemaError):
        measure_from_json(doc)


def test_kernel_families():
    for family in ("gaussian", "laplace", "constant"):
        k = kernel_from_json({"family": family}, 2)
        assert k.dimension == 2
    for family in ("sinc", "cosine", "imq", "brownian"):
        assert kernel_from_json({"family": family}, 1).dimension == 1
        with pytest.raises(SchemaError):
            kernel_from_json({"family": family}, 2)
    with pytest.raises(SchemaError):
        kernel_from_json({"family": "matern"}, 1)


def test_kernel_params():
    k = kernel_from_json({"family": "gaussian", "params": {"sigma": 2.0}}, 1)
    assert kernel_eval(k, 0.0, 2.0) == pytest.approx(math.exp(-1.0))
    k = kernel_from_json(
        {"family": "cosine", "params": {"amplitudes": [1.0, 0.5], "frequencies": [1.0, 3.0]}}, 1
    )
    assert kernel_eval(k, 0.0, 0.0) == pytest.approx(1.5)


def test_kernel_shift_transform():
    k = kernel_from_json({"family": "gaussian", "transform": {"shift": 1.0}}, 1)
    assert kernel_eval(k, 0.0, 0.0) == 2.0
    with pytest.raises(SchemaError):
        kernel_from_json({"family": "gaussian", "transform": {"shift": -1.0}}, 1)


def test_kernel_center_transform():
    nu_doc = {"dim": 1, "atoms": [{"w": [1.0, 0.0], "p": [0], "x": [0.0]}]}
    k = kernel_from_json({"family": "gaussian", "transform": {"center": nu_doc}}, 1)
    assert kernel_eval(k, 0.0, 0.0) == 0.0
    bad = {"dim": 1, "atoms": [{"w": [1.0, 0.0], "p": [1], "x": [0.0]}]}
    with pytest.raises(SchemaError):
        kernel_from_json({"family": "gaussian", "transform": {"center": bad}}, 1)


def test_spectral_atoms():
    lam = spectral_from_json({"dim": 1, "atoms": [{"xi": [-1.0], "w": 0.5}, {"xi": [1.0], "w": 0.5}]})
    d = gm_linear_combine([(1.0, gm_point_mass(0.0)), (-1.0, gm_point_mass(math.pi))])
    assert spectral_norm_sq(lam, d) == pytest.approx(4.0, abs=1e-12)
    with pytest.raises(SchemaError):
        spectral_from_json({"dim": 1, "atoms": [{"xi": [0.0], "w": -1.0}]})


def test_spectral_gaussian_density_matches_builtin(rng):
    doc = {
        "dim": 1,
        "atoms": [],
        "density": {"family": "gaussian", "box": [[-16.0, 16.0]], "params": {"sigma": 1.0}},
    }
    lam = spectral_from_json(doc)
    d = random_measure(rng, max_order=1, max_atoms=4)
    assert spectral_norm_sq(lam, d) == pytest.approx(
        norm(gaussian_kernel(1), d) ** 2, rel=1e-8, abs=1e-10
    )


def test_spectral_schema_violations():
    with pytest.raises(SchemaError):
        spectral_from_json({"dim": 1, "density": {"family": "box"}})
    with pytest.raises(SchemaError):
        spectral_from_json({"dim": 1, "density": {"family": "constant", "box": [[1.0, 0.0]]}})


def test_loads_reports_bad_json():
    with pytest.raises(SchemaError):
        loads("{not json", "kernel")
