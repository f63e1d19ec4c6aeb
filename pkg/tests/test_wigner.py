import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import eval_laguerre

from heraldfock import fock, synth
from heraldfock.wigner import (
    WignerGrid,
    count_negative_intervals,
    count_runs,
    negativity_volume,
    parse_grid,
    wigner,
    wigner_grid,
    wigner_point,
)

from .conftest import random_density


def number_state(n, dim=8):
    return fock.pure_density(fock.fock_state(n, dim))


@pytest.mark.parametrize("n", range(6))
def test_origin_value_is_parity(n):
    assert wigner_point(number_state(n), 0, 0) == pytest.approx((-1) ** n / np.pi, abs=1e-12)


def test_three_photon_origin():
    assert wigner_point(number_state(3), 0, 0) == pytest.approx(-0.3183, abs=1e-4)


@pytest.mark.parametrize("n", range(5))
def test_number_state_radial_formula(n):
    # W_n(r) = (-1)^n e^{-r^2} L_n(2 r^2) / pi
    r = np.linspace(0, 4, 41)
    expected = (-1) ** n * np.exp(-(r**2)) * eval_laguerre(n, 2 * r**2) / np.pi
    np.testing.assert_allclose(wigner(number_state(n), r, 0 * r), expected, atol=1e-12)
    np.testing.assert_allclose(wigner(number_state(n), 0 * r, r), expected, atol=1e-12)


@pytest.mark.parametrize("beta", [0.5, -0.3 + 0.8j, 1.2j])
def test_coherent_state_is_displaced_gaussian(beta):
    rho = fock.pure_density(fock.coherent_state(beta, 30))
    x = np.linspace(-3, 3, 13)
    X, P = np.meshgrid(x, x)
    x0, p0 = np.sqrt(2) * beta.real, np.sqrt(2) * beta.imag
    expected = np.exp(-((X - x0) ** 2) - (P - p0) ** 2) / np.pi
    np.testing.assert_allclose(wigner(rho, X, P), expected, atol=1e-12)


def test_real_for_hermitian(rng):
    rho = random_density(rng, 6)
    w = wigner(rho, rng.normal(size=50), rng.normal(size=50))
    assert w.dtype == float
    assert np.all(np.abs(w) <= 1 / np.pi + 1e-9)


def test_vacuum_grid_integral():
    grid = wigner_grid(number_state(0))
    assert grid.values.shape == (201, 201)
    assert grid.integral() == pytest.approx(1, abs=1e-3)


def test_three_photon_grid_symmetric_under_quarter_turn():
    grid = wigner_grid(number_state(3), (-5, 5, -5, 5), (101, 101))
    np.testing.assert_allclose(np.rot90(grid.values), grid.values, atol=1e-9)
    assert np.abs(grid.values).max() <= 1 / np.pi + 1e-9


def test_grid_errors():
    with pytest.raises(ValueError):
        wigner_grid(number_state(0), (1, -1, -1, 1), (10, 10))
    with pytest.raises(ValueError):
        wigner_grid(number_state(0), (-1, 1, -1, 1), (1, 10))


def test_rotation_covariance():
    psi = synth.preset_target("zero-three")
    rho = fock.pure_density(np.r_[psi, 0, 0])
    theta = 0.7
    R = fock.phase_rotation(theta, 6)
    rotated = R @ rho @ R.conj().T
    t = np.linspace(-3, 3, 61)
    # W_{R rho R^dag}(x, p) = W_rho(rotate(-theta)(x, p))
    x, p = t, 0.4 * t
    xr = np.cos(theta) * x + np.sin(theta) * p
    pr = -np.sin(theta) * x + np.cos(theta) * p
    np.testing.assert_allclose(wigner(rotated, x, p), wigner(rho, xr, pr), atol=1e-12)


# -- negativity ------------------------------------------------------------------


def test_count_runs():
    assert count_runs([]) == 0
    assert count_runs([True, True, False, True]) == 2
    assert count_runs([False, False]) == 0


@pytest.mark.parametrize("angle", np.linspace(0, np.pi, 8, endpoint=False))
def test_three_photon_has_three_negative_regions(angle):
    assert count_negative_intervals(number_state(3), angle, 4.0, 2001, 1e-4) == 3


@pytest.mark.parametrize("n", range(4))
def test_number_state_regions_equal_n(n):
    assert count_negative_intervals(number_state(n), 0.3) == n


def test_cat_recipe_three_regions_on_fringe_axis():
    rho = fock.pure_density(np.r_[synth.preset_target("cat-odd"), 0, 0])
    assert count_negative_intervals(rho, 0.0) == 3
    # grid oracle: count sign runs directly on the x axis of a dense grid
    grid = wigner_grid(rho, (-4, 4, -1, 1), (2001, 3))
    assert count_runs(grid.values[:, 1] < -1e-4) == 3


def test_count_rejects_few_samples():
    with pytest.raises(ValueError):
        count_negative_intervals(number_state(1), 0, samples=50)


def test_negativity_volume_single_photon():
    # radial-integral oracle: int_{W<0} -W dx dp with W_1 = (2 r^2 - 1) e^{-r^2} / pi
    oracle, _ = quad(lambda r: max(0.0, (1 - 2 * r**2)) * np.exp(-(r**2)) * 2 * r, 0, 5,
                     points=[1 / np.sqrt(2)], epsabs=1e-13)
    assert oracle == pytest.approx(2 * np.exp(-0.5) - 1, abs=1e-12)
    assert negativity_volume(number_state(1)) == pytest.approx(oracle, abs=2e-4)
    assert negativity_volume(number_state(0)) == 0


def test_negativity_volume_decreases_with_loss():
    rho = number_state(3)
    vols = [negativity_volume(fock.loss_channel(rho, eta)) for eta in (1.0, 0.9, 0.78)]
    assert vols[0] > vols[1] > vols[2] > 0


# -- export ------------------------------------------------------------------------


def test_csv_and_json_export(tmp_path):
    grid = wigner_grid(number_state(1), (-1, 1, -2, 2), (3, 5))
    grid.write_csv(tmp_path / "w.csv")
    lines = (tmp_path / "w.csv").read_text().splitlines()
    assert lines[0] == "x,p,w"
    assert len(lines) == 1 + 15
    first = [float(v) for v in lines[1].split(",")]
    assert first[:2] == [-1.0, -2.0]
    assert first[2] == pytest.approx(grid.values[0, 0])
    second = [float(v) for v in lines[2].split(",")]
    assert second[:2] == [-1.0, -1.0]  # p varies fastest
    grid.write_json(tmp_path / "w.json")
    obj = json.loads((tmp_path / "w.json").read_text())
    assert (obj["nx"], obj["np"]) == (3, 5)
    np.testing.assert_allclose(np.reshape(obj["values"], (3, 5)), grid.values)


def test_parse_grid():
    assert parse_grid("-4,4,-3,3,11,21") == ((-4, 4, -3, 3), (11, 21))
    with pytest.raises(ValueError):
        parse_grid("1,2,3")


@given(st.floats(-4, 4), st.floats(-4, 4))
def test_bound_holds_pointwise(x, p):
    rho = random_density(np.random.default_rng(11), 7, rank=1)
    assert abs(wigner_point(rho, x, p)) <= 1 / np.pi + 1e-9


def test_wignergrid_metadata():
    g = WignerGrid(x=np.linspace(0, 1, 3), p=np.linspace(-1, 1, 5), values=np.zeros((3, 5)))
    assert g.bounds == (0.0, 1.0, -1.0, 1.0)
    assert g.cell_area == pytest.approx(0.5 * 0.5)
