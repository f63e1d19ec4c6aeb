import itertools
from math import sqrt

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from heraldfock import fock
from heraldfock.synth import (
    DegenerateTarget,
    ZeroState,
    _sort_roots,
    best_rotation_fidelity,
    canonicalize,
    cubic_roots,
    forward_map,
    preset_betas,
    preset_target,
    solve_displacements,
    target_cat,
    target_qutrit_basis,
)

coef = st.floats(-1, 1)
cplx = st.builds(complex, coef, coef)


def _same_multiset(a, b, tol):
    return any(
        all(abs(x - y) <= tol for x, y in zip(a, perm)) for perm in itertools.permutations(b)
    )


def test_fock3_needs_no_displacement():
    recipe = solve_displacements([0, 0, 0, 1], 0.1)
    assert np.allclose(recipe.betas, 0, atol=1e-15)


def test_cat_recipe_recovered():
    q = 0.1
    target = [0, -2 / sqrt(3), 0, sqrt(2) / 3]
    betas = solve_displacements(target, q).betas
    assert _same_multiset(betas, (sqrt(2) * q, -sqrt(2) * q, 0), 1e-12)


@pytest.mark.parametrize("q", [0.02, 0.1, 0.3])
def test_qutrit_recipe_recovered(q):
    target = [1j * 0.86**3, 0, 0, sqrt(2) / 3]
    betas = solve_displacements(target, q).betas
    expected = [0.86 * q * np.exp(1j * phi) for phi in (np.pi / 6, 5 * np.pi / 6, 3 * np.pi / 2)]
    assert _same_multiset(betas, expected, 1e-12)


def test_degenerate_target():
    with pytest.raises(DegenerateTarget):
        solve_displacements([0.6, 0.8, 0, 0], 0.1)
    with pytest.raises(DegenerateTarget):
        solve_displacements([1, 0, 0, 1e-10], 0.1)


def test_forward_map_examples():
    np.testing.assert_allclose(forward_map((0, 0, 0), 0.1), [0, 0, 0, 1])
    betas = (0.1, -0.2j, 0.05 + 0.05j)
    for perm in itertools.permutations(betas):
        np.testing.assert_allclose(forward_map(perm, 0.1), forward_map(betas, 0.1), atol=1e-15)


def test_forward_map_zero_state():
    with pytest.raises(ZeroState):
        forward_map((0, 0, 0), 0.0)


def test_canonical_form():
    c = canonicalize([1j, 0, 0, -1j])
    assert c[3].imag == 0 and c[3].real > 0
    assert np.linalg.norm(c) == pytest.approx(1, abs=1e-15)


def test_roots_sorted_canonically():
    betas = solve_displacements([0.3, -0.5, 0.2j, 0.7], 0.2).betas
    keys = [(-b.real, -b.imag) for b in betas]
    assert keys == sorted(keys)


@given(cplx, cplx, cplx)
def test_cubic_residual(e1, e2, e3):
    roots = cubic_roots(e1, e2, e3)
    scale = max(1, abs(e1), abs(e2), abs(e3))
    for r in roots:
        assert abs(r**3 - e1 * r**2 + e2 * r - e3) <= 1e-10 * scale


@given(cplx, cplx, cplx, st.floats(0.05, 1), st.floats(0.01, 0.5))
def test_round_trip_target(c0, c1, c2, c3_mag, q):
    t = canonicalize([c0, c1, c2, c3_mag])
    assume(abs(t[3]) >= 0.05)
    recipe = solve_displacements(t, q)
    np.testing.assert_allclose(forward_map(recipe.betas, q), t, atol=1e-9)


@given(st.lists(cplx, min_size=3, max_size=3), st.floats(0.05, 0.5))
def test_round_trip_betas(betas, q):
    betas = [b * q for b in betas]
    # a k-fold root is only determined to eps^(1/k); keep roots apart for the 1e-9 contract
    assume(min(abs(x - y) for x, y in itertools.combinations(betas, 2)) > 1e-3 * q)
    recipe = solve_displacements(forward_map(betas, q), q)
    expected = _sort_roots(betas)
    np.testing.assert_allclose(recipe.betas, expected, atol=1e-9)


def test_repeated_roots_still_reproduce_the_state():
    q = 0.5
    betas = (0.5, 0.5, 0.5)
    recipe = solve_displacements(forward_map(betas, q), q)
    np.testing.assert_allclose(forward_map(recipe.betas, q), forward_map(betas, q), atol=1e-9)
    assert _same_multiset(recipe.betas, betas, 1e-4)


def test_presets_scale_linearly_in_q():
    for name in ("cat-odd", "zero-three"):
        t = preset_target(name)
        m1 = sorted(abs(b) for b in solve_displacements(t, 0.05).betas)
        m2 = sorted(abs(b) for b in solve_displacements(t, 0.15).betas)
        np.testing.assert_allclose(np.array(m2), 3 * np.array(m1), atol=1e-12)


def test_preset_betas_reach_preset_targets():
    for name in ("fock3", "cat-odd", "zero-three"):
        for q in (0.02, 0.1):
            np.testing.assert_allclose(forward_map(preset_betas(name, q), q), preset_target(name),
                                       atol=1e-12)


# -- reference states ----------------------------------------------------------------


def test_odd_cat_support_and_orthogonality():
    odd = target_cat(1.3, "odd", 20)
    even = target_cat(1.3, "even", 20)
    assert np.all(odd[::2] == 0)
    assert abs(np.vdot(odd, even)) < 1e-12
    with pytest.raises(ZeroState):
        target_cat(0, "odd", 10)


def test_cat_fidelity_of_recipe_state():
    # oracle: |<CSS|R(t)|psi>| is maximized at |c1| a + |c3| a^3/sqrt(6) for this two-term state;
    # odd cat amplitudes are 2 e^{-a^2/2} a^n / sqrt(n!) / sqrt(2 (1 - e^{-2 a^2}))
    a = 1.3
    psi = preset_target("cat-odd")
    norm = sqrt(2 * (1 - np.exp(-2 * a**2)))
    expected = (2 * np.exp(-(a**2) / 2) / norm * (abs(psi[1]) * a + abs(psi[3]) * a**3 / sqrt(6))) ** 2
    f, _ = best_rotation_fidelity(psi, target_cat(a, "odd", 20))
    assert f == pytest.approx(expected, abs=1e-6)
    assert f == pytest.approx(0.91, abs=0.005)


def test_qutrit_basis_series():
    alpha = 0.2
    v = target_qutrit_basis(alpha, 0, 6)
    assert v[3] / v[0] == pytest.approx(alpha**3 / sqrt(6), rel=1e-12)
    v1 = target_qutrit_basis(alpha, 1, 8)
    assert v1[4] / v1[1] == pytest.approx(alpha**3 / (2 * sqrt(6)), rel=1e-12)


def test_qutrit_basis_orthogonal_and_symmetric():
    states = [target_qutrit_basis(1.1 + 0.3j, k, 20) for k in range(3)]
    for a, b in itertools.combinations(states, 2):
        assert abs(np.vdot(a, b)) < 1e-12
    R = fock.phase_rotation(2 * np.pi / 3, 20)
    for v in states:
        assert abs(np.vdot(v, R @ v)) == pytest.approx(1, abs=1e-12)


def test_qutrit_basis_equals_coherent_superposition():
    alpha, dim = 0.9, 20
    w = np.exp(2j * np.pi / 3)
    for k in range(3):
        sup = sum(w ** (-k * j) * fock.coherent_state(alpha * w**j, dim) for j in range(3))
        np.testing.assert_allclose(target_qutrit_basis(alpha, k, dim), fock.normalize(sup), atol=1e-12)


def test_qutrit_basis_errors():
    with pytest.raises(ZeroState):
        target_qutrit_basis(0, 1, 6)
    with pytest.raises(ValueError):
        target_qutrit_basis(1, 0, 5)
