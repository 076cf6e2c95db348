import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from metastable_ac import (DegeneratePointError, InputError, LatticeConfig, Params,
                           UnsupportedSizeError, constrained_drift, constrained_hessian,
                           morse_index, potential, project_to_S, unconstrained_gradient)
from metastable_ac.model import basis_of_S, full_hessian
from metastable_ac.symmetry import act, compose, group_elements

SIZES = st.sampled_from([4, 8, 10, 14, 16])
GAMMAS = st.floats(0.0, 0.25)


def loop_potential(x, gamma):
    n = len(x)
    return sum(t**4 / 4 - t**2 / 2 for t in x) + gamma / 4 * sum(
        (x[(i + 1) % n] - x[i]) ** 2 for i in range(n))


@st.composite
def points(draw, n=None):
    n = draw(SIZES) if n is None else n
    v = draw(arrays(float, n, elements=st.floats(-1.6, 1.6)))
    return n, v - v.mean()


def test_potential_of_block_state():
    x = np.array([1.0, 1.0, -1.0, -1.0])
    assert potential(Params(4, 0.1), x) == pytest.approx(-1.0 + 0.1 / 4 * 8)


@given(points(), GAMMAS)
def test_potential_matches_site_sum(pt, gamma):
    n, x = pt
    assert potential(Params(n, gamma), x) == pytest.approx(loop_potential(x, gamma), abs=1e-10)


@given(points(), GAMMAS)
def test_gradient_matches_central_differences(pt, gamma):
    n, x = pt
    p = Params(n, gamma)
    h = 1e-6
    fd = np.array([(loop_potential(x + h * e, gamma) - loop_potential(x - h * e, gamma)) / (2 * h)
                   for e in np.eye(n)])
    assert np.allclose(unconstrained_gradient(p, x), fd, atol=1e-6)


@given(points(), GAMMAS)
def test_drift_is_tangent_to_S(pt, gamma):
    n, x = pt
    d = constrained_drift(Params(n, gamma), x)
    assert abs(d.sum()) < 1e-10


@given(points(), GAMMAS)
def test_drift_is_projected_negative_gradient(pt, gamma):
    n, x = pt
    p = Params(n, gamma)
    g = unconstrained_gradient(p, x)
    assert np.allclose(constrained_drift(p, x), -(np.eye(n) - 1.0 / n) @ g, atol=1e-12)


@given(points(), GAMMAS, st.data())
def test_potential_is_group_invariant(pt, gamma, data):
    n, x = pt
    g = data.draw(st.sampled_from(group_elements(n)))
    p = Params(n, gamma)
    assert potential(p, act(g, x)) == pytest.approx(potential(p, x), abs=1e-10)


@given(points(), GAMMAS, st.data())
def test_gradient_is_group_equivariant(pt, gamma, data):
    n, x = pt
    g = data.draw(st.sampled_from(group_elements(n)))
    p = Params(n, gamma)
    assert np.allclose(unconstrained_gradient(p, act(g, x)), act(g, unconstrained_gradient(p, x)),
                       atol=1e-12)


@pytest.mark.parametrize("n", [4, 8, 10])
def test_group_closes_under_composition(n):
    elems = set(group_elements(n))
    assert len(elems) == 4 * n
    for g in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (3, 1, 1)]:
        for h in group_elements(n):
            assert compose(g, h, n) in elems


@pytest.mark.parametrize("n", [4, 8, 14])
def test_basis_is_orthonormal_and_spans_S(n):
    b = basis_of_S(n)
    assert np.allclose(b.T @ b, np.eye(n - 1), atol=1e-13)
    assert np.allclose(b.sum(axis=0), 0.0, atol=1e-13)


@given(points(), GAMMAS, st.integers(0, 2**31 - 1))
def test_hessian_spectrum_is_basis_independent(pt, gamma, seed):
    n, x = pt
    p = Params(n, gamma)
    b = basis_of_S(n)
    q, _ = np.linalg.qr(np.random.default_rng(seed).normal(size=(n - 1, n - 1)))
    w1 = constrained_hessian(p, x).spectrum()
    w2 = constrained_hessian(p, x, basis=b @ q).spectrum()
    assert np.allclose(np.sort(w1), np.sort(w2), atol=1e-9)


@given(points(n=8), GAMMAS)
def test_constrained_hessian_matches_gradient_differences(pt, gamma):
    n, x = pt
    p = Params(n, gamma)
    b = basis_of_S(n)
    h = constrained_hessian(p, x).matrix
    fd = np.column_stack([
        b.T @ (unconstrained_gradient(p, x + 1e-6 * b[:, k])
               - unconstrained_gradient(p, x - 1e-6 * b[:, k])) / 2e-6 for k in range(n - 1)])
    assert np.allclose(h, fd, atol=1e-6)


def test_full_hessian_is_symmetric_circulant_at_zero():
    h = full_hessian(Params(8, 0.2), np.zeros(8))
    assert np.allclose(h, h.T)
    assert np.allclose(np.diag(h), -0.8)
    assert h[0, 7] == pytest.approx(-0.1)


def test_morse_index_of_minimum_and_saddle():
    p = Params(4)
    assert morse_index(constrained_hessian(p, [1, 1, -1, -1])) == 0
    assert morse_index(constrained_hessian(p, [1, -1, 0, 0])) == 1


def test_morse_index_rejects_degenerate_point():
    with pytest.raises(DegeneratePointError):
        morse_index(np.diag([1.0, 0.0, -1.0]))


@given(arrays(float, 10, elements=st.floats(-5, 5)))
def test_projection_is_idempotent(v):
    w = project_to_S(v)
    assert abs(w.sum()) < 1e-10
    assert np.allclose(project_to_S(w), w)


@pytest.mark.parametrize("n,err", [(5, InputError), (2, InputError), (6, UnsupportedSizeError),
                                   (12, UnsupportedSizeError), (8.0, InputError), (True, InputError)])
def test_bad_sizes_rejected(n, err):
    with pytest.raises(err):
        Params(n)


@pytest.mark.parametrize("kw", [{"gamma": -0.1}, {"gamma": float("nan")}, {"eps": 0.0},
                                {"eps": float("inf")}])
def test_bad_parameters_rejected(kw):
    with pytest.raises(InputError):
        Params(8, **kw)


def test_wrong_length_and_nonfinite_vectors_rejected():
    with pytest.raises(InputError):
        potential(Params(8), np.zeros(4))
    with pytest.raises(InputError):
        potential(Params(4), [0.0, np.nan, 0.0, 0.0])


def test_lattice_config_enforces_zero_sum():
    c = LatticeConfig([1.0, -1.0, 0.5, -0.5])
    assert len(c) == 4 and np.asarray(c).sum() == 0
    with pytest.raises(InputError):
        LatticeConfig([1.0, 0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        c.values[0] = 3.0
