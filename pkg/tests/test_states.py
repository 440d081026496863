import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadmap.qcore import Grid, PhysicalParams, inner_product, integrate, l2_norm, sample_on_grid
from quadmap.states import (
    MAX_EIGEN_N,
    FreeGaussian,
    GaussianPacket,
    HOEigenstate,
    Superposition,
    gaussian_overlap,
    hermite_functions,
    superpose,
)

# frozen values from the textbook free Gaussian evaluated at 30 digits
FROZEN = [
    ((0.2, 1.5, 0.8), (0.7, 0.3), 0.782843819210480645 + 0.153873041429997130j),
    ((0.0, -4.0, 1.5), (-1.1, 2.0), 0.00130886219229891795 - 0.000594923349781454776j),
]


@pytest.mark.parametrize("pkt,xt,expected", FROZEN)
def test_gaussian_frozen_values(pkt, xt, expected):
    assert abs(GaussianPacket(*pkt)(*xt) - expected) < 1e-15


def test_ho_eigenstate_frozen_value():
    # n=3, omega=2 at xi=0.4
    assert abs(HOEigenstate(3, 2.0)(0.4, 0.0) - (-0.586690800520633902)) < 1e-14


@given(
    st.floats(-2, 2), st.floats(-5, 5), st.floats(0.5, 2.0), st.floats(0, 3), st.floats(0.5, 2), st.floats(0.5, 2)
)
def test_gaussian_norm_is_one(x0, p0, s0, t, hbar, mass):
    pkt = GaussianPacket(x0, p0, s0, PhysicalParams(hbar, mass))
    width = abs(pkt.sigma_t(t))
    centre = x0 + p0 * t / mass
    g = Grid(centre - 12 * width, centre + 12 * width, 4001)
    assert abs(l2_norm(sample_on_grid(pkt, g, t), g.dx) - 1) < 1e-8


def test_gaussian_moments():
    pkt = GaussianPacket(0.5, 2.0, 1.0)
    g = Grid(-20, 25, 6001)
    t = 1.7
    rho = np.abs(sample_on_grid(pkt, g, t)) ** 2
    assert abs(integrate(g.x * rho, g.dx) - (0.5 + 2.0 * t)) < 1e-10
    var = integrate((g.x - 0.5 - 2 * t) ** 2 * rho, g.dx)
    assert abs(var - abs(pkt.sigma_t(t)) ** 2 / 2) < 1e-10


def test_gaussian_rejects_bad_width():
    with pytest.raises(ValueError):
        GaussianPacket(0, 0, 0.0)


@given(st.floats(-2, 2), st.floats(-4, 4), st.floats(0.4, 2.5), st.floats(-3, 3))
def test_free_gaussian_form_matches_packet(x0, p0, s0, t):
    pkt = GaussianPacket(x0, p0, s0)
    fg = pkt.to_free_gaussian()
    x = np.linspace(x0 - 4, x0 + 4, 9)
    np.testing.assert_allclose(fg(x, t), pkt(x, t), atol=1e-13)


def test_free_gaussian_requires_decaying_width():
    with pytest.raises(ValueError):
        FreeGaussian(0.0, 0.0, 1j, 1.0)


def test_exact_overlap_matches_quadrature():
    a = GaussianPacket(0.3, 1.0, 0.9).to_free_gaussian()
    b = GaussianPacket(-0.5, -2.0, 1.4).to_free_gaussian()
    g = Grid(-15, 15, 6001)
    num = inner_product(sample_on_grid(a, g, 0), sample_on_grid(b, g, 0), g.dx)
    assert abs(gaussian_overlap(a, b) - num) < 1e-12


def test_superposition_single_term_identical():
    pkt = GaussianPacket(0.1, 1.0, 1.0)
    s = superpose([(1.0, pkt)])
    x = np.linspace(-3, 3, 13)
    np.testing.assert_array_equal(s(x, 0.4), pkt(x, 0.4))


def test_fig1_superposition_symmetric_and_normalised():
    s = superpose([(1, GaussianPacket(0, 4, 1.5)), (1, GaussianPacket(0, -4, 1.5))]).normalized()
    assert abs(s.norm() - 1) < 1e-14
    g = Grid(-10, 10, 2001)
    v = sample_on_grid(s, g, 0.0)
    assert np.max(np.abs(v.imag)) < 1e-15
    np.testing.assert_allclose(np.abs(v) ** 2, np.abs(v[::-1]) ** 2, atol=1e-15)
    assert abs(l2_norm(v, g.dx) - 1) < 1e-12


def test_superposition_validation():
    with pytest.raises(ValueError):
        Superposition(())
    with pytest.raises(TypeError):
        superpose([(1, lambda x, t: x)]).norm()


def test_hermite_functions_orthonormal():
    g = Grid(-12, 12, 4001)
    h = hermite_functions(6, g.x)
    gram = np.array([[integrate(h[i] * h[j], g.dx) for j in range(7)] for i in range(7)])
    np.testing.assert_allclose(gram, np.eye(7), atol=1e-10)


def test_hermite_high_order_finite():
    y = np.linspace(-12, 12, 101)
    h = hermite_functions(MAX_EIGEN_N, y)
    assert np.all(np.isfinite(h))
    g = Grid(-14, 14, 8001)
    assert abs(integrate(hermite_functions(MAX_EIGEN_N, g.x)[-1] ** 2, g.dx) - 1) < 1e-10


def test_eigenstate_validation_and_energy():
    with pytest.raises(ValueError):
        HOEigenstate(MAX_EIGEN_N + 1, 1.0)
    with pytest.raises(ValueError):
        HOEigenstate(-1, 1.0)
    assert HOEigenstate(2, 3.0).energy == 7.5


def test_eigenstate_orthogonality_by_quadrature():
    g = Grid(-10, 10, 4001)
    a = sample_on_grid(HOEigenstate(0, 1.0), g, 0.0)
    b = sample_on_grid(HOEigenstate(2, 1.0), g, 0.0)
    assert abs(inner_product(a, b, g.dx)) < 1e-10


def test_eigenstate_phase_rotation():
    e = HOEigenstate(1, 2.0, center=0.5)
    x = np.linspace(-2, 3, 11)
    np.testing.assert_allclose(e(x, 0.7), np.exp(-1.5j * 2.0 * 0.7) * e(x, 0.0), atol=1e-15)
