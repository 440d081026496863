import numpy as np
import pytest

from quadmap.genquad import potential_V
from quadmap.potentials import Free, General, Gravity, Harmonic, Inverted
from quadmap.qcore import PhysicalParams

X = np.linspace(-3, 3, 7)


def test_values():
    np.testing.assert_array_equal(Free().value(X), 0)
    np.testing.assert_allclose(Harmonic(5.0, 1.0).value(X), 2.5 * (X - 1) ** 2)
    np.testing.assert_allclose(Inverted(-1.0, 2.0).value(X), -0.5 * (X - 2) ** 2)
    np.testing.assert_allclose(Inverted(1.0, 2.0).value(X), Inverted(-1.0, 2.0).value(X))
    np.testing.assert_allclose(Gravity(2.0).value(X, 0.0, PhysicalParams(mass=3.0)), 6.0 * X)


def test_general_value_uses_profile_time():
    pot = General("A1", tau0=0.0)
    m = pot.quadratic_map()
    np.testing.assert_allclose(pot.value(X, 0.8), potential_V(m, X, 0.8))
    assert pot.quadratic_map() is m
    assert pot.profile_name == "A1"


def test_validation():
    with pytest.raises(ValueError):
        Harmonic(-1.0)
    with pytest.raises(ValueError):
        Inverted(0.0)
    assert Harmonic(1.0).trap().omega == 1.0
    assert Inverted(-4.0).trap().omega == 2.0
    assert {Free().kind, Harmonic(1).kind, Inverted(1).kind, Gravity(1).kind, General().kind} == {
        "free",
        "harmonic",
        "inverted",
        "gravity",
        "general",
    }
