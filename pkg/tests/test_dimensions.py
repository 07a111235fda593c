import pytest

from peakforge import Dimensions


def test_exponent_values():
    assert Dimensions(n=2, m=2).p == 4.0            # N = 4
    assert Dimensions(n=3, m=3).p == 3.0            # N = 6
    assert Dimensions(n=4, m=3).p == pytest.approx(14.0 / 5.0)
    assert Dimensions(n=7, m=2).p == pytest.approx(18.0 / 7.0)


def test_total_dimension_and_conformal_constant():
    d = Dimensions(n=3, m=4)
    assert d.N == 7
    assert d.c_N == pytest.approx(5.0 / 24.0)
    assert Dimensions(n=2, m=2).c_N == pytest.approx(1.0 / 6.0)


def test_flat_factor_keeps_exponent_subcritical():
    # any m >= 1 flat directions push p strictly below the critical
    # exponent of the n-dimensional factor, and keep it above 2
    for n in range(3, 8):
        for m in range(1, 6):
            d = Dimensions(n=n, m=m)
            assert 2.0 < d.p < 2.0 * n / (n - 2.0)


def test_one_dimensional_factor_allowed():
    d = Dimensions(n=1, m=3)
    assert d.N == 4
    assert d.p == 4.0


def test_rejects_bad_dimensions():
    with pytest.raises(ValueError):
        Dimensions(n=0, m=3)
    with pytest.raises(ValueError):
        Dimensions(n=2, m=0)
    with pytest.raises(ValueError):
        Dimensions(n=1, m=1)   # N = 2: exponent undefined
    with pytest.raises((TypeError, ValueError)):
        Dimensions(n=2.5, m=2)


def test_frozen():
    d = Dimensions(n=2, m=2)
    with pytest.raises(AttributeError):
        d.n = 3
