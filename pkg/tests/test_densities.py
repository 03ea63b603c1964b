import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubicsieve.densities import (
    SieveConfig,
    as_fraction,
    gamma0,
    nu_array,
    nu_factor,
    predicted_counts,
    sigma0,
    sigma0_exact,
)
from cubicsieve.ideals import nu
from cubicsieve.primes import primes_up_to


def test_as_fraction():
    assert as_fraction(0.07) == Fraction(7, 100)
    assert as_fraction("5/67") == Fraction(5, 67)
    assert as_fraction(3) == 3
    with pytest.raises(TypeError):
        as_fraction(True)
    with pytest.raises(ValueError):
        as_fraction(float("nan"))


def test_config_derived_values():
    cfg = SieveConfig(30_000, Fraction(1, 10), Fraction(7, 100))
    assert cfg.tau == (Fraction(7, 100) + Fraction(5, 67)) / 2
    with mpmath.workdps(50):
        assert cfg.Y == int(mpmath.nint(mpmath.power(30_000, mpmath.mpf(93) / 100)))
    assert cfg.n0 == 6
    assert cfg.Z == 3 * 30_000 ** 3
    assert not cfg.Y_explicit
    assert SieveConfig(100, Fraction(1, 10), Y=50).Y_explicit


@pytest.mark.parametrize("kwargs", [
    dict(X=2, eta=Fraction(1, 10)),
    dict(X=100, eta=Fraction(1)),
    dict(X=100, eta=Fraction(-1, 10)),
    dict(X=100, eta=Fraction(1, 10), tau=Fraction(5, 67)),
    dict(X=100, eta=Fraction(1, 10), gamma_sparsity=Fraction(7, 100), tau=Fraction(6, 100)),
    dict(X=100, eta=Fraction(1, 10), delta=Fraction(1, 5)),
])
def test_config_rejects(kwargs):
    with pytest.raises(ValueError):
        SieveConfig(**kwargs)


def test_sigma0_examples():
    assert sigma0(1).value == 1.0
    assert sigma0(10).value == pytest.approx(8 / 7, rel=1e-15)
    assert sigma0_exact(10) == Fraction(8, 7)
    assert sigma0(1000).value == pytest.approx(float(sigma0_exact(1000)), rel=1e-12)


def test_sigma0_convergence():
    a, b = sigma0(10 ** 6), sigma0(10 ** 7)
    assert abs(a.value - b.value) < 0.02
    assert b.oscillation < 0.02


def test_sigma0_trivial_on_two_mod_three():
    ps = primes_up_to(10 ** 5)
    sel = ps[ps % 3 == 2]
    assert (nu_array(sel) == 1).all()
    prod = math.prod(1 - Fraction(int(v) - 1, int(p)) for p, v in zip(sel, nu_array(sel)))
    assert prod == 1


def test_nu_array_matches_scalar():
    ps = primes_up_to(20000)
    assert nu_array(ps).tolist() == [nu(int(p)) for p in ps]


def test_gamma0_closed_form():
    with mpmath.workdps(50):
        eps0 = 1 + mpmath.cbrt(2) + mpmath.cbrt(4)
        ref = mpmath.pi * mpmath.log(eps0) / mpmath.sqrt(27)
    assert gamma0() == pytest.approx(float(ref), rel=1e-15)


def test_nu_factor_example():
    cfg = SieveConfig(100, Fraction(1, 10), Y=50)
    assert nu_factor(cfg, 1.0) == pytest.approx(1 / 6000, rel=1e-12)
    assert nu_factor(cfg, 0.0) == 0


def test_pi_B0_example():
    cfg = SieveConfig(100, Fraction(1, 10), Y=50)
    assert predicted_counts(cfg, 1.0).pi_B0 == pytest.approx(1e5 / math.log(100), rel=1e-12)


def test_typeI_main_unit():
    cfg = SieveConfig(100, Fraction(1, 10), Y=50)
    assert predicted_counts(cfg, 1.0).typeI_A0_main(1) == pytest.approx(6 * 0.01 * 100 * 50 / math.pi ** 2)


@given(st.integers(3, 10 ** 6), st.fractions(0, Fraction(99, 100)))
def test_config_roundtrip_snapshot(X, eta):
    cfg = SieveConfig(X, eta, Y=10)
    snap = cfg.snapshot()
    assert Fraction(snap["eta"]) == eta and snap["X"] == X
