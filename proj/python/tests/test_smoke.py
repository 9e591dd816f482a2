import math

import pytest

import hypheat


def test_h3_closed_form():
    v = hypheat.kernel("real", 1.0, 1.0, n=3)
    expected = math.exp(-1.0) / (2 * math.pi * math.sqrt(2 * math.pi) * math.sinh(1.0))
    assert v["value"] == pytest.approx(expected, rel=1e-13)
    assert v["rep"] == "millson"


def test_gruet_matches_millson():
    a = hypheat.kernel("real", 1.0, 0.7, n=5, rep="gruet")["value"]
    b = hypheat.kernel("real", 1.0, 0.7, n=5, rep="millson")["value"]
    assert a == pytest.approx(b, rel=1e-8)


def test_hw_density_value():
    assert hypheat.hw_density(1.0, 1.0) == pytest.approx(0.739076531303232, rel=1e-12)


def test_maass_phase_is_unimodular():
    v = hypheat.kernel("maass", 1.0, w=0.3, y=1.2, k=2, rep="theta")
    assert abs(v["phase"]) == pytest.approx(1.0, abs=1e-14)


def test_identity_residual():
    r = hypheat.residual("BETA_PRIME", {"a": 2.0, "b": 3.0})
    assert r["pass"]
    assert r["rel_residual"] < 1e-12


def test_errors():
    with pytest.raises(ValueError):
        hypheat.kernel("nowhere", 1.0, 1.0)
    with pytest.raises(ValueError):
        hypheat.kernel("damek-ricci", 1.0, 1.0, k=1, m=3)
    assert "parity" in hypheat.representations("damek-ricci")
