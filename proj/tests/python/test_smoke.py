import pytest

import hydroham

THREE_WAVE = open(__file__.replace("python/test_smoke.py", "data/three_wave.op")).read()


def test_normalize_and_zero():
    assert hydroham.normalize("u*v - v*u + 2*u") == "2*u"
    assert hydroham.is_zero("(u + v)^2 - u^2 - 2*u*v - v^2")
    assert not hydroham.is_zero("u_x*v - v_x*u")


def test_check_operator():
    report = hydroham.check(THREE_WAVE)
    assert report["status"] == "pass"


def test_invert_kdv():
    system = hydroham.invert("u_t = 6*u*u_x + u_xxx")
    assert "u3_x = -6*u1*u2 + u1_t" in system


def test_catalog():
    ids = hydroham.catalog_ids()
    assert len(ids) == 13 and ids[0] == "C2,1"
    assert hydroham.verify_entry("C3,2", trials=3, seed=1)["status"] == "pass"


def test_reproduce_two_wave():
    report = hydroham.reproduce("two-wave", trials=5)
    claims = {c["id"]: c for c in report["claims"]}
    assert claims["two-wave.catalog"]["status"] == "verified"


def test_errors():
    with pytest.raises(ValueError):
        hydroham.normalize("u +* v")
    with pytest.raises(ValueError):
        hydroham.invert("u_t = u*u_t")
    with pytest.raises(ValueError):
        hydroham.reproduce("no-such-example")
