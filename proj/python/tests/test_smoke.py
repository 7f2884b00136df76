import json

import pytest

import rlie


def test_witt_round_trip_and_h2():
    w = rlie.build("witt", m=1, p=5)
    assert w.dim == 5 and w.restricted and w.graded
    assert rlie.verify_lie(w)["ok"]
    assert rlie.verify_restricted(w)["ok"]
    again = rlie.Algebra.from_json(w.to_json())
    assert again == w
    assert again.to_json() == w.to_json()
    assert rlie.restricted_h2(w)["h2_restricted"] == 1
    assert rlie.restricted_h2(w, graded=False, full=True)["h2_restricted"] == 1


def test_bracket_and_simplicity():
    sl2 = rlie.build("sl", size=2, p=5)
    assert sl2.dim == 3
    assert rlie.is_simple(sl2) == "simple"
    assert rlie.is_simple(rlie.build("sl", size=5, p=5)) == "not_simple"
    for i in range(3):
        assert sl2.bracket(i, i) == {}
    with pytest.raises(IndexError):
        sl2.bracket(0, 3)


def test_errors_map_to_python():
    with pytest.raises(rlie.InputError):
        rlie.build("melikian", n=[1, 1], p=7)
    with pytest.raises(rlie.InputError):
        rlie.Algebra.from_json('{"format_version": 1}')
    assert issubclass(rlie.InputError, rlie.Error)


def test_enveloping_sl2():
    u = rlie.enveloping(rlie.build("sl", size=2, p=5))
    assert u.dim == 125
    assert u.verify()["ok"]
    assert u.cocommutative and not u.commutative
    assert u.dual().height() == 1
    assert rlie.Hopf.from_json(u.to_json()) == u
    assert u.primitives() == rlie.build("sl", size=2, p=5)


def test_constant_group_scheme():
    c = rlie.constant_group_scheme(6, 5)
    assert c.dim == 6 and c.commutative and c.verify()["ok"]
    assert c.dual().dual() == c


def test_catalog_and_cli():
    table = rlie.catalog(tier=1)
    assert table["mismatches"] == 0
    code, out, _ = rlie.run_cli(["build", "witt", "--m", "1", "--p", "5"])
    assert code == 0
    assert json.loads(out)["dim"] == 5
    assert rlie.run_cli(["nonsense"])[0] == 2
