import json

import pytest

import qfields


def test_class_number_small():
    assert qfields.class_number(-23) == 3
    assert qfields.class_number(-31, method="dirichlet") == 3
    assert qfields.reduced_forms(-23) == [(1, 1, 6), (2, -1, 3), (2, 1, 3)]
    assert qfields.field_class_number(-5) == 2


def test_big_ints_cross_the_boundary():
    m = 10**20 + 39
    assert qfields.is_prime(m)
    with pytest.raises(qfields.BudgetExceeded):
        qfields.is_prime(2**89 - 1)
    s, f = qfields.squarefree_decompose(-(3**2) * 7 * m)
    assert (s, f) == (-7 * m, 3)


def test_quintuple_verifies():
    t = qfields.quintuple(3, 2, verify=True)
    assert t["verdict"] == "verified"
    assert [m["radicand"] for m in t["members"]] == ["-119164", "-119163", "-119160", "-119128", "-119064"]
    assert t["members"][0]["class_number"] == "3"
    assert all(m["divisible"] for m in t["members"])


def test_quadruple_rejection():
    with pytest.raises(qfields.Rejection):
        qfields.quadruple(3, 3, 4)


def test_lehmer_exceptional_pair():
    assert qfields.lehmer_number(1, -7, 13) == -1
    assert not qfields.has_primitive_divisor(1, -7, 13)
    assert qfields.exceptional_table_lookup(13, 1, -7)
    with pytest.raises(ValueError):
        qfields.lehmer_number(2, 2, 5)


def test_lrn_structured_matches_brute():
    a = qfields.lrn_solve(7, 11, 4, method="brute")
    b = qfields.lrn_solve(7, 11, 4)
    assert [(s["x"], s["y"], s["z"]) for s in a] == [(s["x"], s["y"], s["z"]) for s in b]


def test_theorem31_report():
    r = qfields.theorem31_verify(7, 3, 3)
    assert r["failed_check"] is None
    assert r["verdict"] is True


def test_verify_custom_record():
    t = qfields.verify_tuple({"n": 3, "members": [{"radicand": "-31"}, {"radicand": "-23"}]})
    assert [m["class_number"] for m in t["members"]] == ["3", "3"]


def test_cli_round_trip():
    code, out, err = qfields.run_cli(["quintuple", "-n", "3", "-k", "2", "--format", "json"])
    assert code == 0
    record = json.loads(out)
    code, out2, _ = qfields.run_cli(["classnum", "-d", "-31"])
    assert code == 0 and out2 == "h = 3\n"
    t = qfields.verify_tuple(record)
    assert t["verdict"] == "verified"
