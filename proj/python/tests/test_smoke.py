import json
import pathlib

import pytest

import unicausal as uc

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"

CONFOUNDED = {
    "dag": {"variables": ["Z", "X", "Y"], "edges": [["Z", "X"], ["Z", "Y"], ["X", "Y"]]},
    "card": {"Z": 2, "X": 2, "Y": 2},
    "cpt": {
        "Z": {"parents": [], "rows": {"": [0.75, 0.25]}},
        "X": {"parents": ["Z"], "rows": {"0": [0.875, 0.125], "1": [0.25, 0.75]}},
        "Y": {
            "parents": ["Z", "X"],
            "rows": {"0,0": [0.875, 0.125], "0,1": [0.5, 0.5], "1,0": [0.625, 0.375], "1,1": [0.125, 0.875]},
        },
    },
}


def collider():
    return uc.Dag(["A", "B", "C"], [("A", "B"), ("C", "B")])


def test_crp_on_collider():
    c = collider().category()
    assert c.objects == ["A", "B", "C"]
    assert uc.crp_check(c, "A", "B") == {"hom_count": 1, "nat_count": 1, "bijection": True}
    assert uc.crp_check(c, "A", "C")["hom_count"] == 0


def test_representable_and_yoneda():
    c = uc.load("category", (DATA / "chain_dag.json").read_text())
    p = uc.hom_presheaf(c, "C")
    assert p.sizes == [1, 1, 1]
    assert uc.yoneda_check(p, "A") == {"nat_count": 1, "fx_count": 1, "bijection": True}
    assert uc.uct_verified(p)
    assert uc.count_nats(p, p) == 1


def test_dsep_and_topology():
    g = collider()
    assert uc.d_separated(g, ["A"], ["C"])
    assert not uc.d_separated(g, ["A"], ["C"], ["B"])
    assert uc.intervene(g, ["B"]).edges == []
    assert uc.alexandroff_opens(g) == [[], ["B"], ["A", "B"], ["B", "C"], ["A", "B", "C"]]


def test_scm_queries():
    m = uc.load("scm", CONFOUNDED)
    assert sum(uc.joint(m)) == pytest.approx(1.0)
    assert uc.ate_exact(m, "X", "Y") == pytest.approx(0.40625, abs=1e-12)
    assert uc.adjustment_estimate(m, "X", 1, "Y", ["Z"]) == pytest.approx(uc.do_marginal(m, {"X": 1}, "Y"))
    assert uc.is_confounded(m, "X", "Y")
    cols, rows = uc.sample(m, 5, 3)
    assert cols == ["Z", "X", "Y"] and len(rows) == 5
    assert abs(uc.ht_estimate(m, 10000, 1, "X", "Y") - 0.40625) < 0.1


def test_errors_and_guards():
    with pytest.raises(uc.Error):
        uc.Dag(["A", "B"], [("A", "B"), ("B", "A")])
    limits = uc.Limits()
    limits.max_morphisms = 3
    with pytest.raises(uc.SizeGuardError):
        uc.Dag(["A", "B", "C"], [("A", "B"), ("B", "C")]).category(limits)


def test_cli_entry():
    code, report = uc.run("crp", "-i", DATA / "collider_dag.json", "--source", "A", "--target", "B")
    assert code == 0
    assert report["status"] == "ok"
    assert report["payload"]["hom_count"] == 1
    code, report = uc.run("frobnicate")
    assert code == 2
    assert json.dumps(report)
