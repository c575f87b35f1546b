import pytest

import oracles as O
from lovx import graphcat as gc


@pytest.mark.parametrize("name", sorted(O.FROZEN))
def test_frozen_values_rederive(name):
    g = gc.bundled_graph(name)
    assert O.derive(name, g.n, O.edges_of(g)) == O.FROZEN[name]


def _package_values(g):
    opt = lambda inst: inst.discrete_optimum()[0]      # noqa: E731
    v = lambda kind: opt(gc.cheeger_variants(g, "vertex_boundary", boundary=kind))  # noqa: E731
    return {"maxcut": opt(gc.maxcut(g)), "mincut": opt(gc.mincut(g)),
            "cheeger": opt(gc.cheeger_cut(g)), "alpha": opt(gc.independence_number(g)),
            "gamma": opt(gc.chromatic_number(g)), "matching": opt(gc.matching_number(g)),
            "cover": opt(gc.vertex_cover(g)), "max3cut": opt(gc.max_kcut(g, 3)),
            "normalized_cut": opt(gc.cheeger_variants(g, "normalized_cut")),
            "vb_int": v("int"), "vb_ext": v("ext"), "vb_ver": v("ver"),
            "dual_cheeger": opt(gc.cheeger_variants(g, "dual_cheeger"))}


@pytest.mark.parametrize("name", ["k3", "p3", "p4", "c5", "k4", "petersen"])
def test_package_matches_frozen(name):
    want = dict(O.FROZEN[name])
    mod = want.pop("modularity")
    got = _package_values(gc.bundled_graph(name))
    assert got == want
    assert float(gc.modularity(gc.bundled_graph(name)).discrete_optimum()[0]) == \
        pytest.approx(float(mod))


def test_package_frustration_frozen():
    inst = gc.frustration_index(gc.bundled_graph("neg_k3"))
    assert inst.discrete_optimum()[0] == O.FROZEN["neg_k3"]["frustration"]
