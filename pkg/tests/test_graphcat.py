import json
from fractions import Fraction

import numpy as np
import pytest

import oracles as O
from lovx import graphcat as gc
from lovx.setfn import DomainError


def opt(inst):
    return inst.discrete_optimum()[0]


def B(name):
    return gc.bundled_graph(name)


# -- graph model and readers


def test_edge_list_one_indexed():
    g = gc.parse_edge_list("1 2 1.0\n2 3 1.0", base=1)
    assert g.n == 3 and g.m == 2
    assert [e[:2] for e in g.edges] == [(0, 1), (1, 2)]


def test_dimacs_triangle():
    g = gc.parse_dimacs("c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n")
    assert np.array_equal(g.adjacency(), B("k3").adjacency())


def test_signed_column_and_comments():
    g = gc.parse_edge_list("# signed\n0 1 1.0 -1\n1 2  # default weight\n")
    assert g.edges[0][3] == -1 and g.edges[1][2] == 1.0 and g.edges[1][3] == 1
    assert g.is_signed


@pytest.mark.parametrize("text,msg", [("0 0", "loop"), ("0 1\n1 0", "duplicate"),
                                      ("0 1 -2", "weight"), ("0", "line 1"),
                                      ("0 1\nx y", "line 2")])
def test_edge_list_errors(text, msg):
    with pytest.raises(gc.GraphFormatError, match=msg):
        gc.parse_edge_list(text)


def test_read_graph_sources(tmp_path):
    p = tmp_path / "g.el"
    p.write_text("0 1\n1 2\n")
    assert gc.read_graph(str(p)).m == 2
    d = tmp_path / "g.col"
    d.write_text("p edge 3 1\ne 1 3\n")
    assert gc.read_graph(str(d), "dimacs").edges[0][:2] == (0, 2)
    assert gc.read_graph("k4").m == 6
    for name in gc.BUNDLED:
        assert gc.bundled_graph(name).n >= 3


def test_graph_helpers():
    g = B("p4")
    assert list(g.degrees()) == [1, 2, 2, 1]
    assert g.vol_table()[-1] == 6
    assert g.cut_table()[0b0011] == 1
    assert g.is_connected()
    assert not gc.parse_edge_list("0 1\n2 3").is_connected()
    assert g.line_graph().m == 2
    assert g.power(2).m == 5


# -- catalog examples


def test_maxcut_examples():
    assert opt(gc.maxcut(B("k3"))) == 2
    assert opt(gc.maxcut(B("c4"))) == 4
    assert opt(gc.maxcut(B("k3"), form="dual")) == 2


def test_maxcut_theta_identity():
    rng = np.random.default_rng(0)
    a, b = gc.maxcut_theta_forms(B("k3"), [0, np.pi, 0])
    assert a == pytest.approx(2) and b == pytest.approx(2)
    for _ in range(50):
        a, b = gc.maxcut_theta_forms(B("petersen"), rng.uniform(0, 2 * np.pi, 10))
        assert a == pytest.approx(b)


def test_maxcut_p_forms():
    rng = np.random.default_rng(1)
    g = B("c5")
    inst = gc.maxcut(g, p=2)
    Fp = inst.extras["continuous_p"]
    X = rng.standard_normal((2000, 5))
    assert Fp(X).max() <= O.maxcut(5, O.edges_of(g)) + 1e-9
    x = np.array([1.0, -1.0, 1.0, -1.0, 1.0])
    assert Fp(x[None])[0] == pytest.approx(4)


def test_mincut_examples():
    assert opt(gc.mincut(B("k3"))) == 2
    assert opt(gc.mincut(B("p3"))) == 1
    assert opt(gc.mincut(gc.parse_edge_list("0 1\n2 3"))) == 0


def test_mincut_symmetric_form():
    rng = np.random.default_rng(2)
    g = B("p4")
    inst = gc.mincut(g)
    sym, on = inst.extras["symmetric"], inst.extras["symmetric_domain"]
    X = rng.standard_normal((500, 4))
    X = X - (X.max(axis=1, keepdims=True) + X.min(axis=1, keepdims=True)) / 2
    assert np.all(on(X))
    assert sym(X).min() >= 1 - 1e-9


def test_max_kcut_examples():
    assert opt(gc.max_kcut(B("k3"), 2)) == 2
    assert opt(gc.max_kcut(B("k3"), 3)) == 3
    assert opt(gc.max_kcut(B("k3"), 3, "composition")) == 3
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(3, 8))
        g = gc.random_graph(n, 0.5, rng)
        assert opt(gc.max_kcut(g, 2)) == opt(gc.maxcut(g)) == O.maxcut(n, O.edges_of(g))


def test_max_kcut_partition_oracle_beyond_tables():
    g = B("petersen")
    inst = gc.max_kcut(g, 3)
    assert opt(inst) == 15
    with pytest.raises(Exception):
        gc.max_kcut(g, 1)


def test_cheeger_examples():
    assert opt(gc.cheeger_cut(B("k3"))) == 1
    assert opt(gc.dirichlet_cheeger(B("p3"), [1])) == 1
    with pytest.raises(DomainError):
        gc.dirichlet_cheeger(B("p3"), [])


@pytest.mark.parametrize("name", ["k3", "p3", "p4", "c4"])
def test_cheeger_equals_eigenvalues(name):
    from lovx import eigen
    g = B(name)
    inst = gc.cheeger_cut(g)
    lams = [lam for lam, _ in eigen.enumerate_eigenvalues(inst.f, inst.g)]
    assert lams[0] == opt(inst)
    dinst = gc.dirichlet_cheeger(g, [0, 1])
    dl = [lam for lam, _ in eigen.enumerate_eigenvalues(dinst.f, dinst.g)]
    assert dl[0] == opt(dinst)


def test_independence_examples():
    for name, a in (("k3", 1), ("p3", 2), ("c5", 2)):
        assert opt(gc.independence_number(B(name))) == a
        assert opt(gc.independence_number(B(name), "product")) == a
    with pytest.raises(DomainError):
        gc.independence_number(gc.parse_edge_list("0 1 2.0"))


def test_independence_cross_forms():
    rng = np.random.default_rng(4)
    g = B("c5")
    inst = gc.independence_number(g)
    X = np.abs(rng.standard_normal((2000, 5)))
    assert inst.extras["eq23"](X).max() <= 2 + 1e-9
    idx = inst.feasible_indices()
    Xi = inst.indicator_matrix(idx)
    assert np.max(inst.F(Xi) / inst.G(Xi)) == 2


def test_k_independence():
    rng = np.random.default_rng(5)
    for _ in range(5):
        n = int(rng.integers(4, 8))
        g = gc.random_graph(n, 0.4, rng)
        assert opt(gc.k_independence_number(g, 2)) == O.k_independence(n, O.edges_of(g), 2)
    inst = gc.k_independence_number(B("p4"), 2)
    assert "literal" in inst.extras


def test_motzkin_straus():
    g = B("c5")
    y = np.zeros(5)
    y[[0, 2]] = 0.5
    assert gc.motzkin_straus_ratio(g, y) == pytest.approx(2)
    rng = np.random.default_rng(6)
    for y in rng.random((200, 5)):
        assert gc.motzkin_straus_ratio(g, y) <= 2 + 1e-9


def test_matching_examples():
    assert opt(gc.matching_number(B("k3"))) == 1
    assert opt(gc.matching_number(B("p4"))) == 2
    assert opt(gc.matching_number(B("c4"))) == 2
    g = B("p4")
    y = np.array([1.0, 0.0, 1.0])
    assert gc.matching_ratio(g, y) == pytest.approx(2)


def test_vertex_cover_examples():
    assert opt(gc.vertex_cover(B("k3"))) == 2
    star = gc.parse_edge_list("0 1\n0 2\n0 3")
    assert opt(gc.vertex_cover(star)) == 1
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(3, 8))
        g = gc.random_graph(n, 0.5, rng)
        inst = gc.vertex_cover(g)
        assert opt(inst) == O.vertex_cover(n, O.edges_of(g))
        assert inst.extras["relaxation"]() <= opt(inst) + 1e-7


def test_multiway_examples():
    g = B("p3")
    assert opt(gc.multiway_partition(g, [0, 1, 2])) == 2 * g.m     # forced singletons
    rng = np.random.default_rng(8)
    for _ in range(10):
        n = int(rng.integers(3, 7))
        g = gc.random_graph(n, 0.5, rng)
        t = [0, n - 1] if rng.random() < 0.5 else [0, 1, n - 1]
        inst = gc.multiway_partition(g, t)
        assert opt(inst) == O.multiway(n, O.edges_of(g), t)
        assert inst.extras["relaxation"]() <= opt(inst) + 1e-7
    with pytest.raises(Exception):
        gc.multiway_partition(g, [0, 0])


def test_chromatic_examples():
    assert opt(gc.chromatic_number(B("k3"))) == 3
    assert opt(gc.chromatic_number(B("p3"))) == 2
    assert opt(gc.chromatic_number(B("c5"))) == 3
    with pytest.raises(Exception):
        gc.chromatic_number(B("c5"), continuous=True)


def test_frustration_examples():
    assert opt(gc.frustration_index(B("neg_k3"))) == 1
    c4 = B("c4")
    neg_c4 = gc.Graph(4, [(i, j, w, -1) for i, j, w, _ in c4.edges])
    assert opt(gc.frustration_index(neg_c4)) == 0
    assert opt(gc.frustration_index(neg_c4, "indefinite")) == 0
    with pytest.raises(DomainError):
        gc.frustration_index(c4)


def test_frustration_balanced_and_forms():
    rng = np.random.default_rng(9)
    for _ in range(10):
        n = int(rng.integers(3, 8))
        x = rng.choice([-1, 1], size=n)
        g = gc.random_graph(n, 0.6, rng)
        es = [(i, j, w, int(x[i] * x[j])) for i, j, w, _ in g.edges]
        if all(s > 0 for *_, s in es):
            continue
        bal = gc.Graph(n, es)
        inst = gc.frustration_index(bal)
        assert opt(inst) == 0
        assert inst.extras["sign_oracle"]().optimum == 0
    g = B("neg_k3")
    inst = gc.frustration_index(g)
    S = np.array([[1, -1, 1], [1, 1, 1]])
    assert list(gc.frustration_counts(g, S)) == [1, 3]
    x = np.array([[1.0, -1.0, 1.0]])
    assert inst.extras["sign_form"](x)[0] == 1
    assert inst.extras["alpha_form"](x, 1.0)[0] == pytest.approx(1)


def test_switching_invariance():
    rng = np.random.default_rng(10)
    for _ in range(20):
        n = int(rng.integers(3, 8))
        g = gc.random_graph(n, 0.6, rng, signed=True)
        if not g.is_signed:
            continue
        sw = g.switch(int(rng.integers(n)))
        if sw.is_signed:
            assert opt(gc.frustration_index(g)) == opt(gc.frustration_index(sw))


def test_modularity_examples():
    g = B("p4")
    Q = gc.modularity_table(g)
    assert Q[0] == 0 and Q[-1] == pytest.approx(0)
    two = gc.parse_edge_list("0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n2 3")
    Q2 = gc.modularity_table(two)
    assert Q2.max() > 0 and Q2[0b000111] == Q2.max()
    assert float(opt(gc.modularity(two))) == pytest.approx(Q2.max())
    assert Fraction(opt(gc.modularity(B("c5")))).limit_denominator(100) == Fraction(2, 5)


def test_modularity_checks():
    for name in ("k3", "p4", "c5", "k4"):
        lhs, rhs = gc.modularity_frustration_check(B(name))
        assert lhs == rhs
        a, b = gc.modularity_box_check(B(name), 1.0, 2.0)
        assert a == pytest.approx(b)


def test_modularity_mu_form():
    g = B("p4")
    inst = gc.modularity(g, mu=[1, 1, 1, 1])
    assert opt(inst) >= 0


def test_cheeger_variant_examples():
    assert opt(gc.cheeger_variants(B("k3"), "normalized_cut")) == 1
    assert opt(gc.cheeger_variants(B("k3"), "isoperimetric_profile", k=1)) == 2
    assert opt(gc.cheeger_variants(B("p3"), "cheeger_like")) == Fraction(3, 2)
    n = 4
    mu = np.ones((n, n)) - np.eye(n)
    sp = gc.cheeger_variants(B("p4"), "sparsest_cut", mu=mu)
    assert opt(sp) == O.normalized_cut(4, O.edges_of(B("p4")))
    with pytest.raises(Exception):
        gc.cheeger_variants(B("p4"), "no-such-variant")


@pytest.mark.parametrize("name", ["k3", "p4", "c5", "k4"])
def test_vertex_boundary_and_dual(name):
    g = B(name)
    E = O.edges_of(g)
    for kind in ("int", "ext", "ver"):
        inst = gc.cheeger_variants(g, "vertex_boundary", boundary=kind)
        assert opt(inst) == O.vertex_boundary(g.n, E, kind)
    assert opt(gc.cheeger_variants(g, "dual_cheeger")) == O.dual_cheeger(g.n, E)


@pytest.mark.parametrize("name", ["p4", "c5", "k4", "petersen"])
def test_poincare_sandwich(name):
    g = B(name)
    rng = np.random.default_rng(11)
    E = O.edges_of(g)
    h_int, h_ext, h_ver = (O.vertex_boundary(g.n, E, k) for k in ("int", "ext", "ver"))
    X = rng.standard_normal((2000, g.n))
    masks = np.arange(1, (1 << g.n) - 1)
    ind = ((masks[:, None] >> np.arange(g.n)) & 1).astype(float)
    # the denominator is min_t |x - t1|_1, attained at a median
    cands = np.vstack([X, ind])
    cands = cands - np.median(cands, axis=1, keepdims=True)
    cands = cands[np.abs(cands).sum(axis=1) > 0]
    P = gc.poincare_quotient(g, cands).min()
    assert max(h_int, h_ext) / 2 <= P + 1e-9
    assert P <= float(h_ver) + 1e-9


def test_build_problem_and_json():
    for name in gc.PROBLEMS:
        g = B("neg_k3") if name == "frustration" else B("p4")
        params = {"maxkcut": {"k": 2}, "dirichlet": {"A": [1, 2]},
                  "k-independence": {"k": 2}, "multiway": {"terminals": [0, 3]}}.get(name, {})
        inst = gc.build_problem(name, g, **params)
        js = inst.to_json()
        json.dumps(js)
        assert js
    with pytest.raises(Exception):
        gc.build_problem("nope", B("p4"))
