from fractions import Fraction

import numpy as np
import pytest

import oracles as O
from lovx import eigen, graphcat as gc, lovasz
from lovx.setfn import DomainError, SetFunction, pair_decode, popcounts


def test_constant_g_every_sign_vector():
    rng = np.random.default_rng(0)
    n = 3
    f = SetFunction(n, "pair", table=rng.integers(0, 7, 27))
    g = SetFunction(n, "pair", table=np.ones(27, dtype=np.int64))
    for A in range(8):
        a = (A, 7 ^ A)
        cert = eigen.verify_eigenpair(f, g, Fraction(int(f(a))), a)
        assert cert.accepted and cert.residual <= 1e-8
        assert cert.witness is not None


def test_original_pair_only_eigenvalue():
    rng = np.random.default_rng(1)
    f = SetFunction(3, table=rng.integers(1, 9, 8))
    g = SetFunction(3, table=rng.integers(1, 9, 8))
    lam0 = Fraction(int(f(7)), int(g(7)))
    for A in range(1, 8):
        for lam in {Fraction(int(f(A)), int(g(A))), lam0 + 1}:
            if lam != lam0:
                assert not eigen.verify_eigenpair(f, g, lam, A)
    lams = {lam for lam, _ in eigen.enumerate_eigenvalues(f, g)}
    assert lams <= {lam0}


def test_cut_pair_k3_accepts_2():
    f, g = eigen.cut_pair(gc.bundled_graph("k3"))
    assert eigen.verify_eigenpair(f, g, 2, (0b001, 0b110))


@pytest.mark.parametrize("name,vals", [("k3", [0, 2]), ("p3", [0, 1, 2]), ("k4", [0, 3, 4])])
def test_cut_pair_eigenvalues(name, vals):
    f, g = eigen.cut_pair(gc.bundled_graph(name))
    assert [lam for lam, _ in eigen.enumerate_eigenvalues(f, g)] == vals


@pytest.mark.parametrize("name,expect", [("k3", (2, 2)), ("p3", (1, 2)), ("k4", (3, 4))])
def test_minmaxcut_via_eigen(name, expect):
    mn, mx, _ = eigen.minmaxcut_via_eigen(gc.bundled_graph(name))
    assert (mn, mx) == expect


def test_cut_pair_eigenvalues_all_small_graphs():
    rng = np.random.default_rng(2)
    for _ in range(5):
        n = int(rng.integers(3, 8))
        g = gc.random_graph(n, 0.5, rng)
        E = O.edges_of(g)
        _, _, lams = eigen.minmaxcut_via_eigen(g)
        assert lams == sorted({O.cut_value(E, S) for S in O.subsets(n)})


def test_symmetric_pair_has_sign_vector_representatives():
    # 2 f(A,B) = f(A, V-A) + f(V-B, B) holds for the cut pair
    f, g = eigen.cut_pair(gc.bundled_graph("p4"))
    n = 4
    for lam, (A, B) in eigen.enumerate_eigenvalues(f, g):
        assert A | B == (1 << n) - 1


def test_accepted_lambda_is_ratio_at_eigenset():
    rng = np.random.default_rng(3)
    f = SetFunction(3, "pair", table=rng.integers(0, 6, 27))
    g = SetFunction(3, "pair", table=rng.integers(1, 4, 27))
    for lam, a in eigen.enumerate_eigenvalues(f, g):
        assert lam == Fraction(int(f(a)), int(g(a)))


def test_size_guard_sampling_mode():
    g = gc.bundled_graph("petersen")
    f, c = eigen.cut_pair(g)
    cert = eigen.verify_eigenpair(f, c, 3, (0b1, (1 << 10) - 2))
    assert cert.mode == "sampled"


def test_cheeger_examples():
    k3 = gc.bundled_graph("k3")
    cut = SetFunction(3, table=k3.cut_table())
    vol = SetFunction(3, table=k3.vol_table())
    rep = eigen.second_eigenvalue_cheeger(cut, vol)
    assert rep.value == 1 and rep.variational_ok
    p3 = gc.bundled_graph("p3")
    rep = eigen.second_eigenvalue_cheeger(SetFunction(3, table=p3.cut_table()),
                                          SetFunction(3, table=popcounts(3)))
    assert rep.value == 1 and rep.variational_ok


def test_cheeger_hypotheses():
    k3 = gc.bundled_graph("k3")
    asym = SetFunction(3, table=popcounts(3))
    with pytest.raises(DomainError):
        eigen.second_eigenvalue_cheeger(asym, SetFunction(3, table=k3.vol_table()))
    dec = SetFunction(3, table=-popcounts(3))
    with pytest.raises(DomainError):
        eigen.second_eigenvalue_cheeger(SetFunction(3, table=k3.cut_table()), dec)


def test_min_volume_via_pair_form():
    # min_t G_s(x - t1) equals the original extension of min(g(A), g(V-A))
    rng = np.random.default_rng(4)
    g = gc.bundled_graph("p4")
    vol = g.vol_table()
    pos, neg = pair_decode(4)
    gs = SetFunction(4, "pair", table=vol[pos] + vol[neg])
    Gs = lovasz.extension(gs)
    mv = SetFunction(4, table=np.minimum(vol, vol[15 ^ np.arange(16)]))
    Mv = lovasz.extension(mv)
    for x in rng.standard_normal((200, 4)):
        cands = np.concatenate([x, [0.0]])
        best = min(Gs(x - t) for t in cands)
        assert best == pytest.approx(Mv(x), abs=1e-9)


def test_signed_eigen_examples():
    pos = gc.bundled_graph("k3")
    sys = eigen.signed_eigen_check(pos, 0.0, [1, 1, 1])
    # z = 0 is feasible; any circulation around the triangle is too
    assert sys.accepted and sys.violation <= 1e-8
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(3, 7))
        sg = gc.random_graph(n, 0.6, rng, signed=True)
        x = rng.choice([-1.0, 1.0], size=n)
        A = {i for i in range(n) if x[i] > 0}
        lam = 0.0
        for i, j, w, s in sg.edges:
            if (i in A) != (j in A):
                lam += 2 * w * (s > 0)
            else:
                lam += 2 * w * (s < 0)
        assert eigen.signed_eigen_check(sg, lam, x).accepted


def test_signed_frustration_minimizer_is_eigen():
    g = gc.bundled_graph("neg_k3")
    x = np.array([1.0, -1.0, 1.0])
    assert eigen.signed_eigen_check(g, 2.0, x).accepted       # one frustrated edge, raw 2
    assert not eigen.signed_eigen_check(g, 1.0, x).accepted


def test_certificate_json():
    f, g = eigen.cut_pair(gc.bundled_graph("k3"))
    js = eigen.verify_eigenpair(f, g, 2, (1, 6)).to_json()
    assert js["accepted"] and js["lambda"] == 2.0
