import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lovx import graphcat as gc
from lovx.setfn import (DomainError, EnumerationLimitError, SetFunction, decode, encode,
                        decompose_difference_submodular, delta_submodularity_gap, indicator,
                        is_bisubmodular, is_kway_submodular, is_submodular, mask_of, members,
                        pair_decode, pair_join, pair_meet, popcounts)


def card(n):
    return SetFunction(n, table=popcounts(n))


def k3_cut():
    return SetFunction(3, table=gc.bundled_graph("k3").cut_table())


# -- evaluation


def test_evaluate_examples():
    assert card(3)(mask_of([0, 2])) == 2
    assert card(3)(frozenset({0, 2})) == 2
    assert k3_cut()(mask_of([0])) == 2
    f = SetFunction(3, table=np.arange(1, 9))
    assert f(0) == 0                      # reset on construction


def test_callback_and_memo():
    calls = []

    def fn(a):
        calls.append(a)
        return len(members(a)) ** 2
    f = SetFunction.from_callable(3, fn)
    assert f(7) == 9 and f(7) == 9
    assert calls == [7]
    assert f(0) == 0
    assert np.array_equal(f.table(), popcounts(3) ** 2)


def test_domain_errors():
    with pytest.raises(DomainError):
        SetFunction(3, "bogus", table=np.zeros(8))
    with pytest.raises(DomainError):
        SetFunction(3, table=np.zeros(9))
    with pytest.raises(ValueError):
        SetFunction(3)
    f = SetFunction(2, "pair", table=np.arange(9))
    with pytest.raises(Exception):
        f((3, 3))                         # overlapping pair is not an argument


@pytest.mark.parametrize("kind,n,k", [("powerset", 3, 1), ("pair", 3, 1), ("kway", 2, 3),
                                      ("kway-pair", 2, 2)])
def test_encode_decode_roundtrip(kind, n, k):
    size = {"powerset": 1 << n, "pair": 3 ** n, "kway": 1 << (n * k),
            "kway-pair": 3 ** (n * k)}[kind]
    for i in range(size):
        assert encode(kind, n, k, decode(kind, n, k, i)) == i


def test_pair_indicator():
    x = indicator((0b001, 0b100), 3, "pair")
    assert list(x) == [1, 0, -1]


# -- submodularity


@pytest.mark.parametrize("name", ["k3", "p3", "c5", "petersen"])
def test_cut_is_submodular(name):
    g = gc.bundled_graph(name)
    assert is_submodular(SetFunction(g.n, table=g.cut_table()))


def test_negated_size_product_not_submodular():
    c = popcounts(3)
    f = SetFunction(3, table=-c * (3 - c))
    chk = is_submodular(f)
    assert not chk
    a, b = chk.witness
    t = f.table()
    assert t[a] + t[b] < t[a | b] + t[a & b]


def test_modular_is_submodular_with_zero_gap():
    c = np.array([3, -1, 2, 5])
    bits = (np.arange(16)[:, None] >> np.arange(4)) & 1
    f = SetFunction(4, table=bits @ c)
    assert is_submodular(f)
    assert delta_submodularity_gap(f) == 0


def test_delta_gap_examples():
    g = SetFunction(3, table=np.sqrt(popcounts(3)))
    assert delta_submodularity_gap(g) > 0
    assert delta_submodularity_gap(k3_cut()) >= 0


def test_size_limits():
    with pytest.raises(EnumerationLimitError):
        delta_submodularity_gap(SetFunction(21, table=np.zeros(1 << 21)))


@settings(max_examples=60)
@given(st.integers(2, 5), st.integers(0, 2 ** 32 - 1))
def test_submodular_iff_gap_nonnegative(n, seed):
    rng = np.random.default_rng(seed)
    t = rng.integers(-4, 5, 1 << n)
    if rng.random() < 0.5:              # bias towards submodular instances
        g = gc.random_graph(n, 0.7, rng, connected=False)
        t = g.cut_table() * 3 + (t > 2)
    f = SetFunction(n, table=t)
    assert bool(is_submodular(f)) == (delta_submodularity_gap(f) >= 0)


def test_bisubmodular_examples():
    n = 3
    # g_s(A,B) = g(A) + g(B) with g positive, submodular, non-decreasing
    g = np.sqrt(popcounts(n)) + popcounts(n)
    pos, neg = pair_decode(n)
    gs = SetFunction(n, "pair", table=g[pos] + g[neg])
    assert is_bisubmodular(gs)
    # constant on nonempty pairs
    const = SetFunction(n, "pair", table=np.ones(3 ** n, dtype=np.int64))
    assert bool(is_bisubmodular(const)) == _brute_bisub(const.table(), n)
    prod = SetFunction(n, "pair", table=popcounts(n)[pos] * popcounts(n)[neg])
    chk = is_bisubmodular(prod)
    assert bool(chk) == _brute_bisub(prod.table(), n)
    if not chk:
        (a, b) = chk.witness
        t = prod.table()
        j, m = pair_join(a, b), pair_meet(a, b)
        assert t[encode("pair", n, 1, a)] + t[encode("pair", n, 1, b)] < \
            t[encode("pair", n, 1, j)] + t[encode("pair", n, 1, m)]


def _brute_bisub(t, n):
    args = [decode("pair", n, 1, i) for i in range(3 ** n)]
    for a, b in itertools.product(args, repeat=2):
        j, m = pair_join(a, b), pair_meet(a, b)
        if t[encode("pair", n, 1, a)] + t[encode("pair", n, 1, b)] < \
                t[encode("pair", n, 1, j)] + t[encode("pair", n, 1, m)] - 1e-9:
            return False
    return True


@settings(max_examples=30)
@given(st.integers(0, 2 ** 32 - 1))
def test_bisubmodular_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    f = SetFunction(n, "pair", table=rng.integers(0, 6, 3 ** n))
    assert bool(is_bisubmodular(f)) == _brute_bisub(f.table(), n)


def test_bisubmodular_local_method_agrees():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = 4
        h = gc.random_graph(n, 0.6, rng, connected=False).cut_table()
        pos, neg = pair_decode(n)
        for t in (h[pos] + h[neg], rng.integers(0, 5, 3 ** n)):
            f = SetFunction(n, "pair", table=t)
            assert bool(is_bisubmodular(f, "full")) == bool(is_bisubmodular(f, "local"))


def test_pair_lattice_ops():
    n = 3
    args = [decode("pair", n, 1, i) for i in range(3 ** n)]
    for a in args:
        assert pair_join(a, a) == a and pair_meet(a, a) == a
    for a, b in itertools.product(args, repeat=2):
        for p, q in (pair_join(a, b), pair_meet(a, b)):
            assert p & q == 0


def test_kway_submodular_examples():
    n, k = 3, 2
    cut = k3_cut().table()
    sup = -cut
    codes = np.arange(1 << (n * k))
    A1, A2 = codes & 7, codes >> 3
    assert is_kway_submodular(SetFunction(n, "kway", k, table=cut[A1] + cut[A2]))
    assert not is_kway_submodular(SetFunction(n, "kway", k, table=cut[A1] + sup[A2]))
    assert is_kway_submodular(SetFunction(n, "kway", k, table=np.full(1 << 6, 4)))


# -- decomposition


def test_decompose_already_submodular():
    f1, f2 = decompose_difference_submodular(k3_cut())
    assert is_submodular(f1) and is_submodular(f2)
    assert np.array_equal(f1.table() - f2.table(), k3_cut().table())


def test_decompose_independence_objective_k3():
    g = gc.bundled_graph("k3")
    size = popcounts(3)
    f = SetFunction(3, table=size * (1 - g.inner_table()))
    f1, f2 = decompose_difference_submodular(f)
    assert is_submodular(f1) and is_submodular(f2)
    assert delta_submodularity_gap(f2) > 0
    assert np.array_equal(f1.table() - f2.table(), f.table())


def test_decompose_random_tables_exact():
    rng = np.random.default_rng(11)
    for _ in range(100):
        f = SetFunction(4, table=rng.integers(-20, 21, 16))
        f1, f2 = decompose_difference_submodular(f)
        assert f1.table().dtype.kind == "i"
        assert np.array_equal(f1.table() - f2.table(), f.table())
        assert is_submodular(f1) and is_submodular(f2)
